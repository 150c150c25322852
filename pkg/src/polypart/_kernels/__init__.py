"""Scan kernel selection: compiled extension if available, numpy otherwise."""

import warnings

from . import _pykernels

try:
    from . import _scan as _impl

    BACKEND = "compiled"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"
    warnings.warn(
        "polypart compiled scan kernel not available, "
        "falling back to the pure-Python kernels",
        stacklevel=2,
    )

scan_thresholds_1d = _impl.scan_thresholds_1d
scan_lines_2d = _impl.scan_lines_2d


def backend() -> str:
    """Name of the active scan backend: 'compiled' or 'python'."""
    return BACKEND
