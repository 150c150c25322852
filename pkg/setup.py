"""Build script. The compiled scan kernel is optional: if Cython, numpy headers,
or a C toolchain are missing the install proceeds and the package falls back to
the pure-numpy kernels at import time."""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # toolchain missing, keep the pure path
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            "warning: building the compiled scan kernel failed (%s); "
            "polypart will use the pure-Python kernels" % exc,
            file=sys.stderr,
        )


ext_modules = []
cmdclass = {}
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "polypart._kernels._scan",
                ["src/polypart/_kernels/_scan.pyx"],
                include_dirs=[numpy.get_include()],
                # fp contraction off so the orientation determinant rounds
                # exactly like the numpy fallback path
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
    cmdclass["build_ext"] = optional_build_ext
except ImportError as exc:
    print(
        "warning: Cython/numpy unavailable at build time (%s); "
        "skipping the compiled scan kernel" % exc,
        file=sys.stderr,
    )

setup(ext_modules=ext_modules, cmdclass=cmdclass)
