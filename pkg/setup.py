"""Build script: compiles the optional fast-math extension when Cython and a
C toolchain are present, otherwise installs pure-Python only (pmt selects the
fallback at import time)."""

import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Degrade to the pure-Python kernels instead of failing the install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any build failure is non-fatal
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            f"warning: compiled kernels unavailable ({exc}); "
            "using pure-Python fallback",
            file=sys.stderr,
        )


ext_modules = []
cmdclass = {}
if not os.environ.get("PMT_PURE_PYTHON"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("pmt._kernels", ["src/pmt/_kernels.pyx"])],
            compiler_directives={
                "language_level": 3,
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
        cmdclass = {"build_ext": optional_build_ext}
    except ImportError:
        pass

setup(ext_modules=ext_modules, cmdclass=cmdclass)
