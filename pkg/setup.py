"""Build script.

The compiled kernels in ``zetaforge.kernels._speedups`` are optional: if
Cython or a C compiler is unavailable the build falls back to the pure
Python kernels and the package still installs and works.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """build_ext that degrades to the pure-Python kernels on failure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            warnings.warn(f"compiled kernels skipped: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"compiled kernel {ext.name} skipped: {exc}")


ext_modules = []
cmdclass = {}
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "zetaforge.kernels._speedups",
                sources=["src/zetaforge/kernels/_speedups.pyx"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
    cmdclass["build_ext"] = OptionalBuildExt
except ImportError:
    warnings.warn("Cython not available; installing with pure-Python kernels")

setup(ext_modules=ext_modules, cmdclass=cmdclass)
