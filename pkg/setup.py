"""Build script: compiles the optional exact-arithmetic kernel.

The package is fully functional without the extension; any failure while
cythonizing or compiling degrades to a pure-Python install.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Best-effort build_ext: a broken toolchain must not block installation."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain dependent
            warnings.warn(f"skipping compiled kernel ({exc}); using pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain dependent
            warnings.warn(f"skipping {ext.name} ({exc}); using pure-Python fallback")


def extensions():
    try:
        from Cython.Build import cythonize

        return cythonize(
            ["src/polysteer/_kernel/_speedups.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except Exception as exc:  # pragma: no cover - cython not installed
        warnings.warn(f"cython unavailable ({exc}); building without compiled kernel")
        return []


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
