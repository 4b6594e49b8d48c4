"""Build script: compiles the optional Cython elimination kernel.

The package is pure Python by design; the extension only accelerates the
fraction-free rank/determinant inner loops.  Any build failure (no Cython,
no C compiler) falls back to the pure-Python kernel selected at import.
Set QHDCALC_NO_EXT=1 to skip the extension build entirely.
"""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"qhdcalc: skipping optional extension build: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"qhdcalc: skipping optional extension {ext.name}: {exc}")


ext_modules = []
if os.environ.get("QHDCALC_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/qhdcalc/_elim_c.pyx"], language_level="3"
        )
    except ImportError:
        print("qhdcalc: Cython not available, building without extension")

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
