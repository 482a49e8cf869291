"""Build script for the optional compiled kernel core.

The package is fully functional without the extension (a NumPy fallback is
selected at import time); building it just makes copy training faster:

    python setup.py build_ext --inplace

Set COPYCAT_SKIP_EXT=1 to install pure-Python even when Cython is present.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Never fail the install because the compiled core did not build."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, etc.
            print(f"warning: skipping compiled kernels ({exc}); "
                  "the NumPy fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not build {ext.name} ({exc}); "
                  "the NumPy fallback will be used")


ext_modules = []
if os.environ.get("COPYCAT_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "copycat._kernels._ctree",
                    ["src/copycat/_kernels/_ctree.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        print("warning: Cython not available; installing with the NumPy "
              "fallback kernels only")

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
