"""Builds the optional compiled kernel extension.

The package works without it (a pure-Python fallback is selected at import);
set BIMSA_SKIP_EXT=1 to skip compilation entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("BIMSA_SKIP_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "bimsa._kernels._ckern",
                    ["src/bimsa/_kernels/_ckern.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
