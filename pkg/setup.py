import os

from setuptools import Extension, setup

# The compiled scan core is optional: without Cython (or with
# SUMTRANSLATES_NO_EXT=1) the package falls back to the pure-numpy
# implementation selected at import time.
ext_modules = []
if os.environ.get("SUMTRANSLATES_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "sumtranslates._sumscan",
                    ["src/sumtranslates/_sumscan.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
