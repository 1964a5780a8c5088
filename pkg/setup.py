"""Builds the optional Cython telegraph kernel; the package works without it."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("JUMPSTAT_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        ext_modules = cythonize(["src/jumpstat/telegraph/_kernels.pyx"],
                                compiler_directives={"language_level": "3"}, quiet=True)
    except ImportError:
        pass

setup(ext_modules=ext_modules)
