"""Build the optional compiled kernel; the package works without it."""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("GINDEX_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("gindex._kernels", ["src/gindex/_kernels.py"],
                       extra_compile_args=["-O3"])],
            compiler_directives={
                "language_level": 3,
                "boundscheck": False,
                "wraparound": False,
                "initializedcheck": False,
            },
            quiet=True,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
