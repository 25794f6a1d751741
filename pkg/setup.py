"""Build the optional Cython kernels; the package falls back to pure Python without them."""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("SELFSIM_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "selfsim._kernels._ckernels",
                    ["src/selfsim/_kernels/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": 3, "boundscheck": False, "wraparound": False, "cdivision": True},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
