"""Build script: compiles the optional accelerator extension when Cython and a
C compiler are available.  The package works without it; tsforge._kernels falls
back to pure-numpy implementations at import time."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "tsforge._kernels._core",
                ["src/tsforge/_kernels/_core.pyx"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
