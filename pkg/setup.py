"""Builds the optional compiled scoring kernel.

The package is fully functional without the extension: factalign.kernels
falls back to the pure-Python implementation at import time. Building from
a source checkout requires Cython and numpy in the build environment
(install with `pip install -e . --no-build-isolation`).
"""

from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "factalign._native",
                ["src/factalign/_native.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
