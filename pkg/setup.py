"""Build script for the optional compiled kernel extension.

The package is fully functional without the extension; ``sqk3.backend``
falls back to the pure-Python kernels when the build is unavailable.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "sqk3._kernels",
                ["src/sqk3/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
