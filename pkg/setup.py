"""Build script: compiles the optional fast kernel extension when Cython is present.

The package works without the extension (a numpy fallback is selected at import
time); building it just makes the exact min-width oracle faster.
"""
from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "ddlab._kernels",
                ["src/ddlab/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
