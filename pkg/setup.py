"""Build hook for the optional compiled kernels.

The package works without them; ``lzsweep._backend`` falls back to numpy.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("LZSWEEP_NO_EXT", "") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "lzsweep._kernels",
                    ["src/lzsweep/_kernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
