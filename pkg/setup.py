"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension (a numpy fallback is
selected at import time); the extension only accelerates the hot kernels.
Build in place with:

    python setup.py build_ext --inplace
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "projcorrect._speedups",
                ["src/projcorrect/_speedups.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
