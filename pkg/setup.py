"""Build the optional Cython kernel extension.

The package works without the extension (a pure-Python fallback is
selected at import time), so a failed compile degrades to a source-only
install instead of aborting.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "ddd._kernels",
                ["src/ddd/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
