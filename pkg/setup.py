"""Build script for the optional compiled kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so the extension is marked optional: a failed compile degrades
the install instead of breaking it.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "manyworlds._kernels",
                ["src/manyworlds/_kernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
