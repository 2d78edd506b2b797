"""Build script: compiles the optional convolution kernel.

The package is pure Python; the Cython extension only accelerates the
truncated-convolution kernels in ``wedgecert._kernels``.  If Cython or a
C compiler is unavailable the build falls back to the pure backend, which
is selected automatically at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/wedgecert/_kernels/_fastconv.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
