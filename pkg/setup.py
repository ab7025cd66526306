"""Build script: compiles the optional scaled-arithmetic extension.

The package works without the extension (a pure-Python backend is selected
at import time), so a failed compile only costs speed.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/jacobiedge/_kernels.pyx"],
        language_level=3,
    )
except Exception as exc:  # Cython missing or cythonize failed
    print(f"jacobiedge: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
