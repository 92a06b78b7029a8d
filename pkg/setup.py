"""Builds the optional compiled kernel.

The package works without it: `altproj.spiral` falls back to the pure-Python
twin (`altproj._pure`) when `altproj._speedups` is missing.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("altproj._speedups", ["src/altproj/_speedups.pyx"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
