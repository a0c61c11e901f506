"""Optional build of the compiled kernels.

The package works without the extension (a pure-Python fallback is
selected at import time); building it just makes edit-distance and
phonetic-distance loops much faster.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("phonocorrect._kernels", ["src/phonocorrect/_kernels.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
