"""Build the optional compiled kernel; everything else lives in pyproject.toml.

If Cython or a C compiler is unavailable the package still installs and
``ymbv.kernel`` falls back to the pure-Python implementation.
"""
from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("ymbv._kernel", ["src/ymbv/_kernel.pyx"])],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )
except Exception:  # pragma: no cover - build-environment dependent
    ext_modules = []

setup(ext_modules=ext_modules)
