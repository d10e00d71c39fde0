"""Build the optional compiled core; the package falls back to pure Python
when the extension is unavailable."""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ORTHOBOUND_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "orthobound._core",
                    ["src/orthobound/_core.pyx"],
                    extra_compile_args=["-O2", "-ffp-contract=off"],
                    libraries=["m"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
