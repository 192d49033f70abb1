"""Build script: compiles the scheduling kernel extension when possible.

The package works without the extension (a pure-Python kernel is selected at
import time), so any failure here downgrades to a pure build instead of
aborting the install. Set DARP_PURE_KERNEL=1 to skip the extension build.
"""

import os

from setuptools import Extension, setup


def extension_modules():
    if os.environ.get("DARP_PURE_KERNEL") == "1":
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension("mata._ckernel", ["src/mata/_ckernel.pyx"])
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )


setup(ext_modules=extension_modules())
