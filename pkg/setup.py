"""Build script: compiles the network-simplex kernel when Cython is available.

The package works without the extension (a pure numpy kernel is selected at
import time), so a failed extension build degrades to the slow backend
instead of breaking the install.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/coresel/_netsimplex_cy.pyx",
        language_level=3,
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
