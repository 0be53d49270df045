"""Build script: compiles the Cython kernel extension when possible.

The package is fully functional without the extension (a NumPy fallback
is selected at import time), so a failed compilation is downgraded to a
warning rather than aborting the install.
"""

import warnings

from setuptools import Extension, setup


def _extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError as exc:
        warnings.warn(f"building without compiled kernels: {exc}")
        return []
    ext = Extension(
        "triadlab._kernels._corecy",
        ["src/triadlab/_kernels/_corecy.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=_extensions())
