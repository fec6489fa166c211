import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("CHPLX_NO_EXT"):
    ext_modules = cythonize(
        [Extension(
            "chplx_lite.runtime._ckernels",
            ["src/chplx_lite/runtime/_ckernels.pyx"],
            extra_compile_args=["-O2", "-ffp-contract=off"],
            optional=True,
        )],
        language_level=3,
    )

setup(ext_modules=ext_modules)
