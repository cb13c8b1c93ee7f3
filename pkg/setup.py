"""Build the optional Cython kernels; the package falls back to pure Python without them."""
import os
import sys

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("DISCDIV_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        print("Cython/numpy unavailable; skipping compiled kernels", file=sys.stderr)
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "discdiv.embedding._kernels",
                    ["src/discdiv/embedding/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    # no FMA contraction: results must match the pure-Python path bit for bit
                    extra_compile_args=["-O3", "-ffp-contract=off", "-fopenmp"],
                    extra_link_args=["-fopenmp"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    optional=True,
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
