import os

import numpy as np
from setuptools import Extension, setup

# SPHQUANT_NO_EXT=1 skips the compiled kernels; the package then runs on the
# numpy fallback in sphquant._kernels_py.
if os.environ.get("SPHQUANT_NO_EXT"):
    ext_modules = []
else:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "sphquant._kernels",
                ["src/sphquant/_kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
            "embedsignature": True,
        },
    )

setup(ext_modules=ext_modules)
