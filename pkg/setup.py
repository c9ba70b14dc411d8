"""Build script: compiles the Riemann kernels when Cython is available.

Without Cython (or a C compiler) the package installs pure-Python and the
kernels fall back to ``glimmep._kernels_py``.
"""

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "glimmep._kernels",
                ["src/glimmep/_kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
