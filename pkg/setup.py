"""Build script: compiles the Cython edge-kernel extension.

Set CIRCLEPATTERNS_NO_EXT=1 to skip the extension entirely; the package
then runs on the pure-numpy kernel backend.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("CIRCLEPATTERNS_NO_EXT"):
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "circlepatterns._kernels",
                ["src/circlepatterns/_kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
