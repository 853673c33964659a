"""Build script for the optional compiled dual-solver core.

The package is fully functional without the extension: ``hsiband.smo``
falls back to a pure NumPy implementation when ``hsiband._smo`` is not
importable.  The extension is compiled with FP contraction disabled so
both backends produce bit-identical iterates.
"""

import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "hsiband._smo",
        sources=["src/hsiband/_smo.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}),
)
