import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# No -ffast-math: the test suite asserts 1e-9-level identities that
# reassociation would break.
extensions = [
    Extension(
        "varloc._kernels",
        ["src/varloc/_kernels.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
