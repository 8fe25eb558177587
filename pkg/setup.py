import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# Deterministic float semantics are load-bearing (trace reproducibility),
# so no -ffast-math and no value-changing contractions.
extensions = [
    Extension(
        "anncsim._core",
        ["src/anncsim/_core.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
