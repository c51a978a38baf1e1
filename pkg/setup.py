import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("RABUILD_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("rabuild._ckernel", ["src/rabuild/_ckernel.pyx"], extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
