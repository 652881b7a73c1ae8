import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("RMMSIM_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        # Falls back to rmmsim._pycore at import time.
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "rmmsim._ccore",
                    ["src/rmmsim/_ccore.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
