import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("LBOCHNER_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("lbochner._kernel._ckernel",
                       ["src/lbochner/_kernel/_ckernel.pyx"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # pure-Python fallback is selected at import time
        pass

setup(ext_modules=ext_modules)
