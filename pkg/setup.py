import os

from setuptools import setup

ext_modules = []
if os.environ.get("OUTERFORMS_NO_EXT", "") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("outerforms._ckernels", ["src/outerforms/_ckernels.pyx"],
                       include_dirs=[numpy.get_include()])],
            language_level=3,
        )

setup(ext_modules=ext_modules)
