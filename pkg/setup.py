from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # fall back to the pure-Python kernels
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("iwasawa_tower._ckernels", ["src/iwasawa_tower/_ckernels.pyx"])],
        language_level=3,
    )

setup(ext_modules=ext_modules)
