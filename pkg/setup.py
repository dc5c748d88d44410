from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("isoprof._kernels._core", ["src/isoprof/_kernels/_core.pyx"])],
        compiler_directives={"language_level": 3},
    )
except ImportError:
    # the package still works on the pure-Python kernel twins
    ext_modules = []

setup(ext_modules=ext_modules)
