from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:
    # the pure-Python kernels are used when the extension is missing
    ext_modules = []
else:
    ext_modules = cythonize(
        "src/ccproof/_kernels.pyx",
        compiler_directives={"language_level": 3, "boundscheck": False, "wraparound": False},
    )

setup(ext_modules=ext_modules)
