from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("slimlat._conclose", ["src/slimlat/_conclose.pyx"])],
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": "3",
        },
    )
except ImportError:
    # No Cython: install pure-Python only; the package falls back at import.
    extensions = []

setup(ext_modules=extensions)
