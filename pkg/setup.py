import os

from setuptools import Extension, setup

# Compiled kernels are optional: the package falls back to the NumPy
# implementation when the extension is absent. Set SECOFF_BUILD_EXT=0 to
# skip the Cython build entirely.
ext_modules = []
if os.environ.get("SECOFF_BUILD_EXT", "1") != "0":
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "secoff._mlpcore",
                    ["src/secoff/_mlpcore.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
