import os

from setuptools import Extension, setup

# The extension is optional: without Cython or a compiler the package
# still installs and runs on the pure-Python kernels.
ext_modules = []
if os.environ.get("KGORIENT_NO_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "kgorient._kernels",
                    ["src/kgorient/_kernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    # no fast-math or FMA contraction: results must match _fallback bit for bit
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
