import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("EXACTCAT_PURE_PYTHON"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("exactcat.linalg._kernels", ["src/exactcat/linalg/_kernels.pyx"],
                       extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
