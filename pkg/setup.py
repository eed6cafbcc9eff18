from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "fitcoef._core",
                ["src/fitcoef/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )
except ImportError:
    # Cython unavailable: install pure-Python only, the numpy fallback
    # backend is selected automatically at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
