from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("nilherm._kernels", ["src/nilherm/_kernels.pyx"], optional=True)],
        language_level=3,
    )
except Exception as exc:  # no Cython or a cythonize failure: ship the pure-Python kernels
    print(f"nilherm: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
