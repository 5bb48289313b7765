import numpy
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the accelerator if possible; the package falls back to numpy."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"warning: compiled core skipped ({exc}); pure-numpy backend will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); pure-numpy backend will be used")


try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "pathprop._core._speedups",
                ["src/pathprop/_core/_speedups.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
