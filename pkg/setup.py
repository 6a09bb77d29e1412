"""Build script for the optional compiled kernel extension.

The package is fully functional without the extension: suspind.kernels
falls back to the pure-Python implementation when the compiled module is
missing, so a failed extension build only costs speed, never correctness.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Skip the extension (with a warning) if the toolchain is unusable."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, broken headers, ...
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        import warnings

        warnings.warn(
            f"suspind: compiled kernels unavailable ({exc}); "
            "falling back to pure-Python kernels"
        )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [
            Extension(
                "suspind._kernels",
                ["src/suspind/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
