"""Builds the optional compiled echelon kernel.

Without Cython, or when compilation fails, the package installs without it
and ``shatiyah.linalg`` falls back to the pure-Python kernel.
"""
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any compiler failure means fallback
            print("warning: compiled kernel not built (%s); using the Python fallback" % exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print("warning: %s not built (%s); using the Python fallback" % (ext.name, exc))


try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("shatiyah._echelon", ["src/shatiyah/_echelon.pyx"], extra_compile_args=["-O2"])],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
