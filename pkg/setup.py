"""Build script for the optional compiled eigensolver kernel.

The package works without the extension (a pure-Python kernel with the
same arithmetic is selected at import time), so a failed compile only
costs speed.  -ffp-contract=off keeps the compiled kernel's floating
point identical to the pure-Python one (no FMA contraction).
"""
import numpy as np
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, broken toolchain
            print(f"WARNING: compiled kernel skipped ({exc}); "
                  "pure-Python fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"WARNING: building {ext.name} failed ({exc}); "
                  "pure-Python fallback will be used")


def extensions():
    from Cython.Build import cythonize

    ext = Extension(
        "qrebound._kernels._jacobi_cy",
        ["src/qrebound/_kernels/_jacobi_cy.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O2", "-ffp-contract=off"],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
