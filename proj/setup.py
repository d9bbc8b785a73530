# Copyright 2026 the stepbmc authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Builds the _core extension through the project's CMake tree."""

import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).parent.resolve()
        build_dir = Path(self.build_temp).resolve()
        build_dir.mkdir(parents=True, exist_ok=True)
        subprocess.run(
            [
                "cmake",
                "-S", str(source_dir),
                "-B", str(build_dir),
                "-DCMAKE_BUILD_TYPE=Release",
                "-DSTEPBMC_BUILD_TESTS=OFF",
                f"-DPython_EXECUTABLE={sys.executable}",
            ],
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_core", "--parallel"],
            check=True,
        )
        # The CMake tree stages the module under build/python/stepbmc.
        staged = sorted((build_dir / "python" / "stepbmc").glob("_core*"))
        if not staged:
            raise RuntimeError("cmake did not produce the _core module")
        out = Path(self.get_ext_fullpath(ext.name))
        out.parent.mkdir(parents=True, exist_ok=True)
        self.copy_file(str(staged[0]), str(out))


setup(
    packages=["stepbmc"],
    package_dir={"stepbmc": "python/stepbmc"},
    ext_modules=[CMakeExtension("stepbmc._core")],
    cmdclass={"build_ext": CMakeBuild},
)
