"""
Build backend: setuptools, configured from pyproject.toml.

setup.py in this project is the first-run setup script (venv, .env, output
folders), not a setuptools configuration, so it must not be executed during
a build. This wrapper runs setuptools.setup() directly instead.
"""

from setuptools import build_meta as _orig
from setuptools import setup


class _Backend(_orig._BuildMetaBackend):
    def run_setup(self, setup_script='setup.py'):
        setup()


_backend = _Backend()

get_requires_for_build_wheel = _backend.get_requires_for_build_wheel
get_requires_for_build_sdist = _backend.get_requires_for_build_sdist
get_requires_for_build_editable = _backend.get_requires_for_build_editable
prepare_metadata_for_build_wheel = _backend.prepare_metadata_for_build_wheel
prepare_metadata_for_build_editable = _backend.prepare_metadata_for_build_editable
build_wheel = _backend.build_wheel
build_sdist = _backend.build_sdist
build_editable = _backend.build_editable
