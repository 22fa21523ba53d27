# Copyright 2026 deep-bi
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

import os
import tempfile
from dataclasses import replace

import pytest

from densecov import scenario

DEFAULT_YAML = """
lambda_bs: 4
lambda_ue: 32
num_subbands: 1
pathloss_alpha: 4
p_max_dbm: 40
sinr_threshold_db: 1
eta: 0.318
p_c: 14.8
p_pre: 1.74
p_0: 65.8
"""


@pytest.fixture
def write_yaml():
    """Factory writing YAML text to temporary files that are removed after the test."""
    paths = []

    def _write(content: str, directory: str | None = None) -> str:
        with tempfile.NamedTemporaryFile(
            mode="w", suffix=".yaml", delete=False, dir=directory
        ) as f:
            f.write(content)
            f.flush()
            paths.append(f.name)
            return f.name

    yield _write

    for path in paths:
        if os.path.exists(path):
            os.unlink(path)


@pytest.fixture
def config_file(write_yaml):
    """Create a temporary network config file holding the default parameters."""
    return write_yaml(DEFAULT_YAML)


@pytest.fixture
def invalid_yaml_file(write_yaml):
    """Create a temporary invalid YAML file for testing error handling."""
    return write_yaml("invalid: yaml: content: [")


@pytest.fixture
def default_params():
    return scenario.DEFAULT_PARAMS


@pytest.fixture
def rayleigh_params():
    """K = M = 1, α = 4, T = 0 dB; callers switch noise off for the closed form."""
    return replace(
        scenario.DEFAULT_PARAMS,
        lambda_bs=1.0,
        lambda_ue=1.0,
        sinr_threshold_db=0.0,
    )
