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

import math

import numpy as np

from . import exceptions

FLOAT_FORMAT = "%.9g"


def db_to_linear(value_db: float) -> float:
    """
    Convert a power ratio in dB to a linear ratio.

    Examples:
        >>> db_to_linear(0.0)
        1.0
        >>> db_to_linear(10.0)
        10.0
    """
    return 10.0 ** (value_db / 10.0)


def dbm_to_watts(value_dbm: float) -> float:
    """
    Convert an absolute power in dBm to watts.

    Examples:
        >>> dbm_to_watts(30.0)
        1.0
        >>> dbm_to_watts(40.0)
        10.0
    """
    return 10.0 ** ((value_dbm - 30.0) / 10.0)


def format_float(value: float | None) -> str:
    """
    Render a float with 9 significant digits, or an empty string for a missing value.

    Examples:
        >>> format_float(0.5601991)
        '0.5601991'
        >>> format_float(1082.9377358490566)
        '1082.93774'
        >>> format_float(None)
        ''
    """
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    return FLOAT_FORMAT % value


def ensure_finite(name: str, value: complex | float) -> None:
    """Raise NonFiniteArgumentError unless both parts of ``value`` are finite."""
    if not np.isfinite(value):
        raise exceptions.NonFiniteArgumentError(name, value)


def geometric_breakpoints(upper: float, first: float = 1e-3, ratio: float = 10.0) -> list[float]:
    """
    Interior breakpoints ``first, first*ratio, ...`` strictly below ``upper``.

    Examples:
        >>> geometric_breakpoints(50.0)
        [0.001, 0.01, 0.1, 1.0, 10.0]
        >>> geometric_breakpoints(1e-4)
        []
    """
    points = []
    point = first
    while point < upper:
        points.append(point)
        point *= ratio
    return [float(f"{p:.12g}") for p in points]
