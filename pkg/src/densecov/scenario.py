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

"""Network parameters and the per-configuration quantities derived from them.

Densities are per km² and distances in km throughout the package.
"""

import math
from dataclasses import dataclass, replace
from typing import Literal

from . import exceptions, utils

RateUnit = Literal["bit", "nat"]

# Tolerance for floor/round of density ratios that are integral up to float noise.
_RATIO_SLACK = 1e-9

NUMERIC_FIELDS = (
    "lambda_bs",
    "lambda_ue",
    "pathloss_alpha",
    "p_max_dbm",
    "sinr_threshold_db",
    "eta",
    "p_c",
    "p_pre",
    "p_0",
)


@dataclass(frozen=True)
class NetworkParams:
    lambda_bs: float
    lambda_ue: float
    num_subbands: int
    pathloss_alpha: float
    p_max_dbm: float
    sinr_threshold_db: float
    eta: float
    p_c: float
    p_pre: float
    p_0: float
    bandwidth_mhz: float | None = None
    rate_unit: RateUnit = "bit"

    def with_value(self, field: str, value) -> "NetworkParams":
        """Return a copy with one field replaced (used by sweeps)."""
        if field == "num_subbands":
            value = int(value)
        elif field in NUMERIC_FIELDS:
            value = float(value)
        return replace(self, **{field: value})


@dataclass(frozen=True)
class Scenario:
    m_antennas: int
    k_mean_users: float
    k_users: int
    p_bs: float
    noise_term: float
    t_linear: float
    pathloss_alpha: float

    @property
    def desired_shape(self) -> int:
        """Gamma shape M - K + 1 of the desired-signal gain."""
        return self.m_antennas - self.k_users + 1


DEFAULT_PARAMS = NetworkParams(
    lambda_bs=4.0,
    lambda_ue=32.0,
    num_subbands=1,
    pathloss_alpha=4.0,
    p_max_dbm=40.0,
    sinr_threshold_db=1.0,
    eta=0.318,
    p_c=14.8,
    p_pre=1.74,
    p_0=65.8,
)


def validate_params(params: NetworkParams) -> None:
    """Check every NetworkParams invariant.

    Raises:
        InvalidParameterError: On the first violated invariant
    """
    for field in NUMERIC_FIELDS:
        value = getattr(params, field)
        if not isinstance(value, int | float) or isinstance(value, bool) or not math.isfinite(value):
            raise exceptions.InvalidParameterError(field, value, "must be a finite number")

    if params.lambda_bs <= 0:
        raise exceptions.InvalidParameterError("lambda_bs", params.lambda_bs, "must be > 0")
    if params.lambda_ue <= 0:
        raise exceptions.InvalidParameterError("lambda_ue", params.lambda_ue, "must be > 0")
    if (
        not isinstance(params.num_subbands, int)
        or isinstance(params.num_subbands, bool)
        or params.num_subbands < 1
    ):
        raise exceptions.InvalidParameterError(
            "num_subbands", params.num_subbands, "must be an integer >= 1"
        )
    if params.pathloss_alpha <= 2:
        raise exceptions.InvalidParameterError(
            "pathloss_alpha",
            params.pathloss_alpha,
            "must be strictly greater than 2 for the interference integral to converge",
        )
    if not 0 < params.eta <= 1:
        raise exceptions.InvalidParameterError("eta", params.eta, "must lie in (0, 1]")
    for field in ("p_c", "p_pre", "p_0"):
        if getattr(params, field) < 0:
            raise exceptions.InvalidParameterError(field, getattr(params, field), "must be >= 0")
    if params.bandwidth_mhz is not None and not params.bandwidth_mhz > 0:
        raise exceptions.InvalidParameterError(
            "bandwidth_mhz", params.bandwidth_mhz, "must be > 0 when given"
        )
    if params.rate_unit not in ("bit", "nat"):
        raise exceptions.InvalidParameterError(
            "rate_unit", params.rate_unit, "must be 'bit' or 'nat'"
        )


def antennas_per_bs(params: NetworkParams) -> int:
    """M = λ_UE/λ_BS rounded half-up to the nearest integer, at least 1."""
    return max(1, math.floor(params.lambda_ue / params.lambda_bs + 0.5 + _RATIO_SLACK))


def users_per_subband(params: NetworkParams) -> int:
    """K = floor(𝒦/L), at least 1."""
    mean_users = params.lambda_ue / params.lambda_bs
    return max(1, math.floor(mean_users / params.num_subbands + _RATIO_SLACK))


def is_feasible(params: NetworkParams) -> bool:
    return users_per_subband(params) <= antennas_per_bs(params)


def derive_scenario(params: NetworkParams) -> Scenario:
    """Derive M, 𝒦, K, P and the effective noise term from raw parameters.

    Args:
        params: Raw network parameters

    Returns:
        The derived Scenario

    Raises:
        InvalidParameterError: If a parameter invariant fails
        InfeasibleScenarioError: If K > M
    """
    validate_params(params)

    m_antennas = antennas_per_bs(params)
    k_users = users_per_subband(params)
    if k_users > m_antennas:
        raise exceptions.InfeasibleScenarioError(k_users, m_antennas, params)

    p_bs = utils.dbm_to_watts(params.p_max_dbm) / params.lambda_bs

    return Scenario(
        m_antennas=m_antennas,
        k_mean_users=params.lambda_ue / params.lambda_bs,
        k_users=k_users,
        p_bs=p_bs,
        noise_term=k_users / p_bs,
        t_linear=utils.db_to_linear(params.sinr_threshold_db),
        pathloss_alpha=float(params.pathloss_alpha),
    )
