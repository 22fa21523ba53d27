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

"""Coverage probability by transform inversion, and the rate/energy metrics built on it.

Conditioned on u = πλ r0², the coverage is P(S - X > 0) with X = T r0^α (I + K/P). The
characteristic function of S - X is

    Φ(t) = L_S(-it) · L_I(i T r0^α t) · exp(-i T r0^α (K/P) t),

and the inversion integrand h(s) = (Φ(2πs) - Ψ(2πs)) / (i2πs), Ψ being the characteristic function
of -X alone, integrates over the real line to the coverage. The Ψ part contributes exactly 1/2
because X > 0, so only the Φ part is integrated numerically:

    P_cov(u) = 1/2 + ∫_0^∞ Im Φ(2πs) / (πs) ds.
"""

import cmath
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import integrate, special, stats

from . import exceptions, logger, specfun, utils
from .scenario import NetworkParams, Scenario, derive_scenario

OUTER_TRUNCATION = 40.0
INNER_TAIL_TOLERANCE = 1e-8
TARGET_ABS_ERROR = 1e-4
MAX_ABS_ERROR = 1e-3

_INNER_OPTIONS = {"epsabs": 1e-7, "epsrel": 1e-7, "limit": 200}
_OUTER_OPTIONS = {"epsabs": 1e-6, "epsrel": 1e-6, "limit": 100, "points": [1.0, 4.0, 12.0]}

Convention = Literal["forward", "conjugate"]
CoverageMethod = Literal["inversion", "gamma_oracle", "monte_carlo"]


@dataclass(frozen=True)
class CoverageResult:
    value: float
    abs_error_estimate: float
    inner_truncation: float
    outer_truncation: float
    evaluations: int
    method: CoverageMethod = "inversion"


@dataclass(frozen=True)
class EnergyReport:
    coverage: float
    avg_rate: float
    ase: float
    aec: float
    ee: float


def coverage_integrand(
    s: float,
    r0: float,
    scenario: Scenario,
    lambda_bs: float,
    *,
    include_noise: bool = True,
    convention: Convention = "conjugate",
) -> complex:
    """Inversion integrand h(s) conditioned on the association distance r0.

    ``convention="forward"`` evaluates L_I(i2π r0^α T s)·e^(-i2π r0^α T N s)·(L_S(-i2πs) - 1)/(i2πs);
    ``convention="conjugate"`` evaluates the same expression with every i2π replaced by -i2π, which
    is its complex conjugate. Both integrate over the real line to the same coverage.
    """
    sign = 1.0 if convention == "forward" else -1.0
    if s == 0:
        return complex(scenario.desired_shape)

    scale = scenario.t_linear * r0**scenario.pathloss_alpha
    noise = scenario.noise_term if include_noise else 0.0
    omega = sign * 2j * math.pi * s

    interference = specfun.laplace_interference(omega * scale, r0, scenario, lambda_bs)
    noise_factor = cmath.exp(-omega * scale * noise)
    desired = specfun.laplace_desired(-omega, scenario)
    return interference * noise_factor * (desired - 1.0) / omega


def inner_truncation(scenario: Scenario, tail_tolerance: float = INNER_TAIL_TOLERANCE) -> float:
    """Upper limit S of the s-integral such that ∫_S^∞ (2πs)^-n/(πs) ds <= tail_tolerance."""
    n = scenario.desired_shape
    return (1.0 / (n * math.pi * tail_tolerance)) ** (1.0 / n) / (2.0 * math.pi)


class _InnerIntegral:
    """Conditional coverage given u = πλ r0², with the 2F1 values shared across all u."""

    def __init__(self, params: NetworkParams, scenario: Scenario, include_noise: bool):
        self.scenario = scenario
        self.lambda_bs = params.lambda_bs
        self.noise = scenario.noise_term if include_noise else 0.0
        self.upper = inner_truncation(scenario)
        self.points = utils.geometric_breakpoints(self.upper)
        self.evaluations = 0
        self.max_error = 0.0
        self._hyp_cache: dict[float, complex] = {}

    def _interference_core(self, s: float) -> complex:
        # With z = -i2πTs, the r0^α factors of the interference transform cancel.
        value = self._hyp_cache.get(s)
        if value is None:
            z = -2j * math.pi * self.scenario.t_linear * s
            value = specfun.interference_hyp2f1(
                self.scenario.k_users, self.scenario.pathloss_alpha, z
            )
            self._hyp_cache[s] = value
        return value

    def _origin_limit(self, u: float, r0_alpha: float) -> float:
        scenario = self.scenario
        mean_interference = (
            2.0 * u * scenario.k_users / (scenario.pathloss_alpha - 2.0) + r0_alpha * self.noise
        )
        return 2.0 * (scenario.desired_shape - scenario.t_linear * mean_interference)

    def __call__(self, u: float) -> float:
        scenario = self.scenario
        r0_alpha = (u / (math.pi * self.lambda_bs)) ** (scenario.pathloss_alpha / 2.0)
        noise_rate = 2.0 * math.pi * scenario.t_linear * r0_alpha * self.noise
        limit = self._origin_limit(u, r0_alpha)

        def integrand(s: float) -> float:
            self.evaluations += 1
            if s < 1e-12:
                return limit
            exponent = -u * (self._interference_core(s) - 1.0) - 1j * noise_rate * s
            phi = cmath.exp(exponent) * (1.0 - 2j * math.pi * s) ** (-scenario.desired_shape)
            return phi.imag / (math.pi * s)

        value, error, _ = integrate.quad(
            integrand, 0.0, self.upper, points=self.points, full_output=1, **_INNER_OPTIONS
        )[:3]
        # ∫ e^(-u) err(u) du <= 2 sup err(u) e^(-u/2)
        self.max_error = max(self.max_error, 2.0 * error * math.exp(-u / 2.0))
        return 0.5 + value


def coverage_probability(params: NetworkParams, *, include_noise: bool = True) -> CoverageResult:
    """Coverage probability P(SINR > T) at the typical user by transform inversion.

    Args:
        params: Network parameters
        include_noise: False evaluates the interference-limited network (K/P forced to 0)

    Returns:
        CoverageResult with the combined error estimate of both quadratures and truncations

    Raises:
        IntegrationFailureError: If the error estimate exceeds MAX_ABS_ERROR or the value leaves
            [-ε, 1+ε]
        InvalidConfigError: If the parameters are invalid
    """
    scenario = derive_scenario(params)
    inner = _InnerIntegral(params, scenario, include_noise)

    outer_evaluations = 0

    def weighted(u: float) -> float:
        nonlocal outer_evaluations
        outer_evaluations += 1
        return math.exp(-u) * inner(u)

    value, outer_error, _ = integrate.quad(
        weighted, 0.0, OUTER_TRUNCATION, full_output=1, **_OUTER_OPTIONS
    )[:3]

    abs_error = outer_error + inner.max_error + INNER_TAIL_TOLERANCE + math.exp(-OUTER_TRUNCATION)
    logger.debug(
        f"Inversion for K={scenario.k_users} M={scenario.m_antennas} T={scenario.t_linear:.4g}: "
        f"value={value:.8f} err={abs_error:.2g} outer_err={outer_error:.2g} "
        f"inner_err={inner.max_error:.2g} evals={inner.evaluations + outer_evaluations}"
    )

    value = _checked_probability(value, abs_error)
    return CoverageResult(
        value=value,
        abs_error_estimate=abs_error,
        inner_truncation=inner.upper,
        outer_truncation=OUTER_TRUNCATION,
        evaluations=inner.evaluations + outer_evaluations,
        method="inversion",
    )


def _checked_probability(value: float, abs_error: float) -> float:
    if not math.isfinite(value):
        raise exceptions.IntegrationFailureError("non-finite result", value, abs_error)
    if abs_error > MAX_ABS_ERROR:
        raise exceptions.IntegrationFailureError(
            f"error estimate {abs_error:.3g} exceeds {MAX_ABS_ERROR:g}", value, abs_error
        )
    if abs_error > TARGET_ABS_ERROR:
        logger.warning(
            f"Coverage error estimate {abs_error:.2g} is above the {TARGET_ABS_ERROR:g} target"
        )
    if value < -abs_error or value > 1.0 + abs_error:
        raise exceptions.IntegrationFailureError(
            f"value {value:.6g} outside [0, 1] by more than the error estimate", value, abs_error
        )
    return min(1.0, max(0.0, value))


def coverage_probability_gamma_oracle(
    params: NetworkParams,
    *,
    include_noise: bool = True,
    draws: int = 100_000,
    seed: int = 7,
    workers: int | None = None,
) -> CoverageResult:
    """Coverage by conditional-Erlang averaging over simulated interference.

    Given (r0, I), P(S > x) for S ~ Γ(n, 1) with integer n is the regularized upper incomplete
    gamma Q(n, x), so each draw contributes Q(n, T r0^α (I + K/P)) instead of a 0/1 indicator.
    The reported error is the 99% normal half-width of the mean.
    """
    from . import montecarlo

    scenario = derive_scenario(params)
    sim = montecarlo.SimConfig(trials=draws, seed=seed, gain_model=montecarlo.GainModel.GAMMA)
    batch = montecarlo.simulate_trials(params, sim, workers=workers)

    noise = scenario.noise_term if include_noise else 0.0
    x = scenario.t_linear * batch.r0**scenario.pathloss_alpha * (batch.interference + noise)
    survival = special.gammaincc(scenario.desired_shape, x)

    value = float(np.mean(survival))
    z = stats.norm.ppf(0.995)
    half_width = float(z * np.std(survival, ddof=1) / math.sqrt(draws)) if draws > 1 else 1.0

    return CoverageResult(
        value=value,
        abs_error_estimate=half_width,
        inner_truncation=batch.window_radius,
        outer_truncation=math.inf,
        evaluations=draws,
        method="gamma_oracle",
    )


def rate_factor(params: NetworkParams, scenario: Scenario) -> float:
    """Rate of a covered user: log(1 + T) in bit/symbol (or nat/symbol)."""
    if params.rate_unit == "nat":
        return math.log1p(scenario.t_linear)
    return math.log2(1.0 + scenario.t_linear)


def average_rate(
    params: NetworkParams,
    *,
    include_noise: bool = True,
    coverage: CoverageResult | None = None,
) -> float:
    """Average rate log(1 + T)·P_cov(T)."""
    scenario = derive_scenario(params)
    if coverage is None:
        coverage = coverage_probability(params, include_noise=include_noise)
    return rate_factor(params, scenario) * coverage.value


def average_energy_consumption(params: NetworkParams, scenario: Scenario) -> float:
    """AEC per BS: P/η + M·P_c + K³·P_pre + P_0."""
    return (
        scenario.p_bs / params.eta
        + scenario.m_antennas * params.p_c
        + scenario.k_users**3 * params.p_pre
        + params.p_0
    )


def build_energy_report(params: NetworkParams, coverage_value: float) -> EnergyReport:
    """Assemble rate, ASE, AEC and EE from a coverage value (analytic or simulated)."""
    scenario = derive_scenario(params)
    avg_rate = rate_factor(params, scenario) * coverage_value
    ase = params.lambda_bs * scenario.k_users * avg_rate
    aec = average_energy_consumption(params, scenario)
    return EnergyReport(
        coverage=coverage_value,
        avg_rate=avg_rate,
        ase=ase,
        aec=aec,
        ee=ase / aec,
    )


def ee_error(params: NetworkParams, coverage_error: float) -> float:
    """Propagate a coverage error to EE, which is linear in the coverage."""
    scenario = derive_scenario(params)
    slope = (
        params.lambda_bs
        * scenario.k_users
        * rate_factor(params, scenario)
        / average_energy_consumption(params, scenario)
    )
    return slope * coverage_error


def energy_report(
    params: NetworkParams,
    *,
    include_noise: bool = True,
    coverage: CoverageResult | None = None,
) -> EnergyReport:
    """Energy efficiency ASE/AEC with ASE = λ_BS·K·E[R]."""
    if coverage is None:
        coverage = coverage_probability(params, include_noise=include_noise)
    return build_energy_report(params, coverage.value)
