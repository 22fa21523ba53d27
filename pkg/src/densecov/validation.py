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

"""Self-checks of the numerical kernels against closed forms and independent oracles."""

import math
from collections.abc import Callable
from dataclasses import dataclass, replace

import numpy as np
from scipy import stats

from . import analytic, exceptions, logger, montecarlo, specfun
from .scenario import DEFAULT_PARAMS, NetworkParams, Scenario

RAYLEIGH_COVERAGE = 1.0 / (1.0 + math.pi / 4.0)
RAYLEIGH_TOLERANCE = 1e-4
IDENTITY_TOLERANCE = 1e-9
ORACLE_TOLERANCE = 1e-8
KS_LEVEL = 0.01
SUITE_SEED = 20260417

ZF_SHAPES = ((8, 8), (8, 4), (4, 2))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def rayleigh_params() -> NetworkParams:
    """Single-antenna, single-user, α=4, T=0 dB network (noise is switched off by callers)."""
    return replace(
        DEFAULT_PARAMS,
        lambda_bs=1.0,
        lambda_ue=1.0,
        num_subbands=1,
        pathloss_alpha=4.0,
        sinr_threshold_db=0.0,
    )


def _bare_scenario(k_users: int, alpha: float, m_antennas: int | None = None) -> Scenario:
    m_antennas = k_users if m_antennas is None else m_antennas
    return Scenario(
        m_antennas=m_antennas,
        k_mean_users=float(k_users),
        k_users=k_users,
        p_bs=1.0,
        noise_term=float(k_users),
        t_linear=1.0,
        pathloss_alpha=alpha,
    )


def _relative_error(value: complex, expected: complex) -> float:
    return abs(value - expected) / max(abs(expected), 1e-300)


def check_rayleigh_analytic() -> CheckResult:
    result = analytic.coverage_probability(rayleigh_params(), include_noise=False)
    gap = abs(result.value - RAYLEIGH_COVERAGE)
    return CheckResult(
        "rayleigh closed form (analytic)",
        gap <= RAYLEIGH_TOLERANCE,
        f"{result.value:.6f} vs {RAYLEIGH_COVERAGE:.6f} (gap {gap:.2g})",
    )


def check_rayleigh_simulation(trials: int, workers: int | None) -> CheckResult:
    sim = montecarlo.SimConfig(trials=trials, seed=SUITE_SEED)
    outcome = montecarlo.simulate_coverage(
        rayleigh_params(), sim, include_noise=False, workers=workers
    )
    gap = abs(outcome.estimate - RAYLEIGH_COVERAGE)
    return CheckResult(
        "rayleigh closed form (monte carlo)",
        gap <= outcome.half_width,
        f"{outcome.estimate:.5f} ± {outcome.half_width:.2g} over {trials} trials",
    )


def check_log_identity(points: int) -> CheckResult:
    """2F1(1,1;2;z) = -ln(1-z)/z."""
    grid = np.concatenate(
        (np.linspace(-5.0, -0.05, points // 2), np.linspace(0.05, 0.75, points - points // 2))
    )
    worst = 0.0
    for z in grid:
        value = specfun.hyp2f1(specfun.Hyp2F1Params(1.0, 1.0, 2.0, complex(z)))
        worst = max(worst, _relative_error(value, -math.log1p(-z) / z))
    return CheckResult(
        "2F1(1,1;2;z) identity", worst <= IDENTITY_TOLERANCE, f"max rel err {worst:.2g}"
    )


def check_arctan_identity(points: int) -> CheckResult:
    """2F1(1,-1/2;1/2;-t²) = 1 + t·arctan(t)."""
    worst = 0.0
    for t in np.linspace(0.05, 20.0, points):
        value = specfun.interference_hyp2f1(1, 4.0, complex(-t * t))
        worst = max(worst, _relative_error(value, 1.0 + t * math.atan(t)))
    return CheckResult(
        "2F1(1,-1/2;1/2;-t²) identity", worst <= IDENTITY_TOLERANCE, f"max rel err {worst:.2g}"
    )


def check_interference_closed_form() -> CheckResult:
    """K=1, α=4, r0=1, λ=1: L_I(s) = exp(-π√s·arctan√s) for real s > 0."""
    scenario = _bare_scenario(1, 4.0)
    worst = 0.0
    for s in (0.01, 0.5, 1.0, 3.0, 25.0, 400.0):
        value = specfun.laplace_interference(s, 1.0, scenario, 1.0)
        root = math.sqrt(s)
        worst = max(worst, _relative_error(value, math.exp(-math.pi * root * math.atan(root))))
    return CheckResult(
        "interference transform closed form",
        worst <= IDENTITY_TOLERANCE,
        f"max rel err {worst:.2g}",
    )


def check_interference_oracle(points: int) -> CheckResult:
    """Hypergeometric interference transform against quadrature of the PGFL exponent."""
    rng = np.random.default_rng(SUITE_SEED)
    worst = 0.0
    worst_case = ""
    for _ in range(points):
        k = int(rng.choice([1, 2, 4, 8]))
        alpha = float(rng.choice([3.0, 4.0, 5.0]))
        modulus = 10.0 ** rng.uniform(-3.0, 3.0)
        s = modulus * (1j if rng.random() < 0.5 else 1.0)
        scenario = _bare_scenario(k, alpha)
        value = specfun.laplace_interference(s, 1.0, scenario, 0.05)
        reference = specfun.laplace_interference_quadrature_oracle(s, 1.0, scenario, 0.05)
        error = _relative_error(value, reference)
        if error > worst:
            worst, worst_case = error, f" at K={k} α={alpha:g} s={s:.3g}"
    return CheckResult(
        "interference transform vs quadrature",
        worst <= ORACLE_TOLERANCE,
        f"max rel err {worst:.2g}{worst_case}",
    )


def check_zf_desired_gain(m_antennas: int, k_users: int, draws: int) -> CheckResult:
    """Exact-ZF desired gain against Γ(M-K+1, 1)."""
    scenario = _bare_scenario(k_users, 4.0, m_antennas)
    rng = np.random.default_rng([SUITE_SEED, m_antennas, k_users])
    samples = np.array(
        [montecarlo.sample_gains_exact_zf(scenario, 0, rng)[0] for _ in range(draws)]
    )
    ks = stats.kstest(samples, stats.gamma(a=scenario.desired_shape).cdf)
    return CheckResult(
        f"zf desired gain KS (M={m_antennas}, K={k_users})",
        ks.pvalue > KS_LEVEL,
        f"D={ks.statistic:.4f} p={ks.pvalue:.3f}",
    )


def check_nearest_distance(draws: int, lambda_bs: float = 4.0) -> CheckResult:
    """Nearest point of simulated PPPs against the association-distance CDF."""
    rng = np.random.default_rng([SUITE_SEED, 1])
    radius = montecarlo.MIN_WINDOW_FACTOR * montecarlo.reference_distance(lambda_bs)
    nearest = np.empty(draws)
    for i in range(draws):
        points = montecarlo.sample_ppp_disk(lambda_bs, radius, rng)
        while points.shape[0] == 0:
            points = montecarlo.sample_ppp_disk(lambda_bs, radius, rng)
        nearest[i] = np.min(np.hypot(points[:, 0], points[:, 1]))
    ks = stats.kstest(nearest, lambda r: specfun.association_distance_cdf(r, lambda_bs))
    return CheckResult(
        "nearest-BS distance KS", ks.pvalue > KS_LEVEL, f"D={ks.statistic:.4f} p={ks.pvalue:.3f}"
    )


def check_ppp_counts(draws: int, lambda_bs: float = 4.0, radius: float = 1.0) -> CheckResult:
    """Poisson counts: sample mean and variance both near λπR², within 4 standard errors."""
    rng = np.random.default_rng([SUITE_SEED, 2])
    counts = np.array(
        [montecarlo.sample_ppp_disk(lambda_bs, radius, rng).shape[0] for _ in range(draws)]
    )
    expected = lambda_bs * math.pi * radius * radius
    mean_gap = abs(counts.mean() - expected) / math.sqrt(expected / draws)
    ratio_gap = abs(counts.var(ddof=1) / expected - 1.0) / math.sqrt((2.0 + 1.0 / expected) / draws)
    return CheckResult(
        "PPP count mean/variance",
        mean_gap < 4.0 and ratio_gap < 4.0,
        f"mean {counts.mean():.3f}, var {counts.var(ddof=1):.3f}, expected {expected:.3f}",
    )


def _run_check(name: str, check: Callable[[], CheckResult]) -> CheckResult:
    logger.debug(f"Running check: {name}")
    try:
        return check()
    except (exceptions.DenseCovError, ValueError, np.linalg.LinAlgError) as e:
        return CheckResult(name, False, f"raised {type(e).__name__}: {e}")


def run_oracle_suite(quick: bool = False, workers: int | None = None) -> list[CheckResult]:
    """Run every self-check; ``quick`` shrinks grids and sample counts.

    Checks never raise; a check that errors is reported as failed.
    """
    grid = 20 if quick else 50
    oracle_points = 8 if quick else 20
    draws = 2_000 if quick else 10_000
    trials = 20_000 if quick else 100_000

    checks: list[tuple[str, Callable[[], CheckResult]]] = [
        ("2F1(1,1;2;z) identity", lambda: check_log_identity(grid)),
        ("2F1(1,-1/2;1/2;-t²) identity", lambda: check_arctan_identity(grid)),
        ("interference transform closed form", check_interference_closed_form),
        ("interference transform vs quadrature", lambda: check_interference_oracle(oracle_points)),
        ("rayleigh closed form (analytic)", check_rayleigh_analytic),
        ("rayleigh closed form (monte carlo)", lambda: check_rayleigh_simulation(trials, workers)),
    ]
    for m, k in ZF_SHAPES:
        checks.append(
            (
                f"zf desired gain KS (M={m}, K={k})",
                lambda m=m, k=k: check_zf_desired_gain(m, k, draws),
            )
        )
    checks.append(("nearest-BS distance KS", lambda: check_nearest_distance(draws)))
    checks.append(("PPP count mean/variance", lambda: check_ppp_counts(draws)))

    results = []
    for name, check in checks:
        logger.progress(f"{name}...")
        results.append(_run_check(name, check))
    return results


def failed_checks(results: list[CheckResult]) -> list[str]:
    return [result.name for result in results if not result.passed]
