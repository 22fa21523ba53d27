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

"""End-to-end Monte Carlo of the downlink: BS placement, association and ZF gains.

The typical user sits at the origin of a disk of radius R. Every trial owns its random stream,
derived from (seed, trial index), so chunks may run in any order or process.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy import stats

from . import analytic, concurrency, exceptions, logger
from .scenario import NetworkParams, Scenario, derive_scenario

TRUNCATION_LIMIT = 1e-3
REFERENCE_QUANTILE = 0.9
MIN_WINDOW_FACTOR = 4.0
MAX_SINGULAR_REDRAWS = 10
SINGULAR_CONDITION = 1e12
DEFAULT_SEED = 20260101


class GainModel(str, Enum):
    GAMMA = "gamma"
    EXACT_ZF = "zf"


@dataclass(frozen=True)
class SimConfig:
    trials: int = 100_000
    window_radius: float | None = None
    seed: int = DEFAULT_SEED
    gain_model: GainModel = GainModel.GAMMA
    confidence_level: float = 0.99
    tail_compensation: bool = True


@dataclass(frozen=True)
class SimOutcome:
    estimate: float
    half_width: float
    trials_used: int
    window_radius: float
    empty_window_resamples: int = 0
    gain_model: GainModel = GainModel.GAMMA


@dataclass(frozen=True)
class TrialBatch:
    """Per-trial association distance, desired gain and normalized interference."""

    r0: np.ndarray
    desired: np.ndarray
    interference: np.ndarray
    window_radius: float
    empty_window_resamples: int


@dataclass(frozen=True)
class _ChunkTask:
    params: NetworkParams
    scenario: Scenario
    sim: SimConfig
    window_radius: float
    tail_mean: float
    start: int
    stop: int


def validate_sim_config(sim: SimConfig) -> None:
    if not isinstance(sim.trials, int) or sim.trials < 1:
        raise exceptions.InvalidParameterError("trials", sim.trials, "must be an integer >= 1")
    if sim.window_radius is not None and not sim.window_radius > 0:
        raise exceptions.InvalidParameterError(
            "window_radius", sim.window_radius, "must be > 0 km"
        )
    if not isinstance(sim.seed, int) or sim.seed < 0:
        raise exceptions.InvalidParameterError("seed", sim.seed, "must be a non-negative integer")
    if not 0 < sim.confidence_level < 1:
        raise exceptions.InvalidParameterError(
            "confidence_level", sim.confidence_level, "must lie in (0, 1)"
        )
    GainModel(sim.gain_model)


def sample_ppp_disk(lambda_: float, radius: float, rng: np.random.Generator) -> np.ndarray:
    """Homogeneous PPP on the disk of ``radius`` km centred at the origin, as an (n, 2) array."""
    if lambda_ <= 0 or radius <= 0:
        raise ValueError("sample_ppp_disk requires lambda > 0 and radius > 0")
    count = rng.poisson(lambda_ * math.pi * radius * radius)
    r = radius * np.sqrt(rng.random(count))
    theta = 2.0 * math.pi * rng.random(count)
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


def sample_gains_gamma(
    scenario: Scenario, n_interferers: int, rng: np.random.Generator
) -> tuple[float, np.ndarray]:
    """S ~ Γ(M-K+1, 1) and g_i ~ Γ(K, 1), all independent."""
    desired = float(rng.gamma(scenario.desired_shape, 1.0))
    gains = rng.gamma(scenario.k_users, 1.0, size=n_interferers)
    return desired, gains


def _complex_gaussian(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def zf_beamformers(channels: np.ndarray) -> np.ndarray:
    """Unit-norm ZF beamformers, the normalized columns of Hᴴ(HHᴴ)⁻¹.

    Args:
        channels: User channel matrices of shape (..., K, M), row k being h_kᴴ

    Returns:
        Beamformers of shape (..., M, K)

    Raises:
        numpy.linalg.LinAlgError: If a Gram matrix is singular
    """
    hermitian = np.conj(np.swapaxes(channels, -1, -2))
    gram = channels @ hermitian
    if np.any(np.linalg.cond(gram) > SINGULAR_CONDITION):
        raise np.linalg.LinAlgError("ill-conditioned channel Gram matrix")
    precoder = hermitian @ np.linalg.inv(gram)
    return precoder / np.linalg.norm(precoder, axis=-2, keepdims=True)


def sample_gains_exact_zf(
    scenario: Scenario, n_interferers: int, rng: np.random.Generator
) -> tuple[float, np.ndarray]:
    """Gains from explicit ZF precoding over i.i.d. Rayleigh channels.

    The serving BS precodes for the typical user (row 0) and K-1 co-scheduled users. Every
    interferer precodes for its own independent users; the typical user's cross channel h_i is
    independent of those beamformers, and g_i = Σ_k |h_iᴴ w_i,k|².

    Raises:
        SingularChannelError: If the Gram matrices stay singular after repeated redraws
    """
    k, m = scenario.k_users, scenario.m_antennas
    for _ in range(MAX_SINGULAR_REDRAWS):
        try:
            serving = _complex_gaussian(rng, (k, m))
            desired = float(np.abs(serving[0] @ zf_beamformers(serving)[:, 0]) ** 2)
            if n_interferers == 0:
                return desired, np.empty(0)
            beams = zf_beamformers(_complex_gaussian(rng, (n_interferers, k, m)))
        except np.linalg.LinAlgError:
            logger.debug("Singular channel draw, resampling")
            continue
        cross = _complex_gaussian(rng, (n_interferers, m))
        projections = np.einsum("nm,nmk->nk", np.conj(cross), beams)
        return desired, np.sum(np.abs(projections) ** 2, axis=-1)
    raise exceptions.SingularChannelError(MAX_SINGULAR_REDRAWS)


def zf_interference_gain_report(
    scenario: Scenario, draws: int, rng: np.random.Generator
) -> tuple[float, float, float, float]:
    """Fit of exact-ZF interferer gains to Γ(K, 1).

    Returns:
        (mean, standard error of the mean, KS statistic, KS p-value)
    """
    _, gains = sample_gains_exact_zf(scenario, draws, rng)
    ks = stats.kstest(gains, stats.gamma(a=scenario.k_users).cdf)
    return (
        float(np.mean(gains)),
        float(np.std(gains, ddof=1) / math.sqrt(draws)),
        float(ks.statistic),
        float(ks.pvalue),
    )


def tail_interference_mean(lambda_bs: float, k_users: int, alpha: float, radius: float) -> float:
    """Mean normalized interference from BSs beyond ``radius``: 2πλK R^(2-α)/(α-2)."""
    return 2.0 * math.pi * lambda_bs * k_users * radius ** (2.0 - alpha) / (alpha - 2.0)


def _tail_std(lambda_bs: float, k_users: int, alpha: float, radius: float) -> float:
    return math.sqrt(math.pi * lambda_bs * k_users * (k_users + 1) / (alpha - 1.0)) * radius ** (
        1.0 - alpha
    )


def reference_distance(lambda_bs: float) -> float:
    """90% quantile of the association distance."""
    return math.sqrt(-math.log(1.0 - REFERENCE_QUANTILE) / (math.pi * lambda_bs))


def truncated_interference_fraction(
    params: NetworkParams, scenario: Scenario, radius: float, tail_compensation: bool
) -> float:
    """Interference lost to the finite window, relative to the pilot level seen at the reference distance.

    Without compensation this is the mean tail; with compensation the mean is added back and
    only the tail's standard deviation remains.
    """
    alpha, k = scenario.pathloss_alpha, scenario.k_users
    pilot = tail_interference_mean(params.lambda_bs, k, alpha, reference_distance(params.lambda_bs))
    if tail_compensation:
        lost = _tail_std(params.lambda_bs, k, alpha, radius)
    else:
        lost = tail_interference_mean(params.lambda_bs, k, alpha, radius)
    return lost / pilot


def default_window_radius(
    params: NetworkParams, scenario: Scenario, tail_compensation: bool = True
) -> float:
    """Smallest radius meeting TRUNCATION_LIMIT, floored at MIN_WINDOW_FACTOR reference distances."""
    alpha, k, lam = scenario.pathloss_alpha, scenario.k_users, params.lambda_bs
    reference = reference_distance(lam)
    budget = TRUNCATION_LIMIT * tail_interference_mean(lam, k, alpha, reference)
    if tail_compensation:
        scale = math.sqrt(math.pi * lam * k * (k + 1) / (alpha - 1.0))
        radius = (scale / budget) ** (1.0 / (alpha - 1.0))
    else:
        scale = 2.0 * math.pi * lam * k / (alpha - 2.0)
        radius = (scale / budget) ** (1.0 / (alpha - 2.0))
    # Nudge past the boundary so the check below never fails on rounding.
    return max(radius * (1.0 + 1e-9), MIN_WINDOW_FACTOR * reference)


def _simulate_chunk(task: _ChunkTask) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    scenario = task.scenario
    alpha = scenario.pathloss_alpha
    sampler = (
        sample_gains_exact_zf if task.sim.gain_model == GainModel.EXACT_ZF else sample_gains_gamma
    )

    size = task.stop - task.start
    r0 = np.empty(size)
    desired = np.empty(size)
    interference = np.empty(size)
    resamples = 0

    for offset, index in enumerate(range(task.start, task.stop)):
        rng = concurrency.trial_rng(task.sim.seed, index)
        points = sample_ppp_disk(task.params.lambda_bs, task.window_radius, rng)
        while points.shape[0] == 0:
            resamples += 1
            points = sample_ppp_disk(task.params.lambda_bs, task.window_radius, rng)

        distances = np.hypot(points[:, 0], points[:, 1])
        nearest = int(np.argmin(distances))
        others = np.delete(distances, nearest)

        signal, gains = sampler(scenario, others.size, rng)
        r0[offset] = distances[nearest]
        desired[offset] = signal
        interference[offset] = float(np.sum(gains * others ** (-alpha))) + task.tail_mean

    return r0, desired, interference, resamples


def simulate_trials(
    params: NetworkParams, sim: SimConfig, *, workers: int | None = None
) -> TrialBatch:
    """Run ``sim.trials`` independent network snapshots.

    Raises:
        WindowTooSmallError: If the window truncates more than TRUNCATION_LIMIT of the interference
    """
    validate_sim_config(sim)
    scenario = derive_scenario(params)
    gain_model = GainModel(sim.gain_model)
    sim = replace(sim, gain_model=gain_model)

    radius = sim.window_radius or default_window_radius(params, scenario, sim.tail_compensation)
    fraction = truncated_interference_fraction(params, scenario, radius, sim.tail_compensation)
    if fraction >= TRUNCATION_LIMIT:
        raise exceptions.WindowTooSmallError(radius, fraction, TRUNCATION_LIMIT)

    tail_mean = (
        tail_interference_mean(params.lambda_bs, scenario.k_users, scenario.pathloss_alpha, radius)
        if sim.tail_compensation
        else 0.0
    )

    worker_count = concurrency.resolve_workers(workers)
    tasks = [
        _ChunkTask(params, scenario, sim, radius, tail_mean, start, stop)
        for start, stop in concurrency.chunk_ranges(sim.trials, worker_count * 4)
    ]
    logger.debug(
        f"Simulating {sim.trials} trials ({gain_model.value}) in a {radius:.3g} km window "
        f"across {len(tasks)} chunks"
    )
    chunks = concurrency.ordered_map(_simulate_chunk, tasks, worker_count)

    resamples = sum(chunk[3] for chunk in chunks)
    if resamples:
        logger.warning(
            f"{resamples} trial(s) drew an empty window and were resampled "
            f"(bias bound e^(-λπR²) = {math.exp(-params.lambda_bs * math.pi * radius**2):.2g})"
        )

    return TrialBatch(
        r0=np.concatenate([chunk[0] for chunk in chunks]),
        desired=np.concatenate([chunk[1] for chunk in chunks]),
        interference=np.concatenate([chunk[2] for chunk in chunks]),
        window_radius=radius,
        empty_window_resamples=resamples,
    )


def confidence_half_width(estimate: float, trials: int, confidence_level: float) -> float:
    """Normal-approximation half-width z·sqrt(p(1-p)/n)."""
    z = stats.norm.ppf(0.5 + confidence_level / 2.0)
    return float(z * math.sqrt(estimate * (1.0 - estimate) / trials))


def simulate_coverage(
    params: NetworkParams,
    sim: SimConfig,
    *,
    include_noise: bool = True,
    workers: int | None = None,
) -> SimOutcome:
    """Fraction of trials with SINR = r0^(-α) S / (I + K/P) above the threshold."""
    scenario = derive_scenario(params)
    batch = simulate_trials(params, sim, workers=workers)

    noise = scenario.noise_term if include_noise else 0.0
    signal = batch.desired * batch.r0 ** (-scenario.pathloss_alpha)
    covered = signal > scenario.t_linear * (batch.interference + noise)

    estimate = float(np.count_nonzero(covered)) / sim.trials
    return SimOutcome(
        estimate=estimate,
        half_width=confidence_half_width(estimate, sim.trials, sim.confidence_level),
        trials_used=sim.trials,
        window_radius=batch.window_radius,
        empty_window_resamples=batch.empty_window_resamples,
        gain_model=GainModel(sim.gain_model),
    )


def simulate_energy(
    params: NetworkParams,
    sim: SimConfig,
    *,
    include_noise: bool = True,
    workers: int | None = None,
    outcome: SimOutcome | None = None,
) -> analytic.EnergyReport:
    """EnergyReport with the coverage replaced by its Monte Carlo estimate."""
    if outcome is None:
        outcome = simulate_coverage(params, sim, include_noise=include_noise, workers=workers)
    return analytic.build_energy_report(params, outcome.estimate)
