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
from dataclasses import dataclass, field, replace
from enum import Enum

import pandas as pd

from . import analytic, concurrency, exceptions, logger, montecarlo, scenario, utils
from .scenario import NetworkParams

CSV_COLUMNS = ["axis", "value", "metric", "result", "err", "status"]

STATUS_OK = "ok"
STATUS_INFEASIBLE = "infeasible"
STATUS_FAILED = "failed"


class Axis(str, Enum):
    THRESHOLD_DB = "ThresholdDb"
    BS_DENSITY = "BsDensity"
    NUM_SUBBANDS = "NumSubbands"

    @property
    def field(self) -> str:
        return {
            Axis.THRESHOLD_DB: "sinr_threshold_db",
            Axis.BS_DENSITY: "lambda_bs",
            Axis.NUM_SUBBANDS: "num_subbands",
        }[self]


class Metric(str, Enum):
    COVERAGE_ANALYTIC = "CoverageAnalytic"
    COVERAGE_MC = "CoverageMC"
    EE_ANALYTIC = "EE_Analytic"
    EE_MC = "EE_MC"

    @property
    def needs_simulation(self) -> bool:
        return self in (Metric.COVERAGE_MC, Metric.EE_MC)


@dataclass(frozen=True)
class SweepSpec:
    base: NetworkParams
    axis: Axis
    values: tuple[float, ...]
    metrics: tuple[Metric, ...]
    sim: montecarlo.SimConfig | None = None
    series_field: str | None = None
    series_values: tuple[float, ...] = ()
    include_noise: bool = True
    name: str = ""
    version: int = 1


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    metric: str
    result: float | None
    err: float | None
    status: str


@dataclass(frozen=True)
class SweepTable:
    axis: Axis
    rows: tuple[SweepRow, ...] = field(default_factory=tuple)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "axis": [self.axis.value] * len(self.rows),
                "value": [float(row.axis_value) for row in self.rows],
                "metric": [row.metric for row in self.rows],
                "result": [math.nan if row.result is None else row.result for row in self.rows],
                "err": [math.nan if row.err is None else row.err for row in self.rows],
                "status": [row.status for row in self.rows],
            },
            columns=CSV_COLUMNS,
        )

    def to_csv(self) -> str:
        """Render the fixed CSV schema: 9 significant digits, '\\n' line endings."""
        return self.to_frame().to_csv(
            index=False, float_format=utils.FLOAT_FORMAT, lineterminator="\n", na_rep=""
        )

    def series(self, metric: str) -> list[tuple[float, float | None]]:
        """(axis value, result) pairs for one metric label, in axis order."""
        return [(row.axis_value, row.result) for row in self.rows if row.metric == metric]

    def count(self, status: str) -> int:
        return sum(1 for row in self.rows if row.status == status)


@dataclass(frozen=True)
class SweepPoint:
    index: int
    axis_value: float
    suffix: str
    params: NetworkParams
    metrics: tuple[Metric, ...]
    sim: montecarlo.SimConfig | None
    include_noise: bool


def validate_sweep_spec(spec: SweepSpec) -> None:
    """Check the structural invariants of a sweep.

    Raises:
        ConfigValidationError: On empty or unordered values, missing metrics or missing sim config
    """
    if not spec.values:
        raise exceptions.ConfigValidationError("sweep 'values' must not be empty")
    if any(b <= a for a, b in zip(spec.values, spec.values[1:], strict=False)):
        raise exceptions.ConfigValidationError("sweep 'values' must be strictly increasing")
    if spec.axis == Axis.NUM_SUBBANDS and any(
        not float(v).is_integer() or v < 1 for v in spec.values
    ):
        raise exceptions.ConfigValidationError("NumSubbands values must be integers >= 1")
    if not spec.metrics:
        raise exceptions.ConfigValidationError("sweep 'metrics' must not be empty")
    if any(metric.needs_simulation for metric in spec.metrics) and spec.sim is None:
        raise exceptions.ConfigValidationError("Monte Carlo metrics require a 'sim' section")
    if spec.series_field is not None:
        if spec.series_field == spec.axis.field:
            raise exceptions.ConfigValidationError("'series' cannot vary the swept field")
        if not spec.series_values:
            raise exceptions.ConfigValidationError("'series' needs at least one value")


def sweep_points(spec: SweepSpec) -> list[SweepPoint]:
    """Flatten (series value × axis value) into indexed points, series-major."""
    validate_sweep_spec(spec)

    if spec.series_field is None:
        series = [("", spec.base)]
    else:
        series = [
            (f"@{spec.series_field}={utils.format_float(v)}", spec.base.with_value(spec.series_field, v))
            for v in spec.series_values
        ]

    points = []
    for suffix, base in series:
        for value in spec.values:
            index = len(points)
            params = base.with_value(spec.axis.field, value)
            scenario.validate_params(params)
            sim = spec.sim
            if sim is not None:
                sim = replace(sim, seed=concurrency.derive_seed(sim.seed, index))
            points.append(
                SweepPoint(
                    index=index,
                    axis_value=float(value),
                    suffix=suffix,
                    params=params,
                    metrics=spec.metrics,
                    sim=sim,
                    include_noise=spec.include_noise,
                )
            )
    return points


def predict_infeasible(spec: SweepSpec) -> int:
    """Number of sweep points with K > M, from scenario arithmetic alone."""
    return sum(1 for point in sweep_points(spec) if not scenario.is_feasible(point.params))


def _evaluate_point(point: SweepPoint) -> list[SweepRow]:
    def row(metric: Metric, result=None, err=None, status=STATUS_OK) -> SweepRow:
        return SweepRow(point.axis_value, metric.value + point.suffix, result, err, status)

    if not scenario.is_feasible(point.params):
        return [row(metric, status=STATUS_INFEASIBLE) for metric in point.metrics]

    rows = []
    analytic_coverage: analytic.CoverageResult | None = None
    simulated: montecarlo.SimOutcome | None = None
    analytic_failed = simulation_failed = False

    for metric in point.metrics:
        try:
            if metric.needs_simulation:
                if simulation_failed:
                    rows.append(row(metric, status=STATUS_FAILED))
                    continue
                if simulated is None:
                    simulated = montecarlo.simulate_coverage(
                        point.params, point.sim, include_noise=point.include_noise, workers=1
                    )
                if metric == Metric.COVERAGE_MC:
                    rows.append(row(metric, simulated.estimate, simulated.half_width))
                else:
                    report = analytic.build_energy_report(point.params, simulated.estimate)
                    err = analytic.ee_error(point.params, simulated.half_width)
                    rows.append(row(metric, report.ee, err))
            else:
                if analytic_failed:
                    rows.append(row(metric, status=STATUS_FAILED))
                    continue
                if analytic_coverage is None:
                    analytic_coverage = analytic.coverage_probability(
                        point.params, include_noise=point.include_noise
                    )
                if metric == Metric.COVERAGE_ANALYTIC:
                    rows.append(
                        row(metric, analytic_coverage.value, analytic_coverage.abs_error_estimate)
                    )
                else:
                    report = analytic.build_energy_report(point.params, analytic_coverage.value)
                    err = analytic.ee_error(point.params, analytic_coverage.abs_error_estimate)
                    rows.append(row(metric, report.ee, err))
        except (exceptions.NumericalError, exceptions.InvalidParameterError) as e:
            logger.warning(f"{metric.value}{point.suffix} at {point.axis_value:g} failed: {e}")
            if metric.needs_simulation:
                simulation_failed = True
            else:
                analytic_failed = True
            rows.append(row(metric, status=STATUS_FAILED))

    return rows


def run_sweep(spec: SweepSpec, *, workers: int | None = None) -> SweepTable:
    """Evaluate every requested metric at every sweep point.

    Points run in parallel when more than one worker is available; rows are collected in point
    order, so the table is identical for any worker count. Per-point failures are recorded as
    rows with status 'failed' and never abort the sweep.
    """
    points = sweep_points(spec)
    worker_count = concurrency.resolve_workers(workers)

    infeasible = sum(1 for point in points if not scenario.is_feasible(point.params))
    if infeasible:
        logger.warning(f"{infeasible} sweep point(s) have K > M and are marked infeasible")

    logger.progress(
        f"Sweeping {spec.name or 'sweep'} (v{spec.version}): {spec.axis.value} over "
        f"{len(points)} point(s) with {worker_count} worker(s)"
    )
    results = concurrency.ordered_map(_evaluate_point, points, worker_count)
    rows = tuple(row for point_rows in results for row in point_rows)
    return SweepTable(axis=spec.axis, rows=rows)


def write_sweep_csv(table: SweepTable, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.write(table.to_csv())


@dataclass(frozen=True)
class DensityOutcome:
    lambda_bs: float
    feasible: bool
    m_antennas: int | None = None
    k_users: int | None = None
    coverage: float | None = None
    coverage_error: float | None = None
    ee: float | None = None


@dataclass(frozen=True)
class Verdict:
    outcomes: tuple[DensityOutcome, ...]
    argmax_coverage: float
    argmax_ee: float
    densest_feasible: float
    densest_wins: bool
    coverage_spread: float
    saturated: bool


def _evaluate_density(task: tuple[NetworkParams, bool]) -> DensityOutcome:
    params, include_noise = task
    if not scenario.is_feasible(params):
        return DensityOutcome(lambda_bs=params.lambda_bs, feasible=False)
    derived = scenario.derive_scenario(params)
    coverage = analytic.coverage_probability(params, include_noise=include_noise)
    report = analytic.build_energy_report(params, coverage.value)
    return DensityOutcome(
        lambda_bs=params.lambda_bs,
        feasible=True,
        m_antennas=derived.m_antennas,
        k_users=derived.k_users,
        coverage=coverage.value,
        coverage_error=coverage.abs_error_estimate,
        ee=report.ee,
    )


def verdict(
    params: NetworkParams,
    densities: list[float],
    *,
    tolerance: float = 5e-3,
    include_noise: bool = True,
    workers: int | None = None,
) -> Verdict:
    """Compare coverage and EE across BS densities at fixed λ_UE (so λ_BS·M stays fixed).

    Raises:
        ConfigValidationError: If no density is given or none is feasible
    """
    if not densities:
        raise exceptions.ConfigValidationError("verdict needs at least one density")

    ordered = sorted(float(d) for d in densities)
    tasks = [(params.with_value("lambda_bs", d), include_noise) for d in ordered]
    outcomes = tuple(
        concurrency.ordered_map(_evaluate_density, tasks, concurrency.resolve_workers(workers))
    )

    feasible = [o for o in outcomes if o.feasible]
    if not feasible:
        raise exceptions.ConfigValidationError("no density in the list gives a feasible scenario")

    best_coverage = max(feasible, key=lambda o: o.coverage)
    best_ee = max(feasible, key=lambda o: o.ee)
    densest = feasible[-1].lambda_bs
    spread = max(o.coverage for o in feasible) - min(o.coverage for o in feasible)

    return Verdict(
        outcomes=outcomes,
        argmax_coverage=best_coverage.lambda_bs,
        argmax_ee=best_ee.lambda_bs,
        densest_feasible=densest,
        densest_wins=best_coverage.lambda_bs == densest and best_ee.lambda_bs == densest,
        coverage_spread=spread,
        saturated=spread <= tolerance,
    )
