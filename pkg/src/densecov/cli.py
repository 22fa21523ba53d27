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

import sys

import click
import yaml

from . import (
    analytic,
    error_handler,
    exceptions,
    experiments,
    logger,
    montecarlo,
    scenario,
    utils,
    validation,
)
from . import config as config_module

GAIN_MODELS = [model.value for model in montecarlo.GainModel]


def _exit_with_error(exc: Exception, config: str = None) -> None:
    """Show a structured error for ``exc`` and exit with its code."""
    if isinstance(exc, FileNotFoundError):
        exc = exceptions.ConfigFileNotFoundError(exc.filename or str(exc))
    elif isinstance(exc, yaml.YAMLError):
        exc = exceptions.ConfigValidationError(f"file is not valid YAML: {exc}")
    sys.exit(error_handler.report(exc, config))


def _sim_config(trials, seed, gain_model, window_radius=None, tail_compensation=True):
    defaults = montecarlo.SimConfig()
    return montecarlo.SimConfig(
        trials=defaults.trials if trials is None else trials,
        seed=defaults.seed if seed is None else seed,
        gain_model=montecarlo.GainModel(gain_model),
        window_radius=window_radius,
        tail_compensation=tail_compensation,
    )


def _log_scenario(params: scenario.NetworkParams) -> scenario.Scenario:
    derived = scenario.derive_scenario(params)
    logger.info(
        f"Scenario: λ_BS={params.lambda_bs:g}/km², λ_UE={params.lambda_ue:g}/km², "
        f"L={params.num_subbands}, α={params.pathloss_alpha:g}, T={params.sinr_threshold_db:g} dB"
    )
    logger.info(
        f"  M={derived.m_antennas} antennas, K={derived.k_users} users/sub-band, "
        f"P={derived.p_bs:.4g} W per BS"
    )
    if params.bandwidth_mhz is not None:
        logger.info(f"  bandwidth: {params.bandwidth_mhz:g} MHz")
    return derived


def _parse_densities(raw: str) -> list[float]:
    try:
        densities = [float(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise exceptions.ConfigValidationError(
            f"--densities must be a comma-separated list of numbers, got {raw!r}"
        ) from None
    if not densities or any(d <= 0 for d in densities):
        raise exceptions.ConfigValidationError("--densities needs at least one positive density")
    return densities


@click.group()
@click.option("--verbose", is_flag=True, help="Enable verbose debug logging")
@click.pass_context
def cli(ctx, verbose):
    """Coverage and energy efficiency of dense ZF cellular networks."""
    ctx.ensure_object(dict)
    ctx.obj["verbose"] = verbose

    if verbose:
        import logging

        logger.setup_logging(level=logging.DEBUG)
        logger.debug("Verbose logging enabled")
    else:
        logger.setup_logging()


@cli.command("coverage")
@click.option("--config", required=True, help="Path to network config YAML file")
@click.option("--mc", is_flag=True, help="Estimate by Monte Carlo instead of transform inversion")
@click.option("--oracle", is_flag=True, help="Use the conditional-Erlang simulation oracle")
@click.option("--trials", type=int, help="Monte Carlo trials (default: 100000)")
@click.option("--seed", type=int, help="Monte Carlo seed")
@click.option(
    "--gain-model",
    type=click.Choice(GAIN_MODELS),
    default=montecarlo.GainModel.GAMMA.value,
    show_default=True,
    help="Channel gains: Gamma distributions or explicit ZF precoding",
)
@click.option("--no-noise", is_flag=True, help="Interference-limited mode (K/P set to 0)")
@click.option("--workers", type=int, help="Worker processes (default: $DENSECOV_WORKERS or 1)")
def coverage(config, mc, oracle, trials, seed, gain_model, no_noise, workers):
    """Coverage probability P(SINR > T) of the typical user.

    By default the value comes from transform inversion with an error estimate. --mc simulates
    the network and reports a confidence half-width instead.
    """
    try:
        if mc and oracle:
            raise exceptions.ConfigValidationError("--mc and --oracle cannot be combined")

        params = config_module.load_network_params(config)
        _log_scenario(params)
        include_noise = not no_noise

        if mc:
            sim = _sim_config(trials, seed, gain_model)
            logger.progress(f"Simulating {sim.trials} trials ({sim.gain_model.value} gains)...")
            outcome = montecarlo.simulate_coverage(
                params, sim, include_noise=include_noise, workers=workers
            )
            logger.metric("coverage", outcome.estimate, outcome.half_width)
            logger.info(
                f"method: monte_carlo ({sim.confidence_level:.0%} half-width, "
                f"window {outcome.window_radius:.3g} km)"
            )
        elif oracle:
            draws = trials or 100_000
            result = analytic.coverage_probability_gamma_oracle(
                params,
                include_noise=include_noise,
                draws=draws,
                seed=montecarlo.DEFAULT_SEED if seed is None else seed,
                workers=workers,
            )
            logger.metric("coverage", result.value, result.abs_error_estimate)
            logger.info(f"method: {result.method} ({draws} draws)")
        else:
            result = analytic.coverage_probability(params, include_noise=include_noise)
            logger.metric("coverage", result.value, result.abs_error_estimate)
            logger.info(
                f"method: {result.method} ({result.evaluations} integrand evaluations, "
                f"inner cut-off {result.inner_truncation:.3g})"
            )

    except (exceptions.DenseCovError, FileNotFoundError, yaml.YAMLError) as e:
        _exit_with_error(e, config)
    except Exception as e:
        logger.error(f"Coverage computation failed: {e}")
        sys.exit(error_handler.EXIT_FAILURE)


@cli.command("ee")
@click.option("--config", required=True, help="Path to network config YAML file")
@click.option("--mc", is_flag=True, help="Use a Monte Carlo coverage estimate")
@click.option("--trials", type=int, help="Monte Carlo trials (default: 100000)")
@click.option("--seed", type=int, help="Monte Carlo seed")
@click.option(
    "--gain-model",
    type=click.Choice(GAIN_MODELS),
    default=montecarlo.GainModel.GAMMA.value,
    show_default=True,
    help="Channel gains for --mc",
)
@click.option("--no-noise", is_flag=True, help="Interference-limited mode (K/P set to 0)")
@click.option("--workers", type=int, help="Worker processes (default: $DENSECOV_WORKERS or 1)")
def ee(config, mc, trials, seed, gain_model, no_noise, workers):
    """Energy efficiency ASE/AEC and its ingredients."""
    try:
        params = config_module.load_network_params(config)
        _log_scenario(params)
        include_noise = not no_noise

        if mc:
            sim = _sim_config(trials, seed, gain_model)
            outcome = montecarlo.simulate_coverage(
                params, sim, include_noise=include_noise, workers=workers
            )
            report = montecarlo.simulate_energy(params, sim, outcome=outcome)
            coverage_error = outcome.half_width
        else:
            result = analytic.coverage_probability(params, include_noise=include_noise)
            report = analytic.energy_report(params, coverage=result)
            coverage_error = result.abs_error_estimate

        unit = f"{params.rate_unit}/symbol"
        logger.metric("coverage", report.coverage, coverage_error)
        logger.metric("avg_rate", report.avg_rate, unit=unit)
        logger.metric("ase", report.ase, unit=f"{params.rate_unit}/symbol/km²")
        logger.metric("aec", report.aec, unit="W")
        logger.metric("ee", report.ee, analytic.ee_error(params, coverage_error))

    except (exceptions.DenseCovError, FileNotFoundError, yaml.YAMLError) as e:
        _exit_with_error(e, config)
    except Exception as e:
        logger.error(f"Energy efficiency computation failed: {e}")
        sys.exit(error_handler.EXIT_FAILURE)


@cli.command("sweep")
@click.option("--spec", "spec_path", required=True, help="Path to sweep spec YAML file")
@click.option("--out", required=True, help="Output CSV path")
@click.option("--workers", type=int, help="Worker processes (default: $DENSECOV_WORKERS or 1)")
def sweep(spec_path, out, workers):
    """Evaluate metrics along one parameter axis and write a CSV table."""
    table = None
    try:
        spec = config_module.load_sweep_spec(spec_path)
        predicted = experiments.predict_infeasible(spec)
        table = experiments.run_sweep(spec, workers=workers)
        experiments.write_sweep_csv(table, out)

        logger.success(f"Wrote {len(table.rows)} row(s) to {out}")
        ok = table.count(experiments.STATUS_OK)
        infeasible = table.count(experiments.STATUS_INFEASIBLE)
        failed = table.count(experiments.STATUS_FAILED)
        logger.info(f"  ok: {ok}, infeasible: {infeasible}, failed: {failed}")
        if predicted:
            logger.info(f"  {predicted} point(s) predicted infeasible (K > M)")
        if failed:
            logger.tip("Re-run with --verbose to see why points failed")

    except (exceptions.DenseCovError, FileNotFoundError, yaml.YAMLError) as e:
        _exit_with_error(e, spec_path)
    except OSError as e:
        if table is None:
            logger.error(f"Could not read {spec_path}: {e}")
        else:
            logger.critical(f"Could not write {out}: {e}; {len(table.rows)} computed row(s) were lost")
        sys.exit(error_handler.EXIT_FAILURE)
    except Exception as e:
        logger.error(f"Sweep failed: {e}")
        sys.exit(error_handler.EXIT_FAILURE)


@cli.command("simulate")
@click.option("--config", required=True, help="Path to network config YAML file")
@click.option("--trials", type=int, help="Monte Carlo trials (default: 100000)")
@click.option("--seed", type=int, help="Monte Carlo seed")
@click.option(
    "--gain-model",
    type=click.Choice(GAIN_MODELS),
    default=montecarlo.GainModel.GAMMA.value,
    show_default=True,
    help="Channel gains: Gamma distributions or explicit ZF precoding",
)
@click.option("--window-radius", type=float, help="Simulation disk radius in km (default: auto)")
@click.option(
    "--no-tail-compensation",
    is_flag=True,
    help="Do not add the mean interference from beyond the window",
)
@click.option("--no-noise", is_flag=True, help="Interference-limited mode (K/P set to 0)")
@click.option("--workers", type=int, help="Worker processes (default: $DENSECOV_WORKERS or 1)")
def simulate(
    config, trials, seed, gain_model, window_radius, no_tail_compensation, no_noise, workers
):
    """Monte Carlo coverage with simulation diagnostics."""
    try:
        params = config_module.load_network_params(config)
        _log_scenario(params)
        sim = _sim_config(
            trials,
            seed,
            gain_model,
            window_radius=window_radius,
            tail_compensation=not no_tail_compensation,
        )
        logger.progress(f"Simulating {sim.trials} trials (seed {sim.seed})...")
        outcome = montecarlo.simulate_coverage(
            params, sim, include_noise=not no_noise, workers=workers
        )

        logger.metric("coverage", outcome.estimate, outcome.half_width)
        logger.info(f"trials:        {outcome.trials_used}")
        logger.info(f"window radius: {outcome.window_radius:.4g} km")
        logger.info(f"gain model:    {outcome.gain_model.value}")
        logger.info(f"tail added:    {'yes' if sim.tail_compensation else 'no'}")
        if outcome.empty_window_resamples:
            logger.warning(f"empty-window resamples: {outcome.empty_window_resamples}")

    except (exceptions.DenseCovError, FileNotFoundError, yaml.YAMLError) as e:
        _exit_with_error(e, config)
    except Exception as e:
        logger.error(f"Simulation failed: {e}")
        sys.exit(error_handler.EXIT_FAILURE)


@cli.command("validate")
@click.option("--quick", is_flag=True, help="Smaller grids and sample counts")
@click.option("--workers", type=int, help="Worker processes (default: $DENSECOV_WORKERS or 1)")
def validate(quick, workers):
    """Check the numerical kernels against closed forms and independent oracles."""
    try:
        results = validation.run_oracle_suite(quick=quick, workers=workers)
        logger.info("")
        for result in results:
            status = "PASS" if result.passed else "FAIL"
            logger.info(f"{status}  {result.name}: {result.detail}")
        logger.info("")

        failed = validation.failed_checks(results)
        if failed:
            raise exceptions.ValidationSuiteFailedError(failed)
        logger.success(f"All {len(results)} checks passed")

    except exceptions.ValidationSuiteFailedError as e:
        logger.error(str(e))
        sys.exit(error_handler.EXIT_FAILURE)
    except exceptions.DenseCovError as e:
        _exit_with_error(e)
    except Exception as e:
        logger.error(f"Validation suite crashed: {e}")
        sys.exit(error_handler.EXIT_FAILURE)


@cli.command("verdict")
@click.option("--config", required=True, help="Path to network config YAML file")
@click.option(
    "--densities",
    default="1,2,4,8,16",
    show_default=True,
    help="Comma-separated BS densities per km² (λ_UE stays fixed)",
)
@click.option(
    "--tolerance",
    type=float,
    default=5e-3,
    show_default=True,
    help="Coverage spread at or below which the comparison is saturated",
)
@click.option("--no-noise", is_flag=True, help="Interference-limited mode (K/P set to 0)")
@click.option("--workers", type=int, help="Worker processes (default: $DENSECOV_WORKERS or 1)")
def verdict(config, densities, tolerance, no_noise, workers):
    """Few BSs with many antennas, or many BSs with few antennas?"""
    try:
        params = config_module.load_network_params(config)
        density_list = _parse_densities(densities)
        result = experiments.verdict(
            params,
            density_list,
            tolerance=tolerance,
            include_noise=not no_noise,
            workers=workers,
        )

        logger.info(f"{'λ_BS':>8} {'M':>5} {'K':>5} {'coverage':>12} {'EE':>14}")
        for outcome in result.outcomes:
            if not outcome.feasible:
                logger.info(f"{outcome.lambda_bs:>8g} {'':>5} {'':>5} {'infeasible':>12}")
                continue
            logger.info(
                f"{outcome.lambda_bs:>8g} {outcome.m_antennas:>5} {outcome.k_users:>5} "
                f"{utils.format_float(outcome.coverage):>12} {utils.format_float(outcome.ee):>14}"
            )
        logger.info("")
        logger.info(f"argmax coverage:  λ_BS = {result.argmax_coverage:g}")
        logger.info(f"argmax EE:        λ_BS = {result.argmax_ee:g}")
        logger.info(f"densest feasible: λ_BS = {result.densest_feasible:g}")
        logger.info(f"coverage spread:  {result.coverage_spread:.3g}")
        if result.saturated:
            logger.warning(
                f"Coverage is saturated (spread <= {tolerance:g}); densities are equivalent"
            )
        if result.densest_wins:
            logger.success("Small cells win: the densest deployment maximizes coverage and EE")
        else:
            logger.info("The densest deployment does not maximize both coverage and EE")

    except (exceptions.DenseCovError, FileNotFoundError, yaml.YAMLError) as e:
        _exit_with_error(e, config)
    except Exception as e:
        logger.error(f"Verdict failed: {e}")
        sys.exit(error_handler.EXIT_FAILURE)


if __name__ == "__main__":
    cli()
