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

import click

from . import exceptions

EXIT_FAILURE = 1
EXIT_INVALID_CONFIG = 2
EXIT_NUMERICAL_FAILURE = 3

CONFIG_DOC = "docs/configuration.md"


def display_structured_error(
    title: str,
    reason: str,
    what_to_do: list[str],
    inputs: dict = None,
    help_links: list[str] = None,
) -> None:
    click.echo(err=True)
    click.echo(click.style(f"❌ {title}", fg="red", bold=True), err=True)
    click.echo(err=True)

    click.echo(click.style("REASON", fg="yellow", bold=True), err=True)
    click.echo(reason, err=True)
    click.echo(err=True)

    click.echo(click.style("WHAT YOU CAN DO", fg="cyan", bold=True), err=True)
    for i, action in enumerate(what_to_do, 1):
        click.echo(f"{i}) {action}", err=True)
    click.echo(err=True)

    if inputs:
        click.echo(click.style("INPUT YOU PROVIDED", fg="magenta", bold=True), err=True)
        for key, value in inputs.items():
            if value is None:
                click.echo(f" Missing: {key}", err=True)
            else:
                click.echo(f" {key}: {value}", err=True)
        click.echo(err=True)

    if help_links:
        click.echo(click.style("NEED HELP?", fg="green", bold=True), err=True)
        for link in help_links:
            click.echo(f" → {link}", err=True)
        click.echo(err=True)


def handle_config_file_not_found_error(exc: exceptions.ConfigFileNotFoundError) -> None:
    display_structured_error(
        title="CONFIG FILE NOT FOUND",
        reason=f'The configuration file "{exc.config_path}" could not be found.',
        what_to_do=[
            "Verify the config file path is correct",
            "Start from the shipped defaults:\n     densecov coverage --config configs/default.yaml",
        ],
        inputs={"--config": exc.config_path},
        help_links=[f"See {CONFIG_DOC} for the config file format"],
    )


def handle_config_validation_error(
    exc: exceptions.ConfigValidationError, config: str = None
) -> None:
    display_structured_error(
        title="CONFIGURATION ERROR",
        reason=str(exc),
        what_to_do=[
            "Review the file for misspelled, missing or extra keys",
            "Network configs need exactly: lambda_bs, lambda_ue, num_subbands, pathloss_alpha, "
            "p_max_dbm, sinr_threshold_db, eta, p_c, p_pre, p_0",
            "Write numbers without units (the threshold is in dB, power in dBm, densities per km²)",
        ],
        inputs={"--config": config},
        help_links=[f"See {CONFIG_DOC} for config file requirements"],
    )


def handle_invalid_parameter_error(
    exc: exceptions.InvalidParameterError, config: str = None
) -> None:
    display_structured_error(
        title="INVALID PARAMETER",
        reason=f'"{exc.field}" = {exc.value!r} is not allowed: {exc.reason}.',
        what_to_do=[
            f"Change '{exc.field}' in the configuration file",
            "Path-loss exponents must exceed 2; densities must be positive; eta lies in (0, 1]",
        ],
        inputs={"--config": config, exc.field: exc.value},
        help_links=[f"See {CONFIG_DOC} for parameter ranges"],
    )


def handle_infeasible_scenario_error(
    exc: exceptions.InfeasibleScenarioError, config: str = None
) -> None:
    display_structured_error(
        title="INFEASIBLE SCENARIO",
        reason=(
            f"Each BS would serve K={exc.k_users} users per sub-band with only "
            f"M={exc.m_antennas} antennas; zero-forcing needs K <= M."
        ),
        what_to_do=[
            "Increase num_subbands (L) to reduce K = floor(λ_UE / (λ_BS·L))",
            "Lower lambda_bs or raise lambda_ue to give each BS more antennas",
        ],
        inputs={"--config": config, "K": exc.k_users, "M": exc.m_antennas},
        help_links=["densecov coverage --help"],
    )


def handle_integration_failure_error(
    exc: exceptions.IntegrationFailureError, config: str = None
) -> None:
    display_structured_error(
        title="INTEGRATION FAILED",
        reason=str(exc),
        what_to_do=[
            "Re-run with --verbose to see per-stage error estimates",
            "Cross-check the configuration with the Monte Carlo path: add --mc",
            "Very low thresholds or extreme densities can make the integrand hard to resolve",
        ],
        inputs={
            "--config": config,
            "Value": exc.value,
            "Error estimate": exc.abs_error,
        },
        help_links=["densecov validate"],
    )


def handle_quadrature_failure_error(
    exc: exceptions.QuadratureFailureError, config: str = None
) -> None:
    display_structured_error(
        title="QUADRATURE FAILED",
        reason=(
            f"The quadrature for {exc.what} reported an error estimate of {exc.abs_error:.3g}, "
            f"above its tolerance of {exc.tolerance:.3g}."
        ),
        what_to_do=[
            "Re-run with --verbose to see which stage lost accuracy",
            "Run 'densecov validate' to check the numerical kernels on this machine",
            "Extreme path-loss exponents or densities can make the integrand hard to resolve",
        ],
        inputs={
            "--config": config,
            "Quantity": exc.what,
            "Error estimate": f"{exc.abs_error:.3g}",
            "Tolerance": f"{exc.tolerance:.3g}",
        },
        help_links=["densecov validate --help"],
    )


def handle_window_too_small_error(
    exc: exceptions.WindowTooSmallError, config: str = None
) -> None:
    display_structured_error(
        title="SIMULATION WINDOW TOO SMALL",
        reason=str(exc),
        what_to_do=[
            "Omit --window-radius to let the window be sized automatically",
            "Keep tail compensation enabled (drop --no-tail-compensation); without it small "
            "path-loss exponents need very large windows",
            f"Or pass a larger --window-radius than {exc.window_radius:.4g} km",
        ],
        inputs={"--config": config, "--window-radius": exc.window_radius},
        help_links=["densecov simulate --help"],
    )


def handle_numerical_error(exc: exceptions.NumericalError, config: str = None) -> None:
    display_structured_error(
        title="NUMERICAL FAILURE",
        reason=str(exc),
        what_to_do=[
            "Re-run with --verbose for diagnostics",
            "Run 'densecov validate' to check the numerical kernels on this machine",
        ],
        inputs={"--config": config},
        help_links=["densecov validate --help"],
    )


def report(exc: exceptions.DenseCovError, config: str = None) -> int:
    """Display ``exc`` with its matching handler and return the process exit code."""
    if isinstance(exc, exceptions.ConfigFileNotFoundError):
        handle_config_file_not_found_error(exc)
        return EXIT_INVALID_CONFIG
    if isinstance(exc, exceptions.ConfigValidationError):
        handle_config_validation_error(exc, config)
        return EXIT_INVALID_CONFIG
    if isinstance(exc, exceptions.InvalidParameterError):
        handle_invalid_parameter_error(exc, config)
        return EXIT_INVALID_CONFIG
    if isinstance(exc, exceptions.InfeasibleScenarioError):
        handle_infeasible_scenario_error(exc, config)
        return EXIT_INVALID_CONFIG
    if isinstance(exc, exceptions.IntegrationFailureError):
        handle_integration_failure_error(exc, config)
        return EXIT_NUMERICAL_FAILURE
    if isinstance(exc, exceptions.QuadratureFailureError):
        handle_quadrature_failure_error(exc, config)
        return EXIT_NUMERICAL_FAILURE
    if isinstance(exc, exceptions.WindowTooSmallError):
        handle_window_too_small_error(exc, config)
        return EXIT_NUMERICAL_FAILURE
    if isinstance(exc, exceptions.NumericalError):
        handle_numerical_error(exc, config)
        return EXIT_NUMERICAL_FAILURE
    if isinstance(exc, exceptions.InvalidConfigError):
        handle_config_validation_error(exceptions.ConfigValidationError(str(exc)), config)
        return EXIT_INVALID_CONFIG
    display_structured_error(title="OPERATION FAILED", reason=str(exc), what_to_do=["Re-run with --verbose"])
    return EXIT_FAILURE
