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

import pytest
from click.testing import CliRunner

from densecov import cli, exceptions

from .conftest import DEFAULT_YAML


class TestConfigErrors:
    def test_handles_config_file_not_found(self):
        runner = CliRunner()
        result = runner.invoke(cli.cli, ["coverage", "--config", "/nonexistent/net.yaml"])

        assert result.exit_code == 2
        assert "CONFIG FILE NOT FOUND" in result.output
        assert "/nonexistent/net.yaml" in result.output

    def test_handles_invalid_yaml(self, invalid_yaml_file):
        runner = CliRunner()
        result = runner.invoke(cli.cli, ["ee", "--config", invalid_yaml_file])

        assert result.exit_code == 2
        assert "CONFIGURATION ERROR" in result.output
        assert "not valid YAML" in result.output

    def test_handles_unknown_key(self, write_yaml):
        path = write_yaml(DEFAULT_YAML + "lambda_bss: 4\n")
        runner = CliRunner()

        result = runner.invoke(cli.cli, ["coverage", "--config", path])

        assert result.exit_code == 2
        assert "Unknown key 'lambda_bss'" in result.output

    def test_handles_threshold_in_dbm(self, write_yaml):
        path = write_yaml(DEFAULT_YAML.replace("sinr_threshold_db: 1", "sinr_threshold_db: 1 dBm"))
        runner = CliRunner()

        result = runner.invoke(cli.cli, ["coverage", "--config", path])

        assert result.exit_code == 2
        assert "absolute power" in result.output

    def test_handles_invalid_parameter(self, write_yaml):
        path = write_yaml(DEFAULT_YAML.replace("pathloss_alpha: 4", "pathloss_alpha: 2"))
        runner = CliRunner()

        result = runner.invoke(cli.cli, ["simulate", "--config", path])

        assert result.exit_code == 2
        assert "INVALID PARAMETER" in result.output
        assert "pathloss_alpha" in result.output

    def test_handles_infeasible_scenario(self, config_file, mocker):
        mocker.patch(
            "densecov.analytic.coverage_probability",
            side_effect=exceptions.InfeasibleScenarioError(9, 8),
        )
        runner = CliRunner()

        result = runner.invoke(cli.cli, ["coverage", "--config", config_file])

        assert result.exit_code == 2
        assert "INFEASIBLE SCENARIO" in result.output

    def test_handles_invalid_worker_environment(self, config_file, monkeypatch):
        monkeypatch.setenv("DENSECOV_WORKERS", "many")
        runner = CliRunner()

        result = runner.invoke(
            cli.cli, ["simulate", "--config", config_file, "--trials", "10"]
        )

        assert result.exit_code == 2
        assert "DENSECOV_WORKERS" in result.output

    def test_handles_missing_sweep_spec(self, tmp_path):
        runner = CliRunner()
        result = runner.invoke(
            cli.cli, ["sweep", "--spec", str(tmp_path / "missing.yaml"), "--out", "x.csv"]
        )

        assert result.exit_code == 2
        assert "CONFIG FILE NOT FOUND" in result.output


class TestNumericalErrors:
    def test_handles_integration_failure(self, config_file, mocker):
        mocker.patch(
            "densecov.analytic.coverage_probability",
            side_effect=exceptions.IntegrationFailureError("error estimate 0.01 exceeds 0.001", 0.4, 0.01),
        )
        runner = CliRunner()

        result = runner.invoke(cli.cli, ["coverage", "--config", config_file])

        assert result.exit_code == 3
        assert "INTEGRATION FAILED" in result.output
        assert "exceeds" in result.output

    def test_handles_window_too_small(self, config_file):
        runner = CliRunner()
        result = runner.invoke(
            cli.cli, ["simulate", "--config", config_file, "--window-radius", "0.5", "--trials", "10"]
        )

        assert result.exit_code == 3
        assert "SIMULATION WINDOW TOO SMALL" in result.output

    @pytest.mark.parametrize(
        "exc",
        [
            exceptions.NoConvergenceError("params", 1_000_000),
            exceptions.SingularChannelError(10),
        ],
    )
    def test_handles_other_numerical_failures(self, config_file, mocker, exc):
        mocker.patch("densecov.montecarlo.simulate_coverage", side_effect=exc)
        runner = CliRunner()

        result = runner.invoke(cli.cli, ["coverage", "--config", config_file, "--mc"])

        assert result.exit_code == 3
        assert "NUMERICAL FAILURE" in result.output

    def test_handles_quadrature_failure(self, config_file, mocker):
        mocker.patch(
            "densecov.analytic.coverage_probability",
            side_effect=exceptions.QuadratureFailureError("the interference exponent", 1e-6, 1e-10),
        )
        runner = CliRunner()

        result = runner.invoke(cli.cli, ["coverage", "--config", config_file])

        assert result.exit_code == 3
        assert "QUADRATURE FAILED" in result.output
        assert "the interference exponent" in result.output

    def test_sweep_failures_do_not_fail_the_command(self, tmp_path, write_yaml, config_file, mocker):
        mocker.patch(
            "densecov.analytic.coverage_probability",
            side_effect=exceptions.IntegrationFailureError("diverged"),
        )
        spec = write_yaml(
            f"base: {config_file}\naxis: BsDensity\nvalues: [1, 2]\nmetrics: [CoverageAnalytic]\n"
        )
        out = tmp_path / "out.csv"
        runner = CliRunner()

        result = runner.invoke(cli.cli, ["sweep", "--spec", spec, "--out", str(out)])

        assert result.exit_code == 0
        assert out.read_text().count(",failed\n") == 2


class TestUnexpectedErrors:
    def test_handles_unexpected_exception(self, config_file, mocker):
        mocker.patch(
            "densecov.analytic.coverage_probability", side_effect=RuntimeError("boom")
        )
        runner = CliRunner()

        result = runner.invoke(cli.cli, ["coverage", "--config", config_file])

        assert result.exit_code == 1
        assert "Coverage computation failed: boom" in result.output

    def test_handles_unwritable_output(self, mocker):
        mocker.patch(
            "densecov.experiments.write_sweep_csv", side_effect=PermissionError("read-only")
        )
        mocker.patch("densecov.experiments.run_sweep")
        spec_path = os.path.join(os.path.dirname(__file__), "..", "configs", "ee_vs_density.yaml")
        runner = CliRunner()

        result = runner.invoke(cli.cli, ["sweep", "--spec", spec_path, "--out", "/ro/out.csv"])

        assert result.exit_code == 1
        assert "Could not write /ro/out.csv" in result.output
        assert "CRITICAL" in result.output
