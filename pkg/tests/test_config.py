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
import yaml

from densecov import config, exceptions
from densecov.experiments import Axis, Metric
from densecov.montecarlo import GainModel

from .conftest import DEFAULT_YAML

CONFIGS_DIR = os.path.join(os.path.dirname(__file__), "..", "configs")


def network(**overrides) -> dict:
    cfg = yaml.safe_load(DEFAULT_YAML)
    cfg.update(overrides)
    return cfg


class TestLoadConfig:
    def test_should_load_valid_yaml_config(self, config_file):
        cfg = config.load_config(config_file)
        assert cfg["lambda_bs"] == 4
        assert cfg["sinr_threshold_db"] == 1

    def test_should_raise_error_when_config_file_not_found(self):
        with pytest.raises(FileNotFoundError):
            config.load_config("/nonexistent/config.yaml")

    def test_should_raise_error_when_yaml_is_invalid(self, invalid_yaml_file):
        with pytest.raises(yaml.YAMLError):
            config.load_config(invalid_yaml_file)

    def test_should_reject_non_mapping_root(self, write_yaml):
        with pytest.raises(exceptions.ConfigValidationError, match="dictionary"):
            config.load_config(write_yaml("- 1\n- 2\n"))


class TestNetworkConfig:
    def test_should_build_params_from_shipped_defaults(self):
        params = config.load_network_params(os.path.join(CONFIGS_DIR, "default.yaml"))

        assert params.lambda_bs == 4.0
        assert params.lambda_ue == 32.0
        assert params.num_subbands == 1
        assert isinstance(params.num_subbands, int)
        assert params.bandwidth_mhz == 10.0
        assert params.rate_unit == "bit"

    def test_should_reject_missing_field(self):
        cfg = network()
        del cfg["p_0"]
        with pytest.raises(exceptions.ConfigValidationError, match="Missing required config field: p_0"):
            config.validate_network_config(cfg)

    def test_should_suggest_close_match_for_unknown_key(self):
        cfg = network(lamda_bs=4)
        with pytest.raises(exceptions.ConfigValidationError, match="did you mean 'lambda_bs'"):
            config.validate_network_config(cfg)

    def test_should_reject_threshold_in_dbm(self):
        cfg = network()
        cfg["sinr_threshold_dbm"] = cfg.pop("sinr_threshold_db")
        with pytest.raises(exceptions.ConfigValidationError, match="power ratio"):
            config.validate_network_config(cfg)

    def test_should_reject_threshold_with_unit_string(self):
        with pytest.raises(exceptions.ConfigValidationError, match="absolute power"):
            config.validate_network_config(network(sinr_threshold_db="1 dBm"))

    @pytest.mark.parametrize(
        "field, value",
        [("lambda_bs", "four"), ("eta", True), ("p_c", None), ("pathloss_alpha", [4])],
    )
    def test_should_reject_non_numeric_values(self, field, value):
        with pytest.raises(exceptions.ConfigValidationError, match=f"'{field}' must be a number"):
            config.validate_network_config(network(**{field: value}))

    def test_should_reject_fractional_subbands(self):
        with pytest.raises(exceptions.ConfigValidationError, match="integer"):
            config.validate_network_config(network(num_subbands=2.5))

    def test_should_accept_integral_float_subbands(self):
        assert config.build_network_params(network(num_subbands=2.0)).num_subbands == 2

    def test_should_reject_unknown_rate_unit(self):
        with pytest.raises(exceptions.ConfigValidationError, match="rate_unit"):
            config.validate_network_config(network(rate_unit="byte"))

    def test_should_leave_range_checks_to_scenario(self):
        """Syntactically valid but out-of-range values surface when the scenario is derived."""
        params = config.build_network_params(network(pathloss_alpha=2))
        assert params.pathloss_alpha == 2.0


class TestSimConfig:
    def test_should_fill_defaults(self):
        sim = config.build_sim_config({"trials": 500})
        assert sim.trials == 500
        assert sim.gain_model is GainModel.GAMMA
        assert sim.tail_compensation is True

    def test_should_parse_every_field(self):
        sim = config.build_sim_config(
            {
                "trials": 1000,
                "seed": 3,
                "gain_model": "zf",
                "window_radius": 5,
                "confidence_level": 0.95,
                "tail_compensation": False,
            }
        )
        assert sim.gain_model is GainModel.EXACT_ZF
        assert sim.window_radius == 5.0
        assert sim.confidence_level == 0.95
        assert sim.tail_compensation is False

    @pytest.mark.parametrize(
        "section, message",
        [
            ({"trials": 0}, "positive integer"),
            ({"seed": -1}, "non-negative"),
            ({"gain_model": "rayleigh"}, "gain_model"),
            ({"window_radius": 0}, "window_radius"),
            ({"confidence_level": 1.2}, "confidence_level"),
            ({"tail_compensation": "yes"}, "boolean"),
            ({"trails": 10}, "did you mean 'trials'"),
        ],
    )
    def test_should_reject_invalid_section(self, section, message):
        with pytest.raises(exceptions.ConfigValidationError, match=message):
            config.build_sim_config(section)


class TestSweepSpec:
    def test_should_resolve_base_relative_to_spec(self, tmp_path):
        (tmp_path / "net.yaml").write_text(DEFAULT_YAML)
        spec_path = tmp_path / "sweep.yaml"
        spec_path.write_text(
            "base: net.yaml\n"
            "axis: ThresholdDb\n"
            "values: {start: -10, stop: 20, step: 2.5}\n"
            "metrics: [CoverageAnalytic, CoverageMC]\n"
            "series:\n"
            "  pathloss_alpha: [3, 4, 5]\n"
            "sim:\n"
            "  trials: 20000\n"
        )

        spec = config.load_sweep_spec(str(spec_path))

        assert spec.name == "sweep"
        assert spec.axis is Axis.THRESHOLD_DB
        assert len(spec.values) == 13
        assert spec.values[0] == -10.0
        assert spec.values[-1] == 20.0
        assert spec.metrics == (Metric.COVERAGE_ANALYTIC, Metric.COVERAGE_MC)
        assert spec.series_field == "pathloss_alpha"
        assert spec.series_values == (3.0, 4.0, 5.0)
        assert spec.sim.trials == 20000
        assert spec.base.lambda_ue == 32.0

    def test_should_accept_inline_base(self, write_yaml):
        path = write_yaml(
            "name: inline\n"
            "base:\n" + "".join(f"  {line}\n" for line in DEFAULT_YAML.strip().splitlines()) +
            "axis: BsDensity\n"
            "values: [1, 2, 4]\n"
            "metrics: [EE_Analytic]\n"
            "include_noise: false\n"
        )

        spec = config.load_sweep_spec(path)

        assert spec.name == "inline"
        assert spec.values == (1.0, 2.0, 4.0)
        assert spec.include_noise is False
        assert spec.sim is None

    @pytest.mark.parametrize(
        "name",
        ["coverage_vs_threshold", "coverage_vs_density", "coverage_vs_subbands", "ee_vs_density"],
    )
    def test_should_load_shipped_sweep_specs(self, name):
        spec = config.load_sweep_spec(os.path.join(CONFIGS_DIR, f"{name}.yaml"))
        assert spec.name == name
        assert spec.series_field is not None
        assert spec.version == 1

    @pytest.mark.parametrize(
        "body, message",
        [
            ("axis: BsDensity\nvalues: [1]\nmetrics: [EE_Analytic]\n", "Missing required sweep field: base"),
            ("base: {}\naxis: Density\nvalues: [1]\nmetrics: [EE_Analytic]\n", "Missing required"),
            ("base: x.yaml\naxis: BsDensity\nvalues: [1]\nmetrics: [EE_Analytic]\nsereis: {}\n", "did you mean 'series'"),
        ],
    )
    def test_should_reject_malformed_spec(self, write_yaml, body, message):
        with pytest.raises(exceptions.ConfigValidationError, match=message):
            config.load_sweep_spec(write_yaml(body))

    def test_should_reject_unknown_axis_and_metric(self, tmp_path):
        (tmp_path / "net.yaml").write_text(DEFAULT_YAML)
        for body, message in [
            ("axis: Density\nvalues: [1]\nmetrics: [EE_Analytic]\n", "'axis' must be one of"),
            ("axis: BsDensity\nvalues: [1]\nmetrics: [EE]\n", "'metrics' must be one of"),
            ("axis: BsDensity\nvalues: [1]\nmetrics: []\n", "non-empty list"),
            ("axis: BsDensity\nvalues: {start: 1}\nmetrics: [EE_Analytic]\n", "exactly 'start'"),
            ("axis: BsDensity\nvalues: [1]\nmetrics: [EE_Analytic]\nseries: {eta: 1}\n", "non-empty list"),
            ("axis: BsDensity\nvalues: [1]\nmetrics: [EE_Analytic]\nseries: {rate_unit: [1]}\n", "numeric network parameter"),
            ("axis: BsDensity\nvalues: [1]\nmetrics: [EE_Analytic]\nseries: {num_subbands: [1.5]}\n", "integers >= 1"),
            ("axis: BsDensity\nvalues: [1]\nmetrics: [EE_Analytic]\nseries: {num_subbands: [0]}\n", "integers >= 1"),
            ("axis: BsDensity\nvalues: [1]\nmetrics: [EE_Analytic]\nversion: 0\n", "'version' must be a positive integer"),
            ("axis: BsDensity\nvalues: [1]\nmetrics: [EE_Analytic]\nversion: 1.5\n", "'version' must be a positive integer"),
        ]:
            spec_path = tmp_path / "sweep.yaml"
            spec_path.write_text("base: net.yaml\n" + body)
            with pytest.raises(exceptions.ConfigValidationError, match=message):
                config.load_sweep_spec(str(spec_path))

    def test_should_accept_integral_subband_series(self, tmp_path):
        (tmp_path / "net.yaml").write_text(DEFAULT_YAML)
        spec_path = tmp_path / "sweep.yaml"
        spec_path.write_text(
            "base: net.yaml\nversion: 3\naxis: BsDensity\nvalues: [1]\nmetrics: [EE_Analytic]\n"
            "series: {num_subbands: [1, 2.0, 4]}\n"
        )

        spec = config.load_sweep_spec(str(spec_path))

        assert spec.series_values == (1.0, 2.0, 4.0)
        assert spec.version == 3
