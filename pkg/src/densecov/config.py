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

import difflib
import os
from typing import Any

import yaml

from . import exceptions
from .experiments import Axis, Metric, SweepSpec
from .montecarlo import GainModel, SimConfig
from .scenario import NUMERIC_FIELDS, NetworkParams

REQUIRED_NETWORK_FIELDS = [
    "lambda_bs",
    "lambda_ue",
    "num_subbands",
    "pathloss_alpha",
    "p_max_dbm",
    "sinr_threshold_db",
    "eta",
    "p_c",
    "p_pre",
    "p_0",
]
OPTIONAL_NETWORK_FIELDS = ["bandwidth_mhz", "rate_unit"]

SWEEP_FIELDS = [
    "name",
    "version",
    "base",
    "axis",
    "values",
    "metrics",
    "series",
    "sim",
    "include_noise",
]
SIM_FIELDS = [
    "trials",
    "seed",
    "gain_model",
    "window_radius",
    "confidence_level",
    "tail_compensation",
]


def load_config(config_path: str) -> dict[str, Any]:
    """Load and parse a YAML configuration file.

    Args:
        config_path: Path to the YAML config file

    Returns:
        Dictionary containing configuration

    Raises:
        FileNotFoundError: If config file doesn't exist
        yaml.YAMLError: If config file is not valid YAML
        ConfigValidationError: If the YAML root is not a mapping
    """
    with open(config_path) as f:
        config = yaml.safe_load(f)

    if not isinstance(config, dict):
        raise exceptions.ConfigValidationError("Config must be a dictionary")

    return config


def validate_network_config(config: dict[str, Any]) -> None:
    """Validate that a mapping describes exactly one NetworkParams record.

    Args:
        config: Configuration dictionary

    Raises:
        ConfigValidationError: On unknown keys, missing keys or mistyped values
    """
    known = REQUIRED_NETWORK_FIELDS + OPTIONAL_NETWORK_FIELDS
    _reject_unknown_keys(config, known, section="network config")

    for field in REQUIRED_NETWORK_FIELDS:
        if field not in config:
            raise exceptions.ConfigValidationError(f"Missing required config field: {field}")

    _validate_threshold(config["sinr_threshold_db"])

    for field in NUMERIC_FIELDS:
        if not _is_number(config[field]):
            raise exceptions.ConfigValidationError(
                f"'{field}' must be a number, got {config[field]!r}"
            )

    if not _is_integer(config["num_subbands"]):
        raise exceptions.ConfigValidationError(
            f"'num_subbands' must be an integer, got {config['num_subbands']!r}"
        )

    bandwidth = config.get("bandwidth_mhz")
    if bandwidth is not None and not _is_number(bandwidth):
        raise exceptions.ConfigValidationError(
            f"'bandwidth_mhz' must be a number if provided, got {bandwidth!r}"
        )

    if config.get("rate_unit", "bit") not in ("bit", "nat"):
        raise exceptions.ConfigValidationError(
            f"'rate_unit' must be 'bit' or 'nat', got {config['rate_unit']!r}"
        )


def build_network_params(config: dict[str, Any]) -> NetworkParams:
    """Validate a mapping and turn it into NetworkParams."""
    validate_network_config(config)
    values = {field: float(config[field]) for field in NUMERIC_FIELDS}
    bandwidth = config.get("bandwidth_mhz")
    return NetworkParams(
        num_subbands=int(config["num_subbands"]),
        bandwidth_mhz=None if bandwidth is None else float(bandwidth),
        rate_unit=config.get("rate_unit", "bit"),
        **values,
    )


def load_network_params(config_path: str) -> NetworkParams:
    return build_network_params(load_config(config_path))


def build_sim_config(config: dict[str, Any]) -> SimConfig:
    """Turn a 'sim' mapping into SimConfig; absent keys keep their defaults."""
    if not isinstance(config, dict):
        raise exceptions.ConfigValidationError("'sim' must be a dictionary")
    _reject_unknown_keys(config, SIM_FIELDS, section="sim")

    defaults = SimConfig()
    trials = config.get("trials", defaults.trials)
    seed = config.get("seed", defaults.seed)
    if not _is_integer(trials) or trials < 1:
        raise exceptions.ConfigValidationError(f"'trials' must be a positive integer, got {trials!r}")
    if not _is_integer(seed) or seed < 0:
        raise exceptions.ConfigValidationError(f"'seed' must be a non-negative integer, got {seed!r}")

    gain_model = config.get("gain_model", defaults.gain_model.value)
    try:
        gain_model = GainModel(gain_model)
    except ValueError:
        choices = ", ".join(m.value for m in GainModel)
        raise exceptions.ConfigValidationError(
            f"'gain_model' must be one of {choices}, got {gain_model!r}"
        ) from None

    window_radius = config.get("window_radius")
    if window_radius is not None and (not _is_number(window_radius) or window_radius <= 0):
        raise exceptions.ConfigValidationError(
            f"'window_radius' must be a positive number or null, got {window_radius!r}"
        )

    confidence = config.get("confidence_level", defaults.confidence_level)
    if not _is_number(confidence) or not 0 < confidence < 1:
        raise exceptions.ConfigValidationError(
            f"'confidence_level' must lie in (0, 1), got {confidence!r}"
        )

    compensation = config.get("tail_compensation", defaults.tail_compensation)
    if not isinstance(compensation, bool):
        raise exceptions.ConfigValidationError("'tail_compensation' must be a boolean")

    return SimConfig(
        trials=int(trials),
        window_radius=None if window_radius is None else float(window_radius),
        seed=int(seed),
        gain_model=gain_model,
        confidence_level=float(confidence),
        tail_compensation=compensation,
    )


def load_sweep_spec(spec_path: str) -> SweepSpec:
    """Load a sweep spec; a string 'base' is a network config path relative to the spec file.

    Raises:
        ConfigValidationError: If any section is malformed
    """
    config = load_config(spec_path)
    _reject_unknown_keys(config, SWEEP_FIELDS, section="sweep spec")

    for field in ("base", "axis", "values", "metrics"):
        if field not in config:
            raise exceptions.ConfigValidationError(f"Missing required sweep field: {field}")

    base = config["base"]
    if isinstance(base, str):
        base_path = os.path.join(os.path.dirname(os.path.abspath(spec_path)), base)
        base = load_config(base_path)
    if not isinstance(base, dict):
        raise exceptions.ConfigValidationError("'base' must be a mapping or a config file path")
    params = build_network_params(base)

    axis = _parse_enum(Axis, config["axis"], "axis")
    values = _parse_values(config["values"])
    metrics = config["metrics"]
    if not isinstance(metrics, list) or not metrics:
        raise exceptions.ConfigValidationError("'metrics' must be a non-empty list")
    metrics = tuple(_parse_enum(Metric, m, "metrics") for m in metrics)

    series_field, series_values = _parse_series(config.get("series"))

    sim = config.get("sim")
    sim = None if sim is None else build_sim_config(sim)

    include_noise = config.get("include_noise", True)
    if not isinstance(include_noise, bool):
        raise exceptions.ConfigValidationError("'include_noise' must be a boolean")

    version = config.get("version", 1)
    if not _is_integer(version) or version < 1:
        raise exceptions.ConfigValidationError(
            f"'version' must be a positive integer, got {version!r}"
        )

    return SweepSpec(
        base=params,
        axis=axis,
        values=values,
        metrics=metrics,
        sim=sim,
        series_field=series_field,
        series_values=series_values,
        include_noise=include_noise,
        name=str(config.get("name", os.path.splitext(os.path.basename(spec_path))[0])),
        version=int(version),
    )


def _reject_unknown_keys(config: dict[str, Any], known: list[str], section: str) -> None:
    for key in config:
        if key in known:
            continue
        message = f"Unknown key '{key}' in {section}"
        if key == "sinr_threshold_dbm":
            message += "; the SINR threshold is a power ratio, use 'sinr_threshold_db'"
        else:
            close = difflib.get_close_matches(str(key), known, n=1)
            if close:
                message += f" (did you mean '{close[0]}'?)"
        raise exceptions.ConfigValidationError(message)


def _validate_threshold(value) -> None:
    if isinstance(value, str):
        hint = " ('dBm' is an absolute power, not a ratio)" if "dbm" in value.lower() else ""
        raise exceptions.ConfigValidationError(
            f"'sinr_threshold_db' must be a plain number in dB, got {value!r}{hint}"
        )


def _is_number(value) -> bool:
    return isinstance(value, int | float) and not isinstance(value, bool)


def _is_integer(value) -> bool:
    if isinstance(value, bool):
        return False
    return isinstance(value, int) or (isinstance(value, float) and value.is_integer())


def _parse_enum(enum_cls, value, field: str):
    try:
        return enum_cls(value)
    except ValueError:
        choices = ", ".join(member.value for member in enum_cls)
        raise exceptions.ConfigValidationError(
            f"'{field}' must be one of {choices}, got {value!r}"
        ) from None


def _parse_values(values) -> tuple[float, ...]:
    if isinstance(values, dict):
        if set(values) != {"start", "stop", "step"}:
            raise exceptions.ConfigValidationError(
                "'values' range must have exactly 'start', 'stop' and 'step'"
            )
        start, stop, step = values["start"], values["stop"], values["step"]
        if not all(_is_number(v) for v in (start, stop, step)) or step <= 0:
            raise exceptions.ConfigValidationError("'values' range needs numbers and step > 0")
        count = int((stop - start) / step + 1e-9) + 1
        return tuple(float(f"{start + i * step:.12g}") for i in range(count))

    if not isinstance(values, list) or not all(_is_number(v) for v in values):
        raise exceptions.ConfigValidationError("'values' must be a list of numbers or a range")
    return tuple(float(v) for v in values)


def _parse_series(series) -> tuple[str | None, tuple[float, ...]]:
    if series is None:
        return None, ()
    if not isinstance(series, dict) or len(series) != 1:
        raise exceptions.ConfigValidationError("'series' must map exactly one field to a list")
    ((field, values),) = series.items()
    if field not in NUMERIC_FIELDS and field != "num_subbands":
        raise exceptions.ConfigValidationError(
            f"'series' field must be a numeric network parameter, got {field!r}"
        )
    if not isinstance(values, list) or not values or not all(_is_number(v) for v in values):
        raise exceptions.ConfigValidationError("'series' values must be a non-empty list of numbers")
    if field == "num_subbands" and not all(_is_integer(v) and v >= 1 for v in values):
        raise exceptions.ConfigValidationError(
            f"'series' values for num_subbands must be integers >= 1, got {values}"
        )
    return field, tuple(float(v) for v in values)
