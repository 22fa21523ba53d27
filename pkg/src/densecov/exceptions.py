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


class DenseCovError(Exception):
    pass


class InvalidConfigError(DenseCovError):
    """Base for every error caused by user-supplied configuration (exit code 2)."""


class ConfigFileNotFoundError(InvalidConfigError):
    def __init__(self, config_path: str):
        self.config_path = config_path
        super().__init__(f"Config file not found: {config_path}")


class ConfigValidationError(InvalidConfigError):
    def __init__(self, message: str):
        self.detail = message
        super().__init__(f"Configuration error: {message}")


class InvalidParameterError(InvalidConfigError):
    def __init__(self, field: str, value, reason: str):
        self.field = field
        self.value = value
        self.reason = reason
        super().__init__(f"Invalid value for '{field}': {value!r} ({reason})")


class InfeasibleScenarioError(InvalidConfigError):
    def __init__(self, k_users: int, m_antennas: int, params=None):
        self.k_users = k_users
        self.m_antennas = m_antennas
        self.params = params
        super().__init__(
            f"Infeasible scenario: K={k_users} users per sub-band exceeds M={m_antennas} antennas per BS"
        )


class NumericalError(DenseCovError):
    """Base for every failure of a numerical routine (exit code 3)."""


class NoConvergenceError(NumericalError):
    def __init__(self, params, terms: int):
        self.params = params
        self.terms = terms
        super().__init__(f"Hypergeometric series did not converge after {terms} terms for {params}")


class PoleAtMinusOneError(NumericalError):
    def __init__(self, s: complex):
        self.s = s
        super().__init__(f"Desired-signal transform has a pole at s = -1 (got s = {s})")


class NonFiniteArgumentError(NumericalError):
    def __init__(self, name: str, value):
        self.name = name
        self.value = value
        super().__init__(f"Argument '{name}' must be finite, got {value!r}")


class QuadratureFailureError(NumericalError):
    def __init__(self, what: str, abs_error: float, tolerance: float):
        self.what = what
        self.abs_error = abs_error
        self.tolerance = tolerance
        super().__init__(
            f"Quadrature for {what} missed its tolerance: error estimate {abs_error:.3g} > {tolerance:.3g}"
        )


class IntegrationFailureError(NumericalError):
    def __init__(self, reason: str, value: float | None = None, abs_error: float | None = None):
        self.reason = reason
        self.value = value
        self.abs_error = abs_error
        super().__init__(f"Coverage integration failed: {reason}")


class SingularChannelError(NumericalError):
    def __init__(self, attempts: int):
        self.attempts = attempts
        super().__init__(f"Channel Gram matrix stayed singular after {attempts} redraws")


class WindowTooSmallError(NumericalError):
    def __init__(self, window_radius: float, truncated_fraction: float, limit: float):
        self.window_radius = window_radius
        self.truncated_fraction = truncated_fraction
        self.limit = limit
        super().__init__(
            f"Simulation window radius {window_radius:.4g} km truncates an interference fraction "
            f"of {truncated_fraction:.3g} (limit {limit:.1g})"
        )


class ValidationSuiteFailedError(DenseCovError):
    def __init__(self, failed_checks: list[str]):
        self.failed_checks = failed_checks
        super().__init__(f"{len(failed_checks)} validation check(s) failed: {', '.join(failed_checks)}")
