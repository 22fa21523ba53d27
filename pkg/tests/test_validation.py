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

import pytest

from densecov import exceptions, validation
from densecov.validation import CheckResult

CHECK_FUNCTIONS = [
    "check_log_identity",
    "check_arctan_identity",
    "check_interference_closed_form",
    "check_interference_oracle",
    "check_rayleigh_analytic",
    "check_rayleigh_simulation",
    "check_zf_desired_gain",
    "check_nearest_distance",
    "check_ppp_counts",
]


@pytest.fixture
def passing_checks(mocker):
    """Replace every check with a stub that passes."""
    return {
        name: mocker.patch(
            f"densecov.validation.{name}", return_value=CheckResult(name, True, "stub")
        )
        for name in CHECK_FUNCTIONS
    }


class TestRunOracleSuite:
    def test_should_run_every_check(self, passing_checks):
        results = validation.run_oracle_suite(quick=True)

        assert len(results) == 11
        assert all(result.passed for result in results)
        assert passing_checks["check_zf_desired_gain"].call_count == 3
        assert validation.failed_checks(results) == []

    def test_quick_mode_should_shrink_samples(self, passing_checks):
        validation.run_oracle_suite(quick=True, workers=3)

        passing_checks["check_log_identity"].assert_called_once_with(20)
        passing_checks["check_rayleigh_simulation"].assert_called_once_with(20_000, 3)
        passing_checks["check_zf_desired_gain"].assert_any_call(8, 4, 2_000)

    def test_full_mode_should_use_full_grids(self, passing_checks):
        validation.run_oracle_suite(quick=False)

        passing_checks["check_log_identity"].assert_called_once_with(50)
        passing_checks["check_interference_oracle"].assert_called_once_with(20)
        passing_checks["check_rayleigh_simulation"].assert_called_once_with(100_000, None)

    def test_should_report_raising_check_as_failed(self, passing_checks):
        passing_checks["check_rayleigh_analytic"].side_effect = exceptions.IntegrationFailureError(
            "diverged"
        )

        results = validation.run_oracle_suite(quick=True)

        failed = [r for r in results if not r.passed]
        assert [r.name for r in failed] == ["rayleigh closed form (analytic)"]
        assert "IntegrationFailureError" in failed[0].detail
        assert validation.failed_checks(results) == ["rayleigh closed form (analytic)"]


class TestChecks:
    def test_log_identity_should_pass(self):
        result = validation.check_log_identity(20)
        assert result.passed, result.detail

    def test_arctan_identity_should_pass(self):
        result = validation.check_arctan_identity(20)
        assert result.passed, result.detail

    def test_interference_closed_form_should_pass(self):
        result = validation.check_interference_closed_form()
        assert result.passed, result.detail

    @pytest.mark.slow
    def test_interference_oracle_should_pass(self):
        result = validation.check_interference_oracle(8)
        assert result.passed, result.detail

    @pytest.mark.slow
    def test_zf_desired_gain_should_follow_gamma(self):
        result = validation.check_zf_desired_gain(8, 4, 2_000)
        assert result.passed, result.detail

    def test_ppp_counts_should_be_poisson(self):
        result = validation.check_ppp_counts(2_000)
        assert result.passed, result.detail

    def test_rayleigh_params_should_give_single_antenna_single_user(self):
        params = validation.rayleigh_params()
        assert params.lambda_bs == params.lambda_ue
        assert params.pathloss_alpha == 4.0
        assert params.sinr_threshold_db == 0.0
