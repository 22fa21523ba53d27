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

"""Building-block functions: association distance, interference and desired-signal transforms.

The interference transform is built on the Gauss hypergeometric function
``2F1(K, -δ; 1-δ; z)`` with ``δ = 2/α``. Only that family (``c = b + 1``) and a few
test identities need to be supported, not arbitrary parameter regimes.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from . import exceptions, logger, utils
from .scenario import Scenario

SERIES_RADIUS = 0.8
MAX_SERIES_TERMS = 1_000_000
_EPS = 1e-17

ORACLE_TAIL_BOUND = 1e-12


@dataclass(frozen=True)
class Hyp2F1Params:
    a: float
    b: float
    c: float
    z: complex

    @classmethod
    def interference(cls, k_users: int, pathloss_alpha: float, z: complex) -> "Hyp2F1Params":
        """Parameters ``(K, -2/α; 1-2/α; z)`` of the interference transform."""
        delta = 2.0 / pathloss_alpha
        return cls(a=k_users, b=-delta, c=1.0 - delta, z=complex(z))

    @property
    def unit_gap(self) -> bool:
        return math.isclose(self.c, self.b + 1.0, rel_tol=0.0, abs_tol=1e-14)


def association_distance_pdf(r, lambda_bs: float):
    """Density of the distance from the typical user to its nearest BS, 2πλr·exp(-λπr²)."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or lambda_bs <= 0:
        raise ValueError("association_distance_pdf requires r >= 0 and lambda_bs > 0")
    value = 2.0 * math.pi * lambda_bs * r * np.exp(-lambda_bs * math.pi * r * r)
    return float(value) if value.ndim == 0 else value


def association_distance_cdf(r, lambda_bs: float):
    """Cumulative distribution 1 - exp(-λπr²) matching association_distance_pdf."""
    r = np.asarray(r, dtype=float)
    value = -np.expm1(-lambda_bs * math.pi * np.clip(r, 0.0, None) ** 2)
    return float(value) if value.ndim == 0 else value


def sample_association_distance(lambda_bs: float, rng: np.random.Generator, size=None):
    """Draw nearest-BS distances by inverting the association-distance CDF.

    ``U`` is taken uniform on (0, 1] so the logarithm stays finite.
    """
    if lambda_bs <= 0:
        raise ValueError("lambda_bs must be > 0")
    u = 1.0 - rng.random(size)
    return np.sqrt(-np.log(u) / (math.pi * lambda_bs))


def hyp2f1(p: Hyp2F1Params) -> complex:
    """Evaluate the analytic continuation of the Gauss hypergeometric series.

    Args:
        p: Parameters and complex argument

    Returns:
        The function value (principal branch)

    Raises:
        NonFiniteArgumentError: If z is NaN or infinite
        NoConvergenceError: If no supported expansion converges for the argument
    """
    utils.ensure_finite("z", p.z)
    if p.c <= 0 and float(p.c).is_integer():
        raise ValueError(f"c must not be a non-positive integer, got {p.c}")

    z = complex(p.z)
    if z == 0:
        return 1.0 + 0.0j

    if p.unit_gap and _is_positive_integer(p.a) and p.a > 1 and abs(1.0 - z) >= 1.0:
        return _unit_gap_recurrence(int(p.a), p.b, z, p)

    return _hyp2f1_direct(p.a, p.b, p.c, z, p)


def _is_positive_integer(x: float) -> bool:
    return float(x).is_integer() and x > 0


def _hyp2f1_direct(a: float, b: float, c: float, z: complex, p: Hyp2F1Params) -> complex:
    if abs(z) <= SERIES_RADIUS:
        return _series(a, b, c, z, p)

    w = z / (z - 1.0)
    if abs(w) <= SERIES_RADIUS:
        return _pfaff(a, b, c, z, p)

    unit_gap = math.isclose(c, b + 1.0, rel_tol=0.0, abs_tol=1e-14)
    if unit_gap and abs(z) >= 1.0 / SERIES_RADIUS and not float(a - b).is_integer():
        return _unit_gap_reflection(a, b, z, p)

    if abs(w) < 1.0:
        return _pfaff(a, b, c, z, p)
    if abs(z) < 1.0:
        return _series(a, b, c, z, p)
    raise exceptions.NoConvergenceError(p, 0)


def _series(a: float, b: float, c: float, z: complex, p: Hyp2F1Params) -> complex:
    """Plain power series with running Pochhammer products."""
    if math.isclose(c, b + 1.0, rel_tol=0.0, abs_tol=1e-14):
        return _unit_gap_series(a, b, z, p)

    total = 1.0 + 0.0j
    term = 1.0 + 0.0j
    for n in range(MAX_SERIES_TERMS):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        if term == 0:
            return total
        if abs(term) <= _EPS * abs(total):
            ratio = abs((a + n + 1) * (b + n + 1) / ((c + n + 1) * (n + 2)) * z)
            if ratio < 1.0:
                return total
    raise exceptions.NoConvergenceError(p, MAX_SERIES_TERMS)


def _unit_gap_series(a: float, b: float, z: complex, p: Hyp2F1Params) -> complex:
    """Series for c = b + 1, where (b)_n/(c)_n telescopes to b/(b + n)."""
    if b == 0:
        return 1.0 + 0.0j

    total = 1.0 + 0.0j
    pochhammer = 1.0 + 0.0j
    for n in range(1, MAX_SERIES_TERMS):
        pochhammer *= (a + n - 1) / n * z
        term = pochhammer * (b / (b + n))
        total += term
        if pochhammer == 0:
            return total
        if abs(term) <= _EPS * abs(total) and abs((a + n) / (n + 1) * z) < 1.0:
            return total
    raise exceptions.NoConvergenceError(p, MAX_SERIES_TERMS)


def _pfaff(a: float, b: float, c: float, z: complex, p: Hyp2F1Params) -> complex:
    """2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1))."""
    w = z / (z - 1.0)
    return (1.0 - z) ** (-a) * _series(a, c - b, c, w, p)


def _unit_gap_reflection(a: float, b: float, z: complex, p: Hyp2F1Params) -> complex:
    """Connection formula around z = ∞ for c = b + 1 and non-integer a - b.

    2F1(a,b;b+1;z) = Γ(b+1)Γ(a-b)/Γ(a) (-z)^(-b) + b/(b-a) (-z)^(-a) 2F1(a, a-b; a-b+1; 1/z)
    """
    leading = special.gamma(b + 1.0) * special.gamma(a - b) / special.gamma(a)
    minus_z = -z
    tail = _unit_gap_series(a, a - b, 1.0 / z, p)
    return leading * minus_z ** (-b) + b / (b - a) * minus_z ** (-a) * tail


def _unit_gap_recurrence(a: int, b: float, z: complex, p: Hyp2F1Params) -> complex:
    """Raise the first parameter from 1 to ``a`` with the contiguous relation

    (c-j) F(j-1) + (2j - c + (b-j) z) F(j) + j (z-1) F(j+1) = 0,  c = b + 1.

    F(j) grows like j^(-b) while the companion solution scales like (1-z)^(-j), so the
    forward direction is stable whenever |1 - z| >= 1.
    """
    previous = 1.0 + 0.0j
    current = _hyp2f1_direct(1.0, b, b + 1.0, z, p)
    for j in range(1, a):
        following = -(
            (b + 1.0 - j) * previous + (2.0 * j - b - 1.0 + (b - j) * z) * current
        ) / (j * (z - 1.0))
        previous, current = current, following
    return current


def interference_hyp2f1(k_users: int, pathloss_alpha: float, z: complex) -> complex:
    """Shorthand for ``2F1(K, -2/α; 1-2/α; z)``."""
    return hyp2f1(Hyp2F1Params.interference(k_users, pathloss_alpha, z))


def laplace_interference(s: complex, r0: float, scenario: Scenario, lambda_bs: float) -> complex:
    """Laplace transform of the aggregate interference seen beyond the association distance.

    exp[-πλr0² (2F1(K, -2/α; 1-2/α; -s r0^(-α)) - 1)]
    """
    utils.ensure_finite("s", s)
    if not r0 > 0:
        raise ValueError(f"r0 must be > 0, got {r0}")

    s = complex(s)
    if s == 0:
        return 1.0 + 0.0j

    alpha = scenario.pathloss_alpha
    z = -s * r0 ** (-alpha)
    value = interference_hyp2f1(scenario.k_users, alpha, z)
    return cmath.exp(-math.pi * lambda_bs * r0 * r0 * (value - 1.0))


def laplace_interference_quadrature_oracle(
    s: complex, r0: float, scenario: Scenario, lambda_bs: float
) -> complex:
    """Independent evaluation of laplace_interference by quadrature of the PGFL exponent.

    Integrates ∫_{r0}^R (1 - (1 + s v^(-α))^(-K)) v dv after the substitution v = r0·e^x, with R
    chosen so the neglected tail K|s|R^(2-α)/(α-2) stays below 1e-12.

    Raises:
        QuadratureFailureError: If either quadrature misses its tolerance
    """
    utils.ensure_finite("s", s)
    if not r0 > 0:
        raise ValueError(f"r0 must be > 0, got {r0}")

    s = complex(s)
    if s == 0:
        return 1.0 + 0.0j

    alpha = scenario.pathloss_alpha
    k = scenario.k_users
    radius = (k * abs(s) / ((alpha - 2.0) * ORACLE_TAIL_BOUND)) ** (1.0 / (alpha - 2.0))
    upper = math.log(max(radius, r0) / r0)
    if upper <= 0:
        return 1.0 + 0.0j

    scaled_s = s * r0 ** (-alpha)

    def exponent(x: float) -> complex:
        return _one_minus_inverse_power(scaled_s * math.exp(-alpha * x), k) * math.exp(2.0 * x)

    # The integrand changes regime where |s| v^(-α) crosses 1.
    knee = math.log(abs(scaled_s)) / alpha
    points = [knee] if 0.0 < knee < upper else None

    options = {"limit": 500, "epsabs": 1e-14, "epsrel": 1e-12, "points": points}
    real_part, real_error = integrate.quad(lambda x: exponent(x).real, 0.0, upper, **options)
    imag_part, imag_error = integrate.quad(lambda x: exponent(x).imag, 0.0, upper, **options)

    integral = complex(real_part, imag_part)
    abs_error = real_error + imag_error
    tolerance = 1e-10 * max(1.0, abs(integral))
    if abs_error > tolerance:
        raise exceptions.QuadratureFailureError("the interference exponent", abs_error, tolerance)

    logger.debug(
        f"Quadrature oracle s={s:.4g} r0={r0:.4g}: exponent={integral:.10g} (err {abs_error:.2g})"
    )
    return cmath.exp(-2.0 * math.pi * lambda_bs * r0 * r0 * integral)


def _one_minus_inverse_power(w: complex, k: int) -> complex:
    """1 - (1 + w)^(-k), using the binomial series when |w| is small to avoid cancellation."""
    if abs(w) >= 1e-3:
        return 1.0 - (1.0 + w) ** (-k)

    total = 0.0 + 0.0j
    power = 1.0 + 0.0j
    for j in range(1, 7):
        power *= w
        total += (-1) ** (j + 1) * math.comb(k + j - 1, j) * power
    return total


def laplace_desired(s: complex, scenario: Scenario) -> complex:
    """Laplace transform of the Γ(M-K+1, 1) desired-signal gain, (1 + s)^-(M-K+1).

    Raises:
        PoleAtMinusOneError: If s = -1
    """
    utils.ensure_finite("s", s)
    s = complex(s)
    if s == -1:
        raise exceptions.PoleAtMinusOneError(s)
    return (1.0 / (1.0 + s)) ** scenario.desired_shape
