"""Closed-form null moments of the arc density and the standardized test.

The asymptotic mean ``mu(r)`` and variance ``nu(r)`` under uniformity on a
single triangle are exact piecewise rational functions of the expansion
factor, with breakpoints at 4/3, 3/2 and 2.  ``nu(1) = 1/3240`` here; this
follows from evaluating the variance polynomials as given, and was confirmed
independently by exact symbolic integration of the three triple-containment
probabilities and by Monte Carlo (see README, "Known discrepancies").

Multi-triangle moments condition on the Delaunay area weights w_j:

    mu_J = mu * sum(w^2)
    nu_J = nu * sum(w^3) + 4 mu^2 (sum(w^3) - sum(w^2)^2)

The standardized statistic is z = sqrt(n) (rho - mu_J) / sqrt(nu_J); the test
rejects against segregation for large z and against association for small z.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "DEGENERACY_EPS",
    "MomentPair",
    "TestResult",
    "mu_null",
    "mu_null_multi",
    "nu_null",
    "nu_null_multi",
    "phi",
    "phi_inv",
    "test",
]

# below this asymptotic variance the standardized statistic is meaningless
DEGENERACY_EPS = 1e-14


class MomentPair(NamedTuple):
    mean: float
    avar: float


def _check_r(r: float) -> None:
    if math.isnan(r) or (r != math.inf and r < 1.0):
        raise ValueError(f"expansion factor must be >= 1 or inf, got {r}")


def mu_null(r: float) -> float:
    """Asymptotic null mean of the arc density."""
    _check_r(r)
    if r == math.inf:
        return 1.0
    if r < 1.5:
        return 37.0 * r * r / 216.0
    if r < 2.0:
        return -r * r / 8.0 + 4.0 - 8.0 / r + 4.5 / (r * r)
    return 1.0 - 1.5 / (r * r)


def _horner(coeffs: Sequence[float], r: float) -> float:
    acc = 0.0
    for c in coeffs:
        acc = acc * r + c
    return acc


def nu_null(r: float) -> float:
    """Asymptotic null variance (covariance of the symmetrized kernel)."""
    _check_r(r)
    if r == math.inf:
        return 0.0
    r2 = r * r
    if r < 4.0 / 3.0:
        num = _horner(
            (3007, -13824, 898, 77760, -117953, 48888, -24246, 60480, -38880, 0, 3888), r
        )
        return num / (58320.0 * r2 * r2)
    if r < 1.5:
        num = _horner(
            (5467, -37800, 61912, 0, 46588, -191520, 13608, 241920, -155520, 0, 15552), r
        )
        return num / (233280.0 * r2 * r2)
    if r < 2.0:
        num = _horner(
            (7, -72, 312, 0, -5332, 15072, 13704, -139264, 273600, -242176, 103232, -27648, 8640),
            r,
        )
        return -num / (960.0 * r2 * r2 * r2)
    num = _horner((15, 0, -11, -48, 25), r)
    return num / (15.0 * r2 * r2 * r2)


def _check_weights(weights) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or len(w) == 0:
        raise ValueError("weights must be a non-empty 1-d sequence")
    if np.any(w <= 0):
        raise ValueError("weights must be positive")
    if abs(float(w.sum()) - 1.0) > 1e-10:
        raise ValueError(f"weights must sum to 1, got {w.sum()!r}")
    return w


def mu_null_multi(r: float, weights) -> float:
    """Null mean conditional on Delaunay area weights: mu(r) * sum(w^2)."""
    w = _check_weights(weights)
    return mu_null(r) * float((w**2).sum())


def nu_null_multi(r: float, weights) -> float:
    """Null variance conditional on area weights (Jensen keeps it >= 0)."""
    w = _check_weights(weights)
    s2 = float((w**2).sum())
    s3 = float((w**3).sum())
    mu = mu_null(r)
    val = nu_null(r) * s3 + 4.0 * mu * mu * (s3 - s2 * s2)
    return max(val, 0.0)


def phi(x: float) -> float:
    """Standard normal CDF."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


_PHI_INV_A = (
    -3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
    1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00,
)
_PHI_INV_B = (
    -5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
    6.680131188771972e01, -1.328068155288572e01,
)
_PHI_INV_C = (
    -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
    -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00,
)
_PHI_INV_D = (
    7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
    3.754408661907416e00,
)


def phi_inv(p: float) -> float:
    """Standard normal quantile, |phi(phi_inv(p)) - p| <= 1e-14 on (0, 1).

    Rational initial guess refined with one Halley step through ``erfc``.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile argument must be in (0, 1), got {p}")
    a, b, c, d = _PHI_INV_A, _PHI_INV_B, _PHI_INV_C, _PHI_INV_D
    p_low = 0.02425
    if p < p_low:
        q = math.sqrt(-2.0 * math.log(p))
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / (
            (((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0
        )
    elif p <= 1.0 - p_low:
        q = p - 0.5
        s = q * q
        x = (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * q / (
            ((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0
        )
    else:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / (
            (((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0
        )
    # one Halley refinement: e = phi(x) - p, u = e / pdf(x)
    e = phi(x) - p
    u = e * math.sqrt(2.0 * math.pi) * math.exp(x * x / 2.0)
    return x - u / (1.0 + x * u / 2.0)


@dataclass(frozen=True)
class TestResult:
    """Standardized arc-density test with both one-sided p-values."""

    rho: float
    mean: float
    avar: float
    n: int
    z: float | None
    p_segregation: float
    p_association: float
    degenerate: bool


def moments(r: float, weights=None) -> MomentPair:
    """Null (mean, asymptotic variance), single- or multi-triangle."""
    if weights is None:
        return MomentPair(mu_null(r), nu_null(r))
    return MomentPair(mu_null_multi(r, weights), nu_null_multi(r, weights))


def test(rho: float, n: int, r: float, weights=None) -> TestResult:
    """Standardize an observed arc density against the null moments.

    ``weights`` are the Delaunay area weights for the multi-triangle case
    (None or [1] for a single triangle).  A degenerate variance (notably
    r = inf on one triangle) sets the flag and suppresses z and p-values.
    """
    if n < 2:
        raise ValueError(f"need n >= 2 points, got {n}")
    mean, avar = moments(r, weights)
    if avar <= DEGENERACY_EPS:
        return TestResult(
            rho=rho, mean=mean, avar=avar, n=n, z=None,
            p_segregation=math.nan, p_association=math.nan, degenerate=True,
        )
    z = math.sqrt(n) * (rho - mean) / math.sqrt(avar)
    return TestResult(
        rho=rho, mean=mean, avar=avar, n=n, z=z,
        p_segregation=1.0 - phi(z), p_association=phi(z), degenerate=False,
    )
