"""Special functions and quadrature shared by the analytic expressions.

Conventions that matter here:

* ``lower_incomplete_gamma(a, b)`` is the unnormalized integral from 0 to b
  of ``t^(a-1) e^(-t)``; the coverage and activity-factor closed forms use
  the *lower* function throughout.
* The near/far interference approximations need the *upper* incomplete
  gamma paired with a growing exponential; ``exp_scaled_upper_gamma``
  evaluates ``e^k * Gamma_upper(a, k)`` without overflow.
* ``n1``/``n2`` are the radial kernels of the simplified primary-coverage
  expression; ``n2`` keeps the separate ``-Gamma(2/alpha) + n2`` grouping
  of its derivation (the combined-argument rendering is a typesetting
  artifact, settled empirically by the exact-vs-simplified test).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .geometry import TWO_PI


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for adaptive quadrature.

    ``rel_tol``/``abs_tol`` are the targets handed to the adaptive engine;
    its self-reported error bound is conservative (roundoff detection), so
    failure is only declared beyond ``fail_rel``/``fail_abs``.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 200
    fail_rel: float = 1e-6
    fail_abs: float = 1e-9

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be > 0")
        if self.fail_rel < self.rel_tol or self.fail_abs < self.abs_tol:
            raise ValueError("failure thresholds must not be tighter than the targets")

    def check(self, val: float, err: float, what: str) -> float:
        if err > self.fail_abs + self.fail_rel * abs(val):
            raise QuadratureError(f"{what} did not converge", val, err)
        return val


DEFAULT_QUADRATURE = QuadratureSpec()


class QuadratureError(RuntimeError):
    """Quadrature did not reach the requested tolerance.

    Carries the best estimate and the error bound actually achieved.
    """

    def __init__(self, message: str, best: float, achieved: float):
        super().__init__(f"{message} (best estimate {best:.17g}, achieved error {achieved:.3g})")
        self.best = best
        self.achieved = achieved


def quad_checked(fn, a, b, spec: "QuadratureSpec", what: str, points=None) -> float:
    """integrate.quad with the spec's tolerances and failure check; the
    engine's roundoff chatter is silenced (the check is authoritative)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(
            fn, a, b, points=points,
            epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.max_subdivisions,
        )
    return spec.check(val, err, what)


def lower_incomplete_gamma(a: float, b: float) -> float:
    """Integral of t^(a-1) e^(-t) over [0, b]; monotone in b, -> Gamma(a)."""
    if a <= 0:
        raise ValueError("a must be > 0")
    if b < 0:
        raise ValueError("b must be >= 0")
    if math.isinf(b):
        return math.gamma(a)
    return float(special.gammainc(a, b)) * math.gamma(a)


def upper_incomplete_gamma(a: float, b: float) -> float:
    """Integral of t^(a-1) e^(-t) over [b, inf); a <= 0 allowed for b > 0."""
    if b < 0:
        raise ValueError("b must be >= 0")
    if a > 0:
        if math.isinf(b):
            return 0.0
        return float(special.gammaincc(a, b)) * math.gamma(a)
    if b == 0:
        raise ValueError("upper incomplete gamma diverges for a <= 0 at b = 0")
    # lift a into the positive range with Gamma(a,b) = (Gamma(a+1,b) - b^a e^-b)/a
    k = int(math.floor(-a)) + 1
    ash = a + k
    val = float(special.gammaincc(ash, b)) * math.gamma(ash)
    for j in range(k):
        aj = ash - 1 - j
        val = (val - b ** aj * math.exp(-b)) / aj
    return val


def exp_scaled_upper_gamma(a: float, k: float) -> float:
    """e^k * Gamma_upper(a, k) for k >= 0, stable for large k.

    Direct product below k = 30; asymptotic series k^(a-1) * sum_j
    (a-1)(a-2)...(a-j) / k^j above.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        if a <= 0:
            raise ValueError("divergent at k = 0 for a <= 0")
        return math.gamma(a)
    if math.isinf(k):
        return 0.0
    if k < 30.0:
        return math.exp(k) * upper_incomplete_gamma(a, k)
    total = 1.0
    term = 1.0
    for j in range(1, 60):
        new = term * (a - j) / k
        if abs(new) >= abs(term):
            break
        term = new
        total += term
        if abs(term) < 1e-16 * abs(total):
            break
    return k ** (a - 1.0) * total


def n1(alpha: float) -> float:
    """pi * csc(2*pi/alpha); diverges as alpha -> 2, hence the guard."""
    if alpha <= 2.0:
        raise ValueError("n1 requires alpha > 2 (radial integral diverges)")
    return math.pi / math.sin(TWO_PI / alpha)


def n2(alpha: float, nu: float, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Radial tail kernel: integral over [nu, inf) of e^-u (u-nu)^(2/alpha) / u.

    Evaluated after the shift t = u - nu as
    ``e^-nu * int_0^inf e^-t t^s / (t + nu) dt`` with s = 2/alpha; the
    lower end carries an integrable t^(s-1) weight handled by a weighted
    panel.  nu = 0 is the exact limit Gamma(s).
    """
    if alpha <= 2.0:
        raise ValueError("n2 requires alpha > 2")
    if nu < 0:
        raise ValueError("nu must be >= 0")
    s = 2.0 / alpha
    if nu == 0.0:
        return math.gamma(s)
    if nu > 700.0:
        return 0.0  # e^-nu underflows; kernel is numerically zero
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        head, e1 = integrate.quad(
            lambda t: math.exp(-t) * t / (t + nu),
            0.0,
            1.0,
            weight="alg",
            wvar=(s - 1.0, 0.0),
            epsabs=spec.abs_tol,
            epsrel=spec.rel_tol,
            limit=spec.max_subdivisions,
        )
        tail, e2 = integrate.quad(
            lambda t: math.exp(-t) * t ** s / (t + nu),
            1.0,
            np.inf,
            epsabs=spec.abs_tol,
            epsrel=spec.rel_tol,
            limit=spec.max_subdivisions,
        )
    total = head + tail
    spec.check(math.exp(-nu) * total, math.exp(-nu) * (e1 + e2), "n2 kernel quadrature")
    return math.exp(-nu) * total


def psi(u: float, alpha: float, R: float) -> float:
    """u^(-2/alpha) * lower_incomplete_gamma(2/alpha, u R^alpha).

    The radial factor of the activity-factor closed forms; u = +inf maps
    to 0 (zero-gain direction contributes nothing).
    """
    if u < 0:
        raise ValueError("u must be >= 0")
    s = 2.0 / alpha
    if u == 0.0:
        # small-u limit: Gamma_lower ~ (u R^alpha)^s / s
        return R ** 2 / s
    if math.isinf(u):
        return 0.0
    return u ** (-s) * lower_incomplete_gamma(s, u * R ** alpha)


def integrate_radial(
    f,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    scale: float = 1.0,
) -> float:
    """Semi-infinite integral of f(x) * x over [0, inf).

    Uses the algebraic map x = scale * t / (1 - t) onto [0, 1); ``scale``
    should match the integrand's characteristic radius so the adaptive
    panels resolve the transition region.
    """
    if scale <= 0 or not math.isfinite(scale):
        raise ValueError("scale must be positive and finite")
    c = scale

    def mapped(t):
        if t >= 1.0:
            return 0.0
        x = c * t / (1.0 - t)
        return f(x) * x * c / (1.0 - t) ** 2

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(
            mapped,
            0.0,
            1.0,
            epsabs=spec.abs_tol,
            epsrel=spec.rel_tol,
            limit=spec.max_subdivisions,
        )
    return spec.check(val, err, "radial quadrature")


def angular_nodes(n: int = 512) -> np.ndarray:
    """Midpoint nodes over [-pi, pi); the periodic rectangle rule is the
    trapezoid rule for periodic integrands."""
    return (np.arange(n) + 0.5) / n * TWO_PI - math.pi


def angular_mean(fn, n: int = 512) -> float:
    """Average of fn over one period, fn vectorized over angle arrays."""
    return float(np.mean(fn(angular_nodes(n))))
