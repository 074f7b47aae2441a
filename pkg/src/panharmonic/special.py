"""Modified Bessel functions I0, I1 and the closed-form screened-Poisson fields.

The two closed forms implemented here are the standard benchmark solutions of

    lap(v) - mu^2 v = 0,    v = 1 on the boundary:

* on a disc of radius R about the origin,  v(x) = I0(mu |x|) / I0(mu R),
  with |grad v|(x) = mu I1(mu |x|) / I0(mu R);
* on the upper half-plane,  v(x) = exp(-mu x2), for which mu v - |grad v|
  vanishes identically.

I0 and I1 follow the classical two-branch evaluation (DLMF 10.25.2 power
series, DLMF 10.40.1 large-argument expansion).  Both branches are fixed-term
and fully deterministic; log-space variants cover arguments where exp(z)
would overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Branch switch of the two evaluation regimes.  At the switch point the
# truncated asymptotic tail is ~1e-14 relative, well under the 1e-11
# cross-branch agreement target.
SERIES_ASYMPTOTIC_SWITCH = 15.0

# exp(z) overflows IEEE doubles near z = 709; the direct-value functions are
# capped below that so I0 itself stays representable (I0(700) ~ 1.5e302).
MAX_ARGUMENT = 700.0

_SERIES_TERMS = 60
_ASYMPTOTIC_TERMS = 31  # minimum-term truncation for z >= 15


def _asymptotic_coefficients(nu: int) -> np.ndarray:
    # Coefficients c_k of I_nu(z) ~ e^z/sqrt(2 pi z) * sum c_k z^{-k},
    # c_k = c_{k-1} * ((2k-1)^2 - 4 nu^2) / (8k).
    mu4 = 4.0 * nu * nu
    c = np.empty(_ASYMPTOTIC_TERMS)
    c[0] = 1.0
    for k in range(1, _ASYMPTOTIC_TERMS):
        c[k] = c[k - 1] * ((2 * k - 1) ** 2 - mu4) / (8.0 * k)
    return c

_C0 = _asymptotic_coefficients(0)
_C1 = _asymptotic_coefficients(1)


def _series_i0(z: np.ndarray) -> np.ndarray:
    # sum_k (z/2)^{2k} / (k!)^2; all terms positive, no cancellation.
    t = 0.25 * z * z
    term = np.ones_like(z)
    acc = np.ones_like(z)
    for k in range(1, _SERIES_TERMS):
        term = term * t / (k * k)
        acc = acc + term
    return acc


def _series_i1(z: np.ndarray) -> np.ndarray:
    # sum_k (z/2)^{2k+1} / (k! (k+1)!)
    t = 0.25 * z * z
    term = 0.5 * z
    acc = term.copy()
    for k in range(1, _SERIES_TERMS):
        term = term * t / (k * (k + 1))
        acc = acc + term
    return acc


def _asymptotic_factor(z: np.ndarray, coeff: np.ndarray) -> np.ndarray:
    # Horner evaluation of sum c_k z^{-k}; for z >= 15 the factor is within
    # a few percent of 1 and strictly positive.
    u = 1.0 / z
    acc = np.full_like(z, coeff[-1])
    for k in range(_ASYMPTOTIC_TERMS - 2, -1, -1):
        acc = acc * u + coeff[k]
    return acc


def _eval_two_branch(z, series_fn, coeff, log_scale: bool):
    arr = np.asarray(z, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any(arr < 0.0) or not np.all(np.isfinite(arr)):
        raise ValueError("bessel argument must be finite and nonnegative")
    out = np.empty_like(arr)
    small = arr <= SERIES_ASYMPTOTIC_SWITCH
    if np.any(small):
        s = series_fn(arr[small])
        if log_scale:
            with np.errstate(divide="ignore"):  # log(0) = -inf for I1 at z=0
                s = np.log(s)
        out[small] = s
    if np.any(~small):
        zl = arr[~small]
        factor = _asymptotic_factor(zl, coeff)
        if log_scale:
            out[~small] = zl - 0.5 * np.log(2.0 * np.pi * zl) + np.log(factor)
        else:
            out[~small] = np.exp(zl) / np.sqrt(2.0 * np.pi * zl) * factor
    return float(out[0]) if scalar else out


def _check_overflow_guard(z) -> None:
    if np.any(np.asarray(z, dtype=float) > MAX_ARGUMENT):
        raise ValueError(
            f"argument exceeds the overflow guard {MAX_ARGUMENT:g}; "
            "use the log-space variant"
        )


def bessel_i0(z):
    """Modified Bessel function I0 for 0 <= z <= 700 (scalar or array)."""
    _check_overflow_guard(z)
    return _eval_two_branch(z, _series_i0, _C0, log_scale=False)


def bessel_i1(z):
    """Modified Bessel function I1 for 0 <= z <= 700 (scalar or array)."""
    _check_overflow_guard(z)
    return _eval_two_branch(z, _series_i1, _C1, log_scale=False)


def log_bessel_i0(z):
    """log I0(z), overflow-free for large z."""
    return _eval_two_branch(z, _series_i0, _C0, log_scale=True)


def log_bessel_i1(z):
    """log I1(z); returns -inf at z = 0."""
    return _eval_two_branch(z, _series_i1, _C1, log_scale=True)


@dataclass(frozen=True)
class DiscSolution:
    """Closed-form Dirichlet field on a centered disc: v = a I0(mu |x|).

    The normalization a = 1/I0(mu * radius) pins v = 1 on the boundary
    circle.  Evaluation runs in log space so the exponentially small deep
    interior stays representable up to mu * radius = 700.
    """

    radius: float
    mu: float

    def __post_init__(self):
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError("radius must be positive and finite")
        if not (self.mu > 0.0 and math.isfinite(self.mu)):
            raise ValueError("mu must be positive and finite")
        if self.mu * self.radius > MAX_ARGUMENT:
            raise ValueError("mu * radius exceeds the overflow guard")

    @property
    def a(self) -> float:
        """Boundary normalization 1/I0(mu * radius)."""
        return 1.0 / bessel_i0(self.mu * self.radius)

    @property
    def _log_edge(self) -> float:
        return log_bessel_i0(self.mu * self.radius)

    def value_at_radius(self, s):
        """v at distance s from the center (scalar or array)."""
        z = self.mu * np.asarray(s, dtype=float)
        out = np.exp(log_bessel_i0(z) - self._log_edge)
        return out if np.ndim(s) else float(out)

    def gradient_magnitude_at_radius(self, s):
        """|grad v| = mu a I1(mu s); zero at the center."""
        z = self.mu * np.asarray(s, dtype=float)
        out = self.mu * np.exp(log_bessel_i1(z) - self._log_edge)
        return out if np.ndim(s) else float(out)

    def margin_at_radius(self, s):
        """Condition margin mu v - |grad v| = mu a (I0 - I1)(mu s)."""
        return self.mu * self.value_at_radius(s) - self.gradient_magnitude_at_radius(s)


def disc_solution_eval(solution: DiscSolution, p) -> tuple[float, float]:
    """Return (value, |gradient|) of the disc field at a point p.

    p is any pair (x1, x2) measured from the disc center; it must lie in the
    closed disc.
    """
    x1, x2 = float(p[0]), float(p[1])
    s = math.hypot(x1, x2)
    if s > solution.radius * (1.0 + 1e-12):
        raise ValueError("point lies outside the disc")
    s = min(s, solution.radius)
    return solution.value_at_radius(s), solution.gradient_magnitude_at_radius(s)


def halfplane_solution_eval(mu: float, p) -> tuple[float, float]:
    """Return (value, |gradient|) of v = exp(-mu x2) on the upper half-plane.

    The margin mu v - |grad v| vanishes identically: the gradient bound is
    tight, so this field exercises the equality case exactly.
    """
    if mu <= 0.0 or not math.isfinite(mu):
        raise ValueError("mu must be positive and finite")
    x2 = float(p[1])
    if x2 < 0.0:
        raise ValueError("point lies outside the upper half-plane")
    value = math.exp(-mu * x2)
    return value, mu * value
