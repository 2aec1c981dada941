"""Per-edge generalized hyperbolic triangle laws.

Supported pattern types (epsilon, epsilon, delta), abbreviated by the pair
(epsilon, delta):

  * (1, 0): both circle centers are interior points, the shared vertex is
    ideal; the intersection angle theta ranges over (0, inf).
  * (0, 1) / (0, 0) / (0, -1): both centers are ideal; theta is an honest
    angle in (0, pi) for delta = 1, else a positive horocyclic arc length
    or distance.

All functions work in the coordinate u_i = -2*exp(-r_i) < 0, in which the
admissible set is the open negative orthant and the curvature map has a
symmetric negative-definite Jacobian.  Generalized lengths may be negative;
they are never clamped.

The scalar functions here wrap the batch kernels (see ``kernels``), so the
selected backend is exercised no matter which entry point is used.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels

__all__ = [
    "DomainError",
    "PatternType",
    "theta_interval",
    "s_factor",
    "angles_110",
    "angles_00d",
    "edge_length_110",
    "edge_length_00d",
    "partials_110",
    "partials_00d",
]

_VALID_TYPES = {(1, 0), (0, 1), (0, 0), (0, -1)}


class DomainError(ValueError):
    """An argument lies outside the admissible domain of a triangle law."""


@dataclass(frozen=True)
class PatternType:
    """Pattern type (epsilon, epsilon, delta), one of (1,0), (0,1), (0,0), (0,-1)."""

    epsilon: int
    delta: int

    def __post_init__(self):
        if (self.epsilon, self.delta) not in _VALID_TYPES:
            raise ValueError(
                f"unsupported pattern type (epsilon, delta) = "
                f"({self.epsilon}, {self.delta}); supported: {sorted(_VALID_TYPES)}"
            )

    def __str__(self):
        return f"({self.epsilon},{self.epsilon},{self.delta})"


def theta_interval(delta: int):
    """Open interval of admissible intersection angles for the given delta."""
    return (0.0, math.pi) if delta == 1 else (0.0, math.inf)


def check_theta(delta: int, theta) -> None:
    """Raise DomainError unless every theta lies in the delta-interval."""
    lo, hi = theta_interval(delta)
    t = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    ok = np.isfinite(t) & (t > lo) & (t < hi)
    if not ok.all():
        where = f" (edges {np.nonzero(~ok)[0].tolist()})" if t.size > 1 else ""
        interval = "(0, pi)" if delta == 1 else "(0, inf)"
        raise DomainError(f"theta must lie in {interval}{where}")


def check_u(u) -> None:
    """Raise DomainError unless every coordinate is finite and negative."""
    ua = np.atleast_1d(np.asarray(u, dtype=np.float64))
    ok = np.isfinite(ua) & (ua < 0.0)
    if not ok.all():
        where = f" (faces {np.nonzero(~ok)[0].tolist()})" if ua.size > 1 else ""
        raise DomainError(f"u coordinates must be finite and < 0{where}")


def _arr(*vals):
    return [np.ascontiguousarray([v], dtype=np.float64) for v in vals]


def s_factor(delta: int, theta: float) -> float:
    """s(theta): cot(theta/2) for delta=1, 1/theta for delta=0, coth(theta/2) for delta=-1."""
    check_theta(delta, theta)
    (t,) = _arr(theta)
    return float(kernels.s_of_theta(delta, t)[0])


def angles_110(theta: float, u1: float, u2: float):
    """Angles (beta1, beta2) of the (1,1,0) triangle; both in (0, pi), sum < pi."""
    check_theta(0, theta)
    check_u((u1, u2))
    t, a, b = _arr(theta, u1, u2)
    b1, b2 = kernels.angles_110(t, a, b)
    return float(b1[0]), float(b2[0])


def angles_00d(delta: int, theta: float, u1: float, u2: float):
    """Angles (beta1, beta2) = -s(theta)/2 * (u1, u2) of the (0,0,delta) triangle."""
    check_theta(delta, theta)
    check_u((u1, u2))
    t, a, b = _arr(theta, u1, u2)
    b1, b2 = kernels.angles_00d(delta, t, a, b)
    return float(b1[0]), float(b2[0])


def edge_length_110(theta: float, u1: float, u2: float) -> float:
    """Length of the edge opposite theta: cosh(l) = theta^2/2 e^{r1+r2} + cosh(r1-r2)."""
    check_theta(0, theta)
    check_u((u1, u2))
    t, a, b = _arr(theta, u1, u2)
    return float(kernels.full_110(t, a, b)[2][0])


def edge_length_00d(delta: int, theta: float, u1: float, u2: float) -> float:
    """Generalized length opposite theta; may be negative."""
    check_theta(delta, theta)
    check_u((u1, u2))
    t, a, b = _arr(theta, u1, u2)
    return float(kernels.full_00d(delta, t, a, b)[2][0])


def partials_110(theta: float, u1: float, u2: float) -> np.ndarray:
    """Jacobian of (beta1, beta2) w.r.t. (u1, u2) for the (1,1,0) triangle.

    Symmetric negative definite; both diagonal entries equal
    -cosh(l) * theta * e^{r1+r2} / (2 sinh(l)^2), the off-diagonal entry
    drops the -cosh(l) factor.
    """
    check_theta(0, theta)
    check_u((u1, u2))
    t, a, b = _arr(theta, u1, u2)
    _, _, _, dd, do = kernels.full_110(t, a, b)
    d, o = float(dd[0]), float(do[0])
    return np.array([[d, o], [o, d]])


def partials_00d(delta: int, theta: float, u1: float, u2: float) -> np.ndarray:
    """Jacobian of (beta1, beta2) w.r.t. (u1, u2): the constant diag(-s/2, -s/2)."""
    check_theta(delta, theta)
    check_u((u1, u2))
    t, a, b = _arr(theta, u1, u2)
    _, _, _, dd, do = kernels.full_00d(delta, t, a, b)
    d, o = float(dd[0]), float(do[0])
    return np.array([[d, o], [o, d]])
