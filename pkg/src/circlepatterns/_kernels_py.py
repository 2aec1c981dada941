"""Pure-numpy edge kernels.

Batch evaluation of the per-edge generalized hyperbolic triangle laws in
the coordinate u = -2*exp(-r).  A compiled twin of this module lives in
``_kernels.pyx``; both expose the same functions and must stay numerically
equivalent (see tests/test_kernels.py).

Conventions shared by both backends:
  * all array arguments are 1-d float64 of equal length, u1, u2 < 0;
  * angles beta1, beta2 sit opposite the radii r2, r1 of the two faces;
  * the partials matrix of (beta1, beta2) w.r.t. (u1, u2) is symmetric with
    equal diagonal entries, so only (ddiag, doff) are returned;
  * no domain checking happens here (callers validate).
"""

import numpy as np

BACKEND_NAME = "python"


def s_of_theta(delta, theta):
    """Angle-to-slope factor s(theta): cot(theta/2), 1/theta or coth(theta/2)."""
    theta = np.asarray(theta, dtype=np.float64)
    if delta == 1:
        return 1.0 / np.tan(0.5 * theta)
    if delta == -1:
        return 1.0 / np.tanh(0.5 * theta)
    return 1.0 / theta


def angles_110(theta, u1, u2):
    """Generalized angles of the (1, 1, 0) triangle.

    Evaluates cot(beta1) = (u1^2 - u2^2 - 4 theta^2) / (4 theta u1) through
    atan2 so the branch lands in (0, pi) without overflow in the quotient.
    atan2 maps an overflowed (infinite) second argument to the correct
    limiting angle, so no clamping is needed for extreme u.
    """
    with np.errstate(over="ignore"):
        four_t2 = 4.0 * theta * theta
        diff = u1 * u1 - u2 * u2
        beta1 = np.arctan2(-4.0 * theta * u1, four_t2 - diff)
        beta2 = np.arctan2(-4.0 * theta * u2, four_t2 + diff)
    return beta1, beta2


def full_110(theta, u1, u2):
    """Angles, edge length and angle partials for (1, 1, 0) edges.

    Returns (beta1, beta2, length, ddiag, doff) where the partials matrix is
    [[ddiag, doff], [doff, ddiag]] with ddiag = -cosh(length) * doff.

    Uses exp(r1 + r2) = 4/(u1 u2) and
    cosh(l) - 1 = (4 theta^2 + (u1 - u2)^2) / (2 u1 u2), which keeps every
    quantity finite and cancellation-free over the whole admissible range.
    """
    beta1, beta2 = angles_110(theta, u1, u2)
    # |u| beyond ~1e150 overflows dm to inf and the partials degrade to
    # inf/nan; downstream consumers treat non-finite partials as a rejected
    # step or a factorization failure, so only the warnings are suppressed
    with np.errstate(over="ignore", invalid="ignore"):
        dm = 4.0 * theta * theta + (u1 - u2) ** 2
        cm1 = dm / (2.0 * u1 * u2)  # cosh(l) - 1 > 0
        sh2 = cm1 * (cm1 + 2.0)  # sinh(l)^2
        length = np.log1p(cm1 + np.sqrt(sh2))
        doff = 4.0 * theta / (dm * (cm1 + 2.0))
        ddiag = -(1.0 + cm1) * doff
    return beta1, beta2, length, ddiag, doff


def angles_00d(delta, theta, u1, u2):
    """Generalized angles of the (0, 0, delta) triangle: beta_i = -s(theta) u_i / 2."""
    s = s_of_theta(delta, theta)
    return -0.5 * s * u1, -0.5 * s * u2


def full_00d(delta, theta, u1, u2):
    """Angles, edge length and angle partials for (0, 0, delta) edges.

    The length satisfies exp(l) = exp(r1 + r2) * w(theta)^2 with
    w = sin(theta/2), theta, sinh(theta/2) for delta = 1, 0, -1; it may be
    negative.  The partials matrix is the constant diag(-s/2, -s/2).
    """
    s = s_of_theta(delta, theta)
    beta1 = -0.5 * s * u1
    beta2 = -0.5 * s * u2
    if delta == 1:
        w = np.sin(0.5 * theta)
    elif delta == -1:
        w = np.sinh(0.5 * theta)
    else:
        w = theta
    # r1 + r2 = log(4/(u1 u2))
    length = np.log(4.0 * w * w / (u1 * u2))
    ddiag = -0.5 * s
    doff = np.zeros_like(ddiag)
    return beta1, beta2, length, ddiag, doff
