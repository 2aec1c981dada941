"""Triangle laws: frozen oracle values, identities, limits, derivatives."""

import math

import numpy as np
import pytest

from circlepatterns import (
    DomainError,
    PatternType,
    angles_00d,
    angles_110,
    edge_length_00d,
    edge_length_110,
    partials_00d,
    partials_110,
    s_factor,
)
import support


def test_pattern_type_validation():
    for eps, delta in [(1, 0), (0, 1), (0, 0), (0, -1)]:
        assert PatternType(eps, delta).delta == delta
    for eps, delta in [(1, 1), (1, -1), (-1, 0), (0, 2)]:
        with pytest.raises(ValueError):
            PatternType(eps, delta)


# ---------------------------------------------------------------------------
# s(theta)
# ---------------------------------------------------------------------------

def test_s_factor_values(backend):
    assert s_factor(1, math.pi / 2) == pytest.approx(1.0, abs=1e-15)
    assert s_factor(0, 2.0) == pytest.approx(0.5, abs=1e-15)
    assert s_factor(-1, 2.0) == pytest.approx(support.COTH_1, abs=1e-14)


def test_s_factor_positive(backend):
    rng = np.random.default_rng(0)
    for delta in (1, 0, -1):
        for theta in support.random_theta(rng, delta, 100):
            assert s_factor(delta, float(theta)) > 0.0


def test_s_factor_domain():
    with pytest.raises(DomainError):
        s_factor(1, 3.5)  # outside (0, pi)
    with pytest.raises(DomainError):
        s_factor(0, 0.0)
    with pytest.raises(DomainError):
        s_factor(-1, -1.0)


# ---------------------------------------------------------------------------
# angles
# ---------------------------------------------------------------------------

def test_angles_110_oracle_values(backend):
    b1, b2 = angles_110(1.0, -1.0, -1.0)
    assert b1 == pytest.approx(math.pi / 4, abs=1e-15)
    assert b2 == pytest.approx(math.pi / 4, abs=1e-15)

    b1, b2 = angles_110(1.0, -1.0, -2.0)
    assert b1 == pytest.approx(support.BETA110_1_M1_M2[0], abs=1e-14)
    assert b2 == pytest.approx(support.BETA110_1_M1_M2[1], abs=1e-14)

    # verified against root-finding on the cosine law: beta = pi/4 exactly
    b1, b2 = angles_110(2.0, -2.0, -2.0)
    assert b1 == pytest.approx(math.pi / 4, abs=1e-15)
    assert b2 == pytest.approx(math.pi / 4, abs=1e-15)


def test_angles_110_match_cosine_law_path(backend):
    rng = np.random.default_rng(11)
    for _ in range(200):
        theta = float(support.random_theta(rng, 0, 1)[0])
        u1, u2 = support.random_u(rng, 2)
        b1, b2 = angles_110(theta, u1, u2)
        o1, o2 = support.beta110_oracle(theta, u1, u2)
        assert b1 == pytest.approx(o1, rel=1e-10, abs=1e-12)
        assert b2 == pytest.approx(o2, rel=1e-10, abs=1e-12)


def test_angles_110_domain():
    with pytest.raises(DomainError):
        angles_110(1.0, 0.0, -1.0)
    with pytest.raises(DomainError):
        angles_110(1.0, -1.0, 2.0)
    with pytest.raises(DomainError):
        angles_110(-1.0, -1.0, -1.0)


def test_angles_00d_values(backend):
    assert angles_00d(0, 1.0, -2.0, -2.0) == pytest.approx((1.0, 1.0), abs=1e-15)
    assert angles_00d(1, math.pi / 2, -2.0, -4.0) == pytest.approx((1.0, 2.0), abs=1e-14)
    b1, b2 = angles_00d(-1, 2.0, -2.0, -1.0)
    assert b1 == pytest.approx(support.COTH_1, abs=1e-14)
    assert b2 == pytest.approx(0.5 * support.COTH_1, abs=1e-14)


def test_exchange_symmetry(backend):
    rng = np.random.default_rng(5)
    for _ in range(50):
        u1, u2 = support.random_u(rng, 2)
        theta = float(support.random_theta(rng, 0, 1)[0])
        assert angles_110(theta, u1, u2) == angles_110(theta, u2, u1)[::-1]
        for delta in (1, 0, -1):
            th = float(support.random_theta(rng, delta, 1)[0])
            assert angles_00d(delta, th, u1, u2) == angles_00d(delta, th, u2, u1)[::-1]


def test_00d_angles_linear_and_decoupled(backend):
    theta, u1, u2 = 1.7, -0.9, -2.3
    for delta in (1, 0, -1):
        b1, b2 = angles_00d(delta, theta, u1, u2)
        s = s_factor(delta, theta)
        assert b1 == pytest.approx(-0.5 * s * u1, rel=1e-15)
        assert b2 == pytest.approx(-0.5 * s * u2, rel=1e-15)
        # beta1 does not depend on u2 at all
        assert angles_00d(delta, theta, u1, -5.0)[0] == b1


# ---------------------------------------------------------------------------
# limit behavior
# ---------------------------------------------------------------------------

def test_limits_110(backend):
    beta1, _ = angles_110(1.0, -1e-6, -1.0)
    assert beta1 < 1e-5

    beta1, beta2 = angles_110(1.0, -1e6, -1.0)
    assert beta1 > math.pi - 1e-4
    assert beta2 < 1e-4

    beta1, beta2 = angles_110(1.0, -1e6, -1e6)
    assert math.pi - (beta1 + beta2) < 1e-4
    assert beta1 + beta2 < math.pi


def test_limits_00d(backend):
    for delta in (1, 0, -1):
        theta = 1.0 if delta == 1 else 2.0
        assert angles_00d(delta, theta, -1e-9, -1.0)[0] < 1e-8
        assert angles_00d(delta, theta, -1e9, -1.0)[0] > 1e8


def test_angle_sum_below_pi_110(backend):
    rng = np.random.default_rng(17)
    for _ in range(500):
        theta = float(support.random_theta(rng, 0, 1)[0])
        u1, u2 = support.random_u(rng, 2, lo=-100.0, hi=-0.01)
        b1, b2 = angles_110(theta, u1, u2)
        assert 0.0 < b1 < math.pi and 0.0 < b2 < math.pi
        assert b1 + b2 < math.pi


# ---------------------------------------------------------------------------
# lengths
# ---------------------------------------------------------------------------

def test_edge_length_110_values(backend):
    assert edge_length_110(1.0, -1.0, -1.0) == pytest.approx(support.ACOSH_3, abs=1e-14)
    assert edge_length_110(1.0, -2.0, -2.0) == pytest.approx(support.ACOSH_1_5, abs=1e-14)
    # degenerate limit: theta -> 0 with equal radii
    assert edge_length_110(1e-12, -1.0, -1.0) == pytest.approx(0.0, abs=1e-11)


def test_edge_length_00d_values(backend):
    assert edge_length_00d(1, math.pi - 1e-14, -2.0, -2.0) == pytest.approx(0.0, abs=1e-12)
    assert edge_length_00d(-1, 2.0, -2.0, -2.0) == pytest.approx(
        support.TWO_LOG_SINH_1, abs=1e-13
    )
    assert edge_length_00d(0, 1.0, -2.0, -2.0) == pytest.approx(0.0, abs=1e-15)


def test_edge_length_00d_sine_law_identity(backend):
    # exp(l) * beta1 must equal theta * exp(r2) for delta = 0
    rng = np.random.default_rng(23)
    for _ in range(100):
        theta = float(support.random_theta(rng, 0, 1)[0])
        u1, u2 = support.random_u(rng, 2)
        ell = edge_length_00d(0, theta, u1, u2)
        beta1, _ = angles_00d(0, theta, u1, u2)
        r2 = -math.log(-0.5 * u2)
        assert math.exp(ell) * beta1 == pytest.approx(theta * math.exp(r2), rel=1e-12)


def test_edge_length_110_sine_law_identity(backend):
    # sinh(l) * sin(beta1) = theta * exp(r2)
    rng = np.random.default_rng(29)
    for _ in range(100):
        theta = float(support.random_theta(rng, 0, 1)[0])
        u1, u2 = support.random_u(rng, 2)
        ell = edge_length_110(theta, u1, u2)
        beta1, _ = angles_110(theta, u1, u2)
        r2 = -math.log(-0.5 * u2)
        assert math.sinh(ell) * math.sin(beta1) == pytest.approx(
            theta * math.exp(r2), rel=1e-10
        )


# ---------------------------------------------------------------------------
# partial derivatives
# ---------------------------------------------------------------------------

def test_partials_110_closed_case(backend):
    m = partials_110(1.0, -1.0, -1.0)
    assert m == pytest.approx(np.array([[-0.75, 0.25], [0.25, -0.75]]), abs=1e-15)


def test_partials_match_finite_differences(backend):
    rng = np.random.default_rng(31)
    for _ in range(50):
        theta = float(support.random_theta(rng, 0, 1)[0])
        u1, u2 = support.random_u(rng, 2)
        m = partials_110(theta, u1, u2)
        h1, h2 = 1e-5 * abs(u1), 1e-5 * abs(u2)
        fd11 = (angles_110(theta, u1 + h1, u2)[0] - angles_110(theta, u1 - h1, u2)[0]) / (2 * h1)
        fd12 = (angles_110(theta, u1, u2 + h2)[0] - angles_110(theta, u1, u2 - h2)[0]) / (2 * h2)
        fd21 = (angles_110(theta, u1 + h1, u2)[1] - angles_110(theta, u1 - h1, u2)[1]) / (2 * h1)
        fd22 = (angles_110(theta, u1, u2 + h2)[1] - angles_110(theta, u1, u2 - h2)[1]) / (2 * h2)
        fd = np.array([[fd11, fd12], [fd21, fd22]])
        assert np.max(np.abs(fd - m)) < 1e-6 * max(1.0, np.max(np.abs(m)))


def test_partials_00d_exact(backend):
    assert partials_00d(0, 2.0, -1.0, -1.0) == pytest.approx(np.diag([-0.25, -0.25]))
    assert partials_00d(1, math.pi / 2, -3.0, -0.5) == pytest.approx(np.diag([-0.5, -0.5]))
    # linear map: finite differences are exact up to round-off
    m = partials_00d(-1, 2.0, -1.5, -2.5)
    h = 1e-5
    fd = (angles_00d(-1, 2.0, -1.5 + h, -2.5)[0] - angles_00d(-1, 2.0, -1.5 - h, -2.5)[0]) / (2 * h)
    assert fd == pytest.approx(m[0, 0], rel=1e-9)
    assert m[0, 1] == 0.0


def test_partials_symmetric_negative_definite(backend):
    rng = np.random.default_rng(37)
    cases = []
    for _ in range(250):
        u1, u2 = support.random_u(rng, 2, lo=-20.0, hi=-0.05)
        cases.append((partials_110(float(support.random_theta(rng, 0, 1)[0]), u1, u2)))
        for delta in (1, 0, -1):
            theta = float(support.random_theta(rng, delta, 1)[0])
            cases.append(partials_00d(delta, theta, u1, u2))
    assert len(cases) == 1000
    for m in cases:
        assert m[0, 1] == m[1, 0]  # symmetric by construction
        assert m[0, 0] < 0.0  # first leading minor
        assert m[0, 0] * m[1, 1] - m[0, 1] ** 2 > 0.0  # second leading minor


def test_partials_diagonal_entries_equal(backend):
    # both diagonal entries are -cosh(l) * off-diagonal, even off-symmetry
    m = partials_110(1.3, -0.7, -2.9)
    assert m[0, 0] == m[1, 1]


def test_derivative_length_consistency(backend):
    rng = np.random.default_rng(41)
    for _ in range(100):
        theta = float(support.random_theta(rng, 0, 1)[0])
        u1, u2 = support.random_u(rng, 2)
        m = partials_110(theta, u1, u2)
        ell = edge_length_110(theta, u1, u2)
        assert m[0, 0] / m[0, 1] == pytest.approx(-math.cosh(ell), rel=1e-10)


def test_scaling_invariance_110(backend):
    # (theta, u) -> (c theta, c u) preserves angles and length, scales partials by 1/c
    rng = np.random.default_rng(43)
    for _ in range(50):
        theta = float(support.random_theta(rng, 0, 1)[0])
        u1, u2 = support.random_u(rng, 2)
        c = float(rng.uniform(0.5, 3.0))
        assert angles_110(c * theta, c * u1, c * u2) == pytest.approx(
            angles_110(theta, u1, u2), rel=1e-12
        )
        assert edge_length_110(c * theta, c * u1, c * u2) == pytest.approx(
            edge_length_110(theta, u1, u2), rel=1e-11, abs=1e-13
        )
        assert partials_110(c * theta, c * u1, c * u2) == pytest.approx(
            partials_110(theta, u1, u2) / c, rel=1e-11
        )
