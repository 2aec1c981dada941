"""Shared helpers and frozen oracle values for the test suite.

The frozen constants were computed with mpmath at 40 digits from the
cosine/sine-law identities (independent of the package kernels); the
angle oracle below re-derives angles through the r-coordinate cosine law,
which shares no code with the u-coordinate kernels.
"""

import numpy as np

from circlepatterns import PatternComplex, PatternType

ALL_TYPES = (PatternType(1, 0), PatternType(0, 1), PatternType(0, 0), PatternType(0, -1))

# independently computed reference values (mpmath, 40 digits)
COTH_1 = 1.3130352854993313
ACOSH_3 = 1.7627471740390861
ACOSH_1_5 = 0.9624236501192069
TWO_LOG_SINH_1 = 0.32287872314239127
BETA110_1_M1_M2 = (0.5191461142465230, 1.4464413322481352)  # arctan(4/7), arctan(8)
LEN110_1_M1_M2 = 1.4505745138225802


def beta110_oracle(theta, u1, u2):
    """Angles of the (1,1,0) triangle via the r-coordinate cosine law.

    Independent evaluation path: exponentiates r explicitly and inverts the
    cosine law with arccos, rather than the atan2 cotangent form.
    """
    r1 = -np.log(-0.5 * u1)
    r2 = -np.log(-0.5 * u2)
    coshl = 0.5 * theta**2 * np.exp(r1 + r2) + np.cosh(r1 - r2)
    sinhl = np.sqrt(coshl**2 - 1.0)
    beta1 = np.arccos((-np.exp(r2) + np.exp(r1) * coshl) / (np.exp(r1) * sinhl))
    beta2 = np.arccos((-np.exp(r1) + np.exp(r2) * coshl) / (np.exp(r2) * sinhl))
    return beta1, beta2


def random_theta(rng, delta, n):
    if delta == 1:
        return rng.uniform(0.1, np.pi - 0.1, n)
    return rng.uniform(0.1, 5.0, n)


def random_u(rng, n, lo=-4.0, hi=-0.2):
    return rng.uniform(lo, hi, n)


def random_complex(rng, max_faces=10):
    """Random incidence structure: every face ends up with >= 1 edge."""
    faces = int(rng.integers(1, max_faces + 1))
    edges = int(rng.integers(faces, 3 * faces + 1))
    face_a = rng.integers(0, faces, edges)
    face_b = rng.integers(0, faces, edges)
    covered = np.zeros(faces, dtype=bool)
    covered[face_a] = True
    covered[face_b] = True
    extra = [
        (f, int(rng.integers(0, faces))) for f in np.nonzero(~covered)[0]
    ]
    if extra:
        face_a = np.concatenate([face_a, [a for a, _ in extra]])
        face_b = np.concatenate([face_b, [b for _, b in extra]])
    return PatternComplex(face_count=faces, face_a=face_a, face_b=face_b)


def fd_jacobian(fn, u, scale=1e-6):
    """Central finite differences of a vector function of u."""
    u = np.asarray(u, dtype=np.float64)
    n = u.size
    base = fn(u)
    jac = np.zeros((base.size, n))
    for j in range(n):
        h = scale * max(1.0, abs(u[j]))
        up = u.copy()
        up[j] += h
        down = u.copy()
        down[j] -= h
        jac[:, j] = (fn(up) - fn(down)) / (2.0 * h)
    return jac


def exhaustive_worst_subset(pattern, target):
    """Brute-force max of (subset target mass - 2 pi |incident edges|)."""
    n = pattern.face_count
    edge_bits = [0] * n
    for e in range(pattern.edge_count):
        edge_bits[int(pattern.face_a[e])] |= 1 << e
        edge_bits[int(pattern.face_b[e])] |= 1 << e
    worst = -np.inf
    for mask in range(1, 1 << n):
        lhs = sum(target[f] for f in range(n) if mask >> f & 1)
        union = 0
        for f in range(n):
            if mask >> f & 1:
                union |= edge_bits[f]
        worst = max(worst, lhs - 2.0 * np.pi * union.bit_count())
    return worst
