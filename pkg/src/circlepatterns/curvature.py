"""Curvature map, discrete Laplace operator and the two flow energies.

The curvature of a face is twice the sum of the generalized angles over its
incidence slots; a self-glued edge therefore contributes both of its angles
to the same face.  The Jacobian dK/du ("Laplacian") is assembled edge by
edge in ascending edge order, so sums are reproducible run to run.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate, sparse

from . import kernels
from .cellcomplex import PatternComplex
from .geometry import check_theta, check_u

__all__ = [
    "CurvatureReport",
    "theta_array",
    "curvature_vector",
    "curvature",
    "laplacian",
    "ricci_energy_gradient",
    "ricci_energy_value",
    "ricci_energy_increment",
    "calabi_energy",
]

# reference point used to anchor the (1,1,0) energy: u_ref = (-1, ..., -1)
REF_COORD = -1.0

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(8)


def theta_array(pattern: PatternComplex, theta) -> np.ndarray:
    """Broadcast a scalar or per-edge theta to a contiguous per-edge array."""
    t = np.asarray(theta, dtype=np.float64)
    if t.ndim == 0:
        t = np.full(pattern.edge_count, float(t))
    if t.shape != (pattern.edge_count,):
        raise ValueError(
            f"theta has shape {t.shape}, expected ({pattern.edge_count},)"
        )
    return np.ascontiguousarray(t)


def _edge_inputs(pattern, ptype, theta, u, validate=True):
    t = theta_array(pattern, theta)
    u = np.ascontiguousarray(u, dtype=np.float64)
    if u.shape != (pattern.face_count,):
        raise ValueError(f"u has shape {u.shape}, expected ({pattern.face_count},)")
    if validate:
        check_theta(ptype.delta, t)
        check_u(u)
    u1 = np.ascontiguousarray(u[pattern.face_a])
    u2 = np.ascontiguousarray(u[pattern.face_b])
    return t, u, u1, u2


def _edge_angles(ptype, t, u1, u2):
    if ptype.epsilon == 1:
        return kernels.angles_110(t, u1, u2)
    return kernels.angles_00d(ptype.delta, t, u1, u2)


def _edge_full(ptype, t, u1, u2):
    if ptype.epsilon == 1:
        return kernels.full_110(t, u1, u2)
    return kernels.full_00d(ptype.delta, t, u1, u2)


def _accumulate(pattern, beta1, beta2):
    n = pattern.face_count
    return 2.0 * (
        np.bincount(pattern.face_a, weights=beta1, minlength=n)
        + np.bincount(pattern.face_b, weights=beta2, minlength=n)
    )


def curvature_vector(pattern, ptype, theta, u) -> np.ndarray:
    """Per-face curvature K(u) without the full report (hot path of the flows)."""
    t, u, u1, u2 = _edge_inputs(pattern, ptype, theta, u)
    beta1, beta2 = _edge_angles(ptype, t, u1, u2)
    return _accumulate(pattern, beta1, beta2)


@dataclass(frozen=True)
class CurvatureReport:
    """Curvature, per-incidence angles and edge lengths at a coordinate vector.

    ``beta1[e]``/``beta2[e]`` are the angles on the ``face_a``/``face_b``
    side of edge ``e``;  ``curvature[f]`` equals twice the sum of the angles
    over the incidence slots of ``f`` by construction.  Residual fields are
    present only when a target curvature was supplied.
    """

    curvature: np.ndarray
    beta1: np.ndarray
    beta2: np.ndarray
    lengths: np.ndarray
    residual: Optional[np.ndarray] = None
    residual_sup: Optional[float] = None
    residual_l2: Optional[float] = None


def curvature(pattern, ptype, theta, u, target=None) -> CurvatureReport:
    """Evaluate curvature, angles and lengths; residuals if ``target`` is given."""
    t, u, u1, u2 = _edge_inputs(pattern, ptype, theta, u)
    beta1, beta2, lengths, _, _ = _edge_full(ptype, t, u1, u2)
    k = _accumulate(pattern, beta1, beta2)
    residual = residual_sup = residual_l2 = None
    if target is not None:
        target = np.asarray(target, dtype=np.float64)
        residual = k - target
        residual_sup = float(np.max(np.abs(residual))) if residual.size else 0.0
        residual_l2 = float(np.linalg.norm(residual))
    return CurvatureReport(
        curvature=k,
        beta1=beta1,
        beta2=beta2,
        lengths=lengths,
        residual=residual,
        residual_sup=residual_sup,
        residual_l2=residual_l2,
    )


def laplacian(pattern, ptype, theta, u) -> sparse.csr_array:
    """Jacobian dK/du as a sparse symmetric negative-definite matrix.

    Nonzero pattern: diagonal plus one entry per face pair sharing an edge.
    Each edge contributes the 2x2 block 2 * [[dd, do], [do, dd]] at its
    (face_a, face_b) indices; self-glued edges collapse onto the diagonal.
    """
    t, u, u1, u2 = _edge_inputs(pattern, ptype, theta, u)
    _, _, _, dd, do = _edge_full(ptype, t, u1, u2)
    fa, fb = pattern.face_a, pattern.face_b
    rows = np.concatenate([fa, fb, fa, fb])
    cols = np.concatenate([fa, fb, fb, fa])
    vals = 2.0 * np.concatenate([dd, dd, do, do])
    n = pattern.face_count
    return sparse.csr_array(
        sparse.coo_array((vals, (rows, cols)), shape=(n, n))
    )


def ricci_energy_gradient(pattern, ptype, theta, u, target) -> np.ndarray:
    """Gradient of the Ricci energy: target - K(u)."""
    target = np.asarray(target, dtype=np.float64)
    return target - curvature_vector(pattern, ptype, theta, u)


def _energy_closed_form(pattern, ptype, theta, u, target):
    # per edge the angle potential integrates to (s/4)(u1^2 + u2^2); the
    # curvature sum carries a factor 2 per incidence, hence s/2 here
    t, u, u1, u2 = _edge_inputs(pattern, ptype, theta, u)
    s = kernels.s_of_theta(ptype.delta, t)
    return float(np.sum(0.5 * s * (u1 * u1 + u2 * u2)) + np.dot(target, u))


def _energy_by_quadrature(pattern, ptype, theta, u, target, epsabs=1e-9):
    """Line integral of (target - K) from the reference point, plus offset.

    Path independence along the straight segment follows from the symmetry
    of dK/du; the segment stays admissible because the domain is convex.
    The value is anchored by  E(u_ref) = sum(target) * REF_COORD.
    """
    u = np.asarray(u, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    u_ref = np.full_like(u, REF_COORD)
    d = u - u_ref

    def g(s):
        k = curvature_vector(pattern, ptype, theta, u_ref + s * d)
        return float(np.dot(target - k, d))

    value, _ = integrate.quad(g, 0.0, 1.0, epsabs=epsabs, epsrel=1e-11, limit=200)
    return float(np.sum(target) * REF_COORD + value)


def ricci_energy_value(pattern, ptype, theta, u, target) -> float:
    """Ricci energy at ``u``.

    For the (0,0,delta) family the closed form is returned.  For (1,1,0) no
    elementary antiderivative is available, so the energy is integrated from
    the reference point u_ref = (-1,...,-1) with the normalization
    E(u_ref) = sum(target) * (-1); only energy differences are meaningful.
    """
    target = np.asarray(target, dtype=np.float64)
    if ptype.epsilon == 0:
        return _energy_closed_form(pattern, ptype, theta, u, target)
    return _energy_by_quadrature(pattern, ptype, theta, u, target)


def ricci_energy_increment(pattern, ptype, theta, u_from, u_to, target) -> float:
    """Energy difference E(u_to) - E(u_from) along the straight segment.

    Exact for (0,0,delta); for (1,1,0) an 8-point Gauss rule on the segment,
    which is far below round-off for the step sizes the flows take.
    """
    target = np.asarray(target, dtype=np.float64)
    if ptype.epsilon == 0:
        return _energy_closed_form(
            pattern, ptype, theta, u_to, target
        ) - _energy_closed_form(pattern, ptype, theta, u_from, target)
    u_from = np.asarray(u_from, dtype=np.float64)
    u_to = np.asarray(u_to, dtype=np.float64)
    d = u_to - u_from
    total = 0.0
    for node, weight in zip(_GAUSS_NODES, _GAUSS_WEIGHTS):
        s = 0.5 * (node + 1.0)
        k = curvature_vector(pattern, ptype, theta, u_from + s * d)
        total += 0.5 * weight * float(np.dot(target - k, d))
    return total


def calabi_energy(k, target) -> float:
    """Half the squared euclidean norm of the curvature error."""
    k = np.asarray(k, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if k.shape != target.shape:
        raise ValueError(f"shape mismatch: {k.shape} vs {target.shape}")
    return float(0.5 * np.sum((k - target) ** 2))
