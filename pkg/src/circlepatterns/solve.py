"""Prescribed-curvature solvers: damped Newton, Ricci flow, Calabi flow.

Everything runs in the coordinate u = -2*exp(-r), where the prescribed
curvature problem is the critical-point equation of a strictly convex
energy and both flows are its negative gradient / Newton-like descent:

    Ricci flow    du/dt = K(u) - target
    Calabi flow   du/dt = -L(u) (K(u) - target),   L = dK/du

Convergence is always declared on the curvature residual, never on step
size.  Flows use fixed-step RK4 (or Euler) with step rejection: a step is
redone at half the size if it leaves the admissible orthant or if either
monotone quantity (Ricci energy, Calabi energy) increases beyond round-off.
"""

import time
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg as sla
from scipy.sparse import linalg as spla

from . import kernels
from .curvature import (
    calabi_energy,
    curvature_vector,
    laplacian,
    ricci_energy_increment,
    ricci_energy_value,
    theta_array,
)
from .geometry import DomainError, check_theta, check_u

__all__ = [
    "SolveOptions",
    "FlowOptions",
    "SolveResult",
    "Trajectory",
    "NonconvergenceError",
    "boundary_report",
    "closed_form_solve_00d",
    "solve_newton",
    "ricci_flow",
    "calabi_flow",
]

# |F| up to this size: factor -L densely (Cholesky); beyond: sparse LU
_DENSE_LIMIT = 64
_MIN_STEP = 1e-12
_MIN_ALPHA = 1e-12
# relative round-off allowance for the "nonincreasing" step checks; the
# Calabi energy check must stay relative, otherwise an absolute band lets
# the energy random-walk upward once it is tiny and the flow stalls
_MONO_TOL = 1e-12
_MONO_ABS = 1e-300


@dataclass
class SolveOptions:
    """Newton solver knobs.

    tol_residual: sup-norm convergence threshold on K - target.
    max_iter: iteration budget.
    backtrack_factor / armijo_c: backtracking line search on |K - target|^2.
    domain_margin: fraction of the distance to the u = 0 boundary a single
        step may cover.
    """

    tol_residual: float = 1e-10
    max_iter: int = 100
    backtrack_factor: float = 0.5
    armijo_c: float = 1e-4
    domain_margin: float = 0.9

    def __post_init__(self):
        if self.tol_residual <= 0:
            raise ValueError("tol_residual must be > 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not 0 < self.backtrack_factor < 1 or not 0 < self.armijo_c < 1:
            raise ValueError("backtrack_factor and armijo_c must lie in (0, 1)")
        if not 0 < self.domain_margin < 1:
            raise ValueError("domain_margin must lie in (0, 1)")


@dataclass
class FlowOptions:
    """Flow integration knobs (see module docstring for the rejection rule)."""

    integrator: str = "rk4"  # "rk4" | "euler"
    dt: float = 0.1
    t_max: float = 50.0
    tol_residual: float = 1e-8
    sample_every: int = 1

    def __post_init__(self):
        if self.integrator not in ("rk4", "euler"):
            raise ValueError("integrator must be 'rk4' or 'euler'")
        if self.dt <= 0 or self.t_max <= 0:
            raise ValueError("dt and t_max must be > 0")
        if self.tol_residual < 0:
            raise ValueError("tol_residual must be >= 0")
        if self.sample_every < 1:
            raise ValueError("sample_every must be >= 1")


@dataclass
class SolveResult:
    u: np.ndarray
    converged: bool
    iterations: int
    residual_sup: float
    method: str
    wall_time: float


@dataclass
class Trajectory:
    """Sampled flow history plus termination bookkeeping.

    Snapshots cover the initial state, every ``sample_every``-th accepted
    step and the final state.  ``termination`` is one of "converged",
    "t_max", "step_underflow".  ``boundary`` is filled on non-convergence.
    """

    t: np.ndarray
    u: np.ndarray  # (samples, faces)
    curvature: np.ndarray  # (samples, faces)
    residual_sup: np.ndarray
    ricci_energy: np.ndarray
    calabi_energy: np.ndarray
    termination: str
    converged: bool
    accepted_steps: int
    rejected_steps: int
    method: str
    wall_time: float
    boundary: dict = field(default_factory=dict)

    @property
    def final_u(self) -> np.ndarray:
        return self.u[-1]


class NonconvergenceError(RuntimeError):
    """Solver exhausted its budget; carries the last iterate and diagnostics."""

    def __init__(self, message, u_last, residual_sup, iterations, boundary):
        detail = (
            f"{message} (residual sup-norm {residual_sup:.3e} "
            f"after {iterations} iterations)"
        )
        if boundary.get("near_zero"):
            detail += f"; u approaching 0 on faces {boundary['near_zero']}"
        if boundary.get("toward_minus_infinity"):
            detail += f"; u approaching -inf on faces {boundary['toward_minus_infinity']}"
        super().__init__(detail)
        self.u_last = u_last
        self.residual_sup = residual_sup
        self.iterations = iterations
        self.boundary = boundary


def boundary_report(
    u, u_start=None, near_zero_tol=1e-6, blowup_abs=1e3, blowup_factor=10.0
):
    """Identify coordinates drifting to the boundary of the negative orthant.

    A face is flagged "near_zero" when u is within ``near_zero_tol`` of 0,
    and "toward_minus_infinity" when |u| exceeds ``blowup_abs`` or grew by
    ``blowup_factor`` relative to the starting point.
    """
    u = np.asarray(u, dtype=np.float64)
    near_zero = u > -near_zero_tol
    blown = np.abs(u) > blowup_abs
    if u_start is not None:
        scale = np.maximum(1.0, np.abs(np.asarray(u_start, dtype=np.float64)))
        blown |= np.abs(u) > blowup_factor * scale
    return {
        "near_zero": np.nonzero(near_zero)[0].tolist(),
        "toward_minus_infinity": np.nonzero(blown)[0].tolist(),
    }


def _check_target(target, nfaces):
    target = np.asarray(target, dtype=np.float64)
    if target.shape != (nfaces,):
        raise ValueError(f"target has shape {target.shape}, expected ({nfaces},)")
    if not np.all(np.isfinite(target)) or np.any(target <= 0.0):
        bad = np.nonzero(~(np.isfinite(target) & (target > 0.0)))[0].tolist()
        raise ValueError(f"target curvature must be positive (faces {bad})")
    return target


def _initial_u(u0, nfaces):
    if u0 is None:
        return np.full(nfaces, -1.0)
    u = np.array(u0, dtype=np.float64)
    if u.shape != (nfaces,):
        raise ValueError(f"u0 has shape {u.shape}, expected ({nfaces},)")
    check_u(u)
    return u


def closed_form_solve_00d(pattern, ptype, theta, target) -> np.ndarray:
    """Exact solution for the (0,0,delta) family, no iteration.

    Curvature is linear there: K_i = -u_i * (sum of s(theta) over the
    incidence slots of face i), hence u_i = -target_i / sum_i.
    """
    if ptype.epsilon != 0:
        raise ValueError("closed form requires a (0,0,delta) pattern type")
    target = _check_target(target, pattern.face_count)
    t = theta_array(pattern, theta)
    check_theta(ptype.delta, t)
    s = np.asarray(kernels.s_of_theta(ptype.delta, t))
    n = pattern.face_count
    slot_sum = np.bincount(pattern.face_a, weights=s, minlength=n) + np.bincount(
        pattern.face_b, weights=s, minlength=n
    )
    if np.any(slot_sum == 0.0):
        bad = np.nonzero(slot_sum == 0.0)[0].tolist()
        raise ValueError(f"faces without incident edges: {bad}")
    return -target / slot_sum


def _solve_spd(lap, rhs):
    """Solve (-L) d = rhs with L = dK/du; raises on factorization failure."""
    n = lap.shape[0]
    if n <= _DENSE_LIMIT:
        factor = sla.cho_factor(-lap.toarray())
        return sla.cho_solve(factor, rhs)
    return spla.splu((-lap).tocsc()).solve(rhs)


def _backtrack(pattern, ptype, theta, target, u, merit, direction, slope, opts):
    """Armijo backtracking along ``direction``, capped before the u = 0 wall.

    Returns (u_new, k_new, res_new, merit_new) or None if no admissible
    step achieves sufficient decrease.
    """
    up = direction > 0.0
    alpha = 1.0
    if np.any(up):
        alpha = min(1.0, opts.domain_margin * float(np.min(-u[up] / direction[up])))
    while alpha >= _MIN_ALPHA:
        u_new = u + alpha * direction
        if np.all(u_new < 0.0) and np.all(np.isfinite(u_new)):
            k_new = curvature_vector(pattern, ptype, theta, u_new)
            res_new = k_new - target
            merit_new = float(np.dot(res_new, res_new))
            if merit_new <= merit + opts.armijo_c * alpha * slope:
                return u_new, k_new, res_new, merit_new
        alpha *= opts.backtrack_factor
    return None


def solve_newton(pattern, ptype, theta, target, opts=None, u0=None) -> SolveResult:
    """Newton's method on the convex energy for the prescribed curvature.

    Each step solves (-L) d = K - target with L = dK/du (Cholesky on the
    dense matrix at small sizes, sparse LU above), then backtracks on the
    squared residual norm with a guard that keeps u strictly negative.  If
    factorization or the Newton step fails, a gradient step (the Ricci flow
    direction) is tried before giving up.

    Raises NonconvergenceError when the budget is exhausted, carrying the
    last iterate and a boundary diagnosis; infeasible (1,1,0) targets
    surface this way, typically with u drifting toward -inf.
    """
    opts = opts if opts is not None else SolveOptions()
    target = _check_target(target, pattern.face_count)
    t = theta_array(pattern, theta)
    check_theta(ptype.delta, t)
    u = _initial_u(u0, pattern.face_count)
    u_start = u.copy()
    started = time.perf_counter()

    k = curvature_vector(pattern, ptype, theta, u)
    res = k - target
    merit = float(np.dot(res, res))
    iterations = 0
    while True:
        residual_sup = float(np.max(np.abs(res)))
        if residual_sup <= opts.tol_residual:
            return SolveResult(
                u=u,
                converged=True,
                iterations=iterations,
                residual_sup=residual_sup,
                method="newton",
                wall_time=time.perf_counter() - started,
            )
        if iterations >= opts.max_iter:
            raise NonconvergenceError(
                "newton iteration budget exhausted",
                u,
                residual_sup,
                iterations,
                boundary_report(u, u_start),
            )
        lap = laplacian(pattern, ptype, theta, u)
        step = None
        try:
            direction = _solve_spd(lap, res)
        except (np.linalg.LinAlgError, sla.LinAlgError, RuntimeError, ValueError):
            direction = None  # indefinite or non-finite near the boundary
        if direction is not None and np.all(np.isfinite(direction)):
            # exact Newton direction: slope of |res|^2 along it is -2 |res|^2
            step = _backtrack(
                pattern, ptype, theta, target, u, merit, direction, -2.0 * merit, opts
            )
        if step is None:
            gradient = res  # descent direction of the energy, du/dt of the flow
            slope = 2.0 * float(res @ (lap @ res))
            if not np.isfinite(slope) or slope >= 0.0:
                # Jacobian unusable: demand a plain relative decrease instead
                slope = -merit
            step = _backtrack(
                pattern, ptype, theta, target, u, merit, gradient, slope, opts
            )
        if step is None:
            raise NonconvergenceError(
                "newton line search stalled",
                u,
                residual_sup,
                iterations,
                boundary_report(u, u_start),
            )
        u, k, res, merit = step
        iterations += 1


def _rk4(rhs, u, h):
    k1 = rhs(u)
    k2 = rhs(u + 0.5 * h * k1)
    k3 = rhs(u + 0.5 * h * k2)
    k4 = rhs(u + h * k3)
    return u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _euler(rhs, u, h):
    return u + h * rhs(u)


def _flow(pattern, ptype, theta, target, u0, opts, kind) -> Trajectory:
    opts = opts if opts is not None else FlowOptions()
    target = _check_target(target, pattern.face_count)
    t_arr = theta_array(pattern, theta)
    check_theta(ptype.delta, t_arr)
    u = _initial_u(u0, pattern.face_count)
    u_start = u.copy()
    stepper = _rk4 if opts.integrator == "rk4" else _euler
    started = time.perf_counter()

    def rhs(v):
        k = curvature_vector(pattern, ptype, theta, v)
        r = k - target
        if kind == "ricci":
            return r
        return -(laplacian(pattern, ptype, theta, v) @ r)

    k = curvature_vector(pattern, ptype, theta, u)
    res_sup = float(np.max(np.abs(k - target)))
    energy = ricci_energy_value(pattern, ptype, theta, u, target)
    cal = calabi_energy(k, target)

    times, us, ks, sups, energies, cals = [], [], [], [], [], []

    def record(t_now):
        times.append(t_now)
        us.append(u.copy())
        ks.append(k.copy())
        sups.append(res_sup)
        energies.append(energy)
        cals.append(cal)

    t_now = 0.0
    record(t_now)
    converged = res_sup <= opts.tol_residual
    termination = "converged" if converged else None
    accepted = rejected = consecutive = 0
    dt = opts.dt

    while not converged and t_now < opts.t_max - 1e-15:
        h = min(dt, opts.t_max - t_now)
        try:
            u_new = stepper(rhs, u, h)
        except DomainError:
            u_new = None
        ok = (
            u_new is not None
            and np.all(np.isfinite(u_new))
            and np.all(u_new < 0.0)
        )
        if ok:
            k_new = curvature_vector(pattern, ptype, theta, u_new)
            cal_new = calabi_energy(k_new, target)
            energy_inc = ricci_energy_increment(
                pattern, ptype, theta, u, u_new, target
            )
            ok = cal_new <= cal * (1.0 + _MONO_TOL) + _MONO_ABS and (
                energy_inc <= _MONO_TOL * (1.0 + abs(energy))
            )
        if not ok:
            rejected += 1
            consecutive = 0
            dt *= 0.5
            if dt < _MIN_STEP:
                termination = "step_underflow"
                break
            continue
        t_now += h
        u, k, cal = u_new, k_new, cal_new
        energy += energy_inc
        res_sup = float(np.max(np.abs(k - target)))
        accepted += 1
        consecutive += 1
        if consecutive >= 8 and dt < opts.dt:
            dt = min(2.0 * dt, opts.dt)
            consecutive = 0
        if accepted % opts.sample_every == 0:
            record(t_now)
        if res_sup <= opts.tol_residual:
            converged = True
            termination = "converged"

    if termination is None:
        termination = "t_max"
    if times[-1] != t_now:
        record(t_now)

    return Trajectory(
        t=np.asarray(times),
        u=np.asarray(us),
        curvature=np.asarray(ks),
        residual_sup=np.asarray(sups),
        ricci_energy=np.asarray(energies),
        calabi_energy=np.asarray(cals),
        termination=termination,
        converged=converged,
        accepted_steps=accepted,
        rejected_steps=rejected,
        method=f"{kind}/{opts.integrator}",
        wall_time=time.perf_counter() - started,
        boundary={} if converged else boundary_report(u, u_start),
    )


def ricci_flow(pattern, ptype, theta, target, u0=None, opts=None) -> Trajectory:
    """Integrate du/dt = K(u) - target until the residual meets tolerance."""
    return _flow(pattern, ptype, theta, target, u0, opts, "ricci")


def calabi_flow(pattern, ptype, theta, target, u0=None, opts=None) -> Trajectory:
    """Integrate du/dt = -L(u) (K(u) - target) until the residual meets tolerance."""
    return _flow(pattern, ptype, theta, target, u0, opts, "calabi")
