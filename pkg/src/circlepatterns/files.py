"""Problem and result documents.

One self-describing JSON format for each, versioned through a "format"
field.  Reals are serialized with Python's shortest round-trip repr, so a
parse/print cycle is bit-faithful.  All indices are 0-based, in the file
format as well as in memory.

Problem documents carry the incidence structure, the pattern type, the
per-edge intersection angle, the per-face curvature target and optional
solver/flow overrides.  Vertex data is accepted and echoed back untouched
(none of the computations reference vertices).  Result documents embed the
full problem (plus its hash) so they can be re-verified in isolation:
recomputing the curvature from the stored coordinates must reproduce the
stored curvature to 1e-12.
"""

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .cellcomplex import PatternComplex
from .curvature import calabi_energy, curvature, ricci_energy_value
from .geometry import PatternType
from .solve import FlowOptions, SolveOptions, Trajectory

__all__ = [
    "PROBLEM_FORMAT",
    "RESULT_FORMAT",
    "ProblemFormatError",
    "Problem",
    "parse_problem",
    "format_problem",
    "load_problem",
    "save_problem",
    "problem_hash",
    "build_result",
    "save_result",
    "load_result",
    "verify_result",
]

PROBLEM_FORMAT = "circle-pattern/1"
RESULT_FORMAT = "circle-pattern-result/1"

_PROBLEM_KEYS = {
    "format",
    "pattern_type",
    "faces",
    "edges",
    "targets",
    "initial_u",
    "initial_r",
    "solve",
    "flow",
    "vertices",
}
_VERIFY_TOL = 1e-12


class ProblemFormatError(ValueError):
    """Malformed problem document; ``errors`` lists every defect found."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(eq=False)
class Problem:
    """A parsed, fully validated prescribed-curvature problem."""

    pattern: PatternComplex
    ptype: PatternType
    theta: np.ndarray
    target: np.ndarray
    initial_u: Optional[np.ndarray] = None
    solve_options: dict = field(default_factory=dict)
    flow_options: dict = field(default_factory=dict)
    vertices: Any = None

    def __eq__(self, other):
        if not isinstance(other, Problem):
            return NotImplemented
        same_initial = (self.initial_u is None) == (other.initial_u is None) and (
            self.initial_u is None or np.array_equal(self.initial_u, other.initial_u)
        )
        return (
            self.pattern == other.pattern
            and self.ptype == other.ptype
            and np.array_equal(self.theta, other.theta)
            and np.array_equal(self.target, other.target)
            and same_initial
            and self.solve_options == other.solve_options
            and self.flow_options == other.flow_options
            and self.vertices == other.vertices
        )


def _as_int(doc, key, errors, path):
    value = doc.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        errors.append(f"{path}.{key} must be an integer")
        return None
    return value


def _as_real(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _parse_edges(raw, delta, errors):
    start = len(errors)
    if not isinstance(raw, list) or not raw:
        errors.append("edges must be a nonempty list")
        return None, None
    records = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict):
            errors.append(f"edges[{i}] must be an object")
            continue
        eid = entry.get("id")
        fa = entry.get("face_a")
        fb = entry.get("face_b")
        th = entry.get("theta")
        bad = False
        for name, value in (("id", eid), ("face_a", fa), ("face_b", fb)):
            if isinstance(value, bool) or not isinstance(value, int):
                errors.append(f"edges[{i}].{name} must be an integer")
                bad = True
        bound = "(0, pi)" if delta == 1 else "(0, inf)"
        if not _as_real(th) or th <= 0 or (delta == 1 and th >= math.pi):
            errors.append(f"edges[{i}].theta must lie in {bound}")
            bad = True
        if bad:
            continue
        records.append((eid, fa, fb, float(th), entry.get("label")))
    if len(errors) > start:
        return None, None
    ids = sorted(r[0] for r in records)
    if ids != list(range(len(records))):
        errors.append(
            f"edge ids must be exactly 0..{len(records) - 1} (unique and dense)"
        )
        return None, None
    records.sort(key=lambda r: r[0])
    face_a = np.array([r[1] for r in records], dtype=np.int64)
    face_b = np.array([r[2] for r in records], dtype=np.int64)
    theta = np.array([r[3] for r in records], dtype=np.float64)
    labels = [r[4] for r in records]
    if any(l is not None for l in labels):
        edge_labels = tuple(l if l is not None else "" for l in labels)
    else:
        edge_labels = None
    return (face_a, face_b, edge_labels), theta


def parse_problem(data) -> Problem:
    """Parse and validate a problem document (str, bytes or parsed JSON).

    Raises ProblemFormatError carrying every parse and domain error found,
    each naming the offending field, edge or face.
    """
    errors = []
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    if isinstance(data, str):
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ProblemFormatError([f"invalid JSON: {exc}"]) from exc
    else:
        doc = data
    if not isinstance(doc, dict):
        raise ProblemFormatError(["top-level document must be an object"])

    unknown = sorted(set(doc) - _PROBLEM_KEYS)
    if unknown:
        errors.append(f"unknown keys: {unknown}")
    if doc.get("format") != PROBLEM_FORMAT:
        errors.append(f"format must be {PROBLEM_FORMAT!r}")

    ptype = None
    pt = doc.get("pattern_type")
    if not isinstance(pt, dict):
        errors.append("pattern_type must be an object with epsilon and delta")
    else:
        eps = _as_int(pt, "epsilon", errors, "pattern_type")
        delta = _as_int(pt, "delta", errors, "pattern_type")
        if eps is not None and delta is not None:
            try:
                ptype = PatternType(eps, delta)
            except ValueError as exc:
                errors.append(str(exc))
    if ptype is None:
        raise ProblemFormatError(errors)

    faces = doc.get("faces")
    face_labels = None
    if isinstance(faces, dict):
        count = faces.get("count")
        labels = faces.get("labels")
        if labels is not None:
            if not isinstance(labels, list) or not all(
                isinstance(l, str) for l in labels
            ):
                errors.append("faces.labels must be a list of strings")
            else:
                face_labels = tuple(labels)
    else:
        count = faces
    if isinstance(count, bool) or not isinstance(count, int) or count < 1:
        errors.append("faces.count must be a positive integer")
        raise ProblemFormatError(errors)
    if face_labels is not None and len(face_labels) != count:
        errors.append(f"faces.labels has length {len(face_labels)}, expected {count}")

    parsed_edges, theta = _parse_edges(doc.get("edges"), ptype.delta, errors)
    if parsed_edges is None:
        raise ProblemFormatError(errors)
    face_a, face_b, edge_labels = parsed_edges

    pattern = PatternComplex(
        face_count=count,
        face_a=face_a,
        face_b=face_b,
        face_labels=face_labels,
        edge_labels=edge_labels,
    )
    errors.extend(pattern.validate())

    targets = doc.get("targets")
    target = None
    if not isinstance(targets, list) or len(targets) != count:
        errors.append(f"targets must be a list of {count} positive reals")
    else:
        before = len(errors)
        for f, value in enumerate(targets):
            if not _as_real(value) or value <= 0:
                errors.append(f"targets[{f}] must be a positive real (face {f})")
        if len(errors) == before:
            target = np.array(targets, dtype=np.float64)
    if target is None:
        raise ProblemFormatError(errors)

    initial_u = None
    if "initial_u" in doc and "initial_r" in doc:
        errors.append("give at most one of initial_u and initial_r")
    elif "initial_u" in doc:
        raw = doc["initial_u"]
        if not isinstance(raw, list) or len(raw) != count or not all(
            _as_real(v) and v < 0 for v in raw
        ):
            errors.append(f"initial_u must be a list of {count} negative reals")
        else:
            initial_u = np.array(raw, dtype=np.float64)
    elif "initial_r" in doc:
        raw = doc["initial_r"]
        if not isinstance(raw, list) or len(raw) != count or not all(
            _as_real(v) for v in raw
        ):
            errors.append(f"initial_r must be a list of {count} reals")
        else:
            initial_u = -2.0 * np.exp(-np.array(raw, dtype=np.float64))

    solve_options = doc.get("solve", {})
    if not isinstance(solve_options, dict):
        errors.append("solve must be an object")
        solve_options = {}
    else:
        try:
            SolveOptions(**solve_options)
        except (TypeError, ValueError) as exc:
            errors.append(f"solve: {exc}")
    flow_options = doc.get("flow", {})
    if not isinstance(flow_options, dict):
        errors.append("flow must be an object")
        flow_options = {}
    else:
        method = flow_options.get("method")
        if method is not None and method not in ("ricci", "calabi"):
            errors.append("flow.method must be 'ricci' or 'calabi'")
        rest = {k: v for k, v in flow_options.items() if k != "method"}
        try:
            FlowOptions(**rest)
        except (TypeError, ValueError) as exc:
            errors.append(f"flow: {exc}")

    if errors:
        raise ProblemFormatError(errors)
    return Problem(
        pattern=pattern,
        ptype=ptype,
        theta=theta,
        target=target,
        initial_u=initial_u,
        solve_options=dict(solve_options),
        flow_options=dict(flow_options),
        vertices=doc.get("vertices"),
    )


def _problem_doc(problem: Problem) -> dict:
    pattern = problem.pattern
    faces: Any = {"count": pattern.face_count}
    if pattern.face_labels is not None:
        faces["labels"] = list(pattern.face_labels)
    edges = []
    for e in range(pattern.edge_count):
        entry = {
            "id": e,
            "face_a": int(pattern.face_a[e]),
            "face_b": int(pattern.face_b[e]),
            "theta": float(problem.theta[e]),
        }
        if pattern.edge_labels is not None and pattern.edge_labels[e]:
            entry["label"] = pattern.edge_labels[e]
        edges.append(entry)
    doc = {
        "format": PROBLEM_FORMAT,
        "pattern_type": {"epsilon": problem.ptype.epsilon, "delta": problem.ptype.delta},
        "faces": faces,
        "edges": edges,
        "targets": [float(v) for v in problem.target],
    }
    if problem.initial_u is not None:
        doc["initial_u"] = [float(v) for v in problem.initial_u]
    if problem.solve_options:
        doc["solve"] = problem.solve_options
    if problem.flow_options:
        doc["flow"] = problem.flow_options
    if problem.vertices is not None:
        doc["vertices"] = problem.vertices
    return doc


def format_problem(problem: Problem) -> str:
    """Canonical text form; parse(format(p)) == p field for field."""
    return json.dumps(_problem_doc(problem), indent=2) + "\n"


def problem_hash(problem: Problem) -> str:
    """SHA-256 of the canonical compact serialization."""
    compact = json.dumps(_problem_doc(problem), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(compact.encode("utf-8")).hexdigest()


def load_problem(path) -> Problem:
    with open(path, "rb") as handle:
        return parse_problem(handle.read())


def save_problem(path, problem: Problem) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(format_problem(problem))


def build_result(
    problem: Problem,
    *,
    method: str,
    converged: bool,
    u,
    iterations: Optional[int] = None,
    wall_time: Optional[float] = None,
    termination: Optional[str] = None,
    boundary: Optional[dict] = None,
    trajectory: Optional[Trajectory] = None,
) -> dict:
    """Assemble a result document for a solved (or failed) problem state."""
    u = np.asarray(u, dtype=np.float64)
    report = curvature(
        problem.pattern, problem.ptype, problem.theta, u, target=problem.target
    )
    doc = {
        "format": RESULT_FORMAT,
        "problem_sha256": problem_hash(problem),
        "problem": _problem_doc(problem),
        "method": method,
        "converged": bool(converged),
        "u": [float(v) for v in u],
        "r": [float(v) for v in -np.log(-0.5 * u)],
        "curvature": [float(v) for v in report.curvature],
        "beta": [[float(a), float(b)] for a, b in zip(report.beta1, report.beta2)],
        "edge_lengths": [float(v) for v in report.lengths],
        "residual": {"sup": report.residual_sup, "l2": report.residual_l2},
        "ricci_energy": ricci_energy_value(
            problem.pattern, problem.ptype, problem.theta, u, problem.target
        ),
        "calabi_energy": calabi_energy(report.curvature, problem.target),
    }
    if iterations is not None:
        doc["iterations"] = int(iterations)
    if wall_time is not None:
        doc["wall_time_s"] = float(wall_time)
    if termination is not None:
        doc["termination"] = termination
    if boundary:
        doc["boundary"] = boundary
    if trajectory is not None:
        doc["trajectory"] = {
            "t": [float(v) for v in trajectory.t],
            "residual_sup": [float(v) for v in trajectory.residual_sup],
            "ricci_energy": [float(v) for v in trajectory.ricci_energy],
            "calabi_energy": [float(v) for v in trajectory.calabi_energy],
        }
        doc["accepted_steps"] = trajectory.accepted_steps
        doc["rejected_steps"] = trajectory.rejected_steps
    return doc


def save_result(path, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(doc, handle, indent=2)
        handle.write("\n")


def load_result(path) -> dict:
    with open(path, "rb") as handle:
        doc = json.loads(handle.read().decode("utf-8"))
    if not isinstance(doc, dict) or doc.get("format") != RESULT_FORMAT:
        raise ValueError(f"not a {RESULT_FORMAT} document")
    return doc


def verify_result(doc: dict) -> list:
    """Re-derive stored quantities; returns a list of inconsistencies.

    Checks the problem hash, the curvature recomputed from u (tolerance
    1e-12), the r coordinates and the residual norms.
    """
    problems = []
    try:
        problem = parse_problem(doc["problem"])
    except (KeyError, ProblemFormatError) as exc:
        return [f"embedded problem invalid: {exc}"]
    if doc.get("problem_sha256") != problem_hash(problem):
        problems.append("problem hash mismatch")
    u = np.array(doc.get("u", []), dtype=np.float64)
    if u.shape != (problem.pattern.face_count,) or np.any(u >= 0):
        return problems + ["u vector missing or inadmissible"]
    stored_k = np.array(doc.get("curvature", []), dtype=np.float64)
    report = curvature(
        problem.pattern, problem.ptype, problem.theta, u, target=problem.target
    )
    if stored_k.shape != report.curvature.shape:
        problems.append("curvature vector has wrong length")
    else:
        drift = float(np.max(np.abs(stored_k - report.curvature), initial=0.0))
        if drift > _VERIFY_TOL:
            problems.append(
                f"stored curvature deviates from recomputation by {drift:.3e}"
            )
    stored_r = np.array(doc.get("r", []), dtype=np.float64)
    expected_r = -np.log(-0.5 * u)
    if stored_r.shape != expected_r.shape or np.max(
        np.abs(stored_r - expected_r), initial=0.0
    ) > _VERIFY_TOL:
        problems.append("stored r inconsistent with u")
    residual = doc.get("residual", {})
    sup = residual.get("sup") if isinstance(residual, dict) else None
    if not isinstance(sup, (int, float)) or abs(sup - report.residual_sup) > max(
        _VERIFY_TOL, 1e-12 * report.residual_sup
    ):
        problems.append("stored residual sup-norm inconsistent")
    return problems
