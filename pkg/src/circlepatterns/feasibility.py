"""Feasibility of prescribed curvature targets.

For the (0,0,delta) family any positive target is attainable, so the check
is positivity.  For (1,1,0) a target is attainable iff it is positive and
every nonempty face subset F' satisfies

    sum of targets over F'  <  2 * pi * (number of edges incident to F').

Two decision procedures are provided: brute-force enumeration of all
subsets (the oracle, exponential, guarded to at most 24 faces) and a
max-flow certificate (polynomial).  The max-flow network routes target mass
from each face through its incident edges, each edge absorbing at most
2*pi; all subset inequalities hold non-strictly iff the flow saturates the
sources.  Strictness is decided by re-running with slightly inflated
targets; verdicts whose margin falls inside that inflation band are
reported as "marginal" (treated as infeasible by the CLI, since the solver
would stall on a tight target anyway).
"""

import dataclasses
import math
from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .cellcomplex import PatternComplex, edge_neighborhood

__all__ = [
    "SubsetWitness",
    "FeasibilityReport",
    "check_positivity",
    "check_exhaustive",
    "check_maxflow",
    "check_target",
    "EXHAUSTIVE_FACE_LIMIT",
]

EXHAUSTIVE_FACE_LIMIT = 24
# relative / absolute target inflation used to separate "tight" from
# "strictly below"; verdicts flipping under this inflation are marginal
_EPS_REL = 2.0**-40
# residual capacity below which an arc counts as saturated
_FLOW_TOL = 1e-12


@dataclass(frozen=True)
class SubsetWitness:
    """A face subset with its target mass (lhs) and edge budget (rhs = 2 pi |E'|)."""

    faces: tuple
    edges: tuple
    lhs: float
    rhs: float


@dataclass(frozen=True)
class FeasibilityReport:
    """Verdict of a feasibility check.

    ``feasible`` is False for both strict violations and marginal (within
    the inflation band of tightness) targets; ``marginal`` distinguishes
    the latter.  ``witness`` is the worst subset found (max lhs - rhs) for
    subset checks, or the first offending face for positivity failures.
    """

    feasible: bool
    method: str
    marginal: bool = False
    witness: Optional[SubsetWitness] = None


def check_positivity(target) -> FeasibilityReport:
    """Feasibility for (0,0,delta): every target entry strictly positive."""
    target = np.asarray(target, dtype=np.float64)
    bad = np.nonzero(~(np.isfinite(target) & (target > 0.0)))[0]
    if bad.size:
        face = int(bad[0])
        witness = SubsetWitness(
            faces=(face,), edges=(), lhs=float(target[face]), rhs=0.0
        )
        return FeasibilityReport(feasible=False, method="positivity", witness=witness)
    return FeasibilityReport(feasible=True, method="positivity")


def _witness(pattern, target, faces) -> SubsetWitness:
    faces = tuple(int(f) for f in faces)
    edges = tuple(int(e) for e in edge_neighborhood(pattern, faces))
    lhs = float(np.sum(np.asarray(target, dtype=np.float64)[list(faces)]))
    return SubsetWitness(faces=faces, edges=edges, lhs=lhs, rhs=2.0 * math.pi * len(edges))


def check_exhaustive(pattern: PatternComplex, target) -> FeasibilityReport:
    """Enumerate every nonempty face subset; exponential oracle, |F| <= 24."""
    n = pattern.face_count
    if n > EXHAUSTIVE_FACE_LIMIT:
        raise ValueError(
            f"{n} faces exceeds the exhaustive limit of {EXHAUSTIVE_FACE_LIMIT}; "
            "use check_maxflow"
        )
    target = np.asarray(target, dtype=np.float64)
    positivity = check_positivity(target)
    if not positivity.feasible:
        return dataclasses.replace(positivity, method="exhaustive")
    inflated = target * (1.0 + _EPS_REL) + _EPS_REL * float(np.max(target, initial=0.0))

    edge_bits = [0] * n
    for e in range(pattern.edge_count):
        edge_bits[int(pattern.face_a[e])] |= 1 << e
        edge_bits[int(pattern.face_b[e])] |= 1 << e

    worst_margin = -math.inf
    worst_mask = 0
    worst_inflated = -math.inf
    for mask in range(1, 1 << n):
        lhs = 0.0
        lhs_inflated = 0.0
        union = 0
        m = mask
        while m:
            f = (m & -m).bit_length() - 1
            lhs += target[f]
            lhs_inflated += inflated[f]
            union |= edge_bits[f]
            m &= m - 1
        rhs = 2.0 * math.pi * union.bit_count()
        margin = lhs - rhs
        if margin > worst_margin:
            worst_margin = margin
            worst_mask = mask
        worst_inflated = max(worst_inflated, lhs_inflated - rhs)

    faces = [f for f in range(n) if worst_mask >> f & 1]
    witness = _witness(pattern, target, faces)
    if worst_margin >= 0.0:
        return FeasibilityReport(feasible=False, method="exhaustive", witness=witness)
    if worst_inflated >= 0.0:
        return FeasibilityReport(
            feasible=False, method="exhaustive", marginal=True, witness=witness
        )
    return FeasibilityReport(feasible=True, method="exhaustive", witness=witness)


class _FlowNetwork:
    """Edmonds-Karp max flow on float capacities with a residual tolerance."""

    def __init__(self, n):
        self.adj = [[] for _ in range(n)]

    def add_arc(self, a, b, capacity):
        self.adj[a].append([b, capacity, len(self.adj[b])])
        self.adj[b].append([a, 0.0, len(self.adj[a]) - 1])

    def max_flow(self, source, sink):
        total = 0.0
        while True:
            parent = self._find_path(source, sink)
            if parent is None:
                return total
            bottleneck = math.inf
            v = sink
            while v != source:
                prev, idx = parent[v]
                bottleneck = min(bottleneck, self.adj[prev][idx][1])
                v = prev
            v = sink
            while v != source:
                prev, idx = parent[v]
                arc = self.adj[prev][idx]
                arc[1] -= bottleneck
                self.adj[v][arc[2]][1] += bottleneck
                v = prev
            total += bottleneck

    def _find_path(self, source, sink):
        parent = {source: None}
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for idx, (w, cap, _) in enumerate(self.adj[v]):
                if cap > _FLOW_TOL and w not in parent:
                    parent[w] = (v, idx)
                    if w == sink:
                        return parent
                    queue.append(w)
        return None

    def reachable(self, source):
        seen = {source}
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for w, cap, _ in self.adj[v]:
                if cap > _FLOW_TOL and w not in seen:
                    seen.add(w)
                    queue.append(w)
        return seen


def _run_flow(pattern, capacities):
    """Max flow of the face -> incident edge -> 2*pi sink network.

    Returns (deficit, cut_faces): deficit is the unrouted target mass, and
    cut_faces the source side of the min cut restricted to face nodes (the
    maximizer of lhs - rhs over subsets).
    """
    n = pattern.face_count
    m = pattern.edge_count
    source = 0
    sink = 1 + n + m
    net = _FlowNetwork(sink + 1)
    for f in range(n):
        net.add_arc(source, 1 + f, float(capacities[f]))
    seen_pairs = set()
    for e in range(m):
        for f in (int(pattern.face_a[e]), int(pattern.face_b[e])):
            if (f, e) not in seen_pairs:
                seen_pairs.add((f, e))
                net.add_arc(1 + f, 1 + n + e, math.inf)
        net.add_arc(1 + n + e, sink, 2.0 * math.pi)
    flow = net.max_flow(source, sink)
    deficit = float(np.sum(capacities)) - flow
    cut_faces = sorted(v - 1 for v in net.reachable(source) if 1 <= v <= n)
    return deficit, cut_faces


def check_maxflow(pattern: PatternComplex, target) -> FeasibilityReport:
    """Max-flow certificate for the subset condition; polynomial in |F|, |E|.

    The flow saturates all sources iff every subset satisfies its bound
    non-strictly.  A second run with inflated targets separates strict
    satisfaction from ties: still saturating means strictly feasible,
    otherwise the target is within the inflation band and flagged marginal.
    """
    target = np.asarray(target, dtype=np.float64)
    positivity = check_positivity(target)
    if not positivity.feasible:
        return dataclasses.replace(positivity, method="maxflow")
    scale = float(np.max(target, initial=0.0))
    tol = 2.0**-42 * (1.0 + scale)

    deficit, cut_faces = _run_flow(pattern, target)
    if deficit > tol:
        witness = _witness(pattern, target, cut_faces)
        return FeasibilityReport(feasible=False, method="maxflow", witness=witness)

    inflated = target * (1.0 + _EPS_REL) + _EPS_REL * scale
    deficit_inflated, cut_faces = _run_flow(pattern, inflated)
    if deficit_inflated > tol:
        witness = _witness(pattern, target, cut_faces)
        return FeasibilityReport(
            feasible=False, method="maxflow", marginal=True, witness=witness
        )
    return FeasibilityReport(feasible=True, method="maxflow")


def check_target(pattern: PatternComplex, ptype, target) -> FeasibilityReport:
    """Dispatch on the pattern type: positivity for (0,0,delta), subset bound for (1,1,0)."""
    if ptype.epsilon == 0:
        return check_positivity(target)
    if pattern.face_count <= EXHAUSTIVE_FACE_LIMIT:
        return check_exhaustive(pattern, target)
    return check_maxflow(pattern, target)
