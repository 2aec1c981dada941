"""Face-edge incidence structure of a cellularly decomposed surface.

Only the incidence combinatorics is stored: every edge knows the two faces
it separates (which may coincide: an edge glued to the same face on both
sides is legal and contributes two incidence slots to that face).  Vertices
play no role in any of the numerics and are not represented here.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

import numpy as np

__all__ = ["PatternComplex", "torus_grid", "edge_neighborhood"]


@dataclass(frozen=True, eq=False)
class PatternComplex:
    """Immutable face-edge incidence structure.

    Edge ids are positional: edge ``e`` is ``(face_a[e], face_b[e])``.
    Instances are safe to share across threads; all queries are read-only.

    Args:
        face_count: number of faces, ``>= 1``.
        face_a: per-edge index of the face on side "a".
        face_b: per-edge index of the face on side "b" (may equal side "a").
        face_labels: optional per-face display names.
        edge_labels: optional per-edge display names.
    """

    face_count: int
    face_a: np.ndarray
    face_b: np.ndarray
    face_labels: Optional[tuple] = None
    edge_labels: Optional[tuple] = None
    # construction performs shape checks only; semantic checks (index ranges,
    # isolated faces) are reported by validate() so that broken inputs can be
    # diagnosed instead of rejected blindly
    def __post_init__(self):
        fa = np.ascontiguousarray(self.face_a, dtype=np.int64)
        fb = np.ascontiguousarray(self.face_b, dtype=np.int64)
        if fa.ndim != 1 or fb.ndim != 1 or fa.shape != fb.shape:
            raise ValueError("face_a and face_b must be 1-d arrays of equal length")
        if int(self.face_count) < 1:
            raise ValueError("face_count must be >= 1")
        fa.flags.writeable = False
        fb.flags.writeable = False
        object.__setattr__(self, "face_count", int(self.face_count))
        object.__setattr__(self, "face_a", fa)
        object.__setattr__(self, "face_b", fb)
        if self.face_labels is not None:
            object.__setattr__(self, "face_labels", tuple(self.face_labels))
        if self.edge_labels is not None:
            object.__setattr__(self, "edge_labels", tuple(self.edge_labels))

    def __eq__(self, other):
        if not isinstance(other, PatternComplex):
            return NotImplemented
        return (
            self.face_count == other.face_count
            and np.array_equal(self.face_a, other.face_a)
            and np.array_equal(self.face_b, other.face_b)
            and self.face_labels == other.face_labels
            and self.edge_labels == other.edge_labels
        )

    @property
    def edge_count(self) -> int:
        return self.face_a.shape[0]

    @cached_property
    def _incidences(self):
        """Per-face list of (edge id, slot), ascending edge id, slot a first."""
        inc = [[] for _ in range(self.face_count)]
        for e in range(self.edge_count):
            a = int(self.face_a[e])
            b = int(self.face_b[e])
            if 0 <= a < self.face_count:
                inc[a].append((e, 0))
            if 0 <= b < self.face_count:
                inc[b].append((e, 1))
        return tuple(tuple(lst) for lst in inc)

    def validate(self) -> list:
        """Return a list of human-readable invariant violations (empty if valid)."""
        violations = []
        n = self.face_count
        for e in range(self.edge_count):
            a = int(self.face_a[e])
            b = int(self.face_b[e])
            if not 0 <= a < n:
                violations.append(f"edge {e}: face_a index {a} out of range [0, {n})")
            if not 0 <= b < n:
                violations.append(f"edge {e}: face_b index {b} out of range [0, {n})")
        for f, inc in enumerate(self._incidences):
            if not inc:
                violations.append(f"face {f} has no incident edges")
        if self.face_labels is not None and len(self.face_labels) != n:
            violations.append(
                f"face_labels has length {len(self.face_labels)}, expected {n}"
            )
        if self.edge_labels is not None and len(self.edge_labels) != self.edge_count:
            violations.append(
                f"edge_labels has length {len(self.edge_labels)}, expected {self.edge_count}"
            )
        return violations

    def incidences_of(self, face: int):
        """All (edge id, slot) pairs of ``face``; a self-glued edge appears twice.

        Slot 0 is the ``face_a`` side, slot 1 the ``face_b`` side.  The order
        is deterministic: ascending edge id, slot 0 before slot 1.
        """
        if not 0 <= face < self.face_count:
            raise IndexError(
                f"face index {face} out of range [0, {self.face_count})"
            )
        return self._incidences[face]

    def incidence_counts(self) -> np.ndarray:
        """Number of incidence slots per face (self-glued edges count twice)."""
        counts = np.zeros(self.face_count, dtype=np.int64)
        np.add.at(counts, self.face_a, 1)
        np.add.at(counts, self.face_b, 1)
        return counts


def edge_neighborhood(pattern: PatternComplex, faces: Iterable) -> np.ndarray:
    """Ids of all edges incident to at least one face of the given subset.

    Raises ValueError on an empty subset and IndexError on out-of-range
    face indices.
    """
    idx = np.unique(np.asarray(list(faces), dtype=np.int64))
    if idx.size == 0:
        raise ValueError("face subset must be nonempty")
    if idx.min() < 0 or idx.max() >= pattern.face_count:
        raise IndexError("face subset contains out-of-range indices")
    mask = np.zeros(pattern.face_count, dtype=bool)
    mask[idx] = True
    hit = mask[pattern.face_a] | mask[pattern.face_b]
    return np.nonzero(hit)[0].astype(np.int64)


def torus_grid(m: int, n: int) -> PatternComplex:
    """Quad-grid decomposition of the torus with ``m*n`` faces and ``2*m*n`` edges.

    Face ``(i, j)`` is index ``i*n + j``.  Each face owns its "right" edge
    (id ``2*f``, toward column ``j+1 mod n``) and its "down" edge (id
    ``2*f + 1``, toward row ``i+1 mod m``), so every face has exactly four
    incidence slots.  For ``m = n = 1`` both edges glue the single face to
    itself.
    """
    if m < 1 or n < 1:
        raise ValueError("grid dimensions must be >= 1")
    faces = m * n
    face_a = np.empty(2 * faces, dtype=np.int64)
    face_b = np.empty(2 * faces, dtype=np.int64)
    for i in range(m):
        for j in range(n):
            f = i * n + j
            face_a[2 * f] = f
            face_b[2 * f] = i * n + (j + 1) % n
            face_a[2 * f + 1] = f
            face_b[2 * f + 1] = ((i + 1) % m) * n + j
    return PatternComplex(face_count=faces, face_a=face_a, face_b=face_b)
