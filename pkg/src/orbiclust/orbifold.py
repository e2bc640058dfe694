"""Combinatorial triangulations of unpunctured orbifolds with order-2 points.

A triangle is a triple of side ids listed clockwise as seen from inside.  A
pending arc cuts out a monogon around one orbifold point, so it borders a
single triangle.  Whenever side ``t`` follows side ``s`` clockwise and both
are arcs, the quiver has an arrow ``t -> s`` and ``b[s][t] > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable

from .cluster import ExchangeMatrix
from .errors import InputError, InvalidTriangulation, NotAnArc


@dataclass(frozen=True)
class Arc:
    id: Hashable
    pending: bool = False


@dataclass(frozen=True)
class Triangulation:
    arcs: tuple
    boundary: tuple
    triangles: tuple
    orbifold_points: int | None = None

    def __post_init__(self):
        arcs = tuple(a if isinstance(a, Arc) else Arc(*a) for a in self.arcs)
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "boundary", tuple(self.boundary))
        object.__setattr__(self, "triangles", tuple(tuple(t) for t in self.triangles))

    @property
    def n(self) -> int:
        return len(self.arcs)

    @property
    def arc_ids(self) -> tuple:
        return tuple(a.id for a in self.arcs)

    def index(self, arc_id) -> int:
        for i, a in enumerate(self.arcs):
            if a.id == arc_id:
                return i
        raise NotAnArc(f"{arc_id!r} is not an arc")

    def is_arc(self, side) -> bool:
        return any(a.id == side for a in self.arcs)

    def is_pending(self, side) -> bool:
        return any(a.id == side and a.pending for a in self.arcs)

    @property
    def symmetrizer(self) -> tuple:
        return tuple(2 if a.pending else 1 for a in self.arcs)

    def triangles_of(self, arc_id) -> list:
        """Positions (triangle index, slot) where the side occurs."""
        return [(t, s) for t, tri in enumerate(self.triangles) for s, side in enumerate(tri) if side == arc_id]

    def canonical_triangles(self) -> tuple:
        """Triangle multiset with each triple rotated to a fixed starting side."""
        def rot(tri):
            options = [tri[i:] + tri[:i] for i in range(3)]
            return min(options, key=lambda t: [repr(s) for s in t])
        return tuple(sorted((rot(t) for t in self.triangles), key=lambda t: [repr(s) for s in t]))

    def same_as(self, other: "Triangulation") -> bool:
        return (self.arcs == other.arcs and set(self.boundary) == set(other.boundary)
                and self.canonical_triangles() == other.canonical_triangles())

    def to_json(self) -> dict:
        out = {
            "arcs": [{"id": a.id, "pending": a.pending} for a in self.arcs],
            "boundary": list(self.boundary),
            "triangles": [list(t) for t in self.triangles],
        }
        if self.orbifold_points is not None:
            out["orbifold_points"] = self.orbifold_points
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Triangulation":
        try:
            arcs = [Arc(a["id"], bool(a.get("pending", False))) for a in data["arcs"]]
            T = cls(tuple(arcs), tuple(data.get("boundary", [])),
                    tuple(tuple(t) for t in data["triangles"]), data.get("orbifold_points"))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed triangulation JSON: {exc}") from None
        return T


def validate(T: Triangulation) -> list:
    """List of invariant violations (empty when T is valid)."""
    problems = []
    ids = [a.id for a in T.arcs]
    seen = set()
    for side in ids + list(T.boundary):
        if side in seen:
            problems.append(f"duplicate id {side!r}")
        seen.add(side)
    counts: dict = {}
    for t, tri in enumerate(T.triangles):
        if len(tri) != 3:
            problems.append(f"triangle {t} does not have three sides")
            continue
        if len(set(tri)) < 3:
            problems.append(f"triangle {t} is self-folded")
        for side in tri:
            if side not in seen:
                problems.append(f"triangle {t} uses unknown side {side!r}")
            counts[side] = counts.get(side, 0) + 1
    for a in T.arcs:
        c = counts.get(a.id, 0)
        want = 1 if a.pending else 2
        if c != want:
            kind = "pending arc" if a.pending else "arc"
            problems.append(f"arc multiplicity: {kind} {a.id!r} occurs {c} times, expected {want}")
    for b in T.boundary:
        c = counts.get(b, 0)
        if c != 1:
            problems.append(f"boundary multiplicity: {b!r} occurs {c} times, expected 1")
    pending = sum(a.pending for a in T.arcs)
    if T.orbifold_points is not None and pending != T.orbifold_points:
        problems.append(f"{pending} pending arcs but {T.orbifold_points} orbifold points")
    return problems


def require_valid(T: Triangulation) -> None:
    problems = validate(T)
    if problems:
        raise InvalidTriangulation("; ".join(problems))


def _rotate_to(tri, side):
    i = tri.index(side)
    return tri[i:] + tri[:i]


def flip(T: Triangulation, k) -> Triangulation:
    """Flip at arc ``k``; flipped triangles keep their list positions."""
    if not T.is_arc(k):
        raise NotAnArc(f"{k!r} is not an arc of the triangulation")
    require_valid(T)
    where = T.triangles_of(k)
    tris = list(T.triangles)
    if T.is_pending(k):
        (t, _), = where
        _, a, b = _rotate_to(tris[t], k)
        tris[t] = (k, b, a)
    else:
        (t1, _), (t2, _) = where
        _, a, b = _rotate_to(tris[t1], k)
        _, c, d = _rotate_to(tris[t2], k)
        tris[t1] = (k, b, c)
        tris[t2] = (k, d, a)
    return Triangulation(T.arcs, T.boundary, tuple(tris), T.orbifold_points)


def flip_sequence(T: Triangulation, arcs: Iterable) -> Triangulation:
    for k in arcs:
        T = flip(T, k)
    return T


def consecutive_arc_pairs(T: Triangulation):
    """Yield (triangle, s, t) for each clockwise-consecutive pair of arc sides."""
    for ti, tri in enumerate(T.triangles):
        for m in range(3):
            s, t = tri[m], tri[(m + 1) % 3]
            if T.is_arc(s) and T.is_arc(t):
                yield ti, s, t


def b_matrix(T: Triangulation, check: bool = True) -> ExchangeMatrix:
    if check:
        require_valid(T)
    n = T.n
    d = T.symmetrizer
    b = [[0] * n for _ in range(n)]
    for _, s, t in consecutive_arc_pairs(T):
        i, j = T.index(s), T.index(t)
        b[i][j] += d[j]
        b[j][i] -= d[i]
    return ExchangeMatrix(b, d)


@dataclass(frozen=True)
class Arrow:
    label: str
    source: int
    target: int
    triangle: int | None = None

    @property
    def is_loop(self) -> bool:
        return self.source == self.target


@dataclass(frozen=True, eq=False)
class GentleQuiver:
    """Quiver with relations of a triangulation.

    ``relations`` lists composable pairs ``(first, second)`` of arrow labels
    whose composite (first followed by second) vanishes.  Equality ignores
    the order of arrows and the triangle positions they came from, since a
    double flip may swap the two triangles around an arc.
    """

    vertices: tuple
    d: tuple
    arrows: tuple
    relations: tuple

    def _key(self):
        return (self.vertices, self.d, frozenset((a.label, a.source, a.target) for a in self.arrows),
                frozenset(self.relations))

    def __eq__(self, other):
        return isinstance(other, GentleQuiver) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def n(self) -> int:
        return len(self.vertices)

    def arrow(self, label: str) -> Arrow:
        for a in self.arrows:
            if a.label == label:
                return a
        raise KeyError(label)

    @property
    def labels(self) -> tuple:
        return tuple(a.label for a in self.arrows)

    def loop_at(self, i: int) -> Arrow | None:
        for a in self.arrows:
            if a.is_loop and a.source == i:
                return a
        return None

    def ordinary_arrows(self) -> tuple:
        return tuple(a for a in self.arrows if not a.is_loop)

    def arrows_into(self, i: int) -> list:
        return [a for a in self.arrows if a.target == i and not a.is_loop]

    def arrows_out_of(self, i: int) -> list:
        return [a for a in self.arrows if a.source == i and not a.is_loop]

    def vanishes(self, first: str, second: str) -> bool:
        return (first, second) in set(self.relations)

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "d": list(self.d),
            "arrows": [{"label": a.label, "source": self.vertices[a.source],
                        "target": self.vertices[a.target]} for a in self.arrows],
            "relations": [list(r) for r in self.relations],
        }


def loop_label(arc_id) -> str:
    return f"eps{arc_id}"


def quiver(T: Triangulation, check: bool = True) -> GentleQuiver:
    if check:
        require_valid(T)
    raw = []
    for ti, s, t in consecutive_arc_pairs(T):
        raw.append((T.index(t), T.index(s), ti))
    parallel: dict = {}
    for src, tgt, _ in raw:
        parallel[(src, tgt)] = parallel.get((src, tgt), 0) + 1
    ids = T.arc_ids
    arrows = []
    for src, tgt, ti in raw:
        label = f"{ids[src]}->{ids[tgt]}"
        if parallel[(src, tgt)] > 1:
            label += f"@{ti}"
        arrows.append(Arrow(label, src, tgt, ti))
    relations = []
    by_triangle: dict = {}
    for a in arrows:
        by_triangle.setdefault(a.triangle, []).append(a)
    for group in by_triangle.values():
        if len(group) == 3:
            for a in group:
                for b in group:
                    if a.target == b.source and a is not b:
                        relations.append((a.label, b.label))
    for i, arc in enumerate(T.arcs):
        if arc.pending:
            eps = loop_label(arc.id)
            arrows.append(Arrow(eps, i, i, None))
            relations.append((eps, eps))
    return GentleQuiver(ids, T.symmetrizer, tuple(arrows), tuple(relations))
