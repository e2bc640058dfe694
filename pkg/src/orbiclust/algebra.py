"""The finite-dimensional gentle algebra of a quiver with monomial relations.

Paths are stored as ``Path(source, target, arrows)`` with ``arrows`` in the
order they are traversed.  Because every relation has length two, a
concatenation vanishes exactly when the junction pair is a relation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import NoThroughPair, NonFinite, NotAnArc
from .linalg import QQ
from .orbifold import Arrow, GentleQuiver, Triangulation, quiver


@dataclass(frozen=True)
class Path:
    source: int
    target: int
    arrows: tuple = ()

    def __len__(self):
        return len(self.arrows)

    def label(self, vertices=None) -> str:
        if not self.arrows:
            v = self.source if vertices is None else vertices[self.source]
            return f"e{v}"
        return "*".join(reversed(self.arrows))


@dataclass(frozen=True)
class LocalAlgebra:
    """H = k[eps]/eps^d at one vertex."""

    vertex: int
    d: int

    @property
    def dim(self) -> int:
        return self.d


def opposite_quiver(Q: GentleQuiver) -> GentleQuiver:
    arrows = tuple(Arrow(a.label, a.target, a.source, a.triangle) for a in Q.arrows)
    relations = tuple((second, first) for first, second in Q.relations)
    return GentleQuiver(Q.vertices, Q.d, arrows, relations)


class PathAlgebra:
    """Path basis and multiplication for kQ/I with length-two monomial relations."""

    def __init__(self, Q: GentleQuiver):
        self.quiver = Q
        self._arrows = {a.label: a for a in Q.arrows}
        self._relations = set(Q.relations)
        self.paths = self._enumerate()
        self._between: dict = {}
        for p in self.paths:
            self._between.setdefault((p.source, p.target), []).append(p)

    @classmethod
    def of(cls, T: Triangulation) -> "PathAlgebra":
        return cls(quiver(T))

    def _enumerate(self) -> list:
        Q = self.quiver
        out = [Path(i, i) for i in range(Q.n)]
        frontier = [Path(a.source, a.target, (a.label,)) for a in Q.arrows]
        limit = len(Q.arrows)
        while frontier:
            out.extend(frontier)
            nxt = []
            for p in frontier:
                if len(p) > limit:
                    raise NonFinite("the quiver has an unbounded path (an unforbidden cycle)")
                for a in Q.arrows:
                    if a.source == p.target and (p.arrows[-1], a.label) not in self._relations:
                        nxt.append(Path(p.source, a.target, p.arrows + (a.label,)))
            frontier = nxt
        return out

    @property
    def n(self) -> int:
        return self.quiver.n

    @property
    def dim(self) -> int:
        return len(self.paths)

    def local_algebra(self, i: int) -> LocalAlgebra:
        return LocalAlgebra(i, self.quiver.d[i])

    def between(self, source: int, target: int) -> list:
        return self._between.get((source, target), [])

    def then(self, first: Path, second: Path) -> Path | None:
        """The path 'first, then second', or None when it vanishes."""
        if first.target != second.source:
            return None
        if first.arrows and second.arrows and (first.arrows[-1], second.arrows[0]) in self._relations:
            return None
        return Path(first.source, second.target, first.arrows + second.arrows)

    def path_from_labels(self, labels) -> Path | None:
        labels = tuple(labels)
        if not labels:
            raise ValueError("use Path(i, i) for trivial paths")
        arrows = [self._arrows[l] for l in labels]
        p = Path(arrows[0].source, arrows[0].target, (labels[0],))
        for a in arrows[1:]:
            p = self.then(p, Path(a.source, a.target, (a.label,)))
            if p is None:
                return None
        return p

    def is_closed_under_products(self) -> bool:
        """Every nonzero product of basis paths is again a basis path."""
        basis = set(self.paths)
        for p in self.paths:
            for q in self.paths:
                r = self.then(p, q)
                if r is not None and r not in basis:
                    return False
        return True

    def bimodule_dim(self, i: int, j: int) -> int:
        """dim of the span of eps_i^s a eps_j^t over arrows a: j -> i."""
        count = 0
        for a in self.quiver.arrows:
            if not a.is_loop and a.source == j and a.target == i:
                count += self.quiver.d[i] * self.quiver.d[j]
        return count

    # projective and injective modules

    def projective(self, i: int):
        """P_i = P e_i: paths starting at i, arrows acting by extension."""
        from .reps import Rep

        basis = {v: [p for p in self.paths if p.source == i and p.target == v] for v in range(self.n)}
        return self._module_from_basis(basis, lambda a, p: self.then(p, _single(a)), Rep)

    def injective(self, i: int):
        """I_i = D(e_i P): dual of the paths ending at i."""
        from .reps import Rep

        basis = {v: [p for p in self.paths if p.target == i and p.source == v] for v in range(self.n)}
        maps = {}
        for a in self.quiver.arrows:
            src, tgt = basis[a.source], basis[a.target]
            mat = QQ.zeros(len(tgt), len(src))
            pos = {q: c for c, q in enumerate(src)}
            for r, p in enumerate(tgt):
                q = self.then(_single(a), p)
                if q is not None and q in pos:
                    mat[r, pos[q]] = 1
            maps[a.label] = mat
        return Rep(self.quiver, tuple(len(basis[v]) for v in range(self.n)), maps)

    def _module_from_basis(self, basis, act, Rep):
        maps = {}
        for a in self.quiver.arrows:
            src, tgt = basis[a.source], basis[a.target]
            pos = {q: r for r, q in enumerate(tgt)}
            mat = QQ.zeros(len(tgt), len(src))
            for c, p in enumerate(src):
                q = act(a, p)
                if q is not None:
                    mat[pos[q], c] = 1
            maps[a.label] = mat
        return Rep(self.quiver, tuple(len(basis[v]) for v in range(self.n)), maps)

    @cached_property
    def opposite(self) -> "PathAlgebra":
        return PathAlgebra(opposite_quiver(self.quiver))

    def to_json(self) -> dict:
        Q = self.quiver
        return {
            "vertices": list(Q.vertices),
            "d": list(Q.d),
            "arrows": [{"label": a.label, "source": Q.vertices[a.source], "target": Q.vertices[a.target]}
                       for a in Q.arrows],
            "relations": [list(r) for r in Q.relations],
            "basis": [p.label(Q.vertices) for p in self.paths],
        }


def _single(a: Arrow) -> Path:
    return Path(a.source, a.target, (a.label,))


def theta_map(T: Triangulation, k, pair) -> Path:
    """The path of P(T) along which the new arrow j -> i of the flip at k acts.

    ``pair`` is ``(i, j)`` as arc ids.  At a pending arc the path is
    a, eps_k, b inside the triangle of k; at an ordinary arc it goes through k
    from one triangle into the other.
    """
    if not T.is_arc(k):
        raise NotAnArc(f"{k!r} is not an arc")
    i_id, j_id = pair
    Q = quiver(T)
    P = PathAlgebra(Q)
    kk = T.index(k)
    try:
        i, j = T.index(i_id), T.index(j_id)
    except NotAnArc:
        raise NoThroughPair(f"{pair} is not a pair of arcs") from None
    ins = [a for a in Q.arrows_into(kk) if a.source == j]
    outs = [b for b in Q.arrows_out_of(kk) if b.target == i]
    for a in ins:
        for b in outs:
            if T.is_pending(k):
                if a.triangle == b.triangle:
                    return P.path_from_labels((a.label, Q.loop_at(kk).label, b.label))
            elif a.triangle != b.triangle:
                return P.path_from_labels((a.label, b.label))
    raise NoThroughPair(f"no path {j_id} -> {k} -> {i_id} survives the flip at {k}")
