"""Representations of the gentle algebra and decorated representations.

A ``Rep`` stores one vector space dimension per vertex and one rational
matrix per arrow, loops included.  Matrices act on column vectors: the map of
an arrow ``a: j -> i`` is ``dims[i] x dims[j]``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import flint

from . import linalg as la
from .errors import AlgebraMismatch, InputError, InvalidRepresentation
from .linalg import QQ
from .orbifold import GentleQuiver


class Rep:
    __slots__ = ("quiver", "dims", "maps")

    def __init__(self, quiver: GentleQuiver, dims: Sequence[int], maps: dict | None = None):
        self.quiver = quiver
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != quiver.n:
            raise InvalidRepresentation(f"expected {quiver.n} dimensions, got {len(self.dims)}")
        maps = dict(maps or {})
        full = {}
        for a in quiver.arrows:
            shape = (self.dims[a.target], self.dims[a.source])
            m = maps.pop(a.label, None)
            if m is None:
                m = QQ.zeros(*shape)
            elif not isinstance(m, flint.fmpq_mat):
                if len(m) != shape[0] or any(len(r) != shape[1] for r in m):
                    raise InvalidRepresentation(f"map {a.label} does not have shape {shape}")
                m = QQ.from_rows(m, shape[1]) if shape[0] else QQ.zeros(0, shape[1])
            if (m.nrows(), m.ncols()) != shape:
                raise InvalidRepresentation(f"map {a.label} has shape {(m.nrows(), m.ncols())}, expected {shape}")
            full[a.label] = m
        if maps:
            raise InvalidRepresentation(f"unknown arrows {sorted(maps)}")
        self.maps = full

    # construction
    @classmethod
    def zero(cls, quiver: GentleQuiver) -> "Rep":
        return cls(quiver, [0] * quiver.n)

    @classmethod
    def simple(cls, quiver: GentleQuiver, i: int) -> "Rep":
        dims = [0] * quiver.n
        dims[i] = 1
        return cls(quiver, dims)

    @classmethod
    def local_free(cls, quiver: GentleQuiver, i: int, rank: int = 1, excess: int = 0) -> "Rep":
        """H_i^rank ⊕ S_i^excess concentrated at vertex i (E_i for rank 1)."""
        d = quiver.d[i]
        dim = d * rank + excess
        dims = [0] * quiver.n
        dims[i] = dim
        maps = {}
        loop = quiver.loop_at(i)
        if loop is not None:
            eps = QQ.zeros(dim, dim)
            for r in range(rank):
                eps[2 * r + 1, 2 * r] = 1
            maps[loop.label] = eps
        return cls(quiver, dims, maps)

    @property
    def n(self) -> int:
        return self.quiver.n

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def map(self, label: str):
        return self.maps[label]

    def eps(self, i: int):
        loop = self.quiver.loop_at(i)
        if loop is None:
            return QQ.zeros(self.dims[i], self.dims[i])
        return self.maps[loop.label]

    def path_map(self, labels: Iterable[str], source: int):
        """Matrix of a walk along the given arrows starting at ``source``."""
        m = QQ.identity(self.dims[source])
        for l in labels:
            m = self.maps[l] * m
        return m

    def __eq__(self, other):
        return (isinstance(other, Rep) and self.quiver == other.quiver and self.dims == other.dims
                and all(self.maps[l] == other.maps[l] for l in self.maps))

    def __hash__(self):
        return hash((self.dims, tuple(tuple(m.entries()) for m in self.maps.values())))

    def __repr__(self):
        return f"Rep(dims={self.dims})"

    # derived modules
    def restrict_to(self, bases: Sequence) -> "Rep":
        """Submodule spanned by the given per-vertex column bases (must be stable)."""
        maps = {}
        for a in self.quiver.arrows:
            src, tgt = bases[a.source], bases[a.target]
            maps[a.label] = la.coordinates(tgt, self.maps[a.label] * src) if src.ncols() else QQ.zeros(tgt.ncols(), 0)
        return Rep(self.quiver, [b.ncols() for b in bases], maps)

    def quotient_by(self, bases: Sequence) -> "Rep":
        """Quotient module by the submodule spanned by the per-vertex bases."""
        quots = [la.QuotientSpace(self.dims[v], bases[v]) for v in range(self.n)]
        maps = {}
        for a in self.quiver.arrows:
            qs, qt = quots[a.source], quots[a.target]
            if qs.dim and qt.dim:
                maps[a.label] = qt.project(self.maps[a.label] * qs.comp)
            else:
                maps[a.label] = QQ.zeros(qt.dim, qs.dim)
        return Rep(self.quiver, [q.dim for q in quots], maps)

    def change_basis(self, mats: Sequence) -> "Rep":
        """Conjugate by invertible per-vertex matrices (new = P M P^-1)."""
        inv = [la.inverse(m) for m in mats]
        maps = {a.label: mats[a.target] * self.maps[a.label] * inv[a.source] for a in self.quiver.arrows}
        return Rep(self.quiver, self.dims, maps)

    def dual(self, opposite: GentleQuiver) -> "Rep":
        """D M over the opposite quiver (transposed matrices)."""
        return Rep(opposite, self.dims, {l: m.transpose() for l, m in self.maps.items()})

    def to_json(self) -> dict:
        verts = self.quiver.vertices
        out = {"vertices": {}, "arrows": {}}
        for i, v in enumerate(verts):
            entry = {"dim": self.dims[i]}
            loop = self.quiver.loop_at(i)
            if loop is not None:
                entry["eps"] = matrix_to_json(self.maps[loop.label])
            out["vertices"][str(v)] = entry
        for a in self.quiver.ordinary_arrows():
            out["arrows"][a.label] = matrix_to_json(self.maps[a.label])
        return out

    @classmethod
    def from_json(cls, quiver: GentleQuiver, data: dict) -> "Rep":
        try:
            verts = {str(v): i for i, v in enumerate(quiver.vertices)}
            dims = [0] * quiver.n
            maps = {}
            for name, entry in data.get("vertices", {}).items():
                if name not in verts:
                    raise InvalidRepresentation(f"unknown vertex {name!r}")
                i = verts[name]
                dims[i] = int(entry["dim"])
                if "eps" in entry:
                    loop = quiver.loop_at(i)
                    if loop is None:
                        raise InvalidRepresentation(f"vertex {name!r} has no loop")
                    maps[loop.label] = matrix_from_json(entry["eps"], dims[i], dims[i])
            for label, rows in data.get("arrows", {}).items():
                try:
                    a = quiver.arrow(label)
                except KeyError:
                    raise InvalidRepresentation(f"unknown arrow {label!r}") from None
                maps[label] = matrix_from_json(rows, dims[a.target], dims[a.source])
            return cls(quiver, dims, maps)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InvalidRepresentation(f"malformed module JSON: {exc}") from None


def matrix_to_json(m) -> list:
    return [[_fmt(v) for v in row] for row in la.fraction_rows(m)]


def _fmt(v) -> str | int:
    v = Fraction(v)
    return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def matrix_from_json(rows, nrows: int, ncols: int):
    rows = [[Fraction(str(v)) for v in r] for r in rows]
    if len(rows) != nrows or any(len(r) != ncols for r in rows):
        raise InvalidRepresentation(f"matrix does not have shape {(nrows, ncols)}")
    return QQ.matrix(nrows, ncols, [v for r in rows for v in r])


@dataclass
class DecoratedRep:
    """A module with one H_i-module decoration (free rank, socle excess) per vertex."""

    module: Rep
    decoration: tuple = field(default=())

    def __post_init__(self):
        n = self.module.n
        dec = tuple(tuple(int(x) for x in v) for v in self.decoration) or ((0, 0),) * n
        if len(dec) != n or any(len(v) != 2 or min(v) < 0 for v in dec):
            raise InvalidRepresentation("decoration needs a nonnegative (rank, excess) pair per vertex")
        if any(b and self.module.quiver.d[i] == 1 for i, (_, b) in enumerate(dec)):
            raise InvalidRepresentation("socle excess only makes sense at pending vertices")
        self.decoration = dec

    @classmethod
    def negative(cls, quiver: GentleQuiver, i: int, excess: bool = False) -> "DecoratedRep":
        """(0, H_i), or (0, S_i) when ``excess`` is set."""
        dec = [(0, 0)] * quiver.n
        dec[i] = (0, 1) if excess and quiver.d[i] == 2 else (1, 0)
        return cls(Rep.zero(quiver), tuple(dec))

    @property
    def quiver(self) -> GentleQuiver:
        return self.module.quiver

    def decoration_rank(self, i: int) -> int:
        return self.decoration[i][0]

    def is_locally_free(self) -> bool:
        return is_locally_free(self.module) and all(b == 0 for _, b in self.decoration)

    def to_json(self) -> dict:
        out = {"module": self.module.to_json()}
        out["decoration"] = {str(v): list(self.decoration[i]) for i, v in enumerate(self.quiver.vertices)
                             if any(self.decoration[i])}
        return out

    @classmethod
    def from_json(cls, quiver: GentleQuiver, data: dict) -> "DecoratedRep":
        if "module" not in data:
            return cls(Rep.from_json(quiver, data))
        verts = {str(v): i for i, v in enumerate(quiver.vertices)}
        dec = [(0, 0)] * quiver.n
        for name, pair in data.get("decoration", {}).items():
            if name not in verts:
                raise InvalidRepresentation(f"unknown vertex {name!r} in decoration")
            dec[verts[name]] = tuple(pair)
        return cls(Rep.from_json(quiver, data["module"]), tuple(dec))


def validate_rep(M: Rep) -> list:
    """Violated relations as human-readable strings (empty when valid)."""
    problems = []
    Q = M.quiver
    for i in range(Q.n):
        if Q.d[i] == 1 and Q.loop_at(i) is not None:
            problems.append(f"vertex {Q.vertices[i]} has a loop but d = 1")
    for first, second in Q.relations:
        a, b = Q.arrow(first), Q.arrow(second)
        prod = M.maps[second] * M.maps[first]
        if not la.is_zero(prod):
            what = f"{first}^2" if first == second else f"{second}*{first}"
            problems.append(f"relation {what} = 0 violated")
    return problems


def require_valid(M: Rep) -> None:
    problems = validate_rep(M)
    if problems:
        raise InvalidRepresentation("; ".join(problems))


def local_structure(M: Rep, i: int) -> tuple:
    """(free rank, socle excess) of M(i) as an H_i-module."""
    if M.quiver.d[i] == 1:
        return (M.dims[i], 0)
    r = la.rank(M.eps(i))
    return (r, M.dims[i] - 2 * r)


def is_locally_free(M: Rep) -> bool:
    return all(local_structure(M, i)[1] == 0 for i in range(M.n))


def rank_vector(M: Rep) -> tuple:
    return tuple(local_structure(M, i)[0] for i in range(M.n))


def direct_sum(reps: Sequence[Rep]) -> Rep:
    reps = list(reps)
    if not reps:
        raise InputError("direct_sum needs at least one module")
    Q = reps[0].quiver
    for R in reps:
        if R.quiver != Q:
            raise AlgebraMismatch("modules over different quivers")
    dims = [sum(R.dims[i] for R in reps) for i in range(Q.n)]
    maps = {a.label: la.block_diag([R.maps[a.label] for R in reps]) for a in Q.arrows}
    return Rep(Q, dims, maps)


def _same_algebra(M: Rep, N: Rep):
    if M.quiver != N.quiver:
        raise AlgebraMismatch("modules over different quivers")


def hom_space(M: Rep, N: Rep) -> tuple:
    """(dimension, basis) of Hom(M, N); each basis element is a list of per-vertex matrices."""
    _same_algebra(M, N)
    Q = M.quiver
    shapes = [(N.dims[i], M.dims[i]) for i in range(Q.n)]
    system = la.MatrixSystem(shapes)
    for a in Q.arrows:
        out = (N.dims[a.target], M.dims[a.source])
        if out[0] == 0 or out[1] == 0:
            continue
        # phi_target M(a) - N(a) phi_source = 0
        system.add([(a.target, None, M.maps[a.label]), (a.source, -N.maps[a.label], None)], out)
    basis = system.solution_space()
    return len(basis), basis


def hom_dim(M: Rep, N: Rep) -> int:
    return hom_space(M, N)[0]


def _combine(basis, coeffs):
    out = [QQ.zeros(m.nrows(), m.ncols()) for m in basis[0]]
    for c, phi in zip(coeffs, basis):
        if c:
            out = [o + m * c for o, m in zip(out, phi)]
    return out


@dataclass
class IsoResult:
    found: bool
    witness: list | None = None
    definitive: bool = True

    def __bool__(self):
        return self.found


def is_isomorphic(M: Rep, N: Rep, trials: int = 200, seed: int = 0) -> IsoResult:
    """Search Hom(M, N) for an invertible element.

    A negative answer is definitive only when dimensions differ or Hom is too
    small to contain an isomorphism; otherwise it means none was found.
    """
    _same_algebra(M, N)
    if M.dims != N.dims:
        return IsoResult(False)
    if M.total_dim == 0:
        return IsoResult(True, [QQ.zeros(0, 0) for _ in M.dims])
    _, basis = hom_space(M, N)
    if not basis:
        return IsoResult(False)

    def invertible(phi):
        return all(la.is_invertible(m) for m in phi)

    for phi in basis:
        if invertible(phi):
            return IsoResult(True, phi)
    rng = random.Random(seed)
    for _ in range(trials):
        phi = _combine(basis, [rng.randint(-3, 3) for _ in basis])
        if invertible(phi):
            return IsoResult(True, phi)
    return IsoResult(False, None, definitive=False)


def endomorphism_matrix(M: Rep, phi) -> "flint.fmpq_mat":
    return la.block_diag(phi)


def _split_by(M: Rep, phi) -> list | None:
    """Split M along the primary decomposition of an endomorphism, if nontrivial."""
    total = la.block_diag(phi)
    if total.nrows() == 0:
        return None
    charpoly = total.charpoly()
    _, factors = flint.fmpq_poly(charpoly.coeffs()).factor()
    if len(factors) < 2:
        return None
    pieces = []
    for f, e in factors:
        # kernel of f(phi)^e at every vertex
        bases = []
        for m in phi:
            acc = QQ.zeros(m.nrows(), m.ncols())
            power = QQ.identity(m.nrows())
            for c in f.coeffs():
                acc += power * flint.fmpq(c)
                power = power * m
            mat = QQ.identity(m.nrows())
            for _ in range(e):
                mat = mat * acc
            bases.append(la.kernel(mat) if m.nrows() else QQ.zeros(0, 0))
        pieces.append(M.restrict_to(bases))
    return pieces


def indecomposable_summands(M: Rep, trials: int = 20, seed: int = 0) -> list:
    """Decompose M via idempotents found in End(M).

    Basis elements of End(M), then a few seeded random combinations, are
    split by the factorisation of their characteristic polynomial.  A piece
    none of which splits is reported as indecomposable.
    """
    if M.total_dim == 0:
        return []
    _, basis = hom_space(M, M)
    candidates = list(basis)
    rng = random.Random(seed)
    for _ in range(trials):
        candidates.append(_combine(basis, [rng.randint(-3, 3) for _ in basis]))
    for phi in candidates:
        pieces = _split_by(M, phi)
        if pieces:
            out = []
            for piece in pieces:
                out.extend(indecomposable_summands(piece, trials, seed))
            return sorted(out, key=lambda R: (R.dims, repr(sorted(str(m) for m in R.maps.values()))))
    return [M]
