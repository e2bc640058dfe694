"""Skew-symmetrizable cluster patterns.

Seeds come in two flavours.  With principal coefficients every cluster
variable is a Laurent polynomial in ``x1..xn, y1..yn`` (polynomial in the
``y``), and the coefficient tuple is stored as tropical exponent vectors over
the ``y``.  Coefficient-free seeds live in ``x1..xn`` only.

Indices are 0-based throughout the Python API.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .errors import (
    DivNotExact,
    IndexOutOfRange,
    InputError,
    NonLaurentResult,
    NonPolynomialResult,
    NotHomogeneous,
    NotPolynomial,
    NotSkewSymmetrizable,
)
from .laurent import IntPoly, LaurentPoly, parse, tropical_eval

PRINCIPAL = "principal"
COEFFICIENT_FREE = "coefficient-free"
MODES = (PRINCIPAL, COEFFICIENT_FREE)


def pos(v: int) -> int:
    return v if v > 0 else 0


def x_names(n: int) -> tuple:
    return tuple(f"x{i + 1}" for i in range(n))


def y_names(n: int) -> tuple:
    return tuple(f"y{i + 1}" for i in range(n))


def find_symmetrizer(rows) -> tuple:
    """Smallest positive integer D with D·B skew-symmetric."""
    n = len(rows)
    d: list = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        comp = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if rows[i][j] == 0 and rows[j][i] == 0:
                    continue
                if rows[i][j] == 0 or rows[j][i] == 0 or (rows[i][j] > 0) == (rows[j][i] > 0):
                    raise NotSkewSymmetrizable(f"entries ({i},{j}) and ({j},{i}) are not sign-opposite")
                # d_i b_ij = -d_j b_ji
                want = d[i] * rows[i][j] / -rows[j][i]
                if d[j] is None:
                    d[j] = want
                    stack.append(j)
                    comp.append(j)
                elif d[j] != want:
                    raise NotSkewSymmetrizable("no consistent symmetrizer")
        scale = lcm(*(d[i].denominator for i in comp))
        for i in comp:
            d[i] *= scale
    return tuple(int(v) for v in d)


@dataclass(frozen=True)
class ExchangeMatrix:
    """Integer matrix B together with a diagonal symmetrizer D (DB skew)."""

    rows: tuple
    symmetrizer: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise InputError("exchange matrix must be square")
        sym = tuple(int(v) for v in self.symmetrizer)
        object.__setattr__(self, "symmetrizer", sym)
        if len(sym) != n or any(v <= 0 for v in sym):
            raise NotSkewSymmetrizable("symmetrizer must be n positive integers")
        for i in range(n):
            for j in range(n):
                if sym[i] * rows[i][j] != -sym[j] * rows[j][i]:
                    raise NotSkewSymmetrizable(f"DB is not skew-symmetric at ({i},{j})")

    @classmethod
    def from_rows(cls, rows, symmetrizer=None) -> "ExchangeMatrix":
        rows = [list(r) for r in rows]
        if symmetrizer is None:
            symmetrizer = find_symmetrizer(rows)
        return cls(rows, symmetrizer)

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j) -> tuple:
        return tuple(r[j] for r in self.rows)

    def to_lists(self):
        return [list(r) for r in self.rows]

    def mutate(self, k: int) -> "ExchangeMatrix":
        return mutate_matrix(self, k)

    def permuted(self, perm: Sequence[int]) -> "ExchangeMatrix":
        """Matrix with rows and columns reordered so new index a is old perm[a]."""
        rows = [[self.rows[p][q] for q in perm] for p in perm]
        return ExchangeMatrix(rows, [self.symmetrizer[p] for p in perm])

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(v) for v in r) + "]" for r in self.rows) + "]"


def _check_index(k, n):
    if not (isinstance(k, int) and 0 <= k < n):
        raise IndexOutOfRange(f"direction {k} out of range for rank {n}")


def mutate_matrix(B: ExchangeMatrix, k: int) -> ExchangeMatrix:
    """Matrix mutation in direction k."""
    n = B.n
    _check_index(k, n)
    b = B.rows
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == k or j == k:
                out[i][j] = -b[i][j]
            else:
                out[i][j] = b[i][j] + pos(-b[i][k]) * b[k][j] + b[i][k] * pos(b[k][j])
    return ExchangeMatrix(out, B.symmetrizer)


@dataclass(frozen=True)
class Seed:
    cluster: tuple
    coeffs: tuple
    matrix: ExchangeMatrix
    mode: str = PRINCIPAL

    def __post_init__(self):
        if self.mode not in MODES:
            raise InputError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "cluster", tuple(self.cluster))
        object.__setattr__(self, "coeffs", tuple(tuple(int(v) for v in c) for c in self.coeffs))
        n = self.matrix.n
        if len(self.cluster) != n or len(self.coeffs) != n:
            raise InputError("cluster and coefficient tuples must have length n")
        if self.mode == COEFFICIENT_FREE and any(any(c) for c in self.coeffs):
            raise InputError("coefficient-free seeds carry trivial coefficients")

    @classmethod
    def initial(cls, matrix: ExchangeMatrix, mode: str = PRINCIPAL) -> "Seed":
        n = matrix.n
        ring = ring_variables(n, mode)
        cluster = [LaurentPoly.gen(ring, f"x{i + 1}") for i in range(n)]
        if mode == PRINCIPAL:
            coeffs = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        else:
            coeffs = [(0,) * n for _ in range(n)]
        return cls(tuple(cluster), tuple(coeffs), matrix, mode)

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def variables(self) -> tuple:
        return ring_variables(self.n, self.mode)

    def mutate(self, k: int) -> "Seed":
        return mutate_seed(self, k)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "B": self.matrix.to_lists(),
            "D": list(self.matrix.symmetrizer),
            "mode": self.mode,
            "cluster": [str(x) for x in self.cluster],
            "coeffs": [list(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Seed":
        try:
            matrix = ExchangeMatrix.from_rows(data["B"], data.get("D"))
            mode = data.get("mode", PRINCIPAL)
            n = matrix.n
            if "n" in data and data["n"] != n:
                raise InputError("n does not match the matrix size")
            if "cluster" not in data:
                return cls.initial(matrix, mode)
            ring = ring_variables(n, mode)
            cluster = [parse(s, ring) for s in data["cluster"]]
            coeffs = data.get("coeffs") or Seed.initial(matrix, mode).coeffs
            return cls(tuple(cluster), tuple(tuple(c) for c in coeffs), matrix, mode)
        except KeyError as exc:
            raise InputError(f"seed JSON is missing {exc}") from None


def ring_variables(n: int, mode: str) -> tuple:
    return x_names(n) + y_names(n) if mode == PRINCIPAL else x_names(n)


def mutate_seed(seed: Seed, k: int) -> Seed:
    """Seed mutation; the new cluster variable must divide out exactly."""
    n = seed.n
    _check_index(k, n)
    b = seed.matrix.rows
    ring = seed.variables
    one = LaurentPoly.constant(ring, 1)
    plus, minus = one, one
    for i in range(n):
        if b[i][k] > 0:
            plus = plus * seed.cluster[i] ** b[i][k]
        elif b[i][k] < 0:
            minus = minus * seed.cluster[i] ** (-b[i][k])
    ck = seed.coeffs[k]
    if seed.mode == PRINCIPAL:
        # p/(p ⊕ 1) = y^[c]+ and 1/(p ⊕ 1) = y^[-c]+ in Trop(y)
        ypos = LaurentPoly.monomial(ring, (0,) * n + tuple(pos(c) for c in ck))
        yneg = LaurentPoly.monomial(ring, (0,) * n + tuple(pos(-c) for c in ck))
        numerator = ypos * plus + yneg * minus
    else:
        numerator = plus + minus
    try:
        new_var = numerator.div_exact(seed.cluster[k])
    except DivNotExact as exc:
        raise NonLaurentResult(f"exchange relation at {k} is not Laurent") from exc
    cluster = list(seed.cluster)
    cluster[k] = new_var
    coeffs = []
    for i in range(n):
        if i == k:
            coeffs.append(tuple(-c for c in ck))
        else:
            bki = b[k][i]
            coeffs.append(tuple(ci + pos(bki) * c - bki * min(c, 0) for ci, c in zip(seed.coeffs[i], ck)))
    return Seed(tuple(cluster), tuple(coeffs), mutate_matrix(seed.matrix, k), seed.mode)


# F-polynomials, g-vectors, h-vectors

def extract_f_polynomial(X: LaurentPoly) -> IntPoly:
    """Set every x to 1 in a principal-coefficient cluster variable."""
    xs = [v for v in X.variables if v.startswith("x")]
    F = X.specialize({v: 1 for v in xs})
    if not F.is_polynomial():
        raise NotPolynomial(f"{X} does not specialise to a polynomial in y")
    return IntPoly.from_laurent(F)


def extract_g_vector(X: LaurentPoly, B: ExchangeMatrix) -> tuple:
    """Common degree under deg x_i = e_i, deg y_j = -(column j of the initial B)."""
    n = B.n
    if len(X.variables) != 2 * n:
        raise InputError("g-vectors need principal-coefficient variables")
    degrees = set()
    for e, _ in X.items():
        xs, ys = e[:n], e[n:]
        degrees.add(tuple(xs[i] - sum(B[i, j] * ys[j] for j in range(n)) for i in range(n)))
    if len(degrees) != 1:
        raise NotHomogeneous(f"{X} has degrees {sorted(degrees)}")
    return degrees.pop()


def cluster_h_vector(F: LaurentPoly, B: ExchangeMatrix) -> tuple:
    """Tropical evaluation at y_i -> x_i^-1 prod_{j != i} x_j^[-b_ji]+."""
    n = B.n
    bindings = {}
    for i in range(n):
        vec = [pos(-B[j, i]) if j != i else -1 for j in range(n)]
        bindings[f"y{i + 1}"] = vec
    return tropical_eval(F, bindings, n)


def yhat(B: ExchangeMatrix, mode: str = PRINCIPAL) -> list:
    """The substitution y_i -> (y_i) prod_j x_j^b_ji as Laurent monomials."""
    n = B.n
    ring = ring_variables(n, mode)
    out = []
    for i in range(n):
        e = [B[j, i] for j in range(n)]
        if mode == PRINCIPAL:
            e += [1 if j == i else 0 for j in range(n)]
        out.append(LaurentPoly.monomial(ring, e))
    return out


def reconstruct(g: Sequence[int], F: LaurentPoly, B: ExchangeMatrix, mode: str = PRINCIPAL) -> LaurentPoly:
    """x^g · F(yhat)."""
    n = B.n
    ring = ring_variables(n, mode)
    bindings = dict(zip(y_names(n), yhat(B, mode)))
    prefactor = LaurentPoly.monomial(ring, list(g) + ([0] * n if mode == PRINCIPAL else []))
    return prefactor * F.substitute(bindings, ring)


def g_matrix(seed: Seed, initial: ExchangeMatrix) -> list:
    return [extract_g_vector(x, initial) for x in seed.cluster]


# the F recurrence across one edge

def substitute_mutated_y(F: LaurentPoly, B: ExchangeMatrix, k: int):
    """F(y') with y'_k = 1/y_k and y'_i = y_i y_k^[b_ki]+ (1 + y_k)^-b_ki.

    Returns ``(numerator, power)`` with F(y') = numerator / (1 + y_k)^power.
    """
    n = B.n
    ys = y_names(n)
    terms = list(F.items())
    if not terms:
        return LaurentPoly(ys), 0
    shifts = []
    for e, _ in terms:
        shifts.append(sum(-B[k, i] * e[i] for i in range(n) if i != k))
    top = max(0, *(-s for s in shifts))
    one_plus = LaurentPoly(ys, {(0,) * n: 1, tuple(1 if j == k else 0 for j in range(n)): 1})
    numerator = LaurentPoly(ys)
    for (e, c), s in zip(terms, shifts):
        mono = [0] * n
        for i in range(n):
            if i == k:
                mono[k] -= e[k]
            else:
                mono[i] += e[i]
                mono[k] += pos(B[k, i]) * e[i]
        numerator = numerator + LaurentPoly.monomial(ys, mono, c) * one_plus ** (s + top)
    return numerator, top


def f_previous_root(F_next: LaurentPoly, h_next_k: int, h_k: int, B: ExchangeMatrix, k: int) -> IntPoly:
    """Solve (y_k+1)^h_k F = (y'_k+1)^h'_k F'(y') for F, with B the matrix at the old root."""
    n = B.n
    ys = y_names(n)
    F_next = F_next.embed(ys) if F_next.variables != ys else F_next
    numerator, power = substitute_mutated_y(F_next, B, k)
    # (y'_k + 1)^h' = (1 + y_k)^h' y_k^-h'
    yk = tuple(1 if j == k else 0 for j in range(n))
    numerator = numerator * LaurentPoly.monomial(ys, [-h_next_k * v for v in yk])
    one_plus = LaurentPoly(ys, {(0,) * n: 1, yk: 1})
    excess = h_next_k - h_k - power
    try:
        if excess >= 0:
            result = numerator * one_plus ** excess
        else:
            result = numerator.div_exact(one_plus ** (-excess))
    except DivNotExact as exc:
        raise NonPolynomialResult("F recurrence does not clear its denominator") from exc
    if not result.is_polynomial():
        raise NonPolynomialResult(f"F recurrence produced a non-polynomial {result}")
    return IntPoly.from_laurent(result)


def g_previous_root(g_next: Sequence[int], h_k: int, B: ExchangeMatrix, k: int) -> tuple:
    """Invert the g recurrence: recover g at the old root from g' at the new one."""
    n = B.n
    gk = -g_next[k]
    return tuple(gk if j == k else g_next[j] - pos(B[j, k]) * gk + B[j, k] * h_k for j in range(n))


# patterns

def reduce_address(address: Iterable[int]) -> tuple:
    out: list = []
    for k in address:
        if out and out[-1] == k:
            out.pop()
        else:
            out.append(k)
    return tuple(out)


@dataclass(frozen=True)
class PatternNode:
    address: tuple
    seed: Seed


class ClusterPattern:
    """Seeds attached to the n-regular tree, computed lazily and cached."""

    def __init__(self, root: Seed):
        self.root = root
        self._cache = {(): root}

    def walk(self, address: Iterable[int]) -> PatternNode:
        address = tuple(address)
        for k in address:
            _check_index(k, self.root.n)
        address = reduce_address(address)
        best = max(i for i in range(len(address) + 1) if address[:i] in self._cache)
        seed = self._cache[address[:best]]
        for i in range(best, len(address)):
            seed = mutate_seed(seed, address[i])
            self._cache[address[: i + 1]] = seed
        return PatternNode(address, seed)


def pattern_walk(root: Seed, address: Iterable[int]) -> PatternNode:
    return ClusterPattern(root).walk(address)


def addresses(n: int, max_length: int) -> list:
    """All reduced addresses of length at most max_length, shortest first."""
    out = [()]
    frontier = [()]
    for _ in range(max_length):
        nxt = []
        for a in frontier:
            for k in range(n):
                if not a or a[-1] != k:
                    nxt.append(a + (k,))
        out += nxt
        frontier = nxt
    return out


# exchange graph

@dataclass
class ExchangeGraph:
    nodes: list = field(default_factory=list)
    edges: set = field(default_factory=set)
    closed: bool = False
    collisions: list = field(default_factory=list)
    initial: ExchangeMatrix | None = None

    def summary(self) -> dict:
        return {"nodes": len(self.nodes), "edges": len(self.edges), "closed": self.closed,
                "collisions": len(self.collisions)}

    def node_label(self, idx: int) -> str:
        seed = self.nodes[idx]
        if seed.mode == PRINCIPAL and self.initial is not None:
            cols = g_matrix(seed, self.initial)
            return " ".join("(" + ",".join(str(v) for v in g) + ")" for g in cols)
        return " | ".join(str(x) for x in seed.cluster)

    def to_dot(self) -> str:
        lines = ["graph exchange {"]
        for i in range(len(self.nodes)):
            lines.append(f'  n{i} [label="{self.node_label(i)}"];')
        for a, b in sorted(tuple(sorted(e)) for e in self.edges):
            lines.append(f"  n{a} -- n{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def canonical_seed(seed: Seed) -> tuple:
    """(key, permuted seed) with cluster entries sorted by the term order."""
    order = sorted(range(seed.n), key=lambda i: (seed.cluster[i].sort_key(), seed.matrix.column(i)))
    key = tuple(seed.cluster[i].sort_key() for i in order)
    permuted = Seed(
        tuple(seed.cluster[i] for i in order),
        tuple(seed.coeffs[i] for i in order),
        seed.matrix.permuted(order),
        seed.mode,
    )
    return key, permuted


def exchange_graph_bfs(root: Seed, depth: int) -> ExchangeGraph:
    """Breadth-first exploration of unlabeled seeds up to the given depth."""
    if depth < 0:
        raise InputError("depth must be nonnegative")
    graph = ExchangeGraph(initial=root.matrix)
    index = {}
    key, canon = canonical_seed(root)
    index[key] = 0
    graph.nodes.append(canon)
    labeled = [root]
    frontier = deque([0])
    for _ in range(depth):
        nxt = deque()
        for node in frontier:
            seed = labeled[node]
            for k in range(seed.n):
                child = mutate_seed(seed, k)
                ckey, ccanon = canonical_seed(child)
                if ckey in index:
                    other = index[ckey]
                    if graph.nodes[other].matrix != ccanon.matrix:
                        graph.collisions.append((other, ccanon))
                else:
                    other = len(graph.nodes)
                    index[ckey] = other
                    graph.nodes.append(ccanon)
                    labeled.append(child)
                    nxt.append(other)
                if other != node:
                    graph.edges.add(frozenset((node, other)))
        frontier = nxt
        if not frontier:
            graph.closed = True
            break
    return graph
