"""Shared test oracles: brute-force computations independent of the library code paths."""

import itertools

import pytest
import sympy

from orbiclust.algebra import PathAlgebra
from orbiclust.fixtures import FIXTURES, c2tilde_t0
from orbiclust.linalg import fraction_rows


def to_sympy(mat):
    rows = fraction_rows(mat)
    return sympy.Matrix(mat.nrows(), mat.ncols(), [sympy.Rational(v) for r in rows for v in r])


def hom_dim_oracle(M, N):
    """dim Hom(M, N) by solving N(a) X_s = X_t M(a) with sympy."""
    Q = M.quiver
    unknowns, offsets, total = [], [], 0
    for v in range(Q.n):
        offsets.append(total)
        total += N.dims[v] * M.dims[v]
    if total == 0:
        return 0
    syms = sympy.symbols(f"u0:{total}")

    def X(v):
        r, c = N.dims[v], M.dims[v]
        return sympy.Matrix(r, c, syms[offsets[v]:offsets[v] + r * c]) if r * c else sympy.zeros(r, c)

    eqs = []
    for a in Q.arrows:
        lhs = to_sympy(N.maps[a.label]) * X(a.source) - X(a.target) * to_sympy(M.maps[a.label])
        eqs.extend(lhs)
    eqs = [e for e in eqs if e != 0]
    if not eqs:
        return total
    A, _ = sympy.linear_eq_to_matrix(eqs, syms)
    return total - A.rank()


def _subspaces(dim, p):
    """All subspaces of F_p^dim as frozensets of vectors."""
    vectors = list(itertools.product(range(p), repeat=dim))
    seen = set()
    out = []
    def span(gens):
        S = {tuple([0] * dim)}
        for g in gens:
            S = {tuple((s[i] + c * g[i]) % p for i in range(dim)) for s in S for c in range(p)}
        return frozenset(S)
    for k in range(dim + 1):
        for gens in itertools.combinations(vectors[1:], k):
            S = span(gens)
            if len(S) == p ** k and S not in seen:
                seen.add(S)
                out.append(S)
    return out


def _apply(mat_rows, v, p):
    return tuple(sum(r[j] * v[j] for j in range(len(v))) % p for r in mat_rows)


def brute_force_counts(M, p):
    """Number of locally free submodules of each rank vector over F_p, by enumerating all subspaces."""
    Q = M.quiver
    red = {}
    for a in Q.arrows:
        rows = fraction_rows(M.maps[a.label])
        red[a.label] = [[(x.numerator * pow(x.denominator, -1, p)) % p for x in r] for r in rows]
    per_vertex = []
    for v in range(Q.n):
        subs = _subspaces(M.dims[v], p)
        loop = Q.loop_at(v)
        keep = []
        for S in subs:
            if loop is not None:
                img = {_apply(red[loop.label], s, p) for s in S}
                if not img <= S:
                    continue
                # locally free over k[eps]/eps^2: dim S = 2 dim eps(S)
                if len(S) != len(img) ** 2:
                    continue
            keep.append(S)
        per_vertex.append(keep)
    counts = {}
    for choice in itertools.product(*per_vertex):
        ok = True
        for a in Q.ordinary_arrows():
            if not {_apply(red[a.label], s, p) for s in choice[a.source]} <= choice[a.target]:
                ok = False
                break
        if ok:
            ranks = []
            for v, S in enumerate(choice):
                k = 0
                while p ** k < len(S):
                    k += 1
                ranks.append(k // Q.d[v])
            counts[tuple(ranks)] = counts.get(tuple(ranks), 0) + 1
    return counts


@pytest.fixture(scope="session")
def t0():
    return c2tilde_t0()


@pytest.fixture(scope="session")
def a0(t0):
    return PathAlgebra.of(t0)


@pytest.fixture(scope="session", params=sorted(FIXTURES))
def fixture_triangulation(request):
    return request.param, FIXTURES[request.param]()
