"""Euler characteristics of locally free quiver Grassmannians by point counting.

For each rank vector r the number of locally free submodules of rank r is
counted over F_p for enough primes p, interpolated to a polynomial in q and
evaluated at q = 1.  Vertices of a vertex cover of the quiver are enumerated
explicitly; every remaining vertex only sees covered neighbours, so the
number of admissible subspaces there has a closed form.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import flint

from . import linalg as la
from .errors import InputError, NotLocallyFree, NotPolynomialCount, SizeBound
from .laurent import IntPoly, interpolate_int_poly
from .reps import Rep, is_locally_free, local_structure

DEFAULT_BOUND = 12


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def primes_from(start: int):
    p = start
    while True:
        if flint.fmpz(p).is_prime():
            yield p
        p += 1


def reduce_mod(mat, p: int):
    """Reduce a rational matrix mod p, or None if a denominator vanishes."""
    entries = []
    for e in mat.entries():
        num, den = int(e.p), int(e.q)
        if den % p == 0:
            return None
        entries.append(num * pow(den, -1, p) % p)
    return flint.nmod_mat(mat.nrows(), mat.ncols(), entries, p)


def rref_subspaces(m: int, r: int, p: int):
    """All r-dimensional subspaces of F_p^m as r x m matrices in reduced echelon form."""
    for pivots in itertools.combinations(range(m), r):
        free = [(i, j) for i, piv in enumerate(pivots) for j in range(piv + 1, m) if j not in pivots]
        for values in itertools.product(range(p), repeat=len(free)):
            rows = [[0] * m for _ in range(r)]
            for i, piv in enumerate(pivots):
                rows[i][piv] = 1
            for (i, j), v in zip(free, values):
                rows[i][j] = v
            yield pivots, rows


class _VertexData:
    """One vertex of M over F_p in a basis adapted to eps (tops, then eps of tops)."""

    def __init__(self, dim: int, d: int, eps, p: int):
        self.dim, self.d, self.p = dim, d, p
        self.field = la.GF(p)
        if d == 2:
            self.m = dim // 2
            im = la.image(eps) if dim else self.field.zeros(0, 0)
            tops = la.complement(im, dim)
            self.tops = tops
            self.bottoms = eps * tops
            self.adapted = la.hstack([tops, self.bottoms]) if dim else tops
            self.eps = eps
            self.to_adapted = la.inverse(self.adapted) if dim else self.adapted
        else:
            self.m = dim

    def free_submodules(self, r: int):
        """Bases (as column matrices) of all free rank-r H-submodules."""
        F = self.field
        if self.d == 1:
            for _, rows in rref_subspaces(self.m, r, self.p):
                yield F.from_rows(rows, self.m).transpose() if r else F.zeros(self.dim, 0)
            return
        if r == 0:
            yield F.zeros(self.dim, 0)
            return
        m = self.m
        for pivots, rows in rref_subspaces(m, r, self.p):
            L = F.from_rows(rows, m)
            free = [(i, j) for i in range(r) for j in range(m) if j not in pivots]
            for values in itertools.product(range(self.p), repeat=len(free)):
                lift = F.zeros(r, m)
                for (i, j), v in zip(free, values):
                    lift[i, j] = v
                upper = self.tops * L.transpose() + self.bottoms * lift.transpose()
                lower = self.bottoms * L.transpose()
                yield la.hstack([upper, lower])

    def count_between(self, lower, upper, r: int) -> int:
        """Number of free rank-r submodules V with lower ⊆ V ⊆ upper (both submodules)."""
        q = self.p
        if lower.ncols():
            if upper.ncols() == 0 or not la.in_span(upper, lower):
                return 0
        if self.d == 1:
            u, w = lower.ncols(), upper.ncols()
            return gaussian_binomial(w - u, r - u, q)
        m = self.m
        F = self.field

        def parts(sub):
            # adapted coordinates: first m rows = top part, last m = bottom part
            if sub.ncols() == 0:
                return F.zeros(m, 0), F.zeros(m, 0)
            c = self.to_adapted * sub
            top = la.submatrix(c, range(m), range(c.ncols()))
            # vectors of sub with zero top part, read in bottom coordinates
            ker = la.kernel(top)
            inside = c * ker if ker.ncols() else F.zeros(2 * m, 0)
            bottom = la.submatrix(inside, range(m, 2 * m), range(inside.ncols())) if inside.ncols() else F.zeros(m, 0)
            return la.image(top) if top.ncols() else top, la.image(bottom) if bottom.ncols() else bottom

        u_top, u_bot = parts(lower)
        w_top, w_bot = parts(upper)
        ubar, u0 = u_top.ncols(), u_bot.ncols()
        wbar, w0 = w_top.ncols(), w_bot.ncols()
        if u0 and (not wbar or not la.in_span(w_top, u_bot)):
            return 0
        if r < u0 or r > wbar:
            return 0
        return gaussian_binomial(wbar - u0, r - u0, q) * q ** ((r - ubar) * (w0 - r))


def _h_closure(vd: _VertexData, span):
    if vd.d == 1 or span.ncols() == 0:
        return la.image(span) if span.ncols() else span
    return la.span_sum(span, vd.eps * span)


def _largest_submodule(vd: _VertexData, sub):
    if vd.d == 1 or sub.ncols() == 0:
        return sub
    return la.intersect(sub, la.preimage(vd.eps, sub))


class _Reduced:
    def __init__(self, M: Rep, p: int):
        Q = M.quiver
        self.p = p
        self.ok = True
        self.maps = {}
        for a in Q.arrows:
            red = reduce_mod(M.maps[a.label], p)
            if red is None:
                self.ok = False
                return
            self.maps[a.label] = red
        self.vertices = []
        for i in range(Q.n):
            eps = self.maps[Q.loop_at(i).label] if Q.loop_at(i) is not None else None
            if Q.d[i] == 2 and M.dims[i] and la.rank(eps) * 2 != M.dims[i]:
                self.ok = False  # local freeness lost mod p
                return
            self.vertices.append(_VertexData(M.dims[i], Q.d[i], eps, p))


def _vertex_cover(M: Rep, ranks, q_est: int):
    Q = M.quiver
    edges = {(a.source, a.target) for a in Q.ordinary_arrows()
             if M.dims[a.source] and M.dims[a.target]}
    n = Q.n

    def cost(v):
        m, r, d = M.dims[v] // Q.d[v], ranks[v], Q.d[v]
        return gaussian_binomial(m, r, q_est) * q_est ** ((d - 1) * r * (m - r))

    best, best_cost = None, None
    for mask in range(1 << n):
        S = {v for v in range(n) if mask >> v & 1}
        if any(u not in S and w not in S for u, w in edges):
            continue
        c = 1
        for v in S:
            c *= cost(v)
        if best_cost is None or c < best_cost:
            best, best_cost = S, c
    return sorted(best, key=lambda v: -sum(1 for e in edges if v in e))


def count_submodules(M: Rep, ranks, p: int, reduced: _Reduced | None = None) -> int:
    """Number of locally free submodules of M with the given rank vector over F_p."""
    Q = M.quiver
    red = reduced or _Reduced(M, p)
    if not red.ok:
        raise InputError(f"prime {p} is unsuitable for this module")
    cover = _vertex_cover(M, ranks, p)
    rest = [v for v in range(Q.n) if v not in cover]
    F = la.GF(p)
    arrows = Q.ordinary_arrows()
    candidates = {v: list(red.vertices[v].free_submodules(ranks[v])) for v in cover}
    inner = [a for a in arrows if a.source in cover and a.target in cover]
    chosen: dict = {}
    total = 0

    def stable(a):
        src, tgt = chosen.get(a.source), chosen.get(a.target)
        if src is None or tgt is None or src.ncols() == 0:
            return True
        img = red.maps[a.label] * src
        return la.in_span(tgt, img) if tgt.ncols() else la.is_zero(img)

    def finish():
        prod = 1
        for v in rest:
            vd = red.vertices[v]
            dim = M.dims[v]
            lower = F.zeros(dim, 0)
            upper = F.identity(dim)
            for a in arrows:
                if a.target == v and a.source in chosen and chosen[a.source].ncols():
                    lower = la.span_sum(lower, red.maps[a.label] * chosen[a.source])
                if a.source == v and a.target in chosen:
                    upper = la.intersect(upper, la.preimage(red.maps[a.label], chosen[a.target])) \
                        if dim else upper
            lower = _h_closure(vd, lower)
            upper = _largest_submodule(vd, upper)
            c = vd.count_between(lower, upper, ranks[v])
            if not c:
                return 0
            prod *= c
        return prod

    def backtrack(idx):
        nonlocal total
        if idx == len(cover):
            total += finish()
            return
        v = cover[idx]
        for U in candidates[v]:
            chosen[v] = U
            if all(stable(a) for a in inner if v in (a.source, a.target)):
                backtrack(idx + 1)
        chosen.pop(v, None)

    backtrack(0)
    return total


def degree_bound(M: Rep, ranks) -> int:
    Q = M.quiver
    return sum(r * (M.dims[i] - Q.d[i] * r) for i, r in enumerate(ranks))


def euler_characteristic(M: Rep, ranks, return_poly: bool = False):
    """chi of the locally free Grassmannian of the given rank vector."""
    # one sample beyond the degree bound checks that the count really is polynomial in q
    need = degree_bound(M, ranks) + 2
    samples = []
    for p in primes_from(5):
        red = _Reduced(M, p)
        if not red.ok:
            continue
        samples.append((p, count_submodules(M, ranks, p, red)))
        if len(samples) == need:
            break
    poly = interpolate_int_poly(samples[:-1])
    q_last, count_last = samples[-1]
    if poly.evaluate({"q": q_last}) != count_last:
        raise NotPolynomialCount(f"point count of rank {tuple(ranks)} is not a polynomial of degree "
                                 f"<= {need - 2} in q")
    chi = poly.evaluate({"q": 1})
    return (chi, poly) if return_poly else chi


def lf_f_polynomial(M: Rep, bound: int = DEFAULT_BOUND) -> IntPoly:
    """F-polynomial of a locally free module from point counts (y-variables y1..yn)."""
    if not is_locally_free(M):
        raise NotLocallyFree("the Grassmannian oracle needs a locally free module")
    if M.total_dim > bound:
        raise SizeBound(f"module of dimension {M.total_dim} exceeds the oracle bound {bound}")
    n = M.n
    ranks = [local_structure(M, i)[0] for i in range(n)]
    ys = tuple(f"y{i + 1}" for i in range(n))
    terms = {}
    for r in itertools.product(*(range(x + 1) for x in ranks)):
        chi = euler_characteristic(M, r)
        if chi:
            terms[r] = chi
    return IntPoly(ys, terms)
