"""Verification suites shared by the command line and the test-suite."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .algebra import PathAlgebra
from .cluster import (COEFFICIENT_FREE, PRINCIPAL, ClusterPattern, ExchangeMatrix, Seed, addresses,
                      exchange_graph_bfs, extract_f_polynomial, extract_g_vector, mutate_matrix)
from .errors import OrbiclustError
from .fixtures import C2TILDE_FLIPS, c2tilde, c2tilde_t0
from .invariants import (cc_function, f_polynomial_by_recurrence, g_vector, lf_f_polynomial,
                         tower, verify_recurrences)
from .laurent import parse
from .mutation import check_involution, mutate_decorated
from .orbifold import b_matrix, quiver
from .reps import DecoratedRep, direct_sum, is_isomorphic
from .rigidity import (e_injective, e_injective_ar, e_invariant, g_vector_from_copresentation,
                       is_tau_rigid_pair)


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


@dataclass
class SuiteResult:
    checks: list = field(default_factory=list)

    def add(self, name, ok, detail=""):
        self.checks.append(Check(name, bool(ok), detail))

    def extend(self, other: "SuiteResult"):
        self.checks.extend(other.checks)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


# values of the worked C~2 example over T0 (vertices 1, 2, 3)
WORKED_ADDRESS = tuple(k - 1 for k in C2TILDE_FLIPS)
WORKED_G = {0: (-1, 0, 0), 1: (0, 1, -1), 2: (0, 0, -1)}
WORKED_F = {
    0: "1 + y1",
    1: "1 + y3 + y2*y3 + y1*y2*y3",
    2: "1 + y3 + 2*y2*y3 + 2*y1*y2*y3 + y2^2*y3 + 2*y1*y2^2*y3 + y1^2*y2^2*y3",
}
WORKED_CC = {
    0: "x1^-1 + x1^-1*x2^2",
    1: "x2*x3^-1 + x2^-1*x3^-1 + x1^-1*x2^-1 + x1^-1*x2",
    2: "x3^-1 + x2^-2*x3^-1 + 2*x1^-1*x2^-2 + 2*x1^-1 + x1^-2*x2^-2*x3 + 2*x1^-2*x3 + x1^-2*x2^2*x3",
}
WORKED_N = {"g": (0, 2, -1), "F": "1 + y3", "CC": "x2^2*x3^-1 + x3^-1"}


def worked_example() -> SuiteResult:
    """Reproduce the worked C~2 example end to end."""
    res = SuiteResult()
    T0 = c2tilde_t0()
    B = b_matrix(T0)
    chain_ok = True
    for j, k in enumerate(WORKED_ADDRESS):
        B = mutate_matrix(B, k)
        chain_ok &= B == b_matrix(c2tilde(j + 1))
    res.add("exchange matrices of T0..T4 follow matrix mutation", chain_ok)
    xs, ys = ("x1", "x2", "x3"), ("y1", "y2", "y3")
    ccs = {}
    for ell in range(3):
        T, MM = tower(T0, ell, WORKED_ADDRESS)
        g = g_vector(T, MM)
        res.add(f"g of M_{ell + 1};0", g == WORKED_G[ell], str(g))
        res.add(f"g of M_{ell + 1};0 by injective copresentation",
                g_vector_from_copresentation(MM.module) == WORKED_G[ell])
        F_or = lf_f_polynomial(T, MM)
        F_rec = f_polynomial_by_recurrence(T, MM, WORKED_ADDRESS)
        want = parse(WORKED_F[ell], ys)
        res.add(f"F of M_{ell + 1};0 by the Grassmannian oracle", F_or == want, str(F_or))
        res.add(f"F of M_{ell + 1};0 by the recurrence", F_rec == want, str(F_rec))
        ccs[ell] = cc_function(T, MM, F=F_or)
        res.add(f"CC of M_{ell + 1};0", ccs[ell] == parse(WORKED_CC[ell], xs), str(ccs[ell]))
        res.add(f"E(M_{ell + 1};0) = 0", e_invariant(T, MM) == 0)
    N = DecoratedRep(PathAlgebra.of(T0).projective(2))
    gN, FN = g_vector(T0, N), lf_f_polynomial(T0, N)
    ccN = cc_function(T0, N, F=FN)
    res.add("g of N", gN == WORKED_N["g"], str(gN))
    res.add("F of N", FN == parse(WORKED_N["F"], ys), str(FN))
    res.add("CC of N", ccN == parse(WORKED_N["CC"], xs), str(ccN))
    res.add("exchange relation CC(M_3;0) CC(N) = CC(M_1;0)^2 + CC(M_2;0)^2",
            ccs[2] * ccN == ccs[0] ** 2 + ccs[1] ** 2)
    return res


class _FCache:
    """F-polynomials keyed by isomorphism class of the module."""

    def __init__(self):
        self.entries = {}

    def get(self, M):
        for other, F in self.entries.get(M.dims, []):
            if other == M or is_isomorphic(other, M):
                return F
        return None

    def put(self, M, F):
        self.entries.setdefault(M.dims, []).append((M, F))


@dataclass
class ComparisonStats:
    compared: int = 0
    oracle: int = 0
    recurrence: int = 0
    cached: int = 0
    mismatches: list = field(default_factory=list)
    seconds: float = 0.0


def cluster_vs_modules(T0, max_length: int = 4, bound: int = 12) -> ComparisonStats:
    """Compare cluster-side (g, F) with (g, F) of the tower modules for every short address."""
    start = time.perf_counter()
    stats = ComparisonStats()
    B = b_matrix(T0)
    pattern = ClusterPattern(Seed.initial(B, PRINCIPAL))
    cache = _FCache()
    for address in addresses(B.n, max_length):
        seed = pattern.walk(address).seed
        for ell in range(B.n):
            X = seed.cluster[ell]
            g_c, F_c = extract_g_vector(X, B), extract_f_polynomial(X)
            T, MM = tower(T0, ell, address)
            g_r = g_vector(T, MM)
            F_r = cache.get(MM.module)
            if F_r is not None:
                stats.cached += 1
            elif MM.module.total_dim <= bound:
                F_r = lf_f_polynomial(T, MM, bound)
                stats.oracle += 1
            else:
                F_r = f_polynomial_by_recurrence(T, MM, address)
                stats.recurrence += 1
            if F_r is not None:
                cache.put(MM.module, F_r)
            stats.compared += 1
            if g_c != g_r or F_c != F_r:
                stats.mismatches.append((address, ell, g_c, g_r, str(F_c), str(F_r)))
    stats.seconds = time.perf_counter() - start
    return stats


def cc_matches_cluster(T0, address, ell) -> bool:
    """CC of a tower module equals the coefficient-free cluster variable."""
    B = b_matrix(T0)
    X = ClusterPattern(Seed.initial(B, COEFFICIENT_FREE)).walk(address).seed.cluster[ell]
    T, MM = tower(T0, ell, address)
    return cc_function(T, MM, address=address) == X


def oracle_vs_recurrence(T0, max_length: int, bound: int = 12) -> tuple:
    """(compared, mismatches): Grassmannian F against recurrence F on distinct tower modules."""
    compared, bad = 0, []
    for address, ell, T, MM in tower_modules(T0, max_length):
        if MM.module.total_dim > bound:
            continue
        compared += 1
        if lf_f_polynomial(T, MM, bound) != f_polynomial_by_recurrence(T, MM, address):
            bad.append((address, ell))
    return compared, bad


def finite_type_suite() -> SuiteResult:
    """Exchange graphs of small finite types close with the expected number of seeds."""
    from .fixtures import disk

    res = SuiteResult()
    for name, rows, want in (("A2", [[0, 1], [-1, 0]], 5), ("C2", [[0, -1], [2, 0]], 6)):
        g = exchange_graph_bfs(Seed.initial(ExchangeMatrix.from_rows(rows)), 20)
        res.add(f"{name} exchange graph closes at {want} seeds", g.closed and len(g.nodes) == want,
                f"{len(g.nodes)} seeds")
    # exact division in every exchange relation asserts the Laurent property
    for m, want in ((3, 6), (4, 20), (5, 70)):
        g = exchange_graph_bfs(Seed.initial(b_matrix(disk(m))), 40)
        res.add(f"disk with {m} marked points and one orbifold point closes at {want} seeds (Laurent)",
                g.closed and len(g.nodes) == want and not g.collisions, f"{len(g.nodes)} seeds")
    return res


def tower_modules(T0, max_length: int) -> list:
    """Distinct (address, ell, T, module) from the tower up to the given address length."""
    out, seen = [], _FCache()
    for address in addresses(T0.n, max_length):
        for ell in range(T0.n):
            T, MM = tower(T0, ell, address)
            if MM.module.total_dim and seen.get(MM.module) is None:
                seen.put(MM.module, True)
                out.append((address, ell, T, MM))
    return out


def reachable_modules(T0, depth: int) -> list:
    """Distinct (T, decorated module) reached from the negative simples over T0 by at most ``depth`` mutations.

    Modules are identified up to isomorphism over the same triangulation.
    """
    seen: dict = {}

    def add(T, MM) -> bool:
        bucket = seen.setdefault((T.canonical_triangles(), MM.module.dims, MM.decoration), [])
        if any(other.module == MM.module or is_isomorphic(other.module, MM.module) for _, other in bucket):
            return False
        bucket.append((T, MM))
        return True

    frontier = []
    for ell in range(T0.n):
        MM = DecoratedRep.negative(quiver(T0), ell)
        add(T0, MM)
        frontier.append((T0, MM, None))
    for _ in range(depth):
        nxt = []
        for T, MM, last in frontier:
            for k in range(T0.n):
                if k != last:
                    T1, MM1 = mutate_decorated(T, MM, k)
                    if add(T1, MM1):
                        nxt.append((T1, MM1, k))
        frontier = nxt
    return [item for bucket in seen.values() for item in bucket]


def involution_suite(T0, depth: int, check_e: bool = True) -> SuiteResult:
    """mu_k^2 = id on every E-rigid module reached within ``depth`` mutations."""
    res = SuiteResult()
    start = time.perf_counter()
    mods = reachable_modules(T0, depth)
    rigid = [(T, MM) for T, MM in mods if not check_e or e_invariant(T, MM, check=False) == 0]
    bad = [(MM.module.dims, k) for T, MM in rigid for k in range(T0.n) if not check_involution(T, MM, k).ok]
    res.add(f"mu_k^2 = id on {len(rigid)} E-rigid modules within {depth} mutations "
            f"({len(mods) - len(rigid)} not rigid)", not bad,
            f"{time.perf_counter() - start:.1f}s" + (f", failures {bad[:3]}" if bad else ""))
    return res


def e_reached_suite(T0, depth: int) -> SuiteResult:
    """E = 0 on every reached module, and E(mu_k M) = E(M) for every k (AR formula cross-checked)."""
    res = SuiteResult()
    mods = reachable_modules(T0, depth)
    nonzero = changed = 0
    for T, MM in mods:
        e = e_invariant(T, MM)
        nonzero += e != 0
        for k in range(T0.n):
            changed += e_invariant(*mutate_decorated(T, MM, k)) != e
    res.add(f"E = 0 on {len(mods)} modules reached within {depth} mutations", not nonzero)
    res.add(f"E preserved under all {len(mods) * T0.n} mutations of those modules", not changed)
    return res


def non_free_examples() -> list:
    """(name, T, module, k) where mu_k^2 drops a summand concentrated at k."""
    from .reps import Rep
    from .strings import CASES

    out = []
    for name in ("7.a", "7.b"):
        T, MM = CASES[name].build()
        out.append((f"case {name}", T, MM, T.index("k")))
    T = c2tilde_t0()
    Q = quiver(T)
    A = PathAlgebra(Q)
    out.append(("P1 + S1 at 1", T, DecoratedRep(direct_sum([A.projective(0), Rep.simple(Q, 0)])), 0))
    out.append(("H3 + S3 at 3", T, DecoratedRep(Rep.local_free(Q, 2, 1, 1)), 2))
    out.append(("I3 + S3 at 3", T, DecoratedRep(direct_sum([A.injective(2), Rep.simple(Q, 2)])), 2))
    return out


def decomposition_suite() -> SuiteResult:
    res = SuiteResult()
    for name, T, MM, k in non_free_examples():
        rep = check_involution(T, MM, k)
        res.add(f"mu_k^2 decomposition for {name}", rep.ok and not rep.free_case,
                f"extra summand (rank, excess) = {rep.extra_summand}")
    return res


def property_suite(T0, max_length: int = 2) -> SuiteResult:
    """Involution, recurrences and E-invariants on tower modules of a triangulation."""
    res = SuiteResult()
    mods = tower_modules(T0, max_length)
    inv_ok = rec_ok = e_ok = True
    failures = []
    for address, ell, T, MM in mods:
        try:
            e_ok &= e_invariant(T, MM) == 0
            for k in range(T0.n):
                rep = check_involution(T, MM, k)
                inv_ok &= rep.ok
                r = verify_recurrences(T, MM, k)
                if not r.ok:
                    rec_ok = False
                    failures.append((address, ell, k, r.failures))
        except OrbiclustError as exc:
            failures.append((address, ell, str(exc)))
            rec_ok = False
    res.add(f"mu_k^2 = id on {len(mods)} tower modules", inv_ok)
    res.add("g/h/F recurrences and E preserved under mutation", rec_ok, str(failures[:3]) if failures else "")
    res.add("E = 0 on tower modules", e_ok)
    return res


def random_corpus(T0, size: int, seed: int = 0, max_length: int = 2) -> list:
    """Random decorated modules over T0: direct sums of one or two tower modules, sometimes decorated."""
    rng = random.Random(seed)
    mods = [MM.module for *_, T, MM in tower_modules(T0, max_length) if T.same_as(T0)]
    out = []
    for _ in range(size):
        parts = rng.sample(mods, rng.choice((1, 2)))
        M = direct_sum(parts)
        dec = [(0, 0)] * T0.n
        if rng.random() < 0.3:
            dec[rng.randrange(T0.n)] = (1, 0)
        out.append(DecoratedRep(M, tuple(dec)))
    return out


def e_suite(T0, pairs: int = 100, seed: int = 0, max_length: int = 2) -> SuiteResult:
    """E-invariant against the AR formula on random pairs, and E = 0 against direct tau-rigidity."""
    res = SuiteResult()
    A = PathAlgebra.of(T0)
    corpus = random_corpus(T0, 2 * pairs, seed, max_length)
    rng = random.Random(seed + 1)
    bad = 0
    for _ in range(pairs):
        MM, NN = rng.choice(corpus), rng.choice(corpus)
        bad += e_injective(T0, MM, NN) != e_injective_ar(MM, NN, A)
    res.add(f"E^inj equals the AR formula on {pairs} random pairs", not bad, f"{bad} mismatches" if bad else "")
    rigid = inconsistent = 0
    for MM in corpus[:40]:
        report = is_tau_rigid_pair(T0, MM.module, MM.decoration, A)
        rigid += report.tau_rigid
        inconsistent += not report.consistent
    res.add("E = 0 exactly when the pair is tau-rigid", not inconsistent,
            f"{rigid} of 40 rigid" + (f", {inconsistent} inconsistent" if inconsistent else ""))
    return res
