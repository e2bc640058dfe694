"""Mutation of representations at a vertex k.

Coordinates.  ``M_in`` has one block per arrow ``a: j -> k`` holding the
vectors ``eps_k^s a ⊗ m`` for ``s < d_k`` and ``m`` running over the basis of
M(j); index ``offset + s * dim M(j) + m``.  ``M_out`` has one block per arrow
``b: k -> i`` laid out the same way with ``eps_k^s b* ⊗ m``, m in M(i).  In
both spaces eps_k raises s by one.

After the flip, arrows into k are the reversed out-arrows, so the new
``M_in`` is the old ``M_out`` and vice versa; the new maps are read off the
mutated alpha and beta in these coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg as la
from .errors import NoSplitting, RelationViolated
from .linalg import QQ
from .orbifold import Arrow, Triangulation, flip, quiver
from .reps import DecoratedRep, Rep, direct_sum, is_isomorphic, validate_rep


@dataclass
class Block:
    arrow: Arrow
    offset: int
    width: int  # dim of the module at the far end of the arrow


@dataclass
class LocalDiagram:
    k: int
    d: int
    in_blocks: list
    out_blocks: list
    dim_in: int
    dim_out: int
    eps_in: object
    eps_out: object
    eps_k: object
    alpha: object
    beta: object
    gamma: object

    def dims(self) -> tuple:
        return (self.dim_in, self.alpha.nrows(), self.dim_out)

    def check(self) -> list:
        """Violations of alpha gamma = 0, gamma beta = 0 and eps-linearity."""
        problems = []
        if not la.is_zero(self.alpha * self.gamma):
            problems.append("alpha gamma != 0")
        if not la.is_zero(self.gamma * self.beta):
            problems.append("gamma beta != 0")
        if self.alpha * self.eps_in != self.eps_k * self.alpha:
            problems.append("alpha is not eps-linear")
        if self.beta * self.eps_k != self.eps_out * self.beta:
            problems.append("beta is not eps-linear")
        if self.gamma * self.eps_out != self.eps_in * self.gamma:
            problems.append("gamma is not eps-linear")
        return problems

    def diagnostics(self) -> dict:
        ka, kb, kg = la.kernel(self.alpha), la.kernel(self.beta), la.kernel(self.gamma)
        return {
            "dims": {"M_in": self.dim_in, "M_k": self.alpha.nrows(), "M_out": self.dim_out},
            "alpha": {"ker": ka.ncols(), "im": la.rank(self.alpha)},
            "beta": {"ker": kb.ncols(), "im": la.rank(self.beta)},
            "gamma": {"ker": kg.ncols(), "im": la.rank(self.gamma)},
        }


def _shift(blocks, total, d):
    eps = QQ.zeros(total, total)
    if d == 2:
        for blk in blocks:
            for m in range(blk.width):
                eps[blk.offset + blk.width + m, blk.offset + m] = 1
    return eps


def _blocks(arrows, far_end, dims, d):
    out, off = [], 0
    for a in arrows:
        w = dims[far_end(a)]
        out.append(Block(a, off, w))
        off += d * w
    return out, off


def _third_arrow(Q, a: Arrow, b: Arrow):
    """The arrow i -> j closing the triangle of a: j -> k and b: k -> i, if any."""
    if a.triangle is None or a.triangle != b.triangle:
        return None
    for c in Q.arrows:
        if c.triangle == a.triangle and c.source == b.target and c.target == a.source and not c.is_loop:
            return c
    return None


def local_diagram(T: Triangulation, M: Rep, k: int) -> LocalDiagram:
    Q = M.quiver
    problems = validate_rep(M)
    if problems:
        raise RelationViolated("; ".join(problems))
    d = Q.d[k]
    dims = M.dims
    ins = Q.arrows_into(k)
    outs = Q.arrows_out_of(k)
    in_blocks, dim_in = _blocks(ins, lambda a: a.source, dims, d)
    out_blocks, dim_out = _blocks(outs, lambda b: b.target, dims, d)
    eps_k = M.eps(k)
    alpha = QQ.zeros(dims[k], dim_in)
    eps_power = [QQ.identity(dims[k]), eps_k]
    for blk in in_blocks:
        Ma = M.maps[blk.arrow.label]
        for s in range(d):
            part = eps_power[s] * Ma
            for r in range(dims[k]):
                for m in range(blk.width):
                    alpha[r, blk.offset + s * blk.width + m] = part[r, m]
    beta = QQ.zeros(dim_out, dims[k])
    for blk in out_blocks:
        Mb = M.maps[blk.arrow.label]
        # pending: coordinate s=1 carries M(b) m, s=0 carries M(b) eps m
        rows = [(0, Mb)] if d == 1 else [(1, Mb), (0, Mb * eps_k)]
        for s, part in rows:
            for r in range(blk.width):
                for c in range(dims[k]):
                    beta[blk.offset + s * blk.width + r, c] = part[r, c]
    gamma = QQ.zeros(dim_in, dim_out)
    for ab in in_blocks:
        for bb in out_blocks:
            c = _third_arrow(Q, ab.arrow, bb.arrow)
            if c is None:
                continue
            Mc = M.maps[c.label]
            for s in range(d):
                for r in range(ab.width):
                    for col in range(bb.width):
                        gamma[ab.offset + s * ab.width + r, bb.offset + s * bb.width + col] = Mc[r, col]
    diagram = LocalDiagram(k, d, in_blocks, out_blocks, dim_in, dim_out,
                           _shift(in_blocks, dim_in, d), _shift(out_blocks, dim_out, d), eps_k,
                           alpha, beta, gamma)
    problems = diagram.check()
    if problems:
        raise RelationViolated("; ".join(problems))
    return diagram


def _restricted_eps(basis, eps):
    if basis.ncols() == 0:
        return QQ.zeros(0, 0)
    return la.coordinates(basis, eps * basis)


def _quotient_eps(quot: la.QuotientSpace, eps):
    if quot.dim == 0:
        return QQ.zeros(0, 0)
    return quot.project(eps * quot.comp)


@dataclass
class SplittingData:
    ker_gamma: object       # basis of ker gamma inside M_out
    rho: object             # M_out -> ker gamma, in ker_gamma coordinates
    ker_alpha: object       # basis of ker alpha inside M_in
    im_gamma: object        # basis of im gamma inside M_in
    quotient: la.QuotientSpace  # ker alpha / im gamma (in ker_alpha coordinates)
    sigma: object           # quotient -> ker alpha, in ker_alpha coordinates
    extra: dict = field(default_factory=dict)

    def check(self) -> list:
        problems = []
        kg = self.ker_gamma.ncols()
        if kg and self.rho * self.ker_gamma != QQ.identity(kg):
            problems.append("rho is not a retraction onto ker gamma")
        q = self.quotient.dim
        if q and self.quotient.project(self.sigma) != QQ.identity(q):
            problems.append("sigma is not a section of the quotient map")
        return problems


def make_splitting(diagram: LocalDiagram, variant: int = 0) -> SplittingData:
    """Eps-linear retraction rho and section sigma, solved as linear systems.

    ``variant`` 0 takes the echelon solution with free variables zero; other
    values add a seeded element of the homogeneous solution space, giving an
    independent valid choice.
    """
    kg = la.kernel(diagram.gamma)
    ka = la.kernel(diagram.alpha)
    ig = la.image(diagram.gamma)
    eps_kg = _restricted_eps(kg, diagram.eps_out)
    eps_ka = _restricted_eps(ka, diagram.eps_in)
    ig_in_ka = la.coordinates(ka, ig) if ig.ncols() else QQ.zeros(ka.ncols(), 0)
    quotient = la.QuotientSpace(ka.ncols(), ig_in_ka)
    eps_q = _quotient_eps(quotient, eps_ka)

    # rho kg = id, rho eps_out = eps_kg rho
    n_kg, n_out = kg.ncols(), diagram.dim_out
    rho_sys = la.MatrixSystem([(n_kg, n_out)])
    if n_kg:
        rho_sys.add([(0, None, kg)], (n_kg, n_kg), QQ.identity(n_kg))
        rho_sys.add([(0, None, diagram.eps_out), (0, -eps_kg, None)], (n_kg, n_out))
    rho = _pick(rho_sys, variant, "rho")

    # pi sigma = id, eps_ka sigma = sigma eps_q
    n_ka, n_q = ka.ncols(), quotient.dim
    sig_sys = la.MatrixSystem([(n_ka, n_q)])
    if n_q:
        full_inv = la.inverse(quotient.full)
        proj = la.submatrix(full_inv, range(ig_in_ka.ncols(), n_ka), range(n_ka))
        sig_sys.add([(0, proj, None)], (n_q, n_q), QQ.identity(n_q))
        sig_sys.add([(0, eps_ka, None), (0, None, -eps_q)], (n_ka, n_q))
    sigma = _pick(sig_sys, variant, "sigma")
    data = SplittingData(kg, rho, ka, ig, quotient, sigma, {"eps_kg": eps_kg, "eps_ka": eps_ka, "eps_q": eps_q})
    problems = data.check()
    if problems:
        raise NoSplitting("; ".join(problems))
    return data


def _pick(system: la.MatrixSystem, variant: int, name: str):
    sol = system.particular_solution()
    if sol is None:
        raise NoSplitting(f"no eps-linear {name} exists")
    if variant:
        import random

        rng = random.Random(variant)
        for h in system.solution_space():
            c = rng.randint(-2, 2)
            if c:
                sol = [s + m * c for s, m in zip(sol, h)]
    return sol[0]


@dataclass
class MutationResult:
    triangulation: Triangulation
    module: Rep
    diagram: LocalDiagram
    splitting: SplittingData
    alpha_bar: object
    beta_bar: object
    eps_bar: object
    summand_dims: tuple


def _matching_in_arrow(T: Triangulation, in_arrows, new_arrow: Arrow, pending: bool):
    """Old arrow x -> k that the new arrow k -> x reverses."""
    for a in in_arrows:
        if a.source != new_arrow.target:
            continue
        if pending and a.triangle == new_arrow.triangle:
            return a
        if not pending and a.triangle != new_arrow.triangle:
            return a
    raise AssertionError(f"no old arrow matches {new_arrow.label}")


def mutate_rep_full(T: Triangulation, M: Rep, k: int, variant: int = 0) -> MutationResult:
    """Mutate M at the arc with index k, returning all intermediate data."""
    arc = T.arcs[k].id
    Tn = flip(T, arc)
    Q, Qn = M.quiver, quiver(Tn)
    D = local_diagram(T, M, k)
    S = make_splitting(D, variant)
    d = D.d

    # Mbar(k) = ker gamma / im beta  ⊕  im gamma  ⊕  ker alpha / im gamma
    ib = la.image(D.beta)
    ib_in_kg = la.coordinates(S.ker_gamma, ib) if ib.ncols() else QQ.zeros(S.ker_gamma.ncols(), 0)
    q1 = la.QuotientSpace(S.ker_gamma.ncols(), ib_in_kg)
    eps1 = _quotient_eps(q1, S.extra["eps_kg"])
    eps2 = _restricted_eps(S.im_gamma, D.eps_in)
    eps3 = S.extra["eps_q"]
    n1, n2, n3 = q1.dim, S.im_gamma.ncols(), S.quotient.dim
    eps_bar = la.block_diag([eps1, eps2, eps3])
    dim_k = n1 + n2 + n3

    # alpha_bar = (pi rho, gamma, 0)^T on the old M_out
    parts = []
    parts.append(q1.project(S.rho) if n1 else QQ.zeros(0, D.dim_out))
    parts.append(la.coordinates(S.im_gamma, D.gamma) if n2 else QQ.zeros(0, D.dim_out))
    parts.append(QQ.zeros(n3, D.dim_out))
    alpha_bar = la.vstack(parts, D.dim_out)
    # beta_bar = (0, iota, iota sigma) into the old M_in
    beta_bar = la.hstack([QQ.zeros(D.dim_in, n1), S.im_gamma, S.ker_alpha * S.sigma], D.dim_in)

    dims = list(M.dims)
    dims[k] = dim_k
    flipped = {t for t, tri in enumerate(T.triangles) if arc in tri}
    old_by_key = {(a.triangle, a.source, a.target): a for a in Q.arrows if not a.is_loop}
    out_by_arrow = {blk.arrow: blk for blk in D.out_blocks}
    in_by_arrow = {blk.arrow: blk for blk in D.in_blocks}
    pending = d == 2
    maps = {}
    for na in Qn.arrows:
        if na.is_loop:
            maps[na.label] = eps_bar if na.source == k else M.maps[Q.loop_at(na.source).label]
        elif na.target == k:
            # reversed out-arrow b: read alpha_bar on the s = 0 slot of its block
            old = old_by_key[(na.triangle, k, na.source)]
            blk = out_by_arrow[old]
            maps[na.label] = la.columns(alpha_bar, range(blk.offset, blk.offset + blk.width))
        elif na.source == k:
            old = _matching_in_arrow(T, D.in_blocks and [b.arrow for b in D.in_blocks], na, pending)
            blk = in_by_arrow[old]
            s = d - 1
            rows = range(blk.offset + s * blk.width, blk.offset + (s + 1) * blk.width)
            maps[na.label] = la.submatrix(beta_bar, rows, range(dim_k))
        elif na.triangle in flipped:
            maps[na.label] = _through_map(M, Q, k, na, pending)
        else:
            maps[na.label] = M.maps[old_by_key[(na.triangle, na.source, na.target)].label]
    new = Rep(Qn, dims, maps)
    problems = validate_rep(new)
    if problems:
        raise RelationViolated("mutated module is not a representation: " + "; ".join(problems))
    return MutationResult(Tn, new, D, S, alpha_bar, beta_bar, eps_bar, (n1, n2, n3))


def _through_map(M: Rep, Q, k: int, na: Arrow, pending: bool):
    """Map of a new arrow j -> i created by the flip: the composite through k."""
    ins = [a for a in Q.arrows_into(k) if a.source == na.source]
    outs = [b for b in Q.arrows_out_of(k) if b.target == na.target]
    for a in ins:
        for b in outs:
            if pending and a.triangle == b.triangle == na.triangle:
                return M.maps[b.label] * M.eps(k) * M.maps[a.label]
            if not pending and b.triangle == na.triangle and a.triangle != na.triangle:
                return M.maps[b.label] * M.maps[a.label]
    raise AssertionError(f"no composite through k for {na.label}")


def mutate_rep(T: Triangulation, M: Rep, k: int) -> Rep:
    return mutate_rep_full(T, M, k).module


def h_module_type(basis, eps, d: int) -> tuple:
    """(free rank, excess) of the H-module spanned by ``basis`` with action ``eps``."""
    n = basis.ncols()
    if d == 1 or n == 0:
        return (n, 0)
    r = la.rank(_restricted_eps(basis, eps))
    return (r, n - 2 * r)


def new_decoration_type(D: LocalDiagram) -> tuple:
    """H_k-type of ker beta / (ker beta ∩ im alpha)."""
    kb = la.kernel(D.beta)
    if kb.ncols() == 0:
        return (0, 0)
    inter = la.intersect(kb, la.image(D.alpha)) if D.dim_in else QQ.zeros(kb.nrows(), 0)
    inter_c = la.coordinates(kb, inter) if inter.ncols() else QQ.zeros(kb.ncols(), 0)
    quot = la.QuotientSpace(kb.ncols(), inter_c)
    eps = _quotient_eps(quot, _restricted_eps(kb, D.eps_k))
    if D.d == 1 or quot.dim == 0:
        return (quot.dim, 0)
    r = la.rank(eps)
    return (r, quot.dim - 2 * r)


def plant(quiver_, k: int, kind: tuple) -> Rep:
    """The H_k-module H^a ⊕ S^b viewed as a module supported at k."""
    a, b = kind
    return Rep.local_free(quiver_, k, a, b)


def mutate_decorated(T: Triangulation, MM: DecoratedRep, k: int, variant: int = 0):
    """Decorated mutation; returns (flipped triangulation, mutated decorated rep)."""
    res = mutate_rep_full(T, MM.module, k, variant)
    Qn = res.module.quiver
    module = res.module
    if any(MM.decoration[k]):
        module = direct_sum([module, plant(Qn, k, MM.decoration[k])])
    dec = list(MM.decoration)
    dec[k] = new_decoration_type(res.diagram)
    return res.triangulation, DecoratedRep(module, tuple(dec))


def mutate_decorated_sequence(T: Triangulation, MM: DecoratedRep, ks):
    """Apply mutations in the given order (first element first)."""
    for k in ks:
        T, MM = mutate_decorated(T, MM, k)
    return T, MM


@dataclass
class InvolutionReport:
    ok: bool
    free_case: bool
    detail: str
    extra_summand: tuple = (0, 0)


def check_involution(T: Triangulation, MM: DecoratedRep, k: int) -> InvolutionReport:
    D = local_diagram(T, MM.module, k)
    kb = la.kernel(D.beta)
    ia = la.image(D.alpha)
    free = (h_module_type(kb, D.eps_k, D.d)[1] == 0 and h_module_type(ia, D.eps_k, D.d)[1] == 0
            and MM.is_locally_free())
    T1, once = mutate_decorated(T, MM, k)
    T2, twice = mutate_decorated(T1, once, k)
    if free:
        iso = is_isomorphic(MM.module, twice.module)
        ok = bool(iso) and twice.decoration == MM.decoration
        return InvolutionReport(ok, True, "mu_k^2 = id" if ok else "mu_k^2 differs from the input")
    # plain modules: M ≅ mu_k^2(M) ⊕ ker beta / (ker beta ∩ im alpha)
    extra = new_decoration_type(D)
    plain2 = mutate_rep(T1, mutate_rep(T, MM.module, k), k)
    rhs = direct_sum([plain2, plant(MM.module.quiver, k, extra)])
    iso = is_isomorphic(MM.module, rhs)
    return InvolutionReport(bool(iso), False,
                            "decomposition holds" if iso else "decomposition fails", extra)
