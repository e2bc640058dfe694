"""g-vectors, h-vectors, F-polynomials and Caldero-Chapoton functions of modules."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg as la
from .cluster import COEFFICIENT_FREE, f_previous_root, pos, reconstruct, y_names
from .errors import (GVectorUndefined, InputError, NonPolynomialResult, NotLocallyFree,
                     OrbiclustError, SizeBound)
from .grassmannian import DEFAULT_BOUND
from .grassmannian import lf_f_polynomial as _oracle
from .laurent import IntPoly, LaurentPoly
from .mutation import h_module_type, local_diagram, mutate_decorated
from .orbifold import Triangulation, b_matrix, flip_sequence, quiver
from .reps import DecoratedRep, Rep, is_locally_free

ORACLE = "oracle"
RECURRENCE = "recurrence"
AUTO = "auto"


def _as_decorated(M) -> DecoratedRep:
    return M if isinstance(M, DecoratedRep) else DecoratedRep(M, ((0, 0),) * M.n)


def g_vector(T: Triangulation, MM) -> tuple:
    """rk ker gamma_k - rk M(k) + rk V(k) at every vertex."""
    MM = _as_decorated(MM)
    M = MM.module
    if not MM.is_locally_free():
        raise NotLocallyFree("g-vectors need a locally free module with free decoration")
    out = []
    for k in range(M.n):
        D = local_diagram(T, M, k)
        ker = la.kernel(D.gamma) if D.dim_out else la.QQ.zeros(0, 0)
        rank, excess = h_module_type(ker, D.eps_out, D.d)
        if excess:
            raise GVectorUndefined(f"ker gamma at vertex {k} is not free")
        out.append(rank - M.dims[k] // D.d + MM.decoration[k][0])
    return tuple(out)


@dataclass(frozen=True)
class HVector:
    """Entries -rk ker beta_k; ``mask[k]`` is False where ker beta_k is not free."""

    values: tuple
    mask: tuple

    @property
    def defined(self) -> bool:
        return all(self.mask)

    def __getitem__(self, k):
        if not self.mask[k]:
            raise GVectorUndefined(f"h_{k + 1} is undefined: ker beta is not free")
        return self.values[k]

    def to_json(self):
        return [v if m else None for v, m in zip(self.values, self.mask)]


def h_vector(T: Triangulation, M) -> HVector:
    M = M.module if isinstance(M, DecoratedRep) else M
    if not is_locally_free(M):
        raise NotLocallyFree("h-vectors need a locally free module")
    values, mask = [], []
    for k in range(M.n):
        D = local_diagram(T, M, k)
        rank, excess = h_module_type(la.kernel(D.beta), D.eps_k, D.d)
        values.append(-rank if not excess else 0)
        mask.append(not excess)
    return HVector(tuple(values), tuple(mask))


def lf_f_polynomial(T: Triangulation, M, bound: int = DEFAULT_BOUND) -> IntPoly:
    """F-polynomial from Euler characteristics of locally free Grassmannians."""
    M = M.module if isinstance(M, DecoratedRep) else M
    if quiver(T, check=False) != M.quiver:
        raise InputError("module and triangulation have different quivers")
    return _oracle(M, bound)


def mutation_chain(T: Triangulation, MM, address) -> list:
    """[(T, MM), (T1, mu_k1 MM), ...] applying the address left to right."""
    chain = [(T, _as_decorated(MM))]
    for k in address:
        chain.append(mutate_decorated(*chain[-1], k))
    return chain


def f_polynomial_by_recurrence(T: Triangulation, MM, address) -> IntPoly:
    """F by the one-step recurrence along an address that takes MM to a negative module.

    ``address`` is applied left to right; its end point must have zero module,
    where F = 1.  The F-polynomial is then pulled back edge by edge.
    """
    address = tuple(address)
    chain = mutation_chain(T, MM, address)
    end = chain[-1][1].module
    if end.total_dim:
        raise NonPolynomialResult(f"address {address} does not reach a negative module (dims {end.dims})")
    n = T.n
    F = IntPoly(y_names(n), {(0,) * n: 1})
    for step in range(len(address) - 1, -1, -1):
        k = address[step]
        Tk, Mk = chain[step]
        Tn, Mn = chain[step + 1]
        h_old, h_new = h_vector(Tk, Mk), h_vector(Tn, Mn)
        F = f_previous_root(F, h_new[k], h_old[k], b_matrix(Tk, check=False), k)
    return F


def f_polynomial(T: Triangulation, MM, method: str = AUTO, address=None,
                 bound: int = DEFAULT_BOUND) -> IntPoly:
    """F by the oracle, by the recurrence, or the oracle when small enough (``auto``)."""
    M = _as_decorated(MM).module
    if method == ORACLE or (method == AUTO and (address is None or M.total_dim <= bound)):
        return lf_f_polynomial(T, M, bound)
    if method in (RECURRENCE, AUTO):
        if address is None:
            raise InputError("the recurrence needs an address")
        return f_polynomial_by_recurrence(T, MM, address)
    raise InputError(f"unknown method {method!r}")


def tower_triangulation(T0: Triangulation, address) -> Triangulation:
    ids = T0.arc_ids
    return flip_sequence(T0, [ids[k] for k in address])


def tower(T0: Triangulation, ell: int, address):
    """The module mu_k1 ... mu_kp (E_ell^-) over T0, where T_t is T0 flipped along address.

    Returns (triangulation, decorated module); the triangulation is T0 up to
    the order of its triangles.
    """
    address = tuple(address)
    T = tower_triangulation(T0, address)
    MM = DecoratedRep.negative(quiver(T), ell)
    for k in reversed(address):
        T, MM = mutate_decorated(T, MM, k)
    return T, MM


def cc_function(T: Triangulation, MM, F: LaurentPoly | None = None, **kwargs) -> LaurentPoly:
    """x^g F(yhat) with coefficient-free yhat_i = prod_j x_j^b_ji."""
    g = g_vector(T, MM)
    if F is None:
        F = f_polynomial(T, MM, **kwargs)
    return reconstruct(g, F, b_matrix(T, check=False), COEFFICIENT_FREE)


@dataclass
class RecurrenceReport:
    k: int
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def failures(self) -> list:
        return [name for name, good in self.checks.items() if not good]


def verify_recurrences(T: Triangulation, MM, k: int, bound: int = DEFAULT_BOUND,
                       check_e: bool = True) -> RecurrenceReport:
    """Check the g recurrence, g_k = h_k - h'_k, the F identity and E(M) = E(mu_k M)."""
    MM = _as_decorated(MM)
    report = RecurrenceReport(k)
    T1, MM1 = mutate_decorated(T, MM, k)
    if not (MM.is_locally_free() and MM1.is_locally_free()):
        raise NotLocallyFree("both the module and its mutation must be locally free")
    B = b_matrix(T, check=False)
    g, g1 = g_vector(T, MM), g_vector(T1, MM1)
    h, h1 = h_vector(T, MM), h_vector(T1, MM1)
    if not (h.mask[k] and h1.mask[k]):
        report.notes.append("h_k undefined on one side")
        report.checks["h defined"] = False
        return report
    hk, hk1 = h.values[k], h1.values[k]
    expect = tuple(-g[k] if j == k else g[j] + pos(B[j, k]) * g[k] - B[j, k] * hk for j in range(T.n))
    report.checks["g recurrence"] = g1 == expect
    report.checks["g_k = h_k - h'_k"] = g[k] == hk - hk1
    try:
        F, F1 = lf_f_polynomial(T, MM, bound), lf_f_polynomial(T1, MM1, bound)
        try:
            report.checks["F recurrence"] = f_previous_root(F1, hk1, hk, B, k) == F
        except NonPolynomialResult:
            report.checks["F recurrence"] = False
    except SizeBound:
        report.notes.append("F identity skipped: module above the oracle bound")
    if check_e:
        from .rigidity import e_invariant

        try:
            report.checks["E preserved"] = e_invariant(T, MM) == e_invariant(T1, MM1)
        except OrbiclustError as exc:
            report.notes.append(f"E check failed to run: {exc}")
            report.checks["E preserved"] = False
    return report
