import itertools

import pytest

from orbiclust.algebra import PathAlgebra
from orbiclust.errors import NotLocallyFree, SizeBound
from orbiclust.fixtures import c2tilde_t0, digon_two_points, disk
from orbiclust.grassmannian import count_submodules, euler_characteristic, gaussian_binomial, lf_f_polynomial
from orbiclust.invariants import tower
from orbiclust.laurent import parse
from orbiclust.orbifold import quiver
from orbiclust.reps import Rep, direct_sum, local_structure
from orbiclust.suites import WORKED_ADDRESS

from conftest import brute_force_counts

Y3 = ("y1", "y2", "y3")


def small_modules():
    T0 = c2tilde_t0()
    A = PathAlgebra.of(T0)
    Q = A.quiver
    mods = {
        "P2": A.projective(1), "P3": A.projective(2), "I1": A.injective(0), "I2": A.injective(1),
        "M2": tower(T0, 1, WORKED_ADDRESS)[1].module,
        "E1+E1": direct_sum([Rep.local_free(Q, 0), Rep.local_free(Q, 0)]),
        "S2+P3": direct_sum([Rep.simple(Q, 1), A.projective(2)]),
    }
    D = PathAlgebra.of(digon_two_points())
    mods["digon P1"] = D.projective(0)
    mods["disk4 P2"] = PathAlgebra.of(disk(4)).projective(1)
    return mods


MODULES = small_modules()


# brute force enumerates every subspace, so keep dimensions small for p = 5
CASES = [(name, p) for name in sorted(MODULES) for p in (3, 5) if max(MODULES[name].dims) <= (3 if p == 3 else 2)]


@pytest.mark.parametrize("name, p", CASES)
def test_point_counts_match_brute_force(name, p):
    M = MODULES[name]
    expected = brute_force_counts(M, p)
    ranks = [local_structure(M, i)[0] for i in range(M.n)]
    for r in itertools.product(*(range(x + 1) for x in ranks)):
        assert count_submodules(M, r, p) == expected.get(r, 0), r


def test_gaussian_binomial():
    assert [gaussian_binomial(4, k, 2) for k in range(5)] == [1, 15, 35, 15, 1]
    assert gaussian_binomial(3, 5, 7) == 0


def test_euler_characteristic_of_ordinary_grassmannian():
    # S2^3 at an ordinary vertex: submodules of rank 1 form P^2, so chi = 3 and count is q^2 + q + 1
    Q = quiver(c2tilde_t0())
    M = direct_sum([Rep.simple(Q, 1)] * 3)
    chi, poly = euler_characteristic(M, (0, 1, 0), return_poly=True)
    assert chi == 3
    assert poly == parse("q^2 + q + 1", ("q",))


def test_f_polynomials_of_small_modules():
    Q = quiver(c2tilde_t0())
    for k in range(3):
        E = Rep.local_free(Q, k)
        ys = Y3
        assert lf_f_polynomial(E) == parse(f"1 + y{k + 1}", ys)
    assert lf_f_polynomial(Rep.zero(Q)) == parse("1", Y3)


def test_worked_f_polynomials():
    T0 = c2tilde_t0()
    assert lf_f_polynomial(tower(T0, 1, WORKED_ADDRESS)[1].module) == parse("1 + y3 + y2*y3 + y1*y2*y3", Y3)
    assert lf_f_polynomial(PathAlgebra.of(T0).projective(2)) == parse("1 + y3", Y3)


def test_oracle_refuses_non_free_and_large_modules():
    Q = quiver(c2tilde_t0())
    with pytest.raises(NotLocallyFree):
        lf_f_polynomial(Rep.simple(Q, 0))
    big = direct_sum([PathAlgebra(Q).projective(0)] * 2)
    with pytest.raises(SizeBound):
        lf_f_polynomial(big, bound=12)


def test_non_polynomial_counts_are_reported(monkeypatch):
    import orbiclust.grassmannian as gr
    from orbiclust.errors import NotPolynomialCount

    monkeypatch.setattr(gr, "count_submodules", lambda M, r, p, red=None: 2 ** p)
    with pytest.raises(NotPolynomialCount):
        gr.euler_characteristic(Rep.local_free(quiver(c2tilde_t0()), 1), (0, 1, 0))
