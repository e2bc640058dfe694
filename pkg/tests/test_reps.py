import random

import pytest

from orbiclust.algebra import PathAlgebra
from orbiclust.errors import AlgebraMismatch, InvalidRepresentation
from orbiclust.fixtures import c2tilde_t0, hexagon
from orbiclust.invariants import tower
from orbiclust.linalg import QQ
from orbiclust.orbifold import quiver
from orbiclust.reps import (DecoratedRep, Rep, direct_sum, hom_dim, indecomposable_summands, is_isomorphic,
                            is_locally_free, local_structure, rank_vector, validate_rep)
from orbiclust.suites import WORKED_ADDRESS

from conftest import hom_dim_oracle


def random_invertible(rng, n):
    while True:
        m = QQ.matrix(n, n, [rng.randint(-2, 2) for _ in range(n * n)])
        if n == 0 or m.det() != 0:
            return m


def c2_pool():
    A = PathAlgebra.of(c2tilde_t0())
    pool = [A.projective(i) for i in range(3)] + [A.injective(i) for i in range(3)]
    pool += [tower(c2tilde_t0(), ell, WORKED_ADDRESS)[1].module for ell in range(3)]
    pool += [Rep.local_free(A.quiver, 0), Rep.simple(A.quiver, 1), Rep.simple(A.quiver, 2)]
    return pool


POOL = c2_pool()


@pytest.mark.parametrize("i", range(len(POOL)))
def test_hom_dimensions_against_sympy(i):
    M = POOL[i]
    for N in POOL[::2]:
        assert hom_dim(M, N) == hom_dim_oracle(M, N)


def test_hom_from_projective_is_evaluation():
    A = PathAlgebra.of(c2tilde_t0())
    for M in POOL:
        assert [hom_dim(A.projective(i), M) for i in range(3)] == list(M.dims)
        assert [hom_dim(M, A.injective(i)) for i in range(3)] == list(M.dims)


@pytest.mark.parametrize("seed", range(5))
def test_isomorphism_survives_change_of_basis(seed):
    rng = random.Random(seed)
    M = POOL[seed + 6]
    P = [random_invertible(rng, d) for d in M.dims]
    N = M.change_basis(P)
    res = is_isomorphic(M, N, seed=seed)
    assert res
    # the witness intertwines the maps
    for a in M.quiver.arrows:
        assert res.witness[a.target] * M.maps[a.label] == N.maps[a.label] * res.witness[a.source]


def test_non_isomorphic_modules():
    A = PathAlgebra.of(c2tilde_t0())
    assert not is_isomorphic(A.projective(0), A.injective(2))
    assert is_isomorphic(A.projective(0), A.projective(0))


def test_indecomposable_summands_of_direct_sum():
    A = PathAlgebra.of(c2tilde_t0())
    parts = [A.projective(1), A.injective(0), Rep.simple(A.quiver, 1)]
    found = indecomposable_summands(direct_sum(parts))
    assert sorted(R.dims for R in found) == sorted(R.dims for R in parts)
    for R in parts:
        assert any(F.dims == R.dims and is_isomorphic(F, R) for F in found)
    assert len(indecomposable_summands(A.projective(0))) == 1


def test_local_structure():
    Q = quiver(c2tilde_t0())
    assert local_structure(Rep.local_free(Q, 0, 2, 1), 0) == (2, 1)
    assert not is_locally_free(Rep.simple(Q, 0))
    assert is_locally_free(Rep.simple(Q, 1))
    assert rank_vector(PathAlgebra(Q).projective(0)) == (1, 2, 2)


def test_relation_violations_are_reported():
    Q = quiver(c2tilde_t0())
    bad = Rep(Q, (2, 0, 0), {"eps1": [[1, 0], [0, 0]]})
    assert validate_rep(bad) == ["relation eps1^2 = 0 violated"]


def test_shape_errors():
    Q = quiver(c2tilde_t0())
    with pytest.raises(InvalidRepresentation):
        Rep(Q, (1, 1))
    with pytest.raises(InvalidRepresentation):
        Rep(Q, (1, 1, 0), {"1->2": [[1, 1]]})
    with pytest.raises(InvalidRepresentation):
        Rep(Q, (1, 1, 0), {"nope": [[1]]})


def test_modules_over_different_quivers():
    with pytest.raises(AlgebraMismatch):
        hom_dim(Rep.simple(quiver(c2tilde_t0()), 1), Rep.simple(quiver(hexagon()), 1))


def test_json_round_trip():
    for M in POOL:
        assert Rep.from_json(M.quiver, M.to_json()) == M
    MM = DecoratedRep(POOL[0], ((0, 0), (1, 0), (0, 0)))
    assert DecoratedRep.from_json(MM.quiver, MM.to_json()) == MM


def test_decoration_rules():
    Q = quiver(c2tilde_t0())
    with pytest.raises(InvalidRepresentation):
        DecoratedRep(Rep.zero(Q), ((0, 0), (0, 1), (0, 0)))
    assert DecoratedRep.negative(Q, 0, excess=True).decoration[0] == (0, 1)
    assert not DecoratedRep.negative(Q, 0, excess=True).is_locally_free()
