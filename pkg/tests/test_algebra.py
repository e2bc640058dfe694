import pytest

from orbiclust.algebra import PathAlgebra, opposite_quiver
from orbiclust.errors import NonFinite
from orbiclust.fixtures import FIXTURES, digon_two_points
from orbiclust.orbifold import Arrow, GentleQuiver
from orbiclust.reps import validate_rep


def test_dimension_of_c2tilde_algebra(a0):
    # by hand: e1 e2 e3, eps1 eps3, a b, a.eps1, b.a, eps3.b, b.a.eps1, eps3.b.a, eps3.b.a.eps1
    assert a0.dim == 13
    assert a0.is_closed_under_products()


def test_projective_and_injective_dimensions(a0):
    assert [a0.projective(i).dims for i in range(3)] == [(2, 2, 4), (0, 1, 2), (0, 0, 2)]
    assert [a0.injective(i).dims for i in range(3)] == [(2, 0, 0), (2, 1, 0), (4, 2, 2)]
    assert sum(a0.projective(i).total_dim for i in range(3)) == a0.dim
    assert sum(a0.injective(i).total_dim for i in range(3)) == a0.dim


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_projectives_and_injectives_satisfy_relations(name):
    A = PathAlgebra.of(FIXTURES[name]())
    for i in range(A.n):
        assert not validate_rep(A.projective(i))
        assert not validate_rep(A.injective(i))
    assert sum(A.projective(i).total_dim for i in range(A.n)) == A.dim


def test_three_cycle_composites_vanish():
    A = PathAlgebra.of(digon_two_points())
    assert A.is_closed_under_products()
    assert all(A.path_from_labels(r) is None for r in A.quiver.relations)


def test_opposite_reverses_arrows_and_relations(a0):
    op = a0.opposite
    assert op.dim == a0.dim
    for a in a0.quiver.arrows:
        b = op.quiver.arrow(a.label)
        assert (b.source, b.target) == (a.target, a.source)
    assert opposite_quiver(op.quiver) == a0.quiver


def test_dual_of_projective_is_injective_over_opposite(a0):
    from orbiclust.reps import is_isomorphic
    op = a0.opposite
    for i in range(3):
        assert is_isomorphic(a0.projective(i).dual(op.quiver), op.injective(i))


def test_unbounded_cycle_is_rejected():
    Q = GentleQuiver((1, 2), (1, 1), (Arrow("a", 0, 1), Arrow("b", 1, 0)), ())
    with pytest.raises(NonFinite):
        PathAlgebra(Q)


def test_bimodule_dimension(a0):
    # one arrow 1 -> 2 between a pending and an ordinary vertex
    assert a0.bimodule_dim(1, 0) == 2
    assert a0.bimodule_dim(0, 1) == 0
