import pytest

from orbiclust.algebra import PathAlgebra
from orbiclust.errors import RelationViolated
from orbiclust.fixtures import FIXTURES, c2tilde_t0
from orbiclust.invariants import tower
from orbiclust.mutation import (check_involution, local_diagram, mutate_decorated, mutate_rep,
                                mutate_rep_full)
from orbiclust.orbifold import flip, quiver
from orbiclust.reps import DecoratedRep, Rep, direct_sum, is_isomorphic
from orbiclust.suites import WORKED_ADDRESS, involution_suite, non_free_examples, tower_modules


def sample_modules(name, length=2):
    T0 = FIXTURES[name]()
    A = PathAlgebra.of(T0)
    out = [(T0, A.projective(i)) for i in range(T0.n)] + [(T0, A.injective(i)) for i in range(T0.n)]
    out += [(T, MM.module) for _, _, T, MM in tower_modules(T0, length)]
    return out


@pytest.mark.parametrize("name", ["c2tilde", "digon2", "disk4"])
def test_local_diagram_identities(name):
    for T, M in sample_modules(name):
        for k in range(T.n):
            D = local_diagram(T, M, k)
            assert D.check() == []
            assert D.dims()[1] == M.dims[k]


def test_relation_violation_is_rejected():
    Q = quiver(c2tilde_t0())
    bad = Rep(Q, (2, 0, 0), {"eps1": [[1, 0], [0, 0]]})
    with pytest.raises(RelationViolated):
        local_diagram(c2tilde_t0(), bad, 0)


def test_negative_simple_becomes_local_free_module():
    T = c2tilde_t0()
    Q = quiver(T)
    for k in range(3):
        T1, MM = mutate_decorated(T, DecoratedRep.negative(Q, k), k)
        assert MM.module.dims == tuple(Q.d[k] if i == k else 0 for i in range(3))
        assert MM.decoration == ((0, 0),) * 3
        # and back
        _, back = mutate_decorated(T1, MM, k)
        assert back.module.total_dim == 0 and back.decoration[k] == (1, 0)


def test_mutated_module_lives_on_flipped_triangulation():
    T = c2tilde_t0()
    M = PathAlgebra.of(T).projective(0)
    res = mutate_rep_full(T, M, 1)
    assert res.triangulation.same_as(flip(T, 2))
    assert res.module.quiver == quiver(flip(T, 2))
    assert sum(res.summand_dims) == res.module.dims[1]


@pytest.mark.parametrize("variant", [1, 2, 3])
def test_splitting_choice_does_not_matter(variant):
    for T, M in sample_modules("c2tilde"):
        for k in range(T.n):
            a = mutate_rep_full(T, M, k).module
            b = mutate_rep_full(T, M, k, variant).module
            assert is_isomorphic(a, b)


def test_tower_module_dimensions():
    # dimension vectors of M_{l;0} along the worked address
    dims = [tower(c2tilde_t0(), ell, WORKED_ADDRESS)[1].module.dims for ell in range(3)]
    assert dims == [(2, 0, 0), (2, 1, 2), (4, 2, 2)]


@pytest.mark.parametrize("name, depth", [("c2tilde", 4), ("hexagon", 2), ("digon2", 2)])
def test_involution_on_reached_modules(name, depth):
    res = involution_suite(FIXTURES[name](), depth)
    assert res.ok, res.checks[0].line()


def test_decomposition_for_simple_at_pending_vertex():
    # S_1 at T0: nothing comes into or leaves through M_out, so mu_1 S_1 = 0 and the extra part is S_1
    T = c2tilde_t0()
    S = Rep.simple(quiver(T), 0)
    assert mutate_rep(T, S, 0).total_dim == 0
    rep = check_involution(T, DecoratedRep(S), 0)
    assert rep.ok and not rep.free_case and rep.extra_summand == (0, 1)


@pytest.mark.parametrize("name, T, MM, k", non_free_examples(), ids=lambda v: v if isinstance(v, str) else "")
def test_decomposition_for_non_free_modules(name, T, MM, k):
    rep = check_involution(T, MM, k)
    assert rep.ok, rep.detail
    if not rep.free_case:
        # the extra summand accounts for the dimension lost by mu_k twice
        T1 = flip(T, T.arcs[k].id)
        twice = mutate_rep(T1, mutate_rep(T, MM.module, k), k)
        a, b = rep.extra_summand
        assert twice.total_dim + 2 * a + b == MM.module.total_dim


def test_non_free_examples_cover_the_decomposition():
    reports = {name: check_involution(T, MM, k) for name, T, MM, k in non_free_examples()}
    assert not any(r.free_case for r in reports.values())
    assert reports["H3 + S3 at 3"].extra_summand == (1, 1)
    assert reports["P1 + S1 at 1"].extra_summand == (0, 1)
