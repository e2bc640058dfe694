import pytest

from orbiclust.cluster import mutate_matrix
from orbiclust.errors import InputError, InvalidTriangulation, NotAnArc
from orbiclust.fixtures import FIXTURES, c2tilde, c2tilde_t0, digon_two_points
from orbiclust.orbifold import Arc, Triangulation, b_matrix, flip, quiver, validate

# exchange matrices and non-loop arrows of the five C~2 triangulations
TABLE = {
    0: ([[0, -1, 0], [2, 0, -2], [0, 1, 0]], {(1, 2), (2, 3)}),
    1: ([[0, 1, 0], [-2, 0, -2], [0, 1, 0]], {(2, 3), (2, 1)}),
    2: ([[0, 1, 0], [-2, 0, 2], [0, -1, 0]], {(3, 2), (2, 1)}),
    3: ([[0, -1, 2], [2, 0, -2], [-2, 1, 0]], {(3, 1), (1, 2), (2, 3)}),
    4: ([[0, 1, -2], [-2, 0, 2], [2, -1, 0]], {(3, 2), (2, 1), (1, 3)}),
}


@pytest.mark.parametrize("j", range(5))
def test_c2tilde_table(j):
    T = c2tilde(j)
    B, arrows = TABLE[j]
    assert b_matrix(T).to_lists() == B
    Q = quiver(T)
    found = {(Q.vertices[a.source], Q.vertices[a.target]) for a in Q.ordinary_arrows()}
    assert found == arrows
    assert {Q.vertices[a.source] for a in Q.arrows if a.is_loop} == {1, 3}


def bare_triangle(pending):
    arcs = tuple(Arc(i, i in pending) for i in (1, 2, 3))
    return Triangulation(arcs, (), ((1, 3, 2),))


@pytest.mark.parametrize("pending, expected", [
    ((), [[0, -1, 1], [1, 0, -1], [-1, 1, 0]]),
    ((3,), [[0, -1, 2], [1, 0, -2], [-1, 1, 0]]),
    ((2, 3), [[0, -2, 2], [1, 0, -2], [-1, 2, 0]]),
])
def test_regular_triangle_matrices(pending, expected):
    assert b_matrix(bare_triangle(pending), check=False).to_lists() == expected


def test_symmetrizer_makes_db_skew():
    for name, make in FIXTURES.items():
        T = make()
        rows, d = b_matrix(T).to_lists(), T.symmetrizer
        n = len(rows)
        assert all(d[i] * rows[i][j] == -d[j] * rows[j][i] for i in range(n) for j in range(n)), name


def test_flip_is_involutive_and_compatible_with_mutation(fixture_triangulation):
    name, T = fixture_triangulation
    for k, arc in enumerate(T.arc_ids):
        T1 = flip(T, arc)
        assert not validate(T1)
        assert flip(T1, arc).same_as(T)
        assert b_matrix(T1) == mutate_matrix(b_matrix(T), k)


def test_double_flip_gives_same_quiver():
    T = c2tilde_t0()
    for arc in T.arc_ids:
        assert quiver(flip(flip(T, arc), arc)) == quiver(T)


def test_relations_come_from_internal_triangles():
    Q = quiver(digon_two_points())
    # the triangle (1, 3, 2) gives a 3-cycle with all three length-two composites zero
    assert len(Q.ordinary_arrows()) == 3
    cycle = {r for r in Q.relations if r[0] != r[1]}
    assert len(cycle) == 3
    loops = {r for r in Q.relations if r[0] == r[1]}
    assert loops == {("eps2", "eps2"), ("eps3", "eps3")}
    # only eps^2 = 0 in the two-triangle digon
    assert set(quiver(c2tilde_t0()).relations) == {("eps1", "eps1"), ("eps3", "eps3")}


@pytest.mark.parametrize("mutate, message", [
    (lambda d: d["triangles"].pop(), "multiplicity"),
    (lambda d: d["triangles"].append([2, 2, "bL"]), "self-folded"),
    (lambda d: d["triangles"][0].__setitem__(2, "zz"), "unknown side"),
    (lambda d: d.__setitem__("orbifold_points", 3), "orbifold points"),
])
def test_validation_messages(mutate, message):
    data = c2tilde_t0().to_json()
    mutate(data)
    with pytest.raises(InvalidTriangulation, match=message):
        b_matrix(Triangulation.from_json(data))


def test_flip_rejects_non_arcs():
    with pytest.raises(NotAnArc):
        flip(c2tilde_t0(), "bL")


def test_malformed_json():
    with pytest.raises(InputError):
        Triangulation.from_json({"arcs": [{"pending": True}], "triangles": []})


def test_json_round_trip(fixture_triangulation):
    _, T = fixture_triangulation
    assert Triangulation.from_json(T.to_json()) == T
    Q = quiver(T)
    data = Q.to_json()
    assert len(data["arrows"]) == len(Q.arrows)
