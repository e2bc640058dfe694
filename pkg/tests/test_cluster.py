import random

import pytest
import sympy

from orbiclust.cluster import (COEFFICIENT_FREE, PRINCIPAL, ClusterPattern, ExchangeMatrix, Seed, addresses,
                               cluster_h_vector, exchange_graph_bfs, extract_f_polynomial, extract_g_vector,
                               f_previous_root, find_symmetrizer, g_previous_root, mutate_matrix, reconstruct,
                               reduce_address)
from orbiclust.errors import IndexOutOfRange, NotSkewSymmetrizable
from orbiclust.fixtures import C2TILDE_FLIPS, c2tilde
from orbiclust.laurent import parse
from orbiclust.orbifold import b_matrix

WORKED = tuple(k - 1 for k in C2TILDE_FLIPS)


def fz_mutation(b, k):
    """Matrix mutation in the form b_ij + sgn(b_ik)[b_ik b_kj]_+."""
    n = len(b)
    sgn = lambda v: (v > 0) - (v < 0)
    return [[-b[i][j] if k in (i, j) else b[i][j] + sgn(b[i][k]) * max(b[i][k] * b[k][j], 0)
             for j in range(n)] for i in range(n)]


def random_skew_symmetrizable(rng, n):
    d = [rng.choice((1, 2)) for _ in range(n)]
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            # d_i b_ij = -d_j b_ji with small entries
            s = rng.randint(-2, 2) * d[i] * d[j]
            rows[i][j], rows[j][i] = s // d[i], -s // d[j]
    return ExchangeMatrix(rows, d)


@pytest.mark.parametrize("seed", range(20))
def test_matrix_mutation_matches_sign_formula_and_is_involutive(seed):
    rng = random.Random(seed)
    B = random_skew_symmetrizable(rng, 4)
    for k in range(4):
        assert mutate_matrix(B, k).to_lists() == fz_mutation(B.to_lists(), k)
        assert mutate_matrix(mutate_matrix(B, k), k) == B


def test_worked_exchange_matrices_follow_flips():
    # B(T_j) from the triangulations equals matrix mutation of B(T_0)
    B = b_matrix(c2tilde(0))
    assert B.to_lists() == [[0, -1, 0], [2, 0, -2], [0, 1, 0]]
    for j, k in enumerate(WORKED):
        B = mutate_matrix(B, k)
        assert B == b_matrix(c2tilde(j + 1))


def test_symmetrizer_detection():
    assert find_symmetrizer([[0, -1], [2, 0]]) == (2, 1)
    with pytest.raises(NotSkewSymmetrizable):
        ExchangeMatrix.from_rows([[0, 1], [1, 0]])
    with pytest.raises(IndexOutOfRange):
        mutate_matrix(ExchangeMatrix.from_rows([[0, 1], [-1, 0]]), 2)


def sympy_seed_mutation(xs, ys_trop, b, k):
    """Principal-coefficient seed mutation with sympy rational functions and tropical y."""
    n = len(xs)
    y = sympy.symbols(f"y1:{n + 1}")
    c = ys_trop[k]
    p_plus = sympy.Mul(*[y[j] ** max(c[j], 0) for j in range(n)])
    p_minus = sympy.Mul(*[y[j] ** max(-c[j], 0) for j in range(n)])
    num = p_plus * sympy.Mul(*[xs[i] ** max(b[i][k], 0) for i in range(n)]) \
        + p_minus * sympy.Mul(*[xs[i] ** max(-b[i][k], 0) for i in range(n)])
    new = list(xs)
    new[k] = sympy.factor(sympy.cancel(num / xs[k]))
    ys = []
    for j in range(n):
        if j == k:
            ys.append(tuple(-v for v in c))
        else:
            # y_j y_k^[b_kj]+ (y_k (+) 1)^-b_kj in Trop
            ys.append(tuple(ys_trop[j][i] + max(b[k][j], 0) * c[i] - b[k][j] * min(c[i], 0) for i in range(n)))
    return new, ys, fz_mutation(b, k)


def test_seed_mutation_against_sympy_rational_functions():
    B = b_matrix(c2tilde(0))
    n = B.n
    x = sympy.symbols(f"x1:{n + 1}")
    y = sympy.symbols(f"y1:{n + 1}")
    xs, ys, b = list(x), [tuple(int(i == j) for j in range(n)) for i in range(n)], B.to_lists()
    seed = Seed.initial(B)
    for k in (0, 2, 1, 2, 0, 1):
        xs, ys, b = sympy_seed_mutation(xs, ys, b, k)
        seed = seed.mutate(k)
        for mine, theirs in zip(seed.cluster, xs):
            assert sympy.simplify(sympy.sympify(str(mine).replace("^", "**")) - theirs) == 0
        assert [list(c) for c in seed.coeffs] == [list(c) for c in ys]
        assert seed.matrix.to_lists() == b


def test_worked_cluster_variables_at_t4():
    # g-vectors and F-polynomials of the worked C~2 example at T4
    B = b_matrix(c2tilde(0))
    seed = ClusterPattern(Seed.initial(B)).walk(WORKED).seed
    ys = ("y1", "y2", "y3")
    g = [extract_g_vector(X, B) for X in seed.cluster]
    assert g == [(-1, 0, 0), (0, 1, -1), (0, 0, -1)]
    F = [extract_f_polynomial(X) for X in seed.cluster]
    assert F[0] == parse("1 + y1", ys)
    assert F[1] == parse("1 + y3 + y2*y3 + y1*y2*y3", ys)
    assert F[2] == parse("1 + y3 + 2*y2*y3 + 2*y1*y2*y3 + y2^2*y3 + 2*y1*y2^2*y3 + y1^2*y2^2*y3", ys)


def test_h_vector_by_tropical_evaluation():
    B = b_matrix(c2tilde(0))
    F = parse("1 + y3 + 2*y2*y3 + 2*y1*y2*y3 + y2^2*y3 + 2*y1*y2^2*y3 + y1^2*y2^2*y3", ("y1", "y2", "y3"))
    assert cluster_h_vector(F, B)[2] == -1


def test_separation_formula_reconstructs_cluster_variables():
    B = b_matrix(c2tilde(0))
    pattern = ClusterPattern(Seed.initial(B))
    for address in addresses(3, 3):
        for X in pattern.walk(address).seed.cluster:
            assert reconstruct(extract_g_vector(X, B), extract_f_polynomial(X), B) == X


def test_coefficient_free_reconstruction():
    B = b_matrix(c2tilde(0))
    free = ClusterPattern(Seed.initial(B, COEFFICIENT_FREE))
    prin = ClusterPattern(Seed.initial(B))
    for address in addresses(3, 3):
        for Xf, Xp in zip(free.walk(address).seed.cluster, prin.walk(address).seed.cluster):
            rebuilt = reconstruct(extract_g_vector(Xp, B), extract_f_polynomial(Xp), B, COEFFICIENT_FREE)
            assert rebuilt == Xf


def test_recurrences_pull_back_g_and_f_one_edge():
    B0 = b_matrix(c2tilde(0))
    for address in addresses(3, 3):
        if not address:
            continue
        k = address[0]
        B1 = mutate_matrix(B0, k)
        X0 = ClusterPattern(Seed.initial(B0)).walk(address).seed.cluster
        X1 = ClusterPattern(Seed.initial(B1)).walk((k,) + address).seed.cluster
        for A, C in zip(X0, X1):
            F0, F1 = extract_f_polynomial(A), extract_f_polynomial(C)
            h0, h1 = cluster_h_vector(F0, B0), cluster_h_vector(F1, B1)
            assert f_previous_root(F1, h1[k], h0[k], B0, k) == F0
            assert g_previous_root(extract_g_vector(C, B1), h0[k], B0, k) == extract_g_vector(A, B0)


def test_addresses_are_reduced():
    assert reduce_address((0, 1, 1, 2)) == (0, 2)
    assert len(addresses(3, 2)) == 1 + 3 + 6


@pytest.mark.parametrize("rows, expected", [
    ([[0, 1], [-1, 0]], 5),     # A2
    ([[0, -1], [2, 0]], 6),     # C2
    ([[0, 1, 0], [-1, 0, 1], [0, -1, 0]], 14),  # A3
])
def test_finite_type_exchange_graphs_close(rows, expected):
    g = exchange_graph_bfs(Seed.initial(ExchangeMatrix.from_rows(rows)), 20)
    assert g.closed and len(g.nodes) == expected and not g.collisions


def test_seed_json_round_trip():
    seed = ClusterPattern(Seed.initial(b_matrix(c2tilde(0)))).walk((0, 2)).seed
    data = seed.to_json()
    assert set(data) == {"n", "B", "D", "mode", "cluster", "coeffs"}
    assert Seed.from_json(data) == seed
