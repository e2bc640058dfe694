import random

import flint
import pytest

from orbiclust import linalg as la
from orbiclust.linalg import GF, QQ

from conftest import to_sympy


def random_matrix(rng, r, c, field=QQ, rank=None):
    if rank is None:
        return field.matrix(r, c, [rng.randint(-3, 3) for _ in range(r * c)])
    a = field.matrix(r, rank, [rng.randint(-3, 3) for _ in range(r * rank)])
    b = field.matrix(rank, c, [rng.randint(-3, 3) for _ in range(rank * c)])
    return a * b


@pytest.mark.parametrize("seed", range(15))
def test_rank_kernel_image_against_sympy(seed):
    rng = random.Random(seed)
    m = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5), rank=rng.randint(0, 3))
    s = to_sympy(m)
    assert la.rank(m) == s.rank()
    ker = la.kernel(m)
    assert ker.ncols() == m.ncols() - s.rank()
    assert la.is_zero(m * ker) if ker.ncols() else True
    assert la.image(m).ncols() == s.rank()


@pytest.mark.parametrize("seed", range(10))
def test_intersection_and_sum_dimensions(seed):
    rng = random.Random(50 + seed)
    a = random_matrix(rng, 5, rng.randint(1, 3))
    b = random_matrix(rng, 5, rng.randint(1, 3))
    total = la.span_sum(a, b).ncols()
    inter = la.intersect(la.image(a), la.image(b)).ncols()
    assert total + inter == la.rank(a) + la.rank(b)


def test_preimage_and_complement():
    f = QQ.from_rows([[1, 0, 0], [0, 0, 0]], 3)
    sub = QQ.zeros(2, 0)
    pre = la.preimage(f, sub)
    assert pre.ncols() == 2
    comp = la.complement(pre, 3)
    assert la.rank(la.hstack([pre, comp])) == 3


def test_solve_consistent_and_inconsistent():
    a = QQ.from_rows([[1, 2], [2, 4]], 2)
    assert la.solve(a, QQ.from_rows([[1], [2]], 1)) is not None
    assert la.solve(a, QQ.from_rows([[1], [3]], 1)) is None


def test_finite_field_rank():
    m = GF(5).from_rows([[1, 2], [3, 1]], 2)  # det = 1 - 6 = -5 = 0 mod 5
    assert la.rank(m) == 1
    assert la.rank(QQ.from_rows([[1, 2], [3, 1]], 2)) == 2


def test_to_fmpq_conversions():
    from fractions import Fraction
    assert la.to_fmpq("3/4") == flint.fmpq(3, 4)
    assert la.to_fmpq(Fraction(-1, 2)) == flint.fmpq(-1, 2)
    assert la.to_fmpq(2.0) == 2
    with pytest.raises(TypeError):
        la.to_fmpq(0.5)


def test_quotient_space_projection():
    sub = QQ.from_rows([[1], [1], [0]], 1)
    q = la.QuotientSpace(3, sub)
    assert q.dim == 2
    assert la.is_zero(q.project(sub))


def test_matrix_system_solves_commutation():
    # all X with A X = X A for a nilpotent Jordan block: polynomials in A
    A = QQ.from_rows([[0, 0], [1, 0]], 2)
    sys_ = la.MatrixSystem([(2, 2)])
    sys_.add([(0, A, None), (0, None, -A)], (2, 2))
    sols = sys_.solution_space()
    assert len(sols) == 2
    for (X,) in sols:
        assert A * X == X * A


def test_matrix_system_particular_solution():
    sys_ = la.MatrixSystem([(1, 2)])
    B = QQ.from_rows([[1, 0], [0, 1]], 2)
    sys_.add([(0, None, B)], (1, 2), rhs=QQ.from_rows([[3, 4]], 2))
    (X,) = sys_.particular_solution()
    assert X == QQ.from_rows([[3, 4]], 2)
    sys2 = la.MatrixSystem([(1, 1)])
    sys2.add([(0, None, QQ.zeros(1, 1))], (1, 1), rhs=QQ.from_rows([[1]], 1))
    assert sys2.particular_solution() is None
