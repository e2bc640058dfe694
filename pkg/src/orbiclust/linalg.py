"""Exact linear algebra over the rationals and prime fields.

Matrices are python-flint ``fmpq_mat`` (rationals) or ``nmod_mat`` (integers
mod p).  Linear maps act on column vectors, and a subspace is stored as a
matrix whose columns form a basis of it.  Every helper takes a ``Field`` so the
same code runs over QQ and over F_p.
"""

from __future__ import annotations

from fractions import Fraction

import flint


class Field:
    """Factory for matrices over one fixed field."""

    def __init__(self, modulus: int | None = None):
        self.modulus = modulus

    def __repr__(self):
        return "QQ" if self.modulus is None else f"GF({self.modulus})"

    def __eq__(self, other):
        return isinstance(other, Field) and other.modulus == self.modulus

    def __hash__(self):
        return hash(self.modulus)

    def matrix(self, nrows: int, ncols: int, entries=None):
        if entries is None:
            entries = [0] * (nrows * ncols)
        if self.modulus is None:
            return flint.fmpq_mat(nrows, ncols, [to_fmpq(e) for e in entries])
        return flint.nmod_mat(nrows, ncols, [int(e) % self.modulus for e in entries], self.modulus)

    def from_rows(self, rows, ncols: int | None = None):
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return self.matrix(len(rows), ncols, [e for r in rows for e in r])

    def zeros(self, nrows: int, ncols: int):
        return self.matrix(nrows, ncols)

    def identity(self, n: int):
        m = self.matrix(n, n)
        for i in range(n):
            m[i, i] = 1
        return m

    def scalar(self, value):
        if self.modulus is None:
            return to_fmpq(value)
        return flint.nmod(int(value) % self.modulus, self.modulus)

    def convert(self, mat):
        """Copy a rational matrix into this field (reducing mod p if needed)."""
        if self.modulus is None:
            return mat
        entries = []
        for e in mat.entries():
            e = flint.fmpq(e)
            entries.append(int(e.p) * pow(int(e.q), -1, self.modulus))
        return self.matrix(mat.nrows(), mat.ncols(), entries)


QQ = Field()


def GF(p: int) -> Field:
    return Field(p)


def to_fmpq(value):
    if isinstance(value, flint.fmpq):
        return value
    if isinstance(value, Fraction):
        return flint.fmpq(value.numerator, value.denominator)
    if isinstance(value, str):
        f = Fraction(value)
        return flint.fmpq(f.numerator, f.denominator)
    if isinstance(value, (int, flint.fmpz)):
        return flint.fmpq(value)
    if isinstance(value, float) and value.is_integer():
        return flint.fmpq(int(value))
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def field_of(mat) -> Field:
    if isinstance(mat, flint.nmod_mat):
        return Field(int(mat.modulus()))
    return QQ


def shape(mat):
    return mat.nrows(), mat.ncols()


def rows_of(mat):
    return mat.tolist()


def hstack(mats, nrows: int | None = None, field: Field = QQ):
    mats = list(mats)
    if not mats:
        return field.zeros(nrows or 0, 0)
    field = field_of(mats[0])
    r = mats[0].nrows()
    total = sum(m.ncols() for m in mats)
    out = field.zeros(r, total)
    offset = 0
    for m in mats:
        assert m.nrows() == r, "row mismatch in hstack"
        for i in range(r):
            for j in range(m.ncols()):
                out[i, offset + j] = m[i, j]
        offset += m.ncols()
    return out


def vstack(mats, ncols: int | None = None, field: Field = QQ):
    mats = list(mats)
    if not mats:
        return field.zeros(0, ncols or 0)
    field = field_of(mats[0])
    c = mats[0].ncols()
    total = sum(m.nrows() for m in mats)
    out = field.zeros(total, c)
    offset = 0
    for m in mats:
        assert m.ncols() == c, "column mismatch in vstack"
        for i in range(m.nrows()):
            for j in range(c):
                out[offset + i, j] = m[i, j]
        offset += m.nrows()
    return out


def block_diag(mats, field: Field = QQ):
    mats = list(mats)
    if mats:
        field = field_of(mats[0])
    r = sum(m.nrows() for m in mats)
    c = sum(m.ncols() for m in mats)
    out = field.zeros(r, c)
    ro = co = 0
    for m in mats:
        for i in range(m.nrows()):
            for j in range(m.ncols()):
                out[ro + i, co + j] = m[i, j]
        ro += m.nrows()
        co += m.ncols()
    return out


def submatrix(mat, rows, cols):
    field = field_of(mat)
    rows = list(rows)
    cols = list(cols)
    out = field.zeros(len(rows), len(cols))
    for a, i in enumerate(rows):
        for b, j in enumerate(cols):
            out[a, b] = mat[i, j]
    return out


def columns(mat, cols):
    return submatrix(mat, range(mat.nrows()), cols)


def is_zero(mat) -> bool:
    return all(e == 0 for e in mat.entries())


def rank(mat) -> int:
    if mat.nrows() == 0 or mat.ncols() == 0:
        return 0
    return mat.rank()


def rref(mat):
    """Reduced row echelon form together with the pivot column list."""
    if mat.nrows() == 0 or mat.ncols() == 0:
        return mat, []
    reduced, rk = mat.rref()
    pivots = []
    for i in range(rk):
        for j in range(reduced.ncols()):
            if reduced[i, j] != 0:
                pivots.append(j)
                break
    return reduced, pivots


def kernel(mat):
    """Basis of the null space (as columns), in the canonical rref order."""
    field = field_of(mat)
    n = mat.ncols()
    reduced, pivots = rref(mat)
    free = [j for j in range(n) if j not in set(pivots)]
    out = field.zeros(n, len(free))
    for col, f in enumerate(free):
        out[f, col] = 1
        for i, p in enumerate(pivots):
            out[p, col] = -reduced[i, f]
    return out


def image(mat):
    """Basis of the column space: the pivot columns of ``mat`` itself."""
    _, pivots = rref(mat)
    return columns(mat, pivots)


def solve(a, b):
    """Some X with a X = b, or None when the system is inconsistent."""
    field = field_of(a)
    m, n = shape(a)
    k = b.ncols()
    aug = hstack([a, b]) if n + k else field.zeros(m, 0)
    reduced, pivots = rref(aug)
    if any(p >= n for p in pivots):
        return None
    x = field.zeros(n, k)
    for i, p in enumerate(pivots):
        for j in range(k):
            x[p, j] = reduced[i, n + j]
    return x


def inverse(mat):
    if mat.nrows() == 0:
        return mat
    return mat.inv()


def is_invertible(mat) -> bool:
    return mat.nrows() == mat.ncols() and rank(mat) == mat.nrows()


def in_span(basis, vectors) -> bool:
    return solve(basis, vectors) is not None


def span_sum(first, *rest):
    """Basis of the sum of the column spans of the given matrices."""
    subs = [s for s in (first, *rest) if s.ncols()]
    if not subs:
        return field_of(first).zeros(first.nrows(), 0)
    return image(hstack(subs))


def intersect(a, b):
    """Basis of span(a) ∩ span(b)."""
    field = field_of(a)
    if a.ncols() == 0 or b.ncols() == 0:
        return field.zeros(a.nrows(), 0)
    ker = kernel(hstack([a, -b]))
    coeffs = submatrix(ker, range(a.ncols()), range(ker.ncols()))
    return image(a * coeffs)


def preimage(f, sub):
    """Basis of {v : f v ∈ span(sub)}."""
    field = field_of(f)
    n = f.ncols()
    if n == 0:
        return field.zeros(0, 0)
    ker = kernel(hstack([f, -sub]) if sub.ncols() else f)
    return image(submatrix(ker, range(n), range(ker.ncols())))


def complement(sub, dim: int | None = None):
    """Standard basis vectors completing ``sub`` to a basis of the ambient space."""
    field = field_of(sub)
    n = sub.nrows() if dim is None else dim
    ident = field.identity(n)
    _, pivots = rref(hstack([sub, ident]) if sub.ncols() else ident)
    extra = [p - sub.ncols() for p in pivots if p >= sub.ncols()]
    return columns(ident, extra)


def coordinates(basis, vectors):
    """Coordinates of ``vectors`` in the (independent) column basis ``basis``."""
    x = solve(basis, vectors)
    if x is None:
        raise ValueError("vectors are not in the span of the basis")
    return x


def restrict(f, domain, codomain):
    """Matrix of f: span(domain) -> span(codomain) in the two given bases."""
    return coordinates(codomain, f * domain)


class QuotientSpace:
    """V / S with a fixed complement, for coordinates of cosets."""

    def __init__(self, ambient, sub):
        self.sub = sub
        self.comp = complement(sub, ambient)
        self.full = hstack([sub, self.comp]) if sub.ncols() else self.comp
        self.dim = self.comp.ncols()

    def project(self, vectors):
        """Quotient coordinates of the given ambient vectors."""
        x = coordinates(self.full, vectors)
        s = self.sub.ncols()
        return submatrix(x, range(s, s + self.dim), range(x.ncols()))

    def lift(self, coords):
        return self.comp * coords


def fraction_rows(mat):
    """Matrix entries as Python Fractions (ints for prime fields)."""
    if isinstance(mat, flint.nmod_mat):
        return [[int(e) for e in row] for row in mat.tolist()]
    return [[Fraction(int(e.p), int(e.q)) for e in row] for row in mat.tolist()]


class MatrixSystem:
    """Linear equations whose unknowns are matrices.

    Each equation is a sum of terms ``A @ X_u @ B`` (``A`` or ``B`` may be None
    for the identity) set equal to a right-hand side matrix (zero if omitted).
    """

    def __init__(self, shapes, field: Field = QQ):
        self.shapes = [tuple(s) for s in shapes]
        self.field = field
        self.offsets = []
        total = 0
        for r, c in self.shapes:
            self.offsets.append(total)
            total += r * c
        self.nvars = total
        self.rows = []
        self.rhs = []

    def add(self, terms, out_shape, rhs=None):
        p, q = out_shape
        block = [[0] * self.nvars for _ in range(p * q)]
        for u, a, b in terms:
            r_u, c_u = self.shapes[u]
            off = self.offsets[u]
            al = a.tolist() if a is not None else None
            bl = b.tolist() if b is not None else None
            for i in range(p):
                rows_r = range(r_u) if al is not None else (i,)
                for j in range(q):
                    cols_c = range(c_u) if bl is not None else (j,)
                    row = block[i * q + j]
                    for r in rows_r:
                        av = al[i][r] if al is not None else 1
                        if av == 0:
                            continue
                        for c in cols_c:
                            bv = bl[c][j] if bl is not None else 1
                            if bv != 0:
                                row[off + r * c_u + c] += av * bv
        self.rows.extend(block)
        if rhs is None:
            self.rhs.extend([0] * (p * q))
        else:
            rl = rhs.tolist()
            self.rhs.extend(rl[i][j] for i in range(p) for j in range(q))

    def _unpack(self, vec):
        out = []
        for (r, c), off in zip(self.shapes, self.offsets):
            m = self.field.zeros(r, c)
            for i in range(r):
                for j in range(c):
                    m[i, j] = vec[off + i * c + j, 0]
            out.append(m)
        return out

    def coefficient_matrix(self):
        flat = [e for row in self.rows for e in row]
        return self.field.matrix(len(self.rows), self.nvars, flat)

    def solution_space(self):
        """Basis of solutions of the homogeneous system, each a list of matrices."""
        if not self.rows:
            basis = self.field.identity(self.nvars)
        else:
            basis = kernel(self.coefficient_matrix())
        return [self._unpack(columns(basis, [j])) for j in range(basis.ncols())]

    def particular_solution(self):
        """One solution (free variables set to zero) or None if inconsistent."""
        if not self.rows:
            return self._unpack(self.field.zeros(self.nvars, 1))
        rhs = self.field.matrix(len(self.rhs), 1, self.rhs)
        x = solve(self.coefficient_matrix(), rhs)
        return None if x is None else self._unpack(x)
