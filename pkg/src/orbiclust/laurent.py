"""Multivariate Laurent polynomials with integer coefficients.

A ``LaurentPoly`` is an immutable map from integer exponent vectors to nonzero
integer coefficients over a fixed ordered list of variable names.  Terms are
kept in ascending lexicographic order of their exponent vectors, so equal
polynomials print identically.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    DivNotExact,
    InputError,
    NegativeCoefficient,
    NonIntegerCoefficient,
    NotPolynomial,
    UnboundVariable,
)


class LaurentPoly:
    __slots__ = ("variables", "_terms", "_hash")

    def __init__(self, variables: Iterable[str], terms: Mapping[tuple, int] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise InputError(f"exponent vector {exps} does not match {n} variables")
            c = int(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, variables):
        return cls(variables)

    @classmethod
    def constant(cls, variables, value: int):
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def monomial(cls, variables, exps, coeff: int = 1):
        return cls(variables, {tuple(exps): coeff})

    @classmethod
    def gen(cls, variables, name: str):
        variables = tuple(variables)
        if name not in variables:
            raise UnboundVariable(f"unknown variable {name!r}")
        exps = [0] * len(variables)
        exps[variables.index(name)] = 1
        return cls(variables, {tuple(exps): 1})

    # container protocol
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def coefficient(self, exps) -> int:
        return self._terms.get(tuple(exps), 0)

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.variables != self.variables:
                raise InputError(f"variable lists differ: {self.variables} vs {other.variables}")
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(self.variables, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, power: int):
        if power < 0:
            if not self.is_monomial():
                raise DivNotExact("only monomials can be raised to negative powers")
            (e, c), = self._terms.items()
            if abs(c) != 1:
                raise DivNotExact("monomial coefficient is not a unit")
            return LaurentPoly(self.variables, {tuple(power * x for x in e): c ** (-power)})
        result = LaurentPoly.constant(self.variables, 1)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(self.variables, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.variables == other.variables and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, tuple(self._terms.items())))
        return self._hash

    def sort_key(self):
        """Deterministic total order used to canonicalise clusters."""
        return tuple((e, c) for e, c in self._terms.items())

    # structure
    def is_monomial(self):
        return len(self._terms) == 1

    def is_polynomial(self):
        return all(x >= 0 for e in self._terms for x in e)

    def leading(self):
        e = next(reversed(self._terms))
        return e, self._terms[e]

    def min_exponents(self):
        return tuple(min(col) for col in zip(*self._terms)) if self._terms else None

    def max_exponents(self):
        return tuple(max(col) for col in zip(*self._terms)) if self._terms else None

    def div_exact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient ``self / other``; raises DivNotExact otherwise.

        Long division by leading terms.  For an exact quotient the Newton
        polytope of ``self`` is the Minkowski sum of those of the factors, so
        every quotient term lies in a box computed up front; leaving it means
        the division cannot be exact and also guarantees termination.
        """
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return self
        lo = tuple(a - b for a, b in zip(self.min_exponents(), other.min_exponents()))
        hi = tuple(a - b for a, b in zip(self.max_exponents(), other.max_exponents()))
        lead_e, lead_c = other.leading()
        rem = dict(self._terms)
        quot = {}
        while rem:
            top = max(rem)
            c = rem[top]
            qe = tuple(a - b for a, b in zip(top, lead_e))
            if c % lead_c or any(x < l or x > h for x, l, h in zip(qe, lo, hi)):
                raise DivNotExact(f"{other} does not divide {self}")
            qc = c // lead_c
            quot[qe] = qc
            for e, oc in other._terms.items():
                t = tuple(a + b for a, b in zip(qe, e))
                v = rem.get(t, 0) - qc * oc
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return LaurentPoly(self.variables, quot)

    # evaluation
    def substitute(self, bindings: Mapping[str, "LaurentPoly | int"], variables=None) -> "LaurentPoly":
        """Replace every occurring variable by a Laurent polynomial.

        All values must share one variable list (given by ``variables`` when
        every binding is an integer).
        """
        target = variables
        for v in bindings.values():
            if isinstance(v, LaurentPoly):
                if target is None:
                    target = v.variables
                elif tuple(target) != v.variables:
                    raise InputError("substituted values use different variable lists")
        if target is None:
            target = ()
        target = tuple(target)
        used = {i for e in self._terms for i, x in enumerate(e) if x}
        for i in used:
            if self.variables[i] not in bindings:
                raise UnboundVariable(f"variable {self.variables[i]!r} is not bound")
        values = {}
        for i in used:
            v = bindings[self.variables[i]]
            values[i] = v if isinstance(v, LaurentPoly) else LaurentPoly.constant(target, v)
        cache: dict = {}

        def power(i, k):
            if (i, k) not in cache:
                cache[(i, k)] = values[i] ** k
            return cache[(i, k)]

        out = LaurentPoly(target)
        for e, c in self._terms.items():
            term = LaurentPoly.constant(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def specialize(self, values: Mapping[str, int]) -> "LaurentPoly":
        """Set some variables to integers and drop them from the variable list."""
        keep = [i for i, v in enumerate(self.variables) if v not in values]
        for name in values:
            if name not in self.variables:
                raise UnboundVariable(f"unknown variable {name!r}")
        out: dict = {}
        for e, c in self._terms.items():
            coeff = Fraction(c)
            for i, v in enumerate(self.variables):
                if v in values and e[i]:
                    val = values[v]
                    if val == 0 and e[i] < 0:
                        raise ZeroDivisionError(f"{v}=0 with negative exponent")
                    coeff *= Fraction(val) ** e[i]
            if coeff.denominator != 1:
                raise NonIntegerCoefficient("specialisation left a fractional coefficient")
            k = tuple(e[i] for i in keep)
            out[k] = out.get(k, 0) + int(coeff)
        return LaurentPoly([self.variables[i] for i in keep], out)

    def rename(self, variables) -> "LaurentPoly":
        """Same terms over a new list of names of the same length."""
        return LaurentPoly(variables, self._terms)

    def embed(self, variables) -> "LaurentPoly":
        """View as an element of a ring with a larger variable list."""
        variables = tuple(variables)
        pos = []
        for v in self.variables:
            if v not in variables:
                raise UnboundVariable(f"variable {v!r} missing from target ring")
            pos.append(variables.index(v))
        out = {}
        for e, c in self._terms.items():
            t = [0] * len(variables)
            for p, x in zip(pos, e):
                t[p] = x
            out[tuple(t)] = c
        return LaurentPoly(variables, out)

    # text format
    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            factors = []
            for name, x in zip(self.variables, e):
                if x == 1:
                    factors.append(name)
                elif x:
                    factors.append(f"{name}^{x}")
            mono = "*".join(factors)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"LaurentPoly({self})"

    def to_json(self):
        return {"variables": list(self.variables), "poly": str(self)}


class IntPoly(LaurentPoly):
    """Laurent polynomial with only nonnegative exponents."""

    __slots__ = ()

    def __init__(self, variables, terms=None):
        super().__init__(variables, terms)
        if not self.is_polynomial():
            raise NotPolynomial(f"negative exponent in {self}")

    @classmethod
    def from_laurent(cls, poly: LaurentPoly) -> "IntPoly":
        return cls(poly.variables, poly.terms)

    def evaluate(self, values: Mapping[str, int]) -> int:
        total = 0
        for e, c in self._terms.items():
            t = c
            for name, x in zip(self.variables, e):
                t *= values[name] ** x
            total += t
        return total


_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^\(?(-?\d+)\)?)?$")


def natural_key(name: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name)]


def parse(text: str, variables: Iterable[str] | None = None) -> LaurentPoly:
    """Parse ``2*x1^-1*x2 + x3 - 1``; factors may be separated by ``*`` or spaces."""
    src = text.strip()
    if not src:
        raise InputError("empty polynomial string")
    # split on +/- that are not part of an exponent
    chunks, sign, buf, i = [], 1, "", 0
    while i < len(src):
        ch = src[i]
        if ch in "+-" and not buf.rstrip().endswith("^") and buf.strip():
            chunks.append((sign, buf))
            sign, buf = (1 if ch == "+" else -1), ""
        elif ch in "+-" and not buf.strip():
            sign = sign * (1 if ch == "+" else -1)
        else:
            buf += ch
        i += 1
    chunks.append((sign, buf))
    parsed = []
    names = []
    for sign, chunk in chunks:
        tokens = [t for t in re.split(r"[\s*]+", chunk.strip()) if t]
        if not tokens:
            raise InputError(f"malformed term in {text!r}")
        coeff = sign
        exps: dict = {}
        for tok in tokens:
            if re.fullmatch(r"\d+", tok):
                coeff *= int(tok)
                continue
            m = _FACTOR.match(tok)
            if not m:
                raise InputError(f"cannot parse factor {tok!r} in {text!r}")
            name, power = m.group(1), int(m.group(2) or 1)
            exps[name] = exps.get(name, 0) + power
            if name not in names:
                names.append(name)
        parsed.append((coeff, exps))
    if variables is None:
        variables = sorted(names, key=natural_key)
    variables = tuple(variables)
    for name in names:
        if name not in variables:
            raise UnboundVariable(f"variable {name!r} not in {variables}")
    terms: dict = {}
    for coeff, exps in parsed:
        e = tuple(exps.get(v, 0) for v in variables)
        terms[e] = terms.get(e, 0) + coeff
    return LaurentPoly(variables, terms)


def tropical_eval(poly: LaurentPoly, bindings: Mapping[str, Iterable[int]], dim: int | None = None) -> tuple:
    """Evaluate a subtraction-free polynomial in the tropical semifield.

    Each variable is bound to an exponent vector; a monomial maps to the
    corresponding integer combination and addition becomes componentwise min.
    """
    if any(c < 0 for _, c in poly.items()):
        raise NegativeCoefficient(f"{poly} is not subtraction-free")
    vecs = {k: tuple(v) for k, v in bindings.items()}
    if dim is None:
        dim = len(next(iter(vecs.values()))) if vecs else 0
    best = None
    for e, _ in poly.items():
        acc = [0] * dim
        for name, x in zip(poly.variables, e):
            if x:
                if name not in vecs:
                    raise UnboundVariable(f"variable {name!r} is not bound")
                for i, v in enumerate(vecs[name]):
                    acc[i] += x * v
        best = acc if best is None else [min(a, b) for a, b in zip(best, acc)]
    return tuple(best) if best is not None else (0,) * dim


def interpolate_int_poly(samples: Iterable[tuple[int, int]], variable: str = "q") -> IntPoly:
    """Integer polynomial through the given (q, count) points.

    Raises NonIntegerCoefficient when the interpolant has fractional
    coefficients, i.e. the counts are not given by an integer polynomial.
    """
    samples = [(int(q), int(c)) for q, c in samples]
    xs = [q for q, _ in samples]
    if len(set(xs)) != len(xs):
        raise InputError("sample points must be distinct")
    # Newton divided differences, then expand to monomial coefficients
    coef = [Fraction(c) for _, c in samples]
    n = len(samples)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (q - xs[i]) + coef[i]
        shifted = [Fraction(0)] + poly[:-1]
        poly = [s - xs[i] * p for s, p in zip(shifted, poly)]
        poly[0] += coef[i]
    if any(c.denominator != 1 for c in poly):
        raise NonIntegerCoefficient(f"interpolated coefficients {[str(c) for c in poly]} are not integers")
    return IntPoly((variable,), {(k,): int(c) for k, c in enumerate(poly) if c})
