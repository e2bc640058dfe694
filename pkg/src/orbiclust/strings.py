"""String and band modules from words, and the mutation case tables.

A word is a walk in the quiver: each letter is an arrow (loops included)
traversed forwards (``+``) or backwards (``-``).  The module has one basis
vector per position of the walk.  A direct letter ``a`` between positions
p and p+1 sends e_p to e_{p+1}; an inverse letter sends e_{p+1} to e_p.
Bands close up: the last letter joins the last position to position 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CaseMismatch, InvalidWord
from .linalg import QQ, to_fmpq
from .mutation import mutate_decorated
from .orbifold import Arc, GentleQuiver, Triangulation, flip, quiver
from .reps import DecoratedRep, Rep, is_isomorphic, validate_rep

DIRECT, INVERSE = "+", "-"


@dataclass(frozen=True)
class StringWord:
    """Letters ``(arrow label, '+' or '-')`` read from ``start``.

    ``scalar`` multiplies the map of the letter at ``scalar_at``; for bands it
    is the band parameter and sits on the closing letter by default.
    """

    start: str | None = None
    letters: tuple = ()
    band: bool = False
    scalar: Fraction | int = 1
    scalar_at: int = -1

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple((str(l), str(d)) for l, d in self.letters))

    def __len__(self):
        return len(self.letters)

    def inverse(self) -> "StringWord":
        flipped = tuple((l, INVERSE if d == DIRECT else DIRECT) for l, d in reversed(self.letters))
        at = self.scalar_at % len(self.letters) if self.letters else 0
        return StringWord(None, flipped, self.band, self.scalar, len(self.letters) - 1 - at)

    def to_json(self) -> list:
        out: list = [{"arrow": l, "dir": d} for l, d in self.letters]
        if self.band:
            out.append({"band": True, "lambda": str(Fraction(self.scalar))})
        return out

    @classmethod
    def from_json(cls, data, start=None) -> "StringWord":
        letters, band, lam = [], False, 1
        if isinstance(data, dict):
            start = data.get("start", start)
            data = data.get("letters", [])
        for pos, item in enumerate(data):
            if not isinstance(item, dict):
                raise InvalidWord("letters must be JSON objects", pos)
            if item.get("band"):
                band = True
                lam = Fraction(str(item.get("lambda", 1)))
                continue
            if "arrow" not in item or item.get("dir", DIRECT) not in (DIRECT, INVERSE):
                raise InvalidWord("a letter needs an arrow and a direction '+' or '-'", pos)
            letters.append((item["arrow"], item.get("dir", DIRECT)))
        return cls(start, tuple(letters), band, lam)


def _ends(Q: GentleQuiver, letter):
    a = Q.arrow(letter[0])
    return (a.source, a.target) if letter[1] == DIRECT else (a.target, a.source)


def _bad_pair(Q: GentleQuiver, x, y) -> str | None:
    """Why the consecutive letters x, y cannot appear in a word (None if fine)."""
    if x[0] == y[0] and x[1] != y[1]:
        return f"letter {x[0]} is followed by its own inverse"
    if x[1] == y[1] == DIRECT and Q.vanishes(x[0], y[0]):
        return f"{x[0]} then {y[0]} is a forbidden composite"
    if x[1] == y[1] == INVERSE and Q.vanishes(y[0], x[0]):
        return f"{y[0]} then {x[0]} is a forbidden composite"
    return None


def _is_proper_power(letters) -> bool:
    n = len(letters)
    return any(n % p == 0 and letters == letters[:p] * (n // p) for p in range(1, n))


def walk_vertices(Q: GentleQuiver, w: StringWord) -> list:
    """Vertex indices of the walk positions, validating the word."""
    vertices = list(Q.vertices)
    labels = set(Q.labels)
    for pos, (l, d) in enumerate(w.letters):
        if l not in labels:
            raise InvalidWord(f"unknown arrow {l!r}", pos)
        if d not in (DIRECT, INVERSE):
            raise InvalidWord(f"direction must be '+' or '-', got {d!r}", pos)
    if not w.letters:
        if w.band:
            raise InvalidWord("a band needs at least one letter", 0)
        if w.start is None:
            return []
        names = [str(v) for v in vertices]
        if str(w.start) not in names:
            raise InvalidWord(f"unknown start vertex {w.start!r}", 0)
        return [names.index(str(w.start))]
    path = [_ends(Q, w.letters[0])[0]]
    if w.start is not None and str(vertices[path[0]]) != str(w.start):
        raise InvalidWord(f"first letter does not leave {w.start!r}", 0)
    for pos, letter in enumerate(w.letters):
        src, tgt = _ends(Q, letter)
        if src != path[-1]:
            raise InvalidWord("letters are not composable", pos)
        if pos:
            why = _bad_pair(Q, w.letters[pos - 1], letter)
            if why:
                raise InvalidWord(why, pos)
        path.append(tgt)
    if w.band:
        if path[-1] != path[0]:
            raise InvalidWord("band does not close up", len(w.letters) - 1)
        why = _bad_pair(Q, w.letters[-1], w.letters[0]) if len(w.letters) > 1 else None
        if why:
            raise InvalidWord(why, len(w.letters) - 1)
        if _is_proper_power(w.letters):
            raise InvalidWord("band word is a proper power", 0)
        path.pop()
    return path


def string_module(Q: GentleQuiver, w: StringWord) -> Rep:
    """The string (or band) module of a word."""
    path = walk_vertices(Q, w)
    if not path:
        return Rep.zero(Q)
    if to_fmpq(w.scalar) == 0:
        raise InvalidWord("the scalar must be nonzero", w.scalar_at % max(len(w.letters), 1))
    # coordinate of each position inside its vertex space
    slot, dims = [], [0] * Q.n
    for v in path:
        slot.append(dims[v])
        dims[v] += 1
    maps = {a.label: QQ.zeros(dims[a.target], dims[a.source]) for a in Q.arrows}
    count = len(path)
    at = w.scalar_at % len(w.letters) if w.letters else 0
    for pos, (l, d) in enumerate(w.letters):
        p, q = pos, (pos + 1) % count
        src, tgt = (p, q) if d == DIRECT else (q, p)
        value = to_fmpq(w.scalar) if pos == at else 1
        maps[l][slot[tgt], slot[src]] += value
    M = Rep(Q, dims, maps)
    problems = validate_rep(M)
    if problems:
        raise InvalidWord("; ".join(problems), None)
    return M


# mutation case tables

def _outer(side):
    return (side, f"{side}_b1", f"{side}_b2")


def ordinary_case_triangulation() -> Triangulation:
    """Two triangles glued along an ordinary arc k inside an octagon."""
    sides = ("top", "right", "bottom", "left")
    arcs = [Arc("k")] + [Arc(s) for s in sides]
    tris = [("k", "top", "right"), ("k", "bottom", "left")] + [_outer(s) for s in sides]
    boundary = [b for s in sides for b in _outer(s)[1:]]
    return Triangulation(tuple(arcs), tuple(boundary), tuple(tris), 0)


def pending_case_triangulation() -> Triangulation:
    """A pending arc k in one triangle whose other sides are arcs."""
    sides = ("left", "right")
    arcs = [Arc("k", True)] + [Arc(s) for s in sides]
    tris = [("k", "left", "right")] + [_outer(s) for s in sides]
    boundary = [b for s in sides for b in _outer(s)[1:]]
    return Triangulation(tuple(arcs), tuple(boundary), tuple(tris), 1)


@dataclass(frozen=True)
class CaseEntry:
    """One column of a case table: a decorated module before the flip at k."""

    name: str
    pending: bool
    flipped: bool               # True when the module lives on the flipped side
    word: StringWord | None = None
    decoration: tuple = ()      # (rank, excess) at k, for negative modules
    uses_scalar: bool = False
    partner: str = ""

    def triangulation(self) -> Triangulation:
        T = pending_case_triangulation() if self.pending else ordinary_case_triangulation()
        return flip(T, "k") if self.flipped else T

    def build(self, scalar=1) -> tuple:
        T = self.triangulation()
        Q = quiver(T)
        k = T.index("k")
        if self.word is None:
            dec = [(0, 0)] * Q.n
            if self.decoration:
                dec[k] = self.decoration
            return T, DecoratedRep(Rep.zero(Q) if self.decoration else Rep.simple(Q, k), tuple(dec))
        w = self.word
        if self.uses_scalar:
            w = StringWord(w.start, w.letters, w.band, scalar, w.scalar_at)
        return T, DecoratedRep(string_module(Q, w))


def _w(start, *letters, at=-1):
    return StringWord(start, tuple(tuple(l.split(" ")) for l in letters), scalar_at=at)


def _pair(num, pending, a_word, b_word, scalar=False, a_dec=(), b_dec=()):
    a = CaseEntry(f"{num}.a", pending, False, a_word, a_dec, scalar, f"{num}.b")
    b = CaseEntry(f"{num}.b", pending, True, b_word, b_dec, scalar, f"{num}.a")
    return [a, b]


CASES = {e.name: e for e in [
    # ordinary k
    *_pair(0, False, None, None, b_dec=(1, 0)),
    *_pair(1, False, _w("left", "k->left -", "k->right +"), _w("left", "left->k +", "right->k -", at=0), True),
    *_pair(2, False, _w("top", "top->k +", "k->left +", at=0), _w("top", "top->left +"), True),
    # pending k, locally free modules
    *_pair(3, True, _w("right", "right->left +"), _w("right", "right->k +", "epsk +", "k->left +", at=0), True),
    *_pair(4, True, _w("left", "left->k +", "epsk +", "left->k -"),
           _w("left", "k->left -", "epsk +", "k->left +", at=0), True),
    *_pair(5, True, _w("k", "epsk +"), None, b_dec=(1, 0)),
    # pending k, modules with a socle summand
    *_pair(6, True, _w("left", "left->k +", "epsk -", "left->k -"),
           _w("left", "k->left -", "epsk -", "k->left +", at=0), True),
    *_pair(7, True, _w("left", "left->k +"), _w("left", "k->left -")),
    *_pair(8, True, None, None, b_dec=(0, 1)),
]}

SCALARS = (1, 2, -1)


@dataclass
class CaseReport:
    case: str
    scalar: object
    ok: bool
    result: DecoratedRep = field(repr=False, default=None)
    expected: DecoratedRep = field(repr=False, default=None)

    def describe(self) -> str:
        status = "ok" if self.ok else "MISMATCH"
        return f"case {self.case} (lambda={self.scalar}): {status}"


def replay_case(case: str, scalar=1, raise_on_mismatch: bool = True, seed: int = 0) -> CaseReport:
    """Mutate the case's module at k and compare with its partner column."""
    if case not in CASES:
        raise KeyError(f"unknown case {case!r}; known: {', '.join(sorted(CASES))}")
    entry = CASES[case]
    T, MM = entry.build(scalar)
    T1, result = mutate_decorated(T, MM, T.index("k"))
    _, expected = CASES[entry.partner].build(scalar)
    same = (result.decoration == expected.decoration
            and result.quiver == expected.quiver
            and bool(is_isomorphic(result.module, Rep(result.quiver, expected.module.dims,
                                                       expected.module.maps), seed=seed)))
    report = CaseReport(case, scalar, same, result, expected)
    if not same and raise_on_mismatch:
        raise CaseMismatch(f"case {case}: got {result.to_json()}, expected {expected.to_json()}")
    return report


def replay_case_table(case: str | None = None, scalars=SCALARS, seed: int = 0) -> list:
    """Replay one case (or all of them) for each scalar it depends on."""
    if case and case not in CASES:
        raise KeyError(f"unknown case {case!r}")
    names = [case] if case else sorted(CASES, key=lambda s: (int(s.split(".")[0]), s))
    out = []
    for name in names:
        for s in (scalars if CASES[name].uses_scalar else (1,)):
            out.append(replay_case(name, s, raise_on_mismatch=False, seed=seed))
    return out
