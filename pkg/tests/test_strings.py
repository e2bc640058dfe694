import pytest

from orbiclust.errors import CaseMismatch, InvalidWord
from orbiclust.fixtures import c2tilde_t0, digon_two_points
from orbiclust.linalg import QQ
from orbiclust.orbifold import quiver
from orbiclust.reps import Rep, indecomposable_summands, is_isomorphic, is_locally_free
from orbiclust.strings import (CASES, SCALARS, CaseEntry, StringWord, replay_case, replay_case_table,
                               string_module, walk_vertices)

Q0 = quiver(c2tilde_t0())


def word(*letters, start=None, band=False, scalar=1):
    return StringWord(start, tuple(tuple(l.split(" ")) for l in letters), band, scalar)


BAND = ("1->2 +", "2->3 +", "eps3 +", "2->3 -", "1->2 -", "eps1 -")


@pytest.mark.parametrize("w, quiv, position, message", [
    (word("1->2 +", "nope +"), Q0, 1, "unknown arrow"),
    (word("1->2 +", "1->2 +"), Q0, 1, "not composable"),
    (word("1->2 +", "1->2 -"), Q0, 1, "own inverse"),
    (word("eps1 +", "eps1 +"), Q0, 1, "forbidden composite"),
    (word("2->3 +", start=1), Q0, 0, "does not leave"),
    (word("1->2 +", "2->3 +", band=True), Q0, 1, "does not close"),
    (word(*(BAND * 2), band=True), Q0, 0, "proper power"),
    (word("3->1 +", "1->2 +"), quiver(digon_two_points()), 1, "forbidden composite"),
])
def test_invalid_words_report_position(w, quiv, position, message):
    with pytest.raises(InvalidWord, match=message) as info:
        walk_vertices(quiv, w)
    assert info.value.position == position


def test_zero_scalar_is_rejected():
    with pytest.raises(InvalidWord):
        string_module(Q0, word(*BAND, band=True, scalar=0))


def test_empty_words():
    assert string_module(Q0, StringWord()).total_dim == 0
    S = string_module(Q0, StringWord(start=2))
    assert S == Rep.simple(Q0, 1)


def test_string_module_maps():
    # 1 -> 2 -> 3 -> 3 along a, b, eps3: one basis vector per position
    M = string_module(Q0, word("1->2 +", "2->3 +", "eps3 +"))
    assert M.dims == (1, 1, 2)
    assert M.maps["1->2"] == QQ.from_rows([[1]], 1)
    assert M.maps["2->3"] == QQ.from_rows([[1], [0]], 1)
    assert M.maps["eps3"] == QQ.from_rows([[0, 0], [1, 0]], 2)
    assert len(indecomposable_summands(M)) == 1


def test_inverse_word_gives_isomorphic_module():
    w = word("1->2 +", "2->3 +", "eps3 +", "2->3 -")
    assert is_isomorphic(string_module(Q0, w), string_module(Q0, w.inverse()))


def test_band_modules():
    M2 = string_module(Q0, word(*BAND, band=True, scalar=2))
    M3 = string_module(Q0, word(*BAND, band=True, scalar=3))
    assert M2.dims == (2, 2, 2)
    assert is_locally_free(M2)
    assert len(indecomposable_summands(M2)) == 1
    assert not is_isomorphic(M2, M3)


def test_word_json_round_trip():
    w = word(*BAND, band=True, scalar=-1)
    back = StringWord.from_json(w.to_json())
    assert back.letters == w.letters and back.band and back.scalar == -1
    with pytest.raises(InvalidWord):
        StringWord.from_json([{"arrow": "1->2", "dir": "?"}])
    with pytest.raises(InvalidWord):
        StringWord.from_json(["1->2"])


def test_case_4a_module():
    T, MM = CASES["4.a"].build()
    M = MM.module
    k, left = T.index("k"), T.index("left")
    assert M.dims[k] == 2 and M.dims[left] == 2
    assert M.maps["left->k"] == QQ.from_rows([[1, 0], [0, 1]], 2)
    assert M.maps["epsk"] == QQ.from_rows([[0, 0], [1, 0]], 2)


def test_case_table_layout():
    assert len(CASES) == 18
    for name, entry in CASES.items():
        assert CASES[entry.partner].partner == name
        assert entry.pending == (int(name.split(".")[0]) >= 3)


@pytest.mark.parametrize("name", sorted(CASES))
def test_case_replays(name):
    scalars = SCALARS if CASES[name].uses_scalar else (1,)
    for s in scalars:
        assert replay_case(name, s).ok


def test_replay_table_count():
    reports = replay_case_table()
    assert all(r.ok for r in reports)
    assert len(reports) == sum(3 if e.uses_scalar else 1 for e in CASES.values())


def test_mismatch_is_reported():
    wrong = CaseEntry("x.a", True, False, CASES["7.a"].word, partner="3.b")
    CASES["x.a"] = wrong
    try:
        with pytest.raises(CaseMismatch):
            replay_case("x.a")
        assert not replay_case("x.a", raise_on_mismatch=False).ok
    finally:
        del CASES["x.a"]


def test_unknown_case():
    with pytest.raises(KeyError):
        replay_case_table("99.z")
