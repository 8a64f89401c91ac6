import pytest

from nfold.errors import ValidationError
from nfold.strict import (
    FiniteDoubleCategory,
    check_strict_axioms,
    corpus,
    corrupt_interchange,
    group_squares,
    monoid_squares,
    poset_squares,
    terminal,
)


@pytest.mark.parametrize("C", corpus(), ids=lambda C: C.name)
def test_corpus_is_strict(C):
    rep = check_strict_axioms(C)
    assert rep.ok, rep.to_json()


def test_corpus_size():
    names = [C.name for C in corpus()]
    assert len(names) >= 10 and len(set(names)) == len(names)


def test_three_chain_squares():
    C = poset_squares("chain3", "abc", [("a", "b"), ("b", "c")])
    assert len(C.arrows1) == 6
    # a square is a pair of comparable arrows bottom <= top componentwise: 20 of them
    assert len(C.squares) == 20
    assert check_strict_axioms(C).ok


def test_terminal():
    C = terminal()
    assert C.size == 4 and check_strict_axioms(C).ok


@pytest.mark.parametrize("n", [2, 3])
def test_corrupted_interchange_is_named(n):
    rep = check_strict_axioms(corrupt_interchange(monoid_squares(n)))
    assert not rep.ok
    assert "interchange law" in rep.laws_failed()


def test_corruption_needs_parallel_squares():
    with pytest.raises(ValidationError):
        corrupt_interchange(poset_squares("chain2", "ab", [("a", "b")]))


def test_broken_identity():
    C = monoid_squares(2)
    C.sq_comp1[("m0", "m1")] = "m0"
    assert not check_strict_axioms(C).ok


def test_missing_composite():
    C = group_squares(2)
    C.comp1.pop(next(iter(C.comp1)))
    rep = check_strict_axioms(C)
    assert "composition is total on composable pairs" in rep.laws_failed()


def test_transpose_is_strict():
    C = poset_squares("V", "abc", [("a", "b"), ("a", "c")])
    T = C.transpose()
    assert check_strict_axioms(T).ok
    assert T.transpose().squares == C.squares


def test_json_roundtrip():
    C = group_squares(2)
    back = FiniteDoubleCategory.from_json(C.to_json())
    assert back.squares == C.squares and back.sq_comp2 == C.sq_comp2
    assert check_strict_axioms(back).ok


def test_json_duplicate_entry():
    data = monoid_squares(2).to_json()
    data["sq_comp1"].append(list(data["sq_comp1"][0]))
    with pytest.raises(ValidationError):
        FiniteDoubleCategory.from_json(data)


def test_json_missing_field():
    data = monoid_squares(2).to_json()
    del data["squares"]
    with pytest.raises(ValidationError):
        FiniteDoubleCategory.from_json(data)
