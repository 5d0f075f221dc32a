import pytest
from hypothesis import given
from hypothesis import strategies as st

from ratlogic.position import (
    EMPTY,
    Position,
    PrefixRelation,
    concat,
    is_prefix,
    length_lex_sorted,
    prefix_relation,
    strip_prefix,
)

positions = st.lists(st.integers(0, 5), max_size=6).map(Position)


def P(*xs):
    return Position(xs)


def test_concat_examples():
    assert concat(P(), P(3)) == P(3)
    assert concat(P(0, 1), P(2)) == P(0, 1, 2)
    assert concat(concat(P(1), P(2)), P(3)) == concat(P(1), concat(P(2), P(3))) == P(1, 2, 3)


def test_prefix_relation_examples():
    assert prefix_relation(P(), P(5)) is PrefixRelation.IMMEDIATE_PREFIX
    assert prefix_relation(P(0), P(0, 1, 1)) is PrefixRelation.PROPER_PREFIX
    assert prefix_relation(P(1), P(0, 1)) is PrefixRelation.NOT_PREFIX
    assert prefix_relation(P(2, 2), P(2, 2)) is PrefixRelation.PREFIX


def test_strip_prefix_examples():
    assert strip_prefix(P(0), P(0, 2)) == P(2)
    assert strip_prefix(P(), P(7)) == P(7)
    assert strip_prefix(P(1), P(0)) is None


def test_text_form():
    assert str(P(0, 1, 2)) == "0.1.2"
    assert str(EMPTY) == "ε"
    assert Position.parse("0.1.2") == P(0, 1, 2)
    assert Position.parse("ε") == EMPTY


def test_rejects_non_naturals():
    with pytest.raises(ValueError):
        Position([0, -1])
    with pytest.raises(ValueError):
        P().child(-2)
    with pytest.raises(ValueError):
        Position.parse("0.x")


def test_length_lex_order():
    ps = [P(1), P(0, 0), P(), P(0), P(0, 1), P(2)]
    assert length_lex_sorted(ps) == [P(), P(0), P(1), P(2), P(0, 0), P(0, 1)]


def test_parent_and_child():
    assert P(3, 4).parent() == P(3)
    assert P().parent() is None
    assert P(3).child(4) == P(3, 4)
    assert isinstance(P(1) + P(2), Position)


@given(positions, positions, positions)
def test_concat_associative_with_neutral(p, q, r):
    assert concat(concat(p, q), r) == concat(p, concat(q, r))
    assert concat(p, EMPTY) == p == concat(EMPTY, p)
    assert len(concat(p, q)) == len(p) + len(q)


@given(positions, positions)
def test_prefix_iff_strip_present(p, q):
    rel = prefix_relation(p, q)
    t = strip_prefix(p, q)
    assert (rel is not PrefixRelation.NOT_PREFIX) == (t is not None) == is_prefix(p, q)
    if t is not None:
        assert concat(p, t) == q
        assert {0: PrefixRelation.PREFIX, 1: PrefixRelation.IMMEDIATE_PREFIX}.get(
            len(t), PrefixRelation.PROPER_PREFIX
        ) is rel


@given(positions, positions)
def test_extension_is_prefix(p, q):
    assert strip_prefix(p, concat(p, q)) == q
