import pytest
from hypothesis import given, strategies as st

from opetopic.address import (
    STAR, Address, concat, empty, extend, is_prefix, join, last, lex_compare, parent, wrap,
)
from opetopic.errors import DimensionError, ParseError
from opetopic.textio import parse_address, parse_address as A, serialize_address


def addresses(dim: int, depth: int = 3):
    if dim == 0:
        return st.just(STAR)
    return st.lists(addresses(dim - 1, depth), max_size=depth).map(
        lambda es: Address(dim, tuple(es)))


any_address = st.integers(0, 4).flatmap(addresses)


def test_star_is_the_only_0_address():
    assert empty(0) == STAR
    assert STAR.dim == 0 and STAR.is_atom


def test_empty_addresses_differ_by_dim():
    assert empty(1) != empty(2)
    assert len(empty(3)) == 0


def test_join_of_stars():
    assert join(STAR, STAR) == STAR


def test_concat_rejects_dim_0():
    with pytest.raises(DimensionError):
        concat(STAR, STAR)


def test_concat_rejects_mixed_dims():
    with pytest.raises(DimensionError):
        concat(empty(1), empty(2))


def test_parent_last_extend():
    a = parse_address("[[][*]]")
    assert parent(a) == parse_address("[[]]:2")
    assert last(a) == parse_address("[*]")
    assert extend(parent(a), last(a)) == a


def test_wrap():
    assert wrap(parse_address("[*]")) == parse_address("[[*]]")


def test_lex_order_examples():
    xs = ["[]:1", "[*]", "[**]", "[***]"]
    parsed = [parse_address(x) for x in xs]
    assert sorted(reversed(parsed)) == parsed
    assert lex_compare(parse_address("[[]]:2"), parse_address("[[*]]")) < 0


@given(any_address)
def test_roundtrip(a):
    assert parse_address(serialize_address(a)) == a


@given(any_address, any_address)
def test_lex_compare_is_antisymmetric(a, b):
    if a.dim == b.dim:
        assert lex_compare(a, b) == -lex_compare(b, a)
        assert (lex_compare(a, b) == 0) == (a == b)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(addresses(n), addresses(n))))
def test_concat_prefix(pair):
    a, b = pair
    assert is_prefix(a, concat(a, b))
    assert len(concat(a, b)) == len(a) + len(b)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(addresses(n), addresses(n), addresses(n))))
def test_concat_associative(triple):
    a, b, c = triple
    assert concat(concat(a, b), c) == concat(a, concat(b, c))


def test_parse_examples():
    a = parse_address("[[][*]]")
    assert a.dim == 2 and len(a) == 2
    assert parse_address("*") == STAR
    assert parse_address("[]:2") == empty(2)


def test_bare_empty_is_ambiguous():
    with pytest.raises(ParseError):
        parse_address("[]")


def test_annotation_conflict():
    with pytest.raises(ParseError):
        parse_address("[*]:2")


def test_error_position():
    with pytest.raises(ParseError) as e:
        parse_address("[[*] x]")
    assert e.value.line == 1 and e.value.col == 6


def test_concat_examples():
    assert concat(A("[*]"), A("[**]")) == A("[***]")
    assert concat(A("[]:1"), A("[*]")) == A("[*]")
    assert concat(A("[[*]]"), A("[[][*]]")) == A("[[*][][*]]")


def test_prefix_examples():
    assert is_prefix(A("[]:1"), A("[**]"))
    assert not is_prefix(A("[**]"), A("[*]"))
    assert is_prefix(A("[[*]]"), A("[[*][]]"))


def test_lex_examples():
    assert lex_compare(A("[]:1"), A("[*]")) < 0
    assert lex_compare(A("[[*]]"), A("[[*][*]]")) < 0
    assert lex_compare(A("[[][*]]"), A("[[*]]")) < 0


@given(st.integers(1, 4).flatmap(addresses))
def test_empty_is_identity(a):
    assert concat(empty(a.dim), a) == a == concat(a, empty(a.dim))


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(addresses(n), addresses(n))))
def test_prefix_implies_lex(pair):
    a, b = pair
    if is_prefix(a, b):
        assert lex_compare(a, b) <= 0
