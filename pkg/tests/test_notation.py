import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ipomsets import generate
from ipomsets.errors import LosetSyntaxError, MixedKindLetter, NotCoherent
from ipomsets.notation import format_letter, format_word, parse_letter, parse_loset
from ipomsets.steps import Kind, identity_letter


def test_parse_six_letter_word():
    text = "[a.|.c.][.a.|.c][.a.|a.][.a|.a.][b.|.a.][.b|.a]"
    w = parse_loset(text)
    assert len(w) == 6
    assert w[0].kind is Kind.START and w[0].marked == frozenset({0})
    assert w[5].kind is Kind.TERM and w[5].marked == frozenset({0, 1})
    assert format_word(w) == text


def test_carried_rows_make_identities():
    assert parse_letter("[.a.]") == identity_letter(["a"])
    assert parse_letter("[]") == identity_letter([])


def test_bare_row_is_rejected():
    with pytest.raises(MixedKindLetter):
        parse_loset("[a]")


def test_mixed_letter_is_rejected():
    with pytest.raises(MixedKindLetter):
        parse_loset("[a.|.b]")


def test_error_positions():
    with pytest.raises(LosetSyntaxError) as info:
        parse_loset("[a.]\n[.a|]")
    assert info.value.details["line"] == 2
    assert info.value.details["column"] == 5


def test_incoherent_input():
    with pytest.raises(NotCoherent):
        parse_loset("[a.][.b]")


def test_whitespace_between_letters():
    assert parse_loset(" [a.] [.a]\n") == parse_loset("[a.][.a]")


def test_single_letter_parser():
    with pytest.raises(LosetSyntaxError):
        parse_letter("[a.][.a]")
    assert format_letter(parse_letter("[b.|.a.]")) == "[b.|.a.]"


def test_empty_text():
    with pytest.raises(LosetSyntaxError):
        parse_loset("   ")


@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_print_parse_round_trip(seed):
    w = generate.coherent_word(random.Random(seed), labels=["a", "b", "x_1"])
    assert parse_loset(format_word(w)) == w
