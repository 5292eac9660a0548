import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ipomsets import core, generate, hda
from ipomsets.errors import LabelMismatch, SizeLimitExceeded, UnknownState
from ipomsets.notation import parse_letter, parse_loset
from ipomsets.sta import (
    StaPath,
    check_hda_image,
    from_dict,
    hd_of_sta,
    language_bounded,
    path_label,
    st_of_hda,
    to_dot,
    validate_sta,
)
from ipomsets.steps import canonical_key, identity_letter, phi, psi, word_from_key, word_key

seeds = st.integers(min_value=0, max_value=2**32 - 1)
BC = "[b.][.b][c.][.c]"


def test_missing_faces_automaton(missing_faces):
    a = missing_faces
    assert len(a.states) == 6 and len(a.edges) == 5
    assert language_bounded(a, 10) == set()


def test_validation_errors():
    with pytest.raises(LabelMismatch):
        validate_sta({"p": (), "q": ("a",)}, [("p", parse_letter("[b.]"), "q")])
    with pytest.raises(UnknownState):
        validate_sta({"p": ()}, [("p", parse_letter("[a.]"), "q")])
    with pytest.raises(UnknownState):
        validate_sta({"p": ()}, [], ["q"])


def test_trivial_automata():
    a = validate_sta({"p": ()}, [], ["p"], ["p"])
    assert language_bounded(a, 5) == {canonical_key(core.validate({}))}
    x = hd_of_sta(a)
    assert list(x.cells) == ["p"] and x.start == x.accept == {"p"}
    loop = validate_sta({"p": ()}, [("p", identity_letter([]), "p")], ["p"], ["p"])
    assert check_hda_image(loop).ok


def test_st_of_two_squares(two_squares):
    a = st_of_hda(two_squares)
    assert len(a.states) == 15
    # every cell has one identity loop; edges on k events give 2^k starters and terminators each
    identities = [e for e in a.edges if e[1].is_identity]
    assert len(identities) == 15 and all(p == r for p, _, r in identities)
    assert len(a.edges) == 15 + 7 * 2 + 2 * 6
    assert language_bounded(a, 6) == {word_key(parse_loset(BC))}


def test_single_vertex_translation():
    x = hda.validate_hda({"v": ()}, {}, {}, ["v"], ["v"])
    a = st_of_hda(x)
    assert a.edges == {("v", identity_letter([]), "v")}


def test_image_check(two_squares, missing_faces):
    assert check_hda_image(st_of_hda(two_squares)).ok
    report = check_hda_image(missing_faces)
    assert not report.ok and report.missing_faces
    assert {"state": "x", "letter": "[]", "direction": "in"} in report.missing_faces


def test_image_check_fusion_and_split():
    states = {"p": (), "q": ("a",), "r": ("a", "b")}
    edges = [(s, identity_letter(l), s) for s, l in states.items()]
    edges += [("p", parse_letter("[a.]"), "q"), ("q", parse_letter("[.a.|b.]"), "r")]
    report = check_hda_image(validate_sta(states, edges))
    assert any(f["expected"] == "[a.|b.]" for f in report.missing_fusions)
    lone = validate_sta({"p": (), "r": ("b", "a")}, [("p", parse_letter("[b.|a.]"), "r")])
    assert {s["letter"] for s in check_hda_image(lone).missing_splits} == {"[b.|a.]"}


def test_hd_of_missing_faces(missing_faces, two_squares):
    x = hd_of_sta(missing_faces)
    assert hda.hda_isomorphic(two_squares, x) is not None
    assert canonical_key(psi(parse_loset(BC))) in hda.language_bounded(x, 6)


def test_round_trip_through_st(two_squares):
    assert hda.hda_isomorphic(hd_of_sta(st_of_hda(two_squares)), two_squares) is not None


def test_size_guard():
    a = validate_sta({"p": tuple("abcdef")}, [])
    with pytest.raises(SizeLimitExceeded):
        hd_of_sta(a, max_cells=100)


def test_path_labels(missing_faces):
    path = StaPath(("x", "y", "z"), (parse_letter("[b.|a.]"), parse_letter("[.b|.a.]")))
    assert path_label(missing_faces, path) == parse_loset("[b.|a.][.b|.a.]")
    with pytest.raises(LabelMismatch):
        path_label(missing_faces, StaPath(("x", "z"), (parse_letter("[a.]"),)))


def test_identity_loops_do_not_change_labels(two_squares):
    a = st_of_hda(two_squares)
    path = StaPath(("ac", "bc", "bc", "cc"), (parse_letter("[b.]"), identity_letter(["b"]), parse_letter("[.b]")))
    plain = StaPath(("ac", "bc", "cc"), (parse_letter("[b.]"), parse_letter("[.b]")))
    assert path_label(a, path) == path_label(a, plain)


def test_dict_round_trip_and_dot(missing_faces):
    assert from_dict(missing_faces.to_dict()) == missing_faces
    dot = to_dot(missing_faces)
    assert dot.count("->") == 5 and "[b.|a.]" in dot


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_st_preserves_languages(seed):
    x = generate.hda(random.Random(seed))
    a = st_of_hda(x)
    for p, letter, r in a.edges:
        assert letter.source == a.states[p] and letter.target == a.states[r]
    assert check_hda_image(a).ok
    assert language_bounded(a, 6) == hda.language_bounded(x, 6)
    assert hda.hda_isomorphic(hd_of_sta(a), x) is not None


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_hd_includes_languages(seed):
    a = generate.sta(random.Random(seed))
    x = hd_of_sta(a)
    lang = hda.language_bounded(x, 6)
    for key in language_bounded(a, 6):
        assert canonical_key(psi(word_from_key(key))) in lang
