import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ipomsets import core, generate
from ipomsets.errors import FaceConclistMismatch, InvalidPath, MissingFace, NotASubset, PrecubicalViolation, UnknownCell
from ipomsets.hda import (
    HdaPath,
    PathStep,
    accepting_paths,
    check_path,
    ev_path,
    face,
    from_dict,
    hda_isomorphic,
    language_bounded,
    to_dot,
    validate_hda,
)
from ipomsets.notation import parse_loset
from ipomsets.steps import canonical_key, identity_letter, psi, word_from_key
from ipomsets.subsume import subsumed_closure

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def bc_key():
    return canonical_key(psi(parse_loset("[b.][.b][c.][.c]")))


def test_two_squares_is_valid(two_squares):
    x = two_squares
    assert len(x.cells) == 15
    assert sorted(x.dim(q) for q in x.cells).count(2) == 2
    assert x.start == {"ac"} and x.accept == {"ec"}


def test_faces_of_square(two_squares):
    assert face(two_squares, "bd", {0, 1}, 0) == "ac"
    assert face(two_squares, "bd", {0, 1}, 1) == "ce"
    assert face(two_squares, "dd", {1}, 1) == "de"
    assert face(two_squares, "bd", set(), 0) == "bd"
    with pytest.raises(NotASubset):
        face(two_squares, "bc", {1}, 0)
    with pytest.raises(UnknownCell):
        face(two_squares, "zz", set(), 0)


def test_face_composition_orders_agree(two_squares):
    x = two_squares
    for q, ev in x.cells.items():
        if len(ev) == 2:
            for nu in (0, 1):
                for mu in (0, 1):
                    # remove event 1 then event 0, or event 0 then (shifted) event 1
                    assert face(x, face(x, q, {1}, mu), {0}, nu) == face(x, face(x, q, {0}, nu), {0}, mu)


def test_single_vertex():
    x = validate_hda({"v": ()}, {}, {}, ["v"], ["v"])
    assert language_bounded(x, 3) == {canonical_key(core.validate({}))}


def test_validation_errors(two_squares):
    cells = dict(two_squares.cells)
    lower, upper = dict(two_squares.lower), dict(two_squares.upper)
    broken = dict(lower)
    del broken[("bd", 0)]
    with pytest.raises(MissingFace):
        validate_hda(cells, broken, upper)
    broken = dict(lower)
    broken[("bd", 0)] = "dc"
    with pytest.raises(FaceConclistMismatch):
        validate_hda(cells, broken, upper)
    broken = dict(lower)
    broken[("bd", 1)] = "dc"  # a c-edge where a b-edge belongs
    with pytest.raises(FaceConclistMismatch):
        validate_hda(cells, broken, upper)
    broken = dict(lower)
    broken[("bd", 0)] = "cd"  # right conclist, wrong corners
    with pytest.raises(PrecubicalViolation):
        validate_hda(cells, broken, upper)
    with pytest.raises(UnknownCell):
        validate_hda(cells, lower, upper, ["nowhere"])


def test_straight_path_reads_bc(two_squares):
    path = HdaPath(
        ("ac", "bc", "cc", "dc", "ec"),
        (PathStep("up", frozenset({0})), PathStep("down", frozenset({0})), PathStep("up", frozenset({0})), PathStep("down", frozenset({0}))),
    )
    w = ev_path(two_squares, path)
    assert canonical_key(psi(w)) == bc_key()


def test_trivial_path(two_squares):
    assert ev_path(two_squares, HdaPath(("bd",))).letters == (identity_letter(["b", "a"]),)


def test_path_through_square(two_squares):
    path = HdaPath(
        ("ac", "bd", "cd", "ce"),
        (PathStep("up", frozenset({0, 1})), PathStep("down", frozenset({0})), PathStep("down", frozenset({0}))),
    )
    p = psi(ev_path(two_squares, path))
    assert sorted(p.labels.values()) == ["a", "b"] and not p.precedence


def test_invalid_paths(two_squares):
    with pytest.raises(InvalidPath) as info:
        check_path(two_squares, HdaPath(("ac", "dc"), (PathStep("up", frozenset({0})),)))
    assert info.value.details["position"] == 1
    with pytest.raises(InvalidPath):
        HdaPath(("ac", "bc"))
    a = HdaPath(("ac", "bc"), (PathStep("up", frozenset({0})),))
    b = HdaPath(("bc", "cc"), (PathStep("down", frozenset({0})),))
    check_path(two_squares, a.concat(b))
    with pytest.raises(InvalidPath):
        b.concat(a)


def test_language_of_two_squares(two_squares):
    assert language_bounded(two_squares, 6) == {bc_key()}
    assert language_bounded(two_squares, 3) == set()


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_language_matches_path_enumeration(seed):
    x = generate.hda(random.Random(seed))
    brute = {canonical_key(psi(ev_path(x, path))) for path in accepting_paths(x, 4)}
    assert language_bounded(x, 4) == brute


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_languages_are_subsumption_closed(seed):
    x = generate.hda(random.Random(seed))
    bound = 6
    lang = language_bounded(x, bound)
    for key in lang:
        q = psi(word_from_key(key))
        if 2 * len(q) - len(q.sources) - len(q.targets) <= bound:
            assert set(subsumed_closure(q)) <= lang


def test_isomorphism_with_renamed_cells(two_squares):
    x = two_squares
    ren = {q: f"n_{q}" for q in x.cells}
    y = validate_hda(
        {ren[q]: ev for q, ev in x.cells.items()},
        {(ren[q], i): ren[r] for (q, i), r in x.lower.items()},
        {(ren[q], i): ren[r] for (q, i), r in x.upper.items()},
        {ren[q] for q in x.start},
        {ren[q] for q in x.accept},
    )
    assert hda_isomorphic(x, y) == ren
    z = validate_hda(x.cells, x.lower, x.upper, x.start, {"ee"})
    assert hda_isomorphic(x, z) is None


def test_dict_round_trip_and_dot(two_squares):
    assert from_dict(two_squares.to_dict()) == two_squares
    dot = to_dot(two_squares)
    assert dot.startswith("digraph") and dot.count("->") == 22
