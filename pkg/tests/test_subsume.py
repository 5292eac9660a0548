import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ipomsets import core, generate
from ipomsets.errors import FormatError, NotApplicable, SizeLimitExceeded
from ipomsets.notation import format_word, parse_loset
from ipomsets.steps import canonical_key, densify, equivalent, is_dense, normalize, phi, psi
from ipomsets.subsume import (
    Case,
    Chain,
    OrderDiff,
    TranspositionStep,
    elementary_extensions,
    is_subsumption,
    leq_words,
    subsumed_closure,
    subsumption_chain,
    transpose,
    transposition_case,
    transpositions,
)

from oracles import brute_subsumption, one_pair_extensions

seeds = st.integers(min_value=0, max_value=2**32 - 1)

SWAP = "[b.][a.|.b.|c.][.a.|.b|.c.][.a.|.c][.a]"
SWAP_3 = "[b.][a.|.b.|c.][.a.|.b.|.c][.a.|.b][.a]"
SWAP_2 = "[b.][.b][a.|c.][.a.|.c][.a]"
CHAIN = ["[a.][.a][b.][.b]", "[a.][.a.|b.][.a|.b.][.b]", "[a.][.a.|b.][.a.|.b][.a]", "[b.][a.|.b.][.a.|.b][.a]"]


def ab():
    return core.validate({"p": "a", "q": "b"}, [("p", "q")])


def a_par_b():
    return core.validate({"p": "a", "q": "b"}, [], [("p", "q")])


def test_subsumption_of_sequential_into_parallel():
    w = is_subsumption(ab(), a_par_b())
    assert w is not None and w.map == {"p": "p", "q": "q"}
    assert is_subsumption(a_par_b(), ab()) is None


def test_subsumption_is_reflexive(four_events):
    assert is_subsumption(four_events, four_events).map == {e: e for e in four_events.events}


def test_swap_transpositions():
    w = parse_loset(SWAP)
    assert transposition_case(w, 3) is Case.TT
    assert transposition_case(w, 2) is Case.ST
    assert format_word(transpose(w, 3)) == SWAP_3
    assert format_word(transpose(w, 2)) == SWAP_2
    assert equivalent(w, transpose(w, 3))
    assert not equivalent(w, transpose(w, 2))
    # the ST swap adds order: the result is subsumed by the original
    assert is_subsumption(psi(transpose(w, 2)), psi(w)) is not None
    assert is_subsumption(psi(w), psi(transpose(w, 2))) is None


def test_printed_chain_replays():
    words = [parse_loset(t) for t in CHAIN]
    for (i, before), after in zip(zip((2, 3, 1), words), words[1:]):
        assert after in transpositions(before, i)
    chain = Chain(tuple(words), (TranspositionStep(2, Case.TS), TranspositionStep(3, Case.TT), TranspositionStep(1, Case.SS)))
    assert chain.replays()


def test_chain_with_printed_endpoints():
    start, end = parse_loset(CHAIN[0]), parse_loset(CHAIN[-1])
    chain = subsumption_chain(psi(start), psi(end), start, end)
    assert chain is not None and chain.replays()
    assert chain.words[0] == start and chain.words[-1] == end


def test_chain_default_endpoints():
    chain = subsumption_chain(ab(), a_par_b())
    assert chain.replays()
    assert chain.words[0] == densify(phi(ab())) and chain.words[-1] == densify(phi(a_par_b()))
    assert subsumption_chain(a_par_b(), ab()) is None


def test_chain_of_equal_ipomsets_is_empty(four_events):
    chain = subsumption_chain(four_events, four_events)
    assert chain.steps == () and len(chain.words) == 1


def test_chain_rejects_wrong_endpoint():
    with pytest.raises(FormatError):
        subsumption_chain(ab(), a_par_b(), parse_loset("[b.][.b][a.][.a]"))


def test_transposition_errors():
    w = parse_loset("[a.][.a]")
    with pytest.raises(NotApplicable):
        transpose(w, 2)
    with pytest.raises(NotApplicable):
        transpose(parse_loset("[a.][.a.]"), 1)
    with pytest.raises(NotApplicable):
        transpose(w, 1)  # starts and terminates the same event


def test_ts_merge_choices():
    w = parse_loset("[a.][.a][b.][.b]")
    options = transpositions(w, 2)
    assert [format_word(o) for o in options] == ["[a.][.a.|b.][.a|.b.][.b]", "[a.][b.|.a.][.b.|.a][.b]"]


@settings(max_examples=150)
@given(seeds)
def test_transposition_laws(seed):
    rng = random.Random(seed)
    w = densify(generate.coherent_word(rng, max_letters=6))
    for i in range(1, len(w)):
        try:
            case = transposition_case(w, i)
        except NotApplicable:
            continue
        for v in transpositions(w, i):
            if case in (Case.SS, Case.TT):
                assert equivalent(v, w)
                assert equivalent(transpose(v, i), w)
            elif case is Case.ST:
                assert is_subsumption(psi(v), psi(w)) is not None
                assert not equivalent(v, w)
            else:
                assert is_subsumption(psi(w), psi(v)) is not None
                assert not equivalent(v, w)


def test_elementary_extensions_small():
    ext = elementary_extensions(a_par_b())
    assert set(ext) == {canonical_key(ab()), canonical_key(core.validate({1: "a", 2: "b"}, [(2, 1)]))}
    assert elementary_extensions(ab()) == {}


def test_elementary_extensions_of_four_events(four_events):
    ext = elementary_extensions(four_events)
    wanted = core.validate(four_events.labels, four_events.precedence | {("x1", "x4")}, four_events.event_order, four_events.sources)
    assert canonical_key(wanted) in ext
    assert set(ext) == {canonical_key(r) for r in one_pair_extensions(four_events)}


@settings(max_examples=150)
@given(seeds)
def test_extensions_match_one_pair_oracle(seed):
    p = generate.interval_ipomset(random.Random(seed), max_events=6, labels="ab")
    ext = elementary_extensions(p)
    assert set(ext) == {canonical_key(r) for r in one_pair_extensions(p)}
    for r in ext.values():
        assert is_subsumption(r, p) is not None
        assert len(r.precedence) == len(p.precedence) + 1


def test_size_guard():
    big = core.identity(list("abcdefghi"))
    with pytest.raises(SizeLimitExceeded):
        elementary_extensions(big)
    with pytest.raises(SizeLimitExceeded):
        subsumption_chain(big, big)


def test_order_diff_maximal_pairs():
    p = core.validate({1: "a", 2: "b", 3: "c"}, [(1, 2), (2, 3)])
    q = core.validate({1: "a", 2: "b", 3: "c"}, [], [(1, 2), (2, 3)])
    diff = OrderDiff(p, q)
    assert diff.pairs == frozenset({(1, 2), (2, 3), (1, 3)})
    assert set(diff.maximal()) == {(1, 2), (2, 3)}
    assert diff.precedes((1, 3), (1, 2))


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_is_subsumption_matches_brute_force(seed):
    rng = random.Random(seed)
    p = generate.interval_ipomset(rng, max_events=5, labels="ab")
    q = generate.interval_ipomset(rng, max_events=5, labels="ab")
    candidates = [q] + list(subsumed_closure(p).values())
    for r in candidates:
        assert (is_subsumption(r, p) is not None) == brute_subsumption(r, p)
        assert (is_subsumption(p, r) is not None) == brute_subsumption(p, r)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_chain_exists_iff_subsumed(seed):
    rng = random.Random(seed)
    q = generate.interval_ipomset(rng, max_events=6, labels="ab")
    closure = list(subsumed_closure(q).values())
    p = rng.choice(closure)
    other = generate.interval_ipomset(rng, max_events=6, labels="ab")
    for a, b in ((p, q), (q, p), (other, q), (p, other)):
        chain = subsumption_chain(a, b)
        assert (chain is not None) == (is_subsumption(a, b) is not None)
        if chain is not None:
            assert chain.replays()
            assert all(is_dense(w) or len(w) == 1 for w in chain.words)
            assert core.isomorphic(psi(chain.words[0]), a) is not None
            assert core.isomorphic(psi(chain.words[-1]), b) is not None


def test_leq_words():
    assert leq_words(phi(ab()), phi(a_par_b()))
    assert not leq_words(phi(a_par_b()), phi(ab()))
    chain = leq_words(phi(ab()), phi(a_par_b()), witness=True)
    assert chain.replays()


@settings(max_examples=100)
@given(seeds)
def test_leq_is_antisymmetric_up_to_equivalence(seed):
    rng = random.Random(seed)
    p = generate.interval_ipomset(rng, max_events=4, labels="ab")
    for r in list(subsumed_closure(p).values())[:6]:
        w1, w2 = phi(r), normalize(generate.split_word(rng, p))
        if leq_words(w1, w2) and leq_words(w2, w1):
            assert equivalent(w1, w2)


def test_subsumption_is_transitive():
    rng = random.Random(3)
    for _ in range(30):
        p = generate.interval_ipomset(rng, max_events=5, labels="ab")
        closure = list(subsumed_closure(p).values())
        for r, s in combinations(closure[:8], 2):
            f, g = is_subsumption(r, s), is_subsumption(s, p)
            if f and g:
                assert is_subsumption(r, p) is not None
