"""Seeded random generators for ipomsets, words, HDAs and ST-automata.

Used by the property tests and the demo scripts.  Every function takes a
``random.Random`` so results are reproducible.
"""

from __future__ import annotations

import random
from itertools import combinations, product
from typing import Iterator, Sequence

from . import core
from .hda import Hda, validate_hda
from .sta import StAutomaton, validate_sta
from .steps import CohWord, identity_letter, make_starter, make_terminator


def interval_ipomset(rng: random.Random, max_events: int = 8, labels: Sequence[str] = "abcd") -> core.Ipomset:
    """Random interval ipomset from integer intervals and a random event order."""
    n = rng.randint(0, max_events)
    spans = []
    for _ in range(n):
        b = rng.randrange(2 * n)
        spans.append((b, rng.randint(b, 2 * n - 1)))
    prec = {(x, y) for x in range(n) for y in range(n) if spans[x][1] < spans[y][0]}
    rank = list(range(n))
    rng.shuffle(rank)
    order = {(x, y) for x in range(n) for y in range(n) if x != y and rank[x] < rank[y] and (x, y) not in prec and (y, x) not in prec}
    minimal = [x for x in range(n) if not any((y, x) in prec for y in range(n))]
    maximal = [x for x in range(n) if not any((x, y) in prec for y in range(n))]
    sources = [x for x in minimal if rng.random() < 0.3]
    targets = [x for x in maximal if rng.random() < 0.3]
    return core.validate({x: rng.choice(labels) for x in range(n)}, prec, order, sources, targets)


def coherent_word(rng: random.Random, max_letters: int = 8, labels: Sequence[str] = "abc", max_width: int = 3) -> CohWord:
    """Random coherent word, identities included."""
    current = [rng.choice(labels) for _ in range(rng.randint(0, min(2, max_width)))]
    letters = []
    for _ in range(rng.randint(1, max_letters)):
        roll = rng.random()
        if roll < 0.1:
            letters.append(identity_letter(current))
        elif roll < 0.55 and len(current) < max_width:
            carrier = list(current)
            fresh = rng.randint(1, max_width - len(current))
            for _ in range(fresh):
                carrier.insert(rng.randint(0, len(carrier)), None)
            marked = [i for i, lab in enumerate(carrier) if lab is None]
            carrier = [rng.choice(labels) if lab is None else lab for lab in carrier]
            letters.append(make_starter(carrier, marked))
            current = carrier
        elif current:
            k = rng.randint(1, len(current))
            marked = rng.sample(range(len(current)), k)
            letters.append(make_terminator(current, marked))
            current = [lab for i, lab in enumerate(current) if i not in marked]
        else:
            letters.append(identity_letter(current))
    return CohWord(tuple(letters))


def split_word(rng: random.Random, p: core.Ipomset) -> CohWord:
    """A random (not necessarily sparse) decomposition of ``p``: split and pad its sparse word."""
    from .steps import densify, fuse, phi

    dense = list(densify(phi(p)).letters)
    out: list = []
    for letter in dense:
        if out and not letter.is_identity and not out[-1].is_identity and out[-1].kind is letter.kind and rng.random() < 0.5:
            out[-1] = fuse(out[-1], letter)
        else:
            out.append(letter)
        if rng.random() < 0.15:
            out.append(identity_letter(out[-1].target))
    return CohWord(tuple(out))


def hda(rng: random.Random, max_cells: int = 6, labels: Sequence[str] = "ab") -> Hda:
    """Random HDA of dimension at most two."""
    nv = rng.randint(1, 3)
    ne = rng.randint(0, min(3, max_cells - nv))
    vertices = [f"v{i}" for i in range(nv)]
    cells: dict = {v: () for v in vertices}
    lower: dict = {}
    upper: dict = {}
    edges = []
    for k in range(ne):
        e = f"e{k}"
        cells[e] = (rng.choice(labels),)
        lower[(e, 0)] = rng.choice(vertices)
        upper[(e, 0)] = rng.choice(vertices)
        edges.append(e)
    budget = max_cells - nv - ne
    for k in range(rng.randint(0, min(2, budget))):
        l1, l2 = rng.choice(labels), rng.choice(labels)
        ones = [e for e in edges if cells[e] == (l1,)]
        twos = [e for e in edges if cells[e] == (l2,)]
        options = []
        # faces on the second event are l1-edges, faces on the first are l2-edges
        for e0, e1, f0, f1 in product(ones, ones, twos, twos):
            es, fs = (e0, e1), (f0, f1)
            if all(
                (lower if nu == 0 else upper)[(es[mu], 0)] == (lower if mu == 0 else upper)[(fs[nu], 0)]
                for nu in (0, 1)
                for mu in (0, 1)
            ):
                options.append((es, fs))
        if not options:
            continue
        (e0, e1), (f0, f1) = rng.choice(options)
        s = f"s{k}"
        cells[s] = (l1, l2)
        lower[(s, 1)], upper[(s, 1)] = e0, e1
        lower[(s, 0)], upper[(s, 0)] = f0, f1
    names = list(cells)
    weights = [4 if not cells[c] else 1 for c in names]
    start = set(rng.choices(names, weights, k=rng.randint(1, 2)))
    accept = set(rng.choices(names, weights, k=rng.randint(1, 2)))
    return validate_hda(cells, lower, upper, start, accept)


def _embeddings(small: Sequence[str], big: Sequence[str]) -> Iterator[list[int]]:
    """Positions of ``big`` not used by an order-preserving copy of ``small``."""
    for keep in combinations(range(len(big)), len(small)):
        if [big[i] for i in keep] == list(small):
            yield [i for i in range(len(big)) if i not in keep]


def sta(rng: random.Random, max_states: int = 5, max_width: int = 2, labels: Sequence[str] = "ab") -> StAutomaton:
    """Random ST-automaton with small conclists."""
    n = rng.randint(1, max_states)
    states = {f"q{i}": tuple(rng.choice(labels) for _ in range(rng.randint(0, max_width))) for i in range(n)}
    edges = set()
    density = rng.uniform(0.2, 0.7)
    for p, r in product(states, states):
        u, v = states[p], states[r]
        for marked in _embeddings(u, v):
            if marked and rng.random() < density:
                edges.add((p, make_starter(v, marked), r))
        for marked in _embeddings(v, u):
            if marked and rng.random() < density:
                edges.add((p, make_terminator(u, marked), r))
    names = list(states)
    initial = set(rng.sample(names, rng.randint(1, min(2, n))))
    final = set(rng.sample(names, rng.randint(1, min(2, n))))
    return validate_sta(states, edges, initial, final)
