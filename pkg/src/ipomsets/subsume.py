"""Subsumptions of ipomsets and transpositions of step letters.

``p`` is subsumed by ``q`` when a label- and interface-preserving bijection
maps ``p`` onto ``q`` while possibly forgetting precedence: ``p`` is the
more sequential of the two.  On the word side, subsumption is generated by
swapping a starter with the terminator that follows it.

Transposition indices are 1-based, like letter positions in the usual
mathematical notation: ``transpose(w, 2)`` swaps the second and third
letters.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from . import core
from .core import EventId, Ipomset
from .errors import FormatError, NotApplicable, SizeLimitExceeded
from .steps import (
    CohWord,
    Kind,
    StepLetter,
    _embed,
    annotate,
    canonical_key,
    densify,
    identity_letter,
    is_dense,
    make_starter,
    make_terminator,
    phi,
    psi,
)

MAX_EVENTS = 8


@dataclass(frozen=True)
class SubsumptionWitness:
    map: dict


def is_subsumption(p: Ipomset, q: Ipomset) -> Optional[SubsumptionWitness]:
    """Find a subsumption ``p -> q`` (``p`` at least as ordered as ``q``)."""
    if len(p) != len(q) or len(p.sources) != len(q.sources) or len(p.targets) != len(q.targets):
        return None
    if len(q.precedence) > len(p.precedence):
        return None

    def fits(x, y):
        return (
            p.labels[x] == q.labels[y]
            and (x in p.sources) == (y in q.sources)
            and (x in p.targets) == (y in q.targets)
            and len(q.predecessors[y]) <= len(p.predecessors[x])
            and len(q.successors[y]) <= len(p.successors[x])
        )

    candidates = {x: [y for y in q.labels if fits(x, y)] for x in p.labels}
    if any(not c for c in candidates.values()):
        return None
    order = sorted(p.labels, key=lambda x: len(candidates[x]))

    def compatible(x, fx, assigned):
        for y, fy in assigned.items():
            if fx == fy:
                return False
            if q.lt(fx, fy) and not p.lt(x, y):
                return False
            if q.lt(fy, fx) and not p.lt(y, x):
                return False
            if p.concurrent(x, y) and p.before(x, y) != q.before(fx, fy):
                return False
        return True

    def search(i, assigned):
        if i == len(order):
            return dict(assigned)
        x = order[i]
        for fx in candidates[x]:
            if compatible(x, fx, assigned):
                assigned[x] = fx
                found = search(i + 1, assigned)
                if found is not None:
                    return found
                del assigned[x]
        return None

    found = search(0, {})
    return None if found is None else SubsumptionWitness(found)


@dataclass(frozen=True)
class OrderDiff:
    """Precedence pairs of ``more`` that are forgotten in ``less``.

    Both ipomsets must share event ids (rename through a witness first).
    """

    more: Ipomset
    less: Ipomset

    @property
    def pairs(self) -> frozenset:
        return self.more.precedence - self.less.precedence

    def _le(self, x, y) -> bool:
        return x == y or self.more.lt(x, y)

    def precedes(self, a: tuple, b: tuple) -> bool:
        """``(x, y)`` below ``(x', y')`` iff ``x <= x'`` and ``y >= y'``."""
        return self._le(a[0], b[0]) and self._le(b[1], a[1])

    def maximal(self) -> list[tuple]:
        pairs = sorted(self.pairs, key=repr)
        return [a for a in pairs if not any(b != a and self.precedes(a, b) for b in pairs)]


# --------------------------------------------------------------------------
# transpositions


class Case(enum.Enum):
    SS = "SS"
    TT = "TT"
    ST = "ST"
    TS = "TS"


@dataclass(frozen=True)
class TranspositionStep:
    index: int
    case: Case
    choice: int = 0


def transposition_case(w: CohWord, i: int) -> Case:
    if not 1 <= i < len(w):
        raise NotApplicable(f"index {i} out of range for a word of length {len(w)}", reason="pattern mismatch")
    a, b = w[i - 1], w[i]
    if a.is_identity or b.is_identity:
        raise NotApplicable("identity letters are not transposed", reason="pattern mismatch")
    if a.kind is Kind.START and b.kind is Kind.TERM and a.marked & b.marked:
        raise NotApplicable("started and terminated events overlap", reason="overlapping marks")
    return Case(("S" if a.kind is Kind.START else "T") + ("S" if b.kind is Kind.START else "T"))


def _restrict(carrier: Sequence[str], keep: list[int], marked) -> tuple[list[str], list[int]]:
    return [carrier[k] for k in keep], [keep.index(m) for m in marked]


def _swap_pair(a: StepLetter, b: StepLetter, case: Case) -> Iterator[tuple[StepLetter, StepLetter]]:
    if case is Case.SS:
        u = b.carrier
        inner = _embed(len(u), b.marked)
        A = {inner[j] for j in a.marked}
        yield make_starter(*_restrict(u, _embed(len(u), A), b.marked)), make_starter(u, A)
    elif case is Case.TT:
        u = a.carrier
        inner = _embed(len(u), a.marked)
        B = {inner[j] for j in b.marked}
        yield make_terminator(u, B), make_terminator(*_restrict(u, _embed(len(u), B), a.marked))
    elif case is Case.ST:
        u = a.carrier
        A, B = a.marked, b.marked
        yield (
            make_terminator(*_restrict(u, _embed(len(u), A), B)),
            make_starter(*_restrict(u, _embed(len(u), B), A)),
        )
    else:
        for merged in _merges(a, b):
            carrier = [lab for _, _, lab in merged]
            started = [k for k, (side, _, _) in enumerate(merged) if side == "B"]
            ended = [k for k, (side, _, _) in enumerate(merged) if side == "A"]
            yield make_starter(carrier, started), make_terminator(carrier, ended)


def _merges(a: StepLetter, b: StepLetter) -> Iterator[list]:
    """Carriers containing both the terminated and the started events.

    Enumerated with terminated events placed first whenever the order
    between a terminated and a started event is free.
    """
    v = [("A" if j in a.marked else "R", j, lab) for j, lab in enumerate(a.carrier)]
    w = [("B" if k in b.marked else "R", k, lab) for k, lab in enumerate(b.carrier)]

    def rec(i, j):
        if i == len(v) and j == len(w):
            yield []
            return
        if i < len(v) and v[i][0] == "A":
            for rest in rec(i + 1, j):
                yield [v[i]] + rest
        if j < len(w) and w[j][0] == "B":
            for rest in rec(i, j + 1):
                yield [w[j]] + rest
        if i < len(v) and j < len(w) and v[i][0] == "R" and w[j][0] == "R":
            for rest in rec(i + 1, j + 1):
                yield [v[i]] + rest

    return rec(0, 0)


def transpositions(w: CohWord, i: int) -> list[CohWord]:
    """All results of the ``i``-th transposition (several only for case TS)."""
    case = transposition_case(w, i)
    out = []
    for x, y in _swap_pair(w[i - 1], w[i], case):
        out.append(CohWord(w.letters[: i - 1] + (x, y) + w.letters[i + 1:]))
    return out


def transpose(w: CohWord, i: int, choice: int = 0) -> CohWord:
    """The ``i``-th transposition of ``w``.

    For a terminator followed by a starter the merged carrier is not fixed
    by the two letters; ``choice`` indexes :func:`transpositions`, and the
    default places terminated events above started ones.
    """
    results = transpositions(w, i)
    if not 0 <= choice < len(results):
        raise NotApplicable(f"choice {choice} out of range ({len(results)} carriers)", reason="pattern mismatch")
    return results[choice]


# --------------------------------------------------------------------------
# dense words as linear extensions of start/end actions


def word_actions(w: CohWord) -> list[tuple[str, int]]:
    """The start/end actions of a dense word, on :func:`annotate` ids."""
    actions = []
    for letter, ids in zip(w.letters, annotate(w)):
        kind = "start" if letter.kind is Kind.START else "end"
        actions.extend((kind, ids[pos]) for pos in sorted(letter.marked))
    return actions


def action_order(p: Ipomset) -> frozenset:
    """Forced precedences between start/end actions of dense words of ``p``."""
    nodes = [("start", e) for e in p.labels if e not in p.sources]
    nodes += [("end", e) for e in p.labels if e not in p.targets]
    present = set(nodes)
    pairs = []
    for x in p.labels:
        if ("start", x) in present and ("end", x) in present:
            pairs.append((("start", x), ("end", x)))
        for y in p.labels:
            if x == y:
                continue
            if p.lt(x, y):
                pairs.append((("end", x), ("start", y)))
            elif p.concurrent(x, y) and ("start", x) in present and ("end", y) in present:
                pairs.append((("start", x), ("end", y)))
    return core.transitive_closure(pairs)


def dense_word(p: Ipomset, actions: Sequence[tuple[str, EventId]]) -> CohWord:
    """The dense word performing ``actions`` on ``p``; carriers follow ``p``'s event order."""
    active = p.sort_concurrent(p.sources)
    letters = []
    for kind, e in actions:
        if kind == "start":
            active = p.sort_concurrent(active + [e])
            letters.append(make_starter([p.labels[x] for x in active], [active.index(e)]))
        else:
            letters.append(make_terminator([p.labels[x] for x in active], [active.index(e)]))
            active = [x for x in active if x != e]
    if not letters:
        return CohWord((identity_letter([p.labels[x] for x in active]),))
    return CohWord(tuple(letters))


def _with_adjacent(less: frozenset, current: Sequence, u, v) -> Optional[list]:
    """A linear extension with ``u`` immediately before ``v``, close to ``current``."""
    if (v, u) in less:
        return None
    if any((u, z) in less and (z, v) in less for z in current):
        return None
    ideal = {z for z in current if z not in (u, v) and ((z, u) in less or (z, v) in less)}
    head = [z for z in current if z in ideal]
    tail = [z for z in current if z not in ideal and z not in (u, v)]
    return head + [u, v] + tail


def elementary_extensions(p: Ipomset) -> dict[bytes, Ipomset]:
    """Ipomsets one elementary subsumption below ``p``, keyed canonically.

    Every dense word of ``p`` in which a starter is immediately followed by
    a terminator of another event yields, after swapping the two, an
    ipomset with exactly one more precedence pair.
    """
    if len(p) > MAX_EVENTS:
        raise SizeLimitExceeded(f"{len(p)} events exceed the limit of {MAX_EVENTS}", limit=MAX_EVENTS)
    base = densify(phi(p))
    r = psi(base)
    actions = word_actions(base)
    less = action_order(r)
    out: dict[bytes, Ipomset] = {}
    for y in r.labels:
        if y in r.sources:
            continue
        for x in r.labels:
            if x in r.targets or not r.concurrent(x, y):
                continue
            order = _with_adjacent(less, actions, ("start", y), ("end", x))
            if order is None:
                continue
            w = dense_word(r, order)
            ext = psi(transpose(w, order.index(("start", y)) + 1))
            out.setdefault(canonical_key(ext), ext)
    return out


def subsumed_closure(p: Ipomset) -> dict[bytes, Ipomset]:
    """Every ipomset reachable from ``p`` by elementary extensions, ``p`` included."""
    seen = {canonical_key(p): p}
    todo = [p]
    while todo:
        for key, ext in elementary_extensions(todo.pop()).items():
            if key not in seen:
                seen[key] = ext
                todo.append(ext)
    return seen


# --------------------------------------------------------------------------
# witness chains


@dataclass(frozen=True)
class Chain:
    """Dense words with ``words[k+1] == transpose(words[k], *steps[k])``."""

    words: tuple[CohWord, ...]
    steps: tuple[TranspositionStep, ...]

    def replays(self) -> bool:
        if len(self.words) != len(self.steps) + 1:
            return False
        for before, step, after in zip(self.words, self.steps, self.words[1:]):
            if transposition_case(before, step.index) is not step.case:
                return False
            if transpose(before, step.index, step.choice) != after:
                return False
        return True


def _check_dense_form(w: CohWord, p: Ipomset, which: str) -> None:
    if not is_dense(w) or core.isomorphic(psi(w), p) is None:
        raise FormatError(f"{which} word is not a dense decomposition of its ipomset")


def subsumption_chain(
    p: Ipomset,
    q: Ipomset,
    start: Optional[CohWord] = None,
    end: Optional[CohWord] = None,
) -> Optional[Chain]:
    """Transpositions leading from a dense word of ``p`` to one of ``q``.

    Returns ``None`` iff ``p`` is not subsumed by ``q``.  ``start`` and
    ``end`` default to the dense forms of the sparse decompositions.
    """
    if max(len(p), len(q)) > MAX_EVENTS:
        raise SizeLimitExceeded(f"more than {MAX_EVENTS} events", limit=MAX_EVENTS)
    start = densify(phi(p)) if start is None else start
    end = densify(phi(q)) if end is None else end
    _check_dense_form(start, p, "start")
    _check_dense_form(end, q, "end")

    p_ann, q_ann = psi(start), psi(end)
    witness = is_subsumption(p_ann, q_ann)
    if witness is None:
        return None
    f = witness.map
    # work on q's event ids throughout; q's event order fixes every carrier
    r = core.rename(p_ann, f)
    actions = [(kind, f[e]) for kind, e in word_actions(start)]
    words = [start]
    steps: list[TranspositionStep] = []
    assert dense_word(q_ann, actions) == start

    def push(new_actions, case, index):
        target = dense_word(q_ann, new_actions)
        options = transpositions(words[-1], index)
        choice = options.index(target)
        steps.append(TranspositionStep(index, case, choice))
        words.append(target)

    def bubble(goal):
        nonlocal actions
        for pos, wanted in enumerate(goal):
            j = actions.index(wanted)
            while j > pos:
                left, right = actions[j - 1], actions[j]
                assert left[0] == right[0], "mixed swap while reordering within a class"
                actions = actions[: j - 1] + [right, left] + actions[j + 1:]
                push(actions, Case.SS if left[0] == "start" else Case.TT, j)
                j -= 1

    while True:
        diff = OrderDiff(r, q_ann)
        if not diff.pairs:
            break
        less = action_order(r)
        maximal = diff.maximal()
        others = [pair for pair in sorted(diff.pairs, key=repr) if pair not in maximal]
        for x0, y0 in maximal + others:
            goal = _with_adjacent(less, actions, ("end", x0), ("start", y0))
            if goal is not None:
                break
        else:
            raise AssertionError("no removable precedence pair")
        bubble(goal)
        k = actions.index(("end", x0))
        actions = actions[:k] + [actions[k + 1], actions[k]] + actions[k + 2:]
        push(actions, Case.TS, k + 1)
        r = core.validate(r.labels, r.precedence - {(x0, y0)}, q_ann.event_order, r.sources, r.targets)

    bubble(word_actions(end))
    assert words[-1] == end
    return Chain(tuple(words), tuple(steps))


def leq_words(w1: CohWord, w2: CohWord, witness: bool = False):
    """Whether ``w1 <= w2``; with ``witness`` return a chain (or ``None``)."""
    p, q = psi(w1), psi(w2)
    if witness:
        return subsumption_chain(p, q)
    return is_subsumption(p, q) is not None
