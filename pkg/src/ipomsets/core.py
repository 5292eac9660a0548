"""Interval pomsets with interfaces: values, validation, gluing, isomorphism.

An ipomset is a finite set of labelled events carrying two strict orders,
the precedence order ``<`` and the event order ``-->``, together with a
source set ``S`` of events already running at the start and a target set
``T`` of events still running at the end.  Every pair of distinct events is
related by one of the two orders.

Event identifiers are arbitrary hashable values.  Two ipomsets never share
events implicitly; identification across ipomsets goes through explicit
renamings (see :func:`glue`) or bijections (see :func:`isomorphic`).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Mapping, Optional, Sequence

from .errors import (
    FormatError,
    InterfaceMismatch,
    InterfaceViolation,
    NotAPartialOrder,
    NotInterval,
    NotTotal,
)

EventId = Hashable
Pair = tuple[EventId, EventId]


@dataclass(frozen=True)
class Conclist:
    """A totally event-ordered list of concurrent labelled events."""

    events: tuple[tuple[EventId, str], ...] = ()

    @property
    def ids(self) -> tuple[EventId, ...]:
        return tuple(e for e, _ in self.events)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lab for _, lab in self.events)

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[tuple[EventId, str]]:
        return iter(self.events)


@dataclass(frozen=True)
class IntervalRep:
    """Integer interval representation ``x < y  iff  ends[x] < begins[y]``."""

    begins: Mapping[EventId, int]
    ends: Mapping[EventId, int]
    magnitude: int

    def antichain(self, i: int) -> frozenset:
        """The events alive at rank ``i`` (a maximal antichain)."""
        return frozenset(x for x in self.begins if self.begins[x] <= i <= self.ends[x])


def transitive_closure(pairs: Iterable[Pair]) -> frozenset:
    succ: dict = {}
    for x, y in pairs:
        succ.setdefault(x, set()).add(y)
    closed = set()
    for x in list(succ):
        stack = list(succ[x])
        seen = set()
        while stack:
            y = stack.pop()
            if y in seen:
                continue
            seen.add(y)
            stack.extend(succ.get(y, ()))
        closed.update((x, y) for y in seen)
    return frozenset(closed)


class Ipomset:
    """A validated ipomset.  Build instances with :func:`validate`.

    Relations are stored transitively closed.  Instances are immutable and
    compare structurally (same event ids, same relations).
    """

    def __init__(
        self,
        labels: Mapping[EventId, str],
        precedence: frozenset,
        event_order: frozenset,
        sources: frozenset,
        targets: frozenset,
    ) -> None:
        # trusted constructor; callers outside this module use validate()
        self.labels = dict(labels)
        self.precedence = precedence
        self.event_order = event_order
        self.sources = sources
        self.targets = targets

    @property
    def events(self) -> tuple[EventId, ...]:
        return tuple(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Ipomset):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.precedence == other.precedence
            and self.event_order == other.event_order
            and self.sources == other.sources
            and self.targets == other.targets
        )

    def __hash__(self) -> int:
        return hash(
            (frozenset(self.labels.items()), self.precedence, self.event_order, self.sources, self.targets)
        )

    def __repr__(self) -> str:
        return (
            f"Ipomset(labels={self.labels!r}, precedence={sorted(self.precedence, key=repr)!r}, "
            f"event_order={sorted(self.event_order, key=repr)!r}, "
            f"sources={sorted(self.sources, key=repr)!r}, targets={sorted(self.targets, key=repr)!r})"
        )

    @cached_property
    def predecessors(self) -> dict[EventId, frozenset]:
        down: dict = {x: set() for x in self.labels}
        for x, y in self.precedence:
            down[y].add(x)
        return {x: frozenset(s) for x, s in down.items()}

    @cached_property
    def successors(self) -> dict[EventId, frozenset]:
        up: dict = {x: set() for x in self.labels}
        for x, y in self.precedence:
            up[x].add(y)
        return {x: frozenset(s) for x, s in up.items()}

    def lt(self, x: EventId, y: EventId) -> bool:
        return (x, y) in self.precedence

    def concurrent(self, x: EventId, y: EventId) -> bool:
        return x != y and (x, y) not in self.precedence and (y, x) not in self.precedence

    def before(self, x: EventId, y: EventId) -> bool:
        """Event order ``x --> y``."""
        return (x, y) in self.event_order

    def essential_event_order(self) -> frozenset:
        """Event order restricted to <-incomparable pairs."""
        return frozenset(p for p in self.event_order if self.concurrent(*p))

    def sort_concurrent(self, events: Iterable[EventId]) -> list:
        """Sort pairwise concurrent events by the event order."""
        evs = list(events)
        return sorted(evs, key=lambda x: sum(1 for y in evs if (y, x) in self.event_order))

    def to_dict(self) -> dict:
        events = self.events
        return {
            "events": [{"id": e, "label": self.labels[e]} for e in events],
            "precedence": [list(p) for p in _ordered_pairs(self.precedence, events)],
            "eventOrder": [list(p) for p in _ordered_pairs(self.event_order, events)],
            "sources": [e for e in events if e in self.sources],
            "targets": [e for e in events if e in self.targets],
        }


def _ordered_pairs(pairs: frozenset, events: Sequence[EventId]) -> list:
    index = {e: i for i, e in enumerate(events)}
    return sorted(pairs, key=lambda p: (index[p[0]], index[p[1]]))


def validate(
    labels: Mapping[EventId, str] | Iterable[tuple[EventId, str]],
    precedence: Iterable[Pair] = (),
    event_order: Iterable[Pair] = (),
    sources: Iterable[EventId] = (),
    targets: Iterable[EventId] = (),
) -> Ipomset:
    """Close both relations transitively and check the ipomset axioms."""
    labels = dict(labels)
    precedence = [tuple(p) for p in precedence]
    event_order = [tuple(p) for p in event_order]
    sources = frozenset(sources)
    targets = frozenset(targets)

    for name, rel in (("precedence", precedence), ("event_order", event_order)):
        for x, y in rel:
            if x not in labels or y not in labels:
                raise FormatError(f"{name} mentions unknown event in {(x, y)!r}", relation=name, pair=[x, y])
    for name, sub in (("sources", sources), ("targets", targets)):
        unknown = sub - labels.keys()
        if unknown:
            raise FormatError(f"{name} mentions unknown events {sorted(unknown, key=repr)!r}", field=name)

    prec = transitive_closure(precedence)
    evord = transitive_closure(event_order)
    for name, rel in (("precedence", prec), ("event_order", evord)):
        for x, y in rel:
            if x == y:
                raise NotAPartialOrder(f"{name} has a cycle through {x!r}", relation=name, witness=x)

    events = list(labels)
    for i, x in enumerate(events):
        for y in events[i + 1:]:
            if not ((x, y) in prec or (y, x) in prec or (x, y) in evord or (y, x) in evord):
                raise NotTotal(f"events {x!r} and {y!r} are unrelated", witness=[x, y])

    for x, y in prec:
        if y in sources:
            raise InterfaceViolation(f"source {y!r} is not <-minimal ({x!r} < {y!r})", event=y, reason="source not minimal")
        if x in targets:
            raise InterfaceViolation(f"target {x!r} is not <-maximal ({x!r} < {y!r})", event=x, reason="target not maximal")

    return Ipomset(labels, prec, evord, sources, targets)


def from_dict(raw: Mapping) -> Ipomset:
    """Validate the JSON ipomset description used by the command line tool."""
    try:
        labels = {e["id"]: e["label"] for e in raw.get("events", [])}
        return validate(
            labels,
            [tuple(p) for p in raw.get("precedence", [])],
            [tuple(p) for p in raw.get("eventOrder", [])],
            raw.get("sources", []),
            raw.get("targets", []),
        )
    except (KeyError, TypeError, AttributeError) as exc:
        raise FormatError(f"malformed ipomset description: {exc}") from exc


def identity(labels: Sequence[str]) -> Ipomset:
    """The identity ipomset on the conclist ``labels`` (events 0..n-1)."""
    n = len(labels)
    evs = range(n)
    return Ipomset(
        {i: lab for i, lab in enumerate(labels)},
        frozenset(),
        frozenset((i, j) for i in evs for j in evs if i < j),
        frozenset(evs),
        frozenset(evs),
    )


def source_interface(p: Ipomset) -> Conclist:
    return Conclist(tuple((e, p.labels[e]) for e in p.sort_concurrent(p.sources)))


def target_interface(p: Ipomset) -> Conclist:
    return Conclist(tuple((e, p.labels[e]) for e in p.sort_concurrent(p.targets)))


# --------------------------------------------------------------------------
# interval orders


def _predecessor_chain(p: Ipomset) -> Optional[list[frozenset]]:
    chain = sorted(set(p.predecessors.values()), key=len)
    for smaller, larger in zip(chain, chain[1:]):
        if not smaller < larger:
            return None
    return chain


def is_interval(p: Ipomset) -> bool:
    """True iff the strict predecessor sets are totally ordered by inclusion."""
    return _predecessor_chain(p) is not None


def interval_representation(p: Ipomset) -> IntervalRep:
    down_chain = _predecessor_chain(p)
    if down_chain is None:
        raise NotInterval("precedence order is not an interval order")
    up_chain = sorted(set(p.successors.values()), key=len, reverse=True)
    if len(up_chain) != len(down_chain):
        raise AssertionError("predecessor and successor chains differ in length")
    down_rank = {s: i for i, s in enumerate(down_chain)}
    up_rank = {s: i for i, s in enumerate(up_chain)}
    begins = {x: down_rank[p.predecessors[x]] for x in p.labels}
    ends = {x: up_rank[p.successors[x]] for x in p.labels}
    rep = IntervalRep(begins, ends, len(down_chain))
    _check_representation(p, rep)
    return rep


def _check_representation(p: Ipomset, rep: IntervalRep) -> None:
    m = rep.magnitude
    for x in p.labels:
        assert 0 <= rep.begins[x] <= rep.ends[x] <= m - 1
        for y in p.labels:
            assert ((x, y) in p.precedence) == (rep.ends[x] < rep.begins[y])
    assert all(rep.begins[s] == 0 for s in p.sources)
    assert all(rep.ends[t] == m - 1 for t in p.targets)


# --------------------------------------------------------------------------
# gluing


def _fresh_ids(taken: set, wanted: Iterable[EventId]) -> dict:
    """Rename ``wanted`` ids away from ``taken``, keeping ids that are free."""
    mapping = {}
    next_int = max((e for e in taken if isinstance(e, int) and not isinstance(e, bool)), default=-1) + 1
    for e in wanted:
        new = e
        if new in taken:
            if isinstance(e, int) and not isinstance(e, bool):
                while next_int in taken:
                    next_int += 1
                new = next_int
            else:
                new = f"{e}'"
                while new in taken:
                    new += "'"
        taken.add(new)
        mapping[e] = new
    return mapping


def glue(p: Ipomset, q: Ipomset) -> Ipomset:
    """Serial composition ``p * q`` continuing the interface events of ``p``.

    ``q`` is renamed so that its source interface coincides with the target
    interface of ``p`` (matched in event order); its other events keep their
    ids when these are unused in ``p``.
    """
    tp = target_interface(p)
    sq = source_interface(q)
    if tp.labels != sq.labels:
        raise InterfaceMismatch(
            f"target interface {list(tp.labels)} does not match source interface {list(sq.labels)}",
            expected=list(tp.labels),
            actual=list(sq.labels),
        )
    rename = dict(zip(sq.ids, tp.ids))
    rename.update(_fresh_ids(set(p.labels), [e for e in q.labels if e not in q.sources]))

    labels = dict(p.labels)
    labels.update((rename[e], lab) for e, lab in q.labels.items())
    q_prec = {(rename[x], rename[y]) for x, y in q.precedence}
    q_evord = {(rename[x], rename[y]) for x, y in q.event_order}
    p_only = [x for x in p.labels if x not in p.targets]
    q_only = [rename[y] for y in q.labels if y not in q.sources]
    bridge = {(x, y) for x in p_only for y in q_only}
    # the precedence union is already transitive; the event-order union can
    # miss inessential pairs between the two sides, so it is closed
    return Ipomset(
        labels,
        frozenset(p.precedence | q_prec | bridge),
        transitive_closure(p.event_order | q_evord),
        p.sources,
        frozenset(rename[t] for t in q.targets),
    )


def rename(p: Ipomset, mapping: Mapping[EventId, EventId]) -> Ipomset:
    """Apply an injective renaming of events (missing ids are kept)."""
    f = lambda e: mapping.get(e, e)  # noqa: E731
    return Ipomset(
        {f(e): lab for e, lab in p.labels.items()},
        frozenset((f(x), f(y)) for x, y in p.precedence),
        frozenset((f(x), f(y)) for x, y in p.event_order),
        frozenset(map(f, p.sources)),
        frozenset(map(f, p.targets)),
    )


# --------------------------------------------------------------------------
# isomorphism


def _signature(p: Ipomset, x: EventId) -> tuple:
    return (
        p.labels[x],
        x in p.sources,
        x in p.targets,
        len(p.predecessors[x]),
        len(p.successors[x]),
    )


def isomorphic(p: Ipomset, q: Ipomset) -> Optional[dict]:
    """Return the (unique) isomorphism ``p -> q`` as a dict, or ``None``."""
    if len(p) != len(q) or len(p.precedence) != len(q.precedence):
        return None
    if len(p.sources) != len(q.sources) or len(p.targets) != len(q.targets):
        return None
    sig_q: dict = {}
    for y in q.labels:
        sig_q.setdefault(_signature(q, y), []).append(y)
    candidates = {}
    for x in p.labels:
        cands = sig_q.get(_signature(p, x))
        if not cands:
            return None
        candidates[x] = cands
    order = sorted(p.labels, key=lambda x: (len(candidates[x]), len(p.predecessors[x])))

    def compatible(x, fx, assigned):
        for y, fy in assigned.items():
            if fx == fy:
                return False
            if p.lt(x, y) != q.lt(fx, fy) or p.lt(y, x) != q.lt(fy, fx):
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

    return search(0, {})
