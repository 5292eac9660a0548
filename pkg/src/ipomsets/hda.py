"""Higher-dimensional automata over finite precubical sets.

Cells carry conclists (label tuples, positions standing for events).  Only
single-event faces are stored: ``lower[(q, i)]`` is the cell where event
``i`` of ``q`` has not started yet, ``upper[(q, i)]`` the one where it has
terminated.  Faces on event sets are composites of these.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Optional, Sequence

from . import core
from .errors import (
    FaceConclistMismatch,
    FormatError,
    InvalidPath,
    MissingFace,
    NotASubset,
    PrecubicalViolation,
    UnknownCell,
)
from .steps import CohWord, StepLetter, canonical_key, identity_letter, letter_ipomset, make_starter, make_terminator

CellId = Hashable


@dataclass(frozen=True)
class Hda:
    cells: Mapping[CellId, tuple[str, ...]]
    lower: Mapping[tuple[CellId, int], CellId]
    upper: Mapping[tuple[CellId, int], CellId]
    start: frozenset = frozenset()
    accept: frozenset = frozenset()

    def ev(self, q: CellId) -> tuple[str, ...]:
        try:
            return self.cells[q]
        except KeyError:
            raise UnknownCell(f"unknown cell {q!r}", cell=q) from None

    def dim(self, q: CellId) -> int:
        return len(self.ev(q))

    def to_dict(self) -> dict:
        return {
            "cells": [
                {
                    "id": q,
                    "events": list(ev),
                    "d0": {str(i): self.lower[(q, i)] for i in range(len(ev))},
                    "d1": {str(i): self.upper[(q, i)] for i in range(len(ev))},
                }
                for q, ev in self.cells.items()
            ],
            "start": sorted(self.start, key=repr),
            "accept": sorted(self.accept, key=repr),
        }


def _remove(seq: Sequence, positions: Iterable[int]) -> tuple:
    positions = set(positions)
    return tuple(x for i, x in enumerate(seq) if i not in positions)


def validate_hda(
    cells: Mapping[CellId, Sequence[str]],
    lower: Mapping[tuple[CellId, int], CellId],
    upper: Mapping[tuple[CellId, int], CellId],
    start: Iterable[CellId] = (),
    accept: Iterable[CellId] = (),
) -> Hda:
    """Check faces are total, conclist-compatible and satisfy the cube identities."""
    cells = {q: tuple(ev) for q, ev in cells.items()}
    lower, upper = dict(lower), dict(upper)
    start, accept = frozenset(start), frozenset(accept)
    for q in start | accept:
        if q not in cells:
            raise UnknownCell(f"unknown start/accept cell {q!r}", cell=q)
    for nu, faces in ((0, lower), (1, upper)):
        for (q, i), r in faces.items():
            if q not in cells or r not in cells:
                raise UnknownCell(f"face d{nu}[{q!r},{i}] refers to an unknown cell", cell=q if q not in cells else r)
            if not 0 <= i < len(cells[q]):
                raise NotASubset(f"cell {q!r} has no event {i}", cell=q, event=i)
    for q, ev in cells.items():
        for i in range(len(ev)):
            for nu, faces in ((0, lower), (1, upper)):
                if (q, i) not in faces:
                    raise MissingFace(f"cell {q!r} lacks face d{nu} on event {i}", cell=q, event=i, nu=nu)
                r = faces[(q, i)]
                if cells[r] != _remove(ev, [i]):
                    raise FaceConclistMismatch(
                        f"face d{nu}[{q!r},{i}] = {r!r} has events {list(cells[r])}, expected {list(_remove(ev, [i]))}",
                        cell=q,
                        event=i,
                        nu=nu,
                    )
    x = Hda(cells, lower, upper, start, accept)
    for q, ev in cells.items():
        for i, j in combinations(range(len(ev)), 2):
            for nu in (0, 1):
                for mu in (0, 1):
                    # removing j first keeps i in place; removing i shifts j down
                    one = _single(x, _single(x, q, j, mu), i, nu)
                    two = _single(x, _single(x, q, i, nu), j - 1, mu)
                    if one != two:
                        raise PrecubicalViolation(
                            f"faces of {q!r} on events {i},{j} (d{nu},d{mu}) disagree: {one!r} vs {two!r}",
                            cell=q,
                            events=[i, j],
                            nu=[nu, mu],
                        )
    return x


def _single(x: Hda, q: CellId, i: int, nu: int) -> CellId:
    return (x.lower if nu == 0 else x.upper)[(q, i)]


def face(x: Hda, q: CellId, events: Iterable[int], nu: int) -> CellId:
    """The face of ``q`` where ``events`` are unstarted (``nu=0``) or terminated."""
    ev = x.ev(q)
    events = sorted(set(events), reverse=True)
    if any(not 0 <= i < len(ev) for i in events):
        raise NotASubset(f"{events} is not a subset of the events of {q!r}", cell=q)
    for i in events:
        q = _single(x, q, i, nu)
    return q


def from_dict(raw: Mapping) -> Hda:
    try:
        cells = {c["id"]: tuple(c["events"]) for c in raw["cells"]}
        lower = {(c["id"], int(i)): r for c in raw["cells"] for i, r in c.get("d0", {}).items()}
        upper = {(c["id"], int(i)): r for c in raw["cells"] for i, r in c.get("d1", {}).items()}
        return validate_hda(cells, lower, upper, raw.get("start", []), raw.get("accept", []))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        if isinstance(exc, FormatError) or hasattr(exc, "details"):
            raise
        raise FormatError(f"malformed HDA description: {exc}") from exc


# --------------------------------------------------------------------------
# paths


@dataclass(frozen=True)
class PathStep:
    """``up`` into the next cell starting ``events`` of that cell, or
    ``down`` out of the previous cell terminating ``events`` of it."""

    direction: str
    events: frozenset = field(default_factory=frozenset)


@dataclass(frozen=True)
class HdaPath:
    cells: tuple
    steps: tuple = ()

    def __post_init__(self) -> None:
        if len(self.cells) != len(self.steps) + 1:
            raise InvalidPath("a path alternates cells and steps", position=0)

    def concat(self, other: "HdaPath") -> "HdaPath":
        if self.cells[-1] != other.cells[0]:
            raise InvalidPath("paths do not meet", position=len(self.steps))
        return HdaPath(self.cells + other.cells[1:], self.steps + other.steps)


def check_path(x: Hda, path: HdaPath) -> None:
    for k, step in enumerate(path.steps):
        here, there = path.cells[k], path.cells[k + 1]
        try:
            if step.direction == "up":
                ok = face(x, there, step.events, 0) == here
            elif step.direction == "down":
                ok = face(x, here, step.events, 1) == there
            else:
                ok = False
        except (UnknownCell, NotASubset):
            ok = False
        if not ok:
            raise InvalidPath(f"step {k + 1} ({step.direction} {sorted(step.events)}) is not a face relation", position=k + 1)


def ev_path(x: Hda, path: HdaPath) -> CohWord:
    """The step word of a path; gluing it gives the path's event ipomset."""
    check_path(x, path)
    letters = []
    for k, step in enumerate(path.steps):
        if step.direction == "up":
            letters.append(make_starter(x.ev(path.cells[k + 1]), step.events))
        else:
            letters.append(make_terminator(x.ev(path.cells[k]), step.events))
    if not letters:
        return CohWord((identity_letter(x.ev(path.cells[0])),))
    return CohWord(tuple(letters))


def _subsets(n: int) -> Iterable[frozenset]:
    for k in range(1, n + 1):
        for c in combinations(range(n), k):
            yield frozenset(c)


def moves(x: Hda) -> dict[CellId, list[tuple[PathStep, CellId, StepLetter]]]:
    """Every step with a nonempty event set leaving each cell."""
    out: dict = {q: [] for q in x.cells}
    for q, ev in x.cells.items():
        for a in _subsets(len(ev)):
            out[face(x, q, a, 0)].append((PathStep("up", a), q, make_starter(ev, a)))
            out[q].append((PathStep("down", a), face(x, q, a, 1), make_terminator(ev, a)))
    return out


def accepting_paths(x: Hda, max_steps: int) -> Iterable[HdaPath]:
    """All accepting paths with at most ``max_steps`` steps (exponential)."""
    mv = moves(x)
    stack = [HdaPath((q,)) for q in sorted(x.start, key=repr)]
    while stack:
        path = stack.pop()
        if path.cells[-1] in x.accept:
            yield path
        if len(path.steps) < max_steps:
            for step, target, _ in mv[path.cells[-1]]:
                stack.append(HdaPath(path.cells + (target,), path.steps + (step,)))


def language_bounded(x: Hda, max_steps: int) -> frozenset[bytes]:
    """Canonical keys of the event ipomsets of accepting paths of bounded length.

    Prefixes are glued incrementally; a cell reached with an isomorphic
    prefix and no more remaining steps than before is not explored again.
    """
    mv = moves(x)
    keys: set[bytes] = set()
    explored: dict = {}
    stack = [(q, core.identity(x.ev(q)), max_steps) for q in x.start]
    while stack:
        q, prefix, remaining = stack.pop()
        key = canonical_key(prefix)
        if explored.get((q, key), -1) >= remaining:
            continue
        explored[(q, key)] = remaining
        if q in x.accept:
            keys.add(key)
        if remaining:
            for _, target, letter in mv[q]:
                stack.append((target, core.glue(prefix, letter_ipomset(letter)), remaining - 1))
    return frozenset(keys)


# --------------------------------------------------------------------------
# isomorphism of HDAs


def hda_isomorphic(x: Hda, y: Hda) -> Optional[dict]:
    """A cell bijection preserving conclists, all faces, start and accept cells."""
    if len(x.cells) != len(y.cells):
        return None

    def sig(h, q):
        return (h.cells[q], q in h.start, q in h.accept)

    by_sig: dict = {}
    for q in y.cells:
        by_sig.setdefault(sig(y, q), []).append(q)
    order = sorted(x.cells, key=lambda q: (-len(x.cells[q]), repr(q)))

    def propagate(mapping, used, c, d):
        todo = [(c, d)]
        while todo:
            c, d = todo.pop()
            if c in mapping:
                if mapping[c] != d:
                    return False
                continue
            if d in used or sig(x, c) != sig(y, d):
                return False
            mapping[c] = d
            used.add(d)
            for i in range(len(x.cells[c])):
                todo.append((x.lower[(c, i)], y.lower[(d, i)]))
                todo.append((x.upper[(c, i)], y.upper[(d, i)]))
        return True

    def search(mapping, used):
        free = [c for c in order if c not in mapping]
        if not free:
            return mapping
        c = free[0]
        for d in by_sig.get(sig(x, c), []):
            if d in used:
                continue
            m, u = dict(mapping), set(used)
            if propagate(m, u, c, d):
                found = search(m, u)
                if found is not None:
                    return found
        return None

    return search({}, set())


def to_dot(x: Hda, name: str = "hda") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    ids = {q: f"c{k}" for k, q in enumerate(x.cells)}
    for q, ev in x.cells.items():
        shape = "doublecircle" if q in x.accept else "circle" if not ev else "box"
        extra = ", penwidth=2" if q in x.start else ""
        label = f"{q}\\n[{'|'.join(ev)}]" if ev else str(q)
        lines.append(f'  {ids[q]} [label="{label}", shape={shape}{extra}];')
    for (q, i), r in sorted(x.lower.items(), key=repr):
        lines.append(f'  {ids[r]} -> {ids[q]} [label="d0 {x.cells[q][i]}", style=dashed];')
    for (q, i), r in sorted(x.upper.items(), key=repr):
        lines.append(f'  {ids[q]} -> {ids[r]} [label="d1 {x.cells[q][i]}"];')
    lines.append("}")
    return "\n".join(lines)
