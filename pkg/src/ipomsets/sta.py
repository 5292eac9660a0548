"""ST-automata and the translations between them and HDAs."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Optional, Sequence

from .errors import FormatError, LabelMismatch, SizeLimitExceeded, UnknownState
from .hda import Hda, face, validate_hda
from .notation import format_letter, parse_letter
from .steps import CohWord, Kind, StepLetter, fuse, identity_letter, make_starter, make_terminator, normalize, word_key

StateId = Hashable
Edge = tuple  # (source, StepLetter, target)

MAX_FREE_CELLS = 20_000


@dataclass(frozen=True)
class StAutomaton:
    states: Mapping[StateId, tuple[str, ...]]
    edges: frozenset
    initial: frozenset = frozenset()
    final: frozenset = frozenset()

    def out_edges(self) -> dict[StateId, list[Edge]]:
        out: dict = {q: [] for q in self.states}
        for e in sorted(self.edges, key=_edge_sort):
            out[e[0]].append(e)
        return out

    def to_dict(self) -> dict:
        return {
            "states": [{"id": q, "events": list(ev)} for q, ev in self.states.items()],
            "edges": [
                {"from": p, "letter": format_letter(letter), "to": r}
                for p, letter, r in sorted(self.edges, key=_edge_sort)
            ],
            "initial": sorted(self.initial, key=repr),
            "final": sorted(self.final, key=repr),
        }


def _edge_sort(e: Edge) -> tuple:
    return (repr(e[0]), format_letter(e[1]), repr(e[2]))


def validate_sta(
    states: Mapping[StateId, Sequence[str]],
    edges: Iterable[Edge],
    initial: Iterable[StateId] = (),
    final: Iterable[StateId] = (),
) -> StAutomaton:
    states = {q: tuple(ev) for q, ev in states.items()}
    edges = frozenset(edges)
    initial, final = frozenset(initial), frozenset(final)
    for q in initial | final:
        if q not in states:
            raise UnknownState(f"unknown initial/final state {q!r}", state=q)
    for p, letter, r in sorted(edges, key=_edge_sort):
        for s in (p, r):
            if s not in states:
                raise UnknownState(f"edge {p!r} -> {r!r} uses unknown state {s!r}", state=s)
        if letter.source != states[p] or letter.target != states[r]:
            raise LabelMismatch(
                f"edge {p!r} -{format_letter(letter)}-> {r!r} goes from {list(letter.source)} to "
                f"{list(letter.target)}, states carry {list(states[p])} and {list(states[r])}",
                edge=[p, format_letter(letter), r],
            )
    return StAutomaton(states, edges, initial, final)


def from_dict(raw: Mapping) -> StAutomaton:
    try:
        states = {s["id"]: tuple(s["events"]) for s in raw["states"]}
        edges = [(e["from"], parse_letter(e["letter"]), e["to"]) for e in raw.get("edges", [])]
        return validate_sta(states, edges, raw.get("initial", []), raw.get("final", []))
    except (KeyError, TypeError, AttributeError) as exc:
        raise FormatError(f"malformed ST-automaton description: {exc}") from exc


# --------------------------------------------------------------------------
# paths and languages


@dataclass(frozen=True)
class StaPath:
    states: tuple
    letters: tuple = ()


def path_label(a: StAutomaton, path: StaPath) -> CohWord:
    """Sparse label of a path, with identities padding every visited state."""
    if len(path.states) != len(path.letters) + 1:
        raise FormatError("a path alternates states and edge letters")
    for k, letter in enumerate(path.letters):
        if (path.states[k], letter, path.states[k + 1]) not in a.edges:
            raise LabelMismatch(f"step {k + 1} is not an edge", edge=k + 1)
    letters = [identity_letter(a.states[path.states[0]])]
    for letter, q in zip(path.letters, path.states[1:]):
        letters += [letter, identity_letter(a.states[q])]
    return normalize(CohWord(tuple(letters)))


def language_bounded(a: StAutomaton, max_steps: int) -> frozenset[bytes]:
    """Keys of sparse labels of accepting paths with at most ``max_steps`` edges.

    Identity edges never change a label, so they are not followed.
    """
    out = a.out_edges()
    keys: set[bytes] = set()
    explored: dict = {}
    stack = [(q, CohWord((identity_letter(a.states[q]),)), max_steps) for q in a.initial]
    while stack:
        q, label, remaining = stack.pop()
        key = word_key(label)
        if explored.get((q, key), -1) >= remaining:
            continue
        explored[(q, key)] = remaining
        if q in a.final:
            keys.add(key)
        if remaining:
            for _, letter, r in out[q]:
                if not letter.is_identity:
                    stack.append((r, normalize(CohWord(label.letters + (letter,))), remaining - 1))
    return frozenset(keys)


# --------------------------------------------------------------------------
# HDA -> ST-automaton


def _all_subsets(n: int) -> Iterable[frozenset]:
    for k in range(n + 1):
        for c in combinations(range(n), k):
            yield frozenset(c)


def st_of_hda(x: Hda) -> StAutomaton:
    """Cells become states; every face map becomes a starter or terminator edge."""
    edges = set()
    for q, ev in x.cells.items():
        for a in _all_subsets(len(ev)):
            edges.add((face(x, q, a, 0), make_starter(ev, a), q))
            edges.add((q, make_terminator(ev, a), face(x, q, a, 1)))
    return StAutomaton(dict(x.cells), frozenset(edges), x.start, x.accept)


# --------------------------------------------------------------------------
# ST-automaton -> HDA


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> bool:
        i, j = self.find(i), self.find(j)
        if i == j:
            return False
        self.parent[max(i, j)] = min(i, j)
        return True


def _cube(n: int, b: frozenset, c: frozenset) -> str:
    return "".join("0" if i in b else "1" if i in c else "*" for i in range(n))


def hd_of_sta(a: StAutomaton, max_cells: int = MAX_FREE_CELLS) -> Hda:
    """Add all formal faces, then quotient until faces are functions and commute.

    A free cell ``(q, B, C)`` is state ``q`` with the events at positions ``B``
    not yet started and those at ``C`` already terminated.  The quotient is
    the least equivalence making single-event faces functional, every edge
    face equal to the composite of single-event faces, and the cube
    identities hold.
    """
    total = sum(3 ** len(ev) for ev in a.states.values())
    if total > max_cells:
        raise SizeLimitExceeded(f"{total} free cells exceed the limit of {max_cells}", cells=total, limit=max_cells)

    free: list[tuple] = []
    index: dict = {}
    for q in sorted(a.states, key=repr):
        n = len(a.states[q])
        for b in _all_subsets(n):
            rest = [i for i in range(n) if i not in b]
            for k in range(len(rest) + 1):
                for c in combinations(rest, k):
                    index[(q, b, frozenset(c))] = len(free)
                    free.append((q, b, frozenset(c)))

    def carrier(cell) -> list[int]:
        q, b, c = cell
        return [i for i in range(len(a.states[q])) if i not in b and i not in c]

    # single-event relations and relations on larger (or empty) event sets,
    # all with positions relative to the source cell's conclist
    singles: list[tuple[int, int, int, int]] = []
    multi: list[tuple[int, int, tuple, int]] = []
    for k, cell in enumerate(free):
        q, b, c = cell
        for rel, i in enumerate(carrier(cell)):
            singles.append((k, rel, 0, index[(q, b | {i}, c)]))
            singles.append((k, rel, 1, index[(q, b, c | {i})]))
    for p, letter, r in a.edges:
        # starters give lower faces of their target, terminators upper faces of their source
        if letter.kind is Kind.START and not letter.is_identity:
            big, small, nu = r, p, 0
        else:
            big, small, nu = p, r, 1
        marked = letter.marked
        keep = [i for i in range(len(letter.carrier)) if i not in marked]
        shift = {old: new for new, old in enumerate(keep)}
        for (q, b, c), k in index.items():
            if q != big or (b | c) & marked:
                continue
            target = index[(small, frozenset(shift[i] for i in b), frozenset(shift[i] for i in c))]
            live = carrier((q, b, c))
            rel = tuple(live.index(i) for i in sorted(marked))
            if len(rel) == 1:
                singles.append((k, rel[0], nu, target))
            else:
                multi.append((k, nu, rel, target))

    uf = _UnionFind(len(free))
    dims = [len(carrier(cell)) for cell in free]
    changed = True
    while changed:
        changed = False
        table: dict = {}
        for k, i, nu, t in singles:
            key = (uf.find(k), i, nu)
            if key in table:
                changed |= uf.union(table[key], t)
            else:
                table[key] = t

        def step(k: int, i: int, nu: int) -> int:
            return uf.find(table[(uf.find(k), i, nu)])

        for k, nu, rel, t in multi:
            cur = k
            for i in sorted(rel, reverse=True):
                cur = step(cur, i, nu)
            changed |= uf.union(cur, t)
        for k in {uf.find(k) for k in range(len(free))}:
            for i, j in combinations(range(dims[k]), 2):
                for nu in (0, 1):
                    for mu in (0, 1):
                        one = step(step(k, j, mu), i, nu)
                        two = step(step(k, i, nu), j - 1, mu)
                        changed |= uf.union(one, two)

    members: dict[int, list[int]] = {}
    for k in range(len(free)):
        members.setdefault(uf.find(k), []).append(k)
    names: dict[int, object] = {}
    for root, ks in members.items():
        plain = sorted((free[k][0] for k in ks if not free[k][1] and not free[k][2]), key=repr)
        if plain:
            names[root] = plain[0]
        else:
            q, b, c = free[min(ks)]
            names[root] = f"{q}:{_cube(len(a.states[q]), b, c)}"

    def labels(k: int) -> tuple[str, ...]:
        q = free[k][0]
        return tuple(a.states[q][i] for i in carrier(free[k]))

    cells = {names[root]: labels(root) for root in members}
    lower, upper = {}, {}
    for k, i, nu, t in singles:
        root = uf.find(k)
        (lower if nu == 0 else upper)[(names[root], i)] = names[uf.find(t)]
    start = {names[uf.find(index[(q, frozenset(), frozenset())])] for q in a.initial}
    accept = {names[uf.find(index[(q, frozenset(), frozenset())])] for q in a.final}
    return validate_hda(cells, lower, upper, start, accept)


# --------------------------------------------------------------------------
# necessary conditions for being the image of an HDA


@dataclass(frozen=True)
class ImageReport:
    missing_faces: tuple = ()
    missing_fusions: tuple = ()
    missing_splits: tuple = ()

    @property
    def ok(self) -> bool:
        return not (self.missing_faces or self.missing_fusions or self.missing_splits)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "missingFaces": list(self.missing_faces),
            "missingFusions": list(self.missing_fusions),
            "missingSplits": list(self.missing_splits),
        }


def _splits(letter: StepLetter) -> Iterable[tuple[StepLetter, StepLetter]]:
    """Every way of writing a letter as two nonempty same-kind letters."""
    marked = sorted(letter.marked)
    u = letter.carrier
    for k in range(1, len(marked)):
        for first in combinations(marked, k):
            first_set = set(first)
            second = [i for i in marked if i not in first_set]
            if letter.kind is Kind.START:
                keep = [i for i in range(len(u)) if i not in second]
                mid = [u[i] for i in keep]
                yield make_starter(mid, [keep.index(i) for i in first]), make_starter(u, second)
            else:
                keep = [i for i in range(len(u)) if i not in first_set]
                mid = [u[i] for i in keep]
                yield make_terminator(u, first), make_terminator(mid, [keep.index(i) for i in second])


def check_hda_image(a: StAutomaton) -> ImageReport:
    """Check the three closure properties every automaton of the form ST(X) has."""
    into: dict = {q: set() for q in a.states}
    out: dict = {q: [] for q in a.states}
    for p, letter, r in a.edges:
        into[r].add(letter)
        out[p].append((letter, r))

    faces = []
    for q in sorted(a.states, key=repr):
        u = a.states[q]
        for s in _all_subsets(len(u)):
            if make_starter(u, s) not in into[q]:
                faces.append({"state": q, "letter": format_letter(make_starter(u, s)), "direction": "in"})
            if not any(letter == make_terminator(u, s) for letter, _ in out[q]):
                faces.append({"state": q, "letter": format_letter(make_terminator(u, s)), "direction": "out"})

    fusions = []
    for p, l1, q in sorted(a.edges, key=_edge_sort):
        for l2, r in sorted(out[q], key=lambda e: (format_letter(e[0]), repr(e[1]))):
            if l1.is_identity or l2.is_identity or l1.kind is l2.kind:
                fused = fuse(l1, l2)
                if (p, fused, r) not in a.edges:
                    fusions.append(
                        {"from": p, "via": q, "to": r, "letters": [format_letter(l1), format_letter(l2)],
                         "expected": format_letter(fused)}
                    )

    splits = []
    for p, letter, r in sorted(a.edges, key=_edge_sort):
        for l1, l2 in _splits(letter):
            if not any((q, l2, r) in a.edges for l, q in out[p] if l == l1):
                splits.append({"from": p, "to": r, "letter": format_letter(letter),
                               "split": [format_letter(l1), format_letter(l2)]})
    return ImageReport(tuple(faces), tuple(fusions), tuple(splits))


def to_dot(a: StAutomaton, name: str = "sta") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    ids = {q: f"s{k}" for k, q in enumerate(a.states)}
    for q, ev in a.states.items():
        shape = "doublecircle" if q in a.final else "circle"
        extra = ", penwidth=2" if q in a.initial else ""
        lines.append(f'  {ids[q]} [label="{q}\\n[{"|".join(ev)}]", shape={shape}{extra}];')
    for p, letter, r in sorted(a.edges, key=_edge_sort):
        lines.append(f'  {ids[p]} -> {ids[r]} [label="{format_letter(letter)}"];')
    lines.append("}")
    return "\n".join(lines)
