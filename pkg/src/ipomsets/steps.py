"""Starters, terminators and step sequences.

A step letter is a discrete ipomset that either starts or terminates a set
of events of a conclist.  Letters carry no event ids: a letter is its
carrier label sequence plus the marked carrier positions.  Coherent words
of letters are glued with :func:`psi`; :func:`phi` computes the unique
sparse (alternating) word of an interval ipomset.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from . import core
from .core import Ipomset
from .errors import KindMismatch, NotASubset, NotCoherent


class Kind(enum.Enum):
    START = "start"
    TERM = "term"


class StepLetter:
    """A starter ``carrier`` starting ``marked``, or a terminator ending them.

    Letters with nothing marked are identities; they compare equal whatever
    their ``kind``.
    """

    __slots__ = ("carrier", "marked", "kind")

    def __init__(self, carrier: Sequence[str], marked: Iterable[int], kind: Kind) -> None:
        carrier = tuple(carrier)
        marked = frozenset(marked)
        if any(not 0 <= i < len(carrier) for i in marked):
            raise NotASubset(
                f"marked positions {sorted(marked)} out of range for carrier of length {len(carrier)}",
                carrier=list(carrier),
                marked=sorted(marked),
            )
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "marked", marked)
        object.__setattr__(self, "kind", kind)

    def __setattr__(self, name, value):
        raise AttributeError("StepLetter is immutable")

    @property
    def is_identity(self) -> bool:
        return not self.marked

    @property
    def is_starter(self) -> bool:
        return self.kind is Kind.START or not self.marked

    @property
    def is_terminator(self) -> bool:
        return self.kind is Kind.TERM or not self.marked

    def _key(self) -> tuple:
        kind = None if self.is_identity else self.kind
        return (self.carrier, tuple(sorted(self.marked)), kind)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StepLetter):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        from .notation import format_letter

        return f"StepLetter({format_letter(self)!r})"

    @property
    def unmarked(self) -> tuple[int, ...]:
        return tuple(i for i in range(len(self.carrier)) if i not in self.marked)

    @property
    def source(self) -> tuple[str, ...]:
        """Label sequence of the source interface."""
        if self.kind is Kind.START:
            return tuple(self.carrier[i] for i in self.unmarked)
        return self.carrier

    @property
    def target(self) -> tuple[str, ...]:
        if self.kind is Kind.TERM:
            return tuple(self.carrier[i] for i in self.unmarked)
        return self.carrier

    @property
    def source_positions(self) -> tuple[int, ...]:
        """Carrier positions of the source interface, in order."""
        return self.unmarked if self.kind is Kind.START else tuple(range(len(self.carrier)))

    @property
    def target_positions(self) -> tuple[int, ...]:
        return self.unmarked if self.kind is Kind.TERM else tuple(range(len(self.carrier)))


def make_starter(carrier: Sequence[str], marked: Iterable[int] = ()) -> StepLetter:
    """The starter on ``carrier`` starting the events at positions ``marked``."""
    return StepLetter(carrier, marked, Kind.START)


def make_terminator(carrier: Sequence[str], marked: Iterable[int] = ()) -> StepLetter:
    return StepLetter(carrier, marked, Kind.TERM)


def identity_letter(carrier: Sequence[str]) -> StepLetter:
    return StepLetter(carrier, (), Kind.START)


@dataclass(frozen=True)
class CohWord:
    """A coherent word of step letters.

    ``interface`` is only used (and only kept) when ``letters`` is empty; the
    empty word then stands for the identity on that conclist.
    """

    letters: tuple[StepLetter, ...]
    interface: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        if letters:
            object.__setattr__(self, "interface", None)
        elif self.interface is None:
            raise NotCoherent("the empty word needs an interface conclist", position=0)
        else:
            object.__setattr__(self, "interface", tuple(self.interface))
        for i in range(len(letters) - 1):
            if letters[i].target != letters[i + 1].source:
                raise NotCoherent(
                    f"letter {i + 1} ends in {list(letters[i].target)} but letter {i + 2} "
                    f"starts from {list(letters[i + 1].source)}",
                    position=i + 1,
                )

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[StepLetter]:
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __repr__(self) -> str:
        from .notation import format_word

        return f"CohWord({format_word(self)!r})"

    @property
    def source(self) -> tuple[str, ...]:
        return self.letters[0].source if self.letters else self.interface

    @property
    def target(self) -> tuple[str, ...]:
        return self.letters[-1].target if self.letters else self.interface

    def __add__(self, other: "CohWord") -> "CohWord":
        if not self.letters:
            return other if other.source == self.interface else _incoherent(self, other)
        if not other.letters:
            return self if self.target == other.interface else _incoherent(self, other)
        return CohWord(self.letters + other.letters)


def _incoherent(a: CohWord, b: CohWord):
    raise NotCoherent(f"cannot concatenate: {list(a.target)} vs {list(b.source)}", position=len(a))


def word(*letters: StepLetter) -> CohWord:
    return CohWord(tuple(letters))


# --------------------------------------------------------------------------
# from words to ipomsets


def annotate(w: CohWord) -> list[tuple[int, ...]]:
    """Event ids for every carrier position of every letter of ``w``.

    Source interface events get ids ``0..k-1``; every started event takes
    the next unused integer.  Identity across letters follows the
    order-preserving interface matching.
    """
    active = list(range(len(w.source)))
    fresh = len(active)
    out = []
    for letter in w.letters:
        ids: list = [None] * len(letter.carrier)
        for pos, e in zip(letter.source_positions, active):
            ids[pos] = e
        for pos in sorted(letter.marked) if letter.kind is Kind.START else ():
            ids[pos] = fresh
            fresh += 1
        out.append(tuple(ids))
        active = [ids[pos] for pos in letter.target_positions]
    return out


def letter_ipomset(letter: StepLetter, ids: Optional[Sequence] = None) -> Ipomset:
    """The discrete ipomset denoted by ``letter``, with optional event ids."""
    ids = tuple(range(len(letter.carrier))) if ids is None else tuple(ids)
    n = len(ids)
    return Ipomset(
        dict(zip(ids, letter.carrier)),
        frozenset(),
        frozenset((ids[i], ids[j]) for i in range(n) for j in range(i + 1, n)),
        frozenset(ids[i] for i in letter.source_positions),
        frozenset(ids[i] for i in letter.target_positions),
    )


def psi(w: CohWord) -> Ipomset:
    """Glue the letters of a coherent word, left to right.

    Event ids follow :func:`annotate`.
    """
    if not w.letters:
        return core.identity(w.interface)
    ids = annotate(w)
    result = letter_ipomset(w.letters[0], ids[0])
    for letter, letter_ids in zip(w.letters[1:], ids[1:]):
        result = core.glue(result, letter_ipomset(letter, letter_ids))
    return result


# --------------------------------------------------------------------------
# from ipomsets to sparse words


def phi(p: Ipomset) -> CohWord:
    """The unique sparse step decomposition of an interval ipomset."""
    rep = core.interval_representation(p)
    m = rep.magnitude
    if m == 0:
        return CohWord((identity_letter(()),))
    chains = [p.sort_concurrent(rep.antichain(i)) for i in range(m)]

    def letter(carrier, marked, kind):
        return StepLetter(
            [p.labels[x] for x in carrier],
            [i for i, x in enumerate(carrier) if x in marked],
            kind,
        )

    letters = [letter(chains[0], set(chains[0]) - p.sources, Kind.START)]
    for here, there in zip(chains, chains[1:]):
        letters.append(letter(here, set(here) - set(there), Kind.TERM))
        letters.append(letter(there, set(there) - set(here), Kind.START))
    letters.append(letter(chains[-1], set(chains[-1]) - p.targets, Kind.TERM))

    if letters[0].is_identity:
        letters.pop(0)
    if letters and letters[-1].is_identity:
        letters.pop()
    if not letters:
        return CohWord((identity_letter(p.labels[x] for x in chains[0]),))
    return CohWord(tuple(letters))


def is_sparse(w: CohWord) -> bool:
    if len(w) == 1 and w[0].is_identity:
        return True
    if any(letter.is_identity for letter in w):
        return False
    return all(a.kind is not b.kind for a, b in zip(w.letters, w.letters[1:]))


def is_dense(w: CohWord) -> bool:
    if len(w) == 1 and w[0].is_identity:
        return True
    return all(len(letter.marked) == 1 for letter in w)


# --------------------------------------------------------------------------
# the congruence


def _embed(outer_len: int, removed: Iterable[int]) -> list[int]:
    """Positions of the outer carrier that survive removing ``removed``."""
    removed = set(removed)
    return [i for i in range(outer_len) if i not in removed]


def fuse(l1: StepLetter, l2: StepLetter) -> StepLetter:
    """Glue two coherent letters of the same kind into one letter."""
    if l1.target != l2.source:
        raise NotCoherent(f"{l1!r} and {l2!r} are not coherent", position=1)
    if l1.is_identity:
        return l2
    if l2.is_identity:
        return l1
    if l1.kind is not l2.kind:
        raise KindMismatch(f"cannot fuse {l1.kind.value} with {l2.kind.value}")
    if l1.kind is Kind.START:
        # l1's carrier sits inside l2's carrier, minus l2's marked events
        inner = _embed(len(l2.carrier), l2.marked)
        return StepLetter(l2.carrier, l2.marked | {inner[i] for i in l1.marked}, Kind.START)
    inner = _embed(len(l1.carrier), l1.marked)
    return StepLetter(l1.carrier, l1.marked | {inner[i] for i in l2.marked}, Kind.TERM)


def normalize(w: CohWord) -> CohWord:
    """The sparse representative of the class of ``w``."""
    out: list[StepLetter] = []
    for letter in w.letters:
        if letter.is_identity:
            continue
        if out and out[-1].kind is letter.kind:
            out[-1] = fuse(out[-1], letter)
        else:
            out.append(letter)
    if not out:
        return CohWord((identity_letter(w.source),))
    return CohWord(tuple(out))


def densify(w: CohWord) -> CohWord:
    """Split every letter into elementary letters.

    Starters start their events top to bottom in carrier order; terminators
    end them bottom to top, so that reversing time maps one rule onto the
    other.
    """
    out: list[StepLetter] = []
    for letter in w.letters:
        marked = sorted(letter.marked)
        if len(marked) <= 1:
            out.append(letter)
        elif letter.kind is Kind.START:
            for k, pos in enumerate(marked):
                later = marked[k + 1:]
                keep = _embed(len(letter.carrier), later)
                out.append(StepLetter([letter.carrier[i] for i in keep], [keep.index(pos)], Kind.START))
        else:
            for k, pos in enumerate(reversed(marked)):
                gone = marked[len(marked) - k:]
                keep = _embed(len(letter.carrier), gone)
                out.append(StepLetter([letter.carrier[i] for i in keep], [keep.index(pos)], Kind.TERM))
    if not out:
        return CohWord((), w.interface)
    return CohWord(tuple(out))


def equivalent(w1: CohWord, w2: CohWord) -> bool:
    return normalize(w1) == normalize(w2)


# --------------------------------------------------------------------------
# canonical keys


def word_key(w: CohWord) -> bytes:
    """Serialization of a word; on sparse words this is a class invariant."""
    return json.dumps(
        [[letter.kind.value if letter.marked else "id", list(letter.carrier), sorted(letter.marked)] for letter in w],
        separators=(",", ":"),
    ).encode()


def word_from_key(key: bytes) -> CohWord:
    letters = []
    for kind, carrier, marked in json.loads(key):
        letters.append(StepLetter(carrier, marked, Kind.TERM if kind == "term" else Kind.START))
    return CohWord(tuple(letters))


def canonical_key(p: Ipomset) -> bytes:
    """Isomorphism-invariant key of an interval ipomset."""
    return word_key(phi(p))
