"""ASCII notation for step letters and words.

A letter lists its carrier top to bottom, rows separated by ``|``::

    [a.|.c.]    starts a, carries c
    [.a.|.c]    carries a, terminates c
    [.a.]       identity on [a]
    []          identity on the empty conclist

A row ``x.`` is started, ``.x`` terminated and ``.x.`` carried.  A bare
``x`` is not a valid row, and a letter may not mix started and terminated
rows.
"""

from __future__ import annotations

import re

from .errors import LosetSyntaxError, MixedKindLetter
from .steps import CohWord, Kind, StepLetter

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def format_letter(letter: StepLetter) -> str:
    rows = []
    for i, lab in enumerate(letter.carrier):
        if i not in letter.marked:
            rows.append(f".{lab}.")
        elif letter.kind is Kind.START:
            rows.append(f"{lab}.")
        else:
            rows.append(f".{lab}")
    return "[" + "|".join(rows) + "]"


def format_word(w: CohWord) -> str:
    if not w.letters:
        return "[" + "|".join(f".{lab}." for lab in w.interface) + "]"
    return "".join(format_letter(letter) for letter in w.letters)


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def error(self, message: str, cls=LosetSyntaxError, offset=None):
        line, col = _position(self.text, self.pos if offset is None else offset)
        return cls(f"{message} at line {line}, column {col}", line=line, column=col)

    def skip_space(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, char: str) -> None:
        if self.text.startswith(char, self.pos):
            self.pos += 1
        else:
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise self.error(f"expected {char!r}, found {found!r}")

    def row(self) -> tuple[str, bool, bool]:
        pre = self.text.startswith(".", self.pos)
        if pre:
            self.pos += 1
        m = _IDENT.match(self.text, self.pos)
        if not m:
            raise self.error("expected an event label")
        self.pos = m.end()
        post = self.text.startswith(".", self.pos)
        if post:
            self.pos += 1
        return m.group(), pre, post

    def letter(self) -> StepLetter:
        start = self.pos
        self.expect("[")
        rows = []
        if not self.text.startswith("]", self.pos):
            rows.append(self.row())
            while self.text.startswith("|", self.pos):
                self.pos += 1
                rows.append(self.row())
        self.expect("]")
        carrier = [lab for lab, _, _ in rows]
        started = [i for i, (_, pre, post) in enumerate(rows) if post and not pre]
        ended = [i for i, (_, pre, post) in enumerate(rows) if pre and not post]
        bare = [lab for lab, pre, post in rows if not pre and not post]
        if bare:
            raise self.error(f"row {bare[0]!r} is neither started, terminated nor carried", MixedKindLetter, start)
        if started and ended:
            raise self.error("letter both starts and terminates events", MixedKindLetter, start)
        if ended:
            return StepLetter(carrier, ended, Kind.TERM)
        return StepLetter(carrier, started, Kind.START)

    def word(self) -> CohWord:
        letters = []
        self.skip_space()
        while self.pos < len(self.text):
            letters.append(self.letter())
            self.skip_space()
        if not letters:
            raise self.error("empty word")
        return CohWord(tuple(letters))


def parse_loset(text: str) -> CohWord:
    """Parse and coherence-check a word such as ``[a.|.c.][.a.|.c]``."""
    return _Parser(text).word()


def parse_letter(text: str) -> StepLetter:
    w = parse_loset(text)
    if len(w) != 1:
        raise LosetSyntaxError(f"expected a single letter, got {len(w)}")
    return w[0]
