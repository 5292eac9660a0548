from __future__ import annotations

import json
import sys
from pathlib import Path

import pytest

from ipomsets import core, hda, sta

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"
sys.path.insert(0, str(Path(__file__).resolve().parent))


def load(name: str) -> dict:
    return json.loads((DATA / name).read_text())


@pytest.fixture
def four_events() -> core.Ipomset:
    """Four events: x1<x2, x3<x2, x3<x4, x3 a source, labels a b c a."""
    return core.from_dict(load("four_events.ipomset.json"))


@pytest.fixture
def two_squares() -> hda.Hda:
    return hda.from_dict(load("two_squares.hda.json"))


@pytest.fixture
def missing_faces() -> sta.StAutomaton:
    return sta.from_dict(load("missing_faces.sta.json"))


def pytest_terminal_summary(terminalreporter):
    from acceptance_results import RESULTS as ACCEPTANCE

    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
