"""Languages of higher-dimensional automata and their ST-automaton counterparts."""

import json
from pathlib import Path

from ipomsets import hda, sta
from ipomsets.notation import format_word
from ipomsets.steps import word_from_key

DATA = Path(__file__).resolve().parent / "data"


def show(keys):
    return sorted(format_word(word_from_key(k)) for k in keys) or ["(empty)"]


x = hda.from_dict(json.loads((DATA / "two_squares.hda.json").read_text()))
print(f"HDA with {len(x.cells)} cells, language:", show(hda.language_bounded(x, 6)))

a = sta.st_of_hda(x)
print(f"ST-automaton with {len(a.states)} states and {len(a.edges)} edges, language:", show(sta.language_bounded(a, 6)))
print("translating back gives an isomorphic HDA:", hda.hda_isomorphic(sta.hd_of_sta(a), x) is not None)

b = sta.from_dict(json.loads((DATA / "missing_faces.sta.json").read_text()))
print("sparse ST-automaton language:", show(sta.language_bounded(b, 10)))
y = sta.hd_of_sta(b)
print("its HDA language:", show(hda.language_bounded(y, 6)))
report = sta.check_hda_image(b)
print(f"image check: {len(report.missing_faces)} missing faces, {len(report.missing_splits)} missing splits")
