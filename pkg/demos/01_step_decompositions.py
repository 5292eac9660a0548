"""Decompose an ipomset into step words and glue them back together."""

import json
from pathlib import Path

from ipomsets import core
from ipomsets.notation import format_word, parse_loset
from ipomsets.steps import densify, equivalent, normalize, phi, psi

DATA = Path(__file__).resolve().parent / "data"

p = core.from_dict(json.loads((DATA / "four_events.ipomset.json").read_text()))
print("events:", dict(sorted(p.labels.items())))
print("interval:", core.is_interval(p))

sparse = phi(p)
dense = densify(sparse)
print("sparse word:", format_word(sparse))
print("dense word: ", format_word(dense))
print("dense normalizes back:", normalize(dense) == sparse)
print("gluing recovers the ipomset:", core.isomorphic(psi(sparse), p) is not None)

other = parse_loset("[a.|.c.][.a.|.c][.a.|a.][.a|.a.][b.|.a.][.b.|.a][.b]")
print("another dense split is equivalent:", equivalent(other, sparse))
