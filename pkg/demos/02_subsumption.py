"""Subsumption between ipomsets and the transposition chains that witness it."""

import random

from ipomsets import core, generate
from ipomsets.notation import format_word
from ipomsets.subsume import elementary_extensions, is_subsumption, subsumption_chain

seq = core.validate({"p": "a", "q": "b"}, [("p", "q")])
par = core.validate({"p": "a", "q": "b"}, [], [("p", "q")])

print("a then b subsumed by a parallel to b:", is_subsumption(seq, par) is not None)
print("and the converse:", is_subsumption(par, seq) is not None)

chain = subsumption_chain(seq, par)
for word, step in zip(chain.words, (None, *chain.steps)):
    tag = "" if step is None else f"  <- position {step.index}, {step.case.name}"
    print(" ", format_word(word) + tag)

print("extensions of the parallel pair:")
for r in elementary_extensions(par).values():
    print("  events", dict(sorted(r.labels.items())), "precedence", sorted(r.precedence))

rng = random.Random(1)
p = generate.interval_ipomset(rng, max_events=5, labels="ab")
while not elementary_extensions(p):
    p = generate.interval_ipomset(rng, max_events=5, labels="ab")
q = next(iter(elementary_extensions(p).values()))
c = subsumption_chain(q, p)
print(f"random pair: chain of {len(c.steps)} transpositions, replays {c.replays()}")
