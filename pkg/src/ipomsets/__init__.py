"""Interval pomsets with interfaces, step decompositions, subsumption and automata."""

from .core import (
    Conclist,
    Ipomset,
    IntervalRep,
    glue,
    identity,
    interval_representation,
    is_interval,
    isomorphic,
    source_interface,
    target_interface,
    validate,
)
from .errors import IpomsetError
from .hda import Hda, HdaPath, PathStep, ev_path, face, validate_hda
from .notation import format_letter, format_word, parse_letter, parse_loset
from .sta import StAutomaton, check_hda_image, hd_of_sta, st_of_hda, validate_sta
from .steps import (
    CohWord,
    Kind,
    StepLetter,
    canonical_key,
    densify,
    equivalent,
    fuse,
    make_starter,
    make_terminator,
    normalize,
    phi,
    psi,
)
from .subsume import elementary_extensions, is_subsumption, leq_words, subsumption_chain, transpose

__version__ = "0.1.0"
