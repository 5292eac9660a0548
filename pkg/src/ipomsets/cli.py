"""Command line interface: ``ipomsets <command> ...``.

Exit status is 0 on success, 1 when the queried property fails (not
isomorphic, not subsumed, not interval, image check failed) and 2 on
invalid input.  Errors are written to stderr as a JSON object.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from contextlib import redirect_stdout
from typing import Callable, Optional, Sequence

from . import core, hda, sta, steps, subsume
from .errors import FormatError, IpomsetError
from .notation import format_word, parse_loset

__all__ = ["main", "run", "parse_loset"]

OK, NEGATIVE, INVALID = 0, 1, 2


def _load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}", path=path) from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc.msg}", path=path, line=exc.lineno, column=exc.colno) from exc
    if not isinstance(data, dict):
        raise FormatError(f"{path} must contain a JSON object", path=path)
    return data


def _ipomset(path: str) -> core.Ipomset:
    return core.from_dict(_load(path))


def _emit(args, human: str, data) -> None:
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True, default=str))
    elif human:
        print(human)


def _words_from_keys(keys) -> list[str]:
    return [format_word(steps.word_from_key(k)) for k in sorted(keys)]


# --------------------------------------------------------------------------
# commands


def cmd_check(args) -> int:
    p = _ipomset(args.file)
    interval = core.is_interval(p)
    data = {
        "valid": True,
        "interval": interval,
        "events": len(p),
        "source": list(core.source_interface(p).labels),
        "target": list(core.target_interface(p).labels),
    }
    if interval:
        rep = core.interval_representation(p)
        data["magnitude"] = rep.magnitude
        data["begins"] = [[e, rep.begins[e]] for e in p.events]
        data["ends"] = [[e, rep.ends[e]] for e in p.events]
    human = f"valid ipomset with {len(p)} events; {'interval' if interval else 'not interval'}"
    _emit(args, human, data)
    return OK if interval else NEGATIVE


def cmd_decompose(args) -> int:
    w = steps.phi(_ipomset(args.file))
    if args.dense:
        w = steps.densify(w)
    text = format_word(w)
    _emit(args, text, {"word": text})
    return OK


def cmd_compose(args) -> int:
    p = steps.psi(parse_loset(args.word))
    _emit(args, json.dumps(p.to_dict(), indent=2, default=str), p.to_dict())
    return OK


def cmd_normalize(args) -> int:
    text = format_word(steps.normalize(parse_loset(args.word)))
    _emit(args, text, {"word": text})
    return OK


def _pairs(mapping: dict, events) -> list:
    return [[e, mapping[e]] for e in events]


def cmd_iso(args) -> int:
    p, q = _ipomset(args.first), _ipomset(args.second)
    f = core.isomorphic(p, q)
    if f is None:
        _emit(args, "not isomorphic", {"isomorphic": False})
        return NEGATIVE
    human = "\n".join(f"{x} -> {y}" for x, y in _pairs(f, p.events)) or "isomorphic (empty)"
    _emit(args, human, {"isomorphic": True, "map": _pairs(f, p.events)})
    return OK


def cmd_subsume(args) -> int:
    p, q = _ipomset(args.first), _ipomset(args.second)
    if args.witness:
        chain = subsume.subsumption_chain(p, q)
        if chain is None:
            _emit(args, "not subsumed", {"subsumed": False})
            return NEGATIVE
        words = [format_word(w) for w in chain.words]
        moves = [{"index": s.index, "case": s.case.value, "choice": s.choice} for s in chain.steps]
        lines = [words[0]]
        for move, w in zip(moves, words[1:]):
            lines += [f"  tau_{move['index']} ({move['case']})", w]
        _emit(args, "\n".join(lines), {"subsumed": True, "words": words, "steps": moves})
        return OK
    witness = subsume.is_subsumption(p, q)
    if witness is None:
        _emit(args, "not subsumed", {"subsumed": False})
        return NEGATIVE
    pairs = _pairs(witness.map, p.events)
    human = "\n".join(f"{x} -> {y}" for x, y in pairs) or "subsumed (empty)"
    _emit(args, human, {"subsumed": True, "map": pairs})
    return OK


def cmd_extensions(args) -> int:
    words = _words_from_keys(subsume.elementary_extensions(_ipomset(args.file)))
    _emit(args, "\n".join(words), {"extensions": words})
    return OK


def cmd_hda_lang(args) -> int:
    x = hda.from_dict(_load(args.file))
    words = _words_from_keys(hda.language_bounded(x, args.max_steps))
    _emit(args, "\n".join(words) or "(empty)", {"language": words})
    return OK


def cmd_sta_lang(args) -> int:
    a = sta.from_dict(_load(args.file))
    words = _words_from_keys(sta.language_bounded(a, args.max_steps))
    _emit(args, "\n".join(words) or "(empty)", {"language": words})
    return OK


def cmd_hda2sta(args) -> int:
    data = sta.st_of_hda(hda.from_dict(_load(args.file))).to_dict()
    print(json.dumps(data, indent=2, default=str))
    return OK


def cmd_sta2hda(args) -> int:
    data = sta.hd_of_sta(sta.from_dict(_load(args.file))).to_dict()
    print(json.dumps(data, indent=2, default=str))
    return OK


def cmd_sta_check(args) -> int:
    report = sta.check_hda_image(sta.from_dict(_load(args.file)))
    if report.ok:
        human = "all closure properties hold"
    else:
        human = (
            f"missing faces: {len(report.missing_faces)}; missing fusions: {len(report.missing_fusions)}; "
            f"missing splits: {len(report.missing_splits)}"
        )
    _emit(args, human, report.to_dict())
    return OK if report.ok else NEGATIVE


def _ipomset_dot(p: core.Ipomset) -> str:
    ids = {e: f"e{k}" for k, e in enumerate(p.events)}
    lines = ["digraph ipomset {", "  rankdir=LR;"]
    for e in p.events:
        marks = ("S" if e in p.sources else "") + ("T" if e in p.targets else "")
        lines.append(f'  {ids[e]} [label="{p.labels[e]}{" " + marks if marks else ""}"];')
    for x, y in sorted(p.precedence, key=repr):
        if not any((x, z) in p.precedence and (z, y) in p.precedence for z in p.events):
            lines.append(f"  {ids[x]} -> {ids[y]};")
    lines.append("}")
    return "\n".join(lines)


def cmd_dot(args) -> int:
    raw = _load(args.file)
    if "cells" in raw:
        print(hda.to_dot(hda.from_dict(raw)))
    elif "states" in raw:
        print(sta.to_dot(sta.from_dict(raw)))
    elif "events" in raw:
        print(_ipomset_dot(core.from_dict(raw)))
    else:
        raise FormatError("cannot tell whether the file describes an ipomset, an HDA or an ST-automaton")
    return OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ipomsets", description="Interval pomsets with interfaces, step sequences and automata.")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func: Callable, help: str, *files: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        for f in files:
            p.add_argument(f)
        p.set_defaults(func=func)
        return p

    add("check", cmd_check, "validate an ipomset file and test the interval property", "file")
    add("decompose", cmd_decompose, "sparse step decomposition of an ipomset", "file").add_argument(
        "--dense", action="store_true", help="split into elementary letters"
    )
    add("compose", cmd_compose, "glue a step word into an ipomset", "word")
    add("normalize", cmd_normalize, "sparse normal form of a step word", "word")
    add("iso", cmd_iso, "isomorphism between two ipomsets", "first", "second")
    add("subsume", cmd_subsume, "is the first ipomset subsumed by the second", "first", "second").add_argument(
        "--witness", action="store_true", help="print a transposition chain"
    )
    add("extensions", cmd_extensions, "elementary extensions (one more precedence pair)", "file")
    for name, func in (("hda-lang", cmd_hda_lang), ("sta-lang", cmd_sta_lang)):
        p = add(name, func, "bounded language (sparse words)", "file")
        p.add_argument("--max-steps", type=int, required=True)
    add("hda2sta", cmd_hda2sta, "translate an HDA into an ST-automaton", "file")
    add("sta2hda", cmd_sta2hda, "translate an ST-automaton into an HDA", "file")
    add("sta-check", cmd_sta_check, "check closure properties of HDA images", "file")
    add("dot", cmd_dot, "Graphviz export of an ipomset, HDA or ST-automaton", "file")
    return parser


def run(argv: Sequence[str]) -> tuple[int, str, str]:
    """Run a command; return the exit status, stdout and stderr."""
    out = io.StringIO()
    try:
        args = build_parser().parse_args(list(argv))
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else INVALID
        return code, "", ""
    try:
        with redirect_stdout(out):
            code = args.func(args)
        return code, out.getvalue(), ""
    except IpomsetError as exc:
        return INVALID, out.getvalue(), json.dumps(exc.to_dict(), sort_keys=True) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    args = parser.parse_args(list(argv))
    try:
        return args.func(args)
    except IpomsetError as exc:
        print(json.dumps(exc.to_dict(), sort_keys=True), file=sys.stderr)
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
