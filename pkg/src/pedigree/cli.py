"""Command-line entry point.

Exit codes: 0 member, 1 not member, 2 input error, 3 driver/oracle discrepancy.
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import re
import sys
from pathlib import Path

from . import experiment, points
from .core import CharVector, Pedigree, PedigreeError, Tour, pedigree_to_tour, tour_to_pedigree
from .layered import to_dot
from .membership import decide
from .sampling import MODES, sample

EXIT_MEMBER, EXIT_NOT_MEMBER, EXIT_INPUT, EXIT_DISCREPANCY = 0, 1, 2, 3


def parse_pedigree(text: str) -> Pedigree:
    pairs = re.findall(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)", text)
    if not pairs:
        raise PedigreeError(f"no edges found in {text!r}; write e.g. ((2,3),(1,2),(3,4))")
    return Pedigree(tuple((int(a), int(b)) for a, b in pairs))


def parse_tour(text: str) -> Tour:
    try:
        seq = [int(t) for t in re.split(r"[\s,]+", text.strip()) if t]
    except ValueError as exc:
        raise PedigreeError(f"tour must be a list of cities: {exc}") from exc
    return Tour.from_sequence(seq)


def format_verdict(v) -> str:
    if v.member:
        return "MEMBER"
    w = v.witness
    if v.reason == "pmi":
        return f"NOT MEMBER (relaxation violated: {w['constraint']})"
    if v.reason == "mcf_short":
        return f"NOT MEMBER (stage {v.stage}, MCF gap {w['gap']}: z* = {w['z_star']} < z_max = {w['z_max']})"
    return (f"NOT MEMBER (stage {v.stage}, transportation problem infeasible: destinations "
            f"{', '.join(w['destinations'])} need {w['requirement']} but can receive {w['deliverable']})")


def format_trace(v) -> str:
    lines = []
    for t in v.trace:
        parts = [f"stage {t.stage}: origins {t.origins}, destinations {t.destinations}, arcs {t.arcs}",
                 f"rigid {t.rigid}, dummy {t.dummy}, new shrunk {t.new_shrunk}"]
        if t.z_max is not None:
            parts.append(f"z* {t.z_star} / z_max {t.z_max}")
        if t.lp_size:
            parts.append(f"lp {t.lp_size[0]}x{t.lp_size[1]} ({t.lp_method or 'skipped'})")
        if t.shortcut:
            parts.append(f"shortcut: {t.shortcut}")
        if not t.feasible:
            parts.append("infeasible")
        lines.append(", ".join(parts))
        lines += [f"  violation: {s}" for s in t.invariant_violations + t.weight_violations]
        lines += [f"  note: {s}" for s in t.diagnostics]
    if v.decomposition:
        lines.append("decomposition:")
        lines += [f"  {w}  {p}" for p, w in sorted(v.decomposition.items(), key=lambda kv: kv[0].edges)]
    return "\n".join(lines)


def cmd_check(args) -> int:
    try:
        x, label = points.load(args.file)
    except (OSError, PedigreeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    v = decide(x, shortcuts=args.shortcuts, method=args.lp, keep_states=bool(args.emit_dot))
    head = f"{label}: " if label else ""
    print(head + format_verdict(v))
    if args.trace:
        print(format_trace(v))
    if args.emit_dot:
        out = Path(args.emit_dot)
        out.mkdir(parents=True, exist_ok=True)
        for st in v.states:
            (out / f"stage{st.stage}.dot").write_text(to_dot(st))
        if args.restricted:
            prev = {st.stage + 1: st for st in v.states}
            for k, (_, links) in v.stage_problems.items():
                for (a, b), info in links.items():
                    name = f"stage{k}_{a[1][0]}{a[1][1]}_{b[1][0]}{b[1][1]}.dot"
                    (out / name).write_text(to_dot(prev[k], info.network))
    if args.oracle:
        from .oracle import membership
        o = membership(x)
        if o.member != v.member:
            print(f"DISCREPANCY: oracle says {'member' if o.member else 'not member'}", file=sys.stderr)
            return EXIT_DISCREPANCY
    return EXIT_MEMBER if v.member else EXIT_NOT_MEMBER


def cmd_random(args) -> int:
    if args.mode == "hull" and args.n > 8:
        print("error: hull mode enumerates pedigrees and needs n <= 8", file=sys.stderr)
        return EXIT_INPUT
    rng = random.Random(args.seed)
    out = Path(args.out) if args.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        x = sample(rng, args.n, args.mode)
        label = f"{args.mode}-n{args.n}-s{args.seed}-{i}"
        if out:
            points.save(out / f"{label}.json", x, label)
        else:
            print(json.dumps(points.to_json(x, label)))
    return 0


def cmd_experiment(args) -> int:
    ns = args.n or []
    counts = args.count if len(args.count) == len(ns) else [args.count[0]] * len(ns)
    if any(n > 7 for n in ns):
        print("error: the oracle comparison is limited to n <= 7", file=sys.stderr)
        return EXIT_INPUT
    rep = experiment.run(ns, counts, args.seed, tuple(args.modes), args.shortcuts)
    print(rep.summary())
    bad = rep.discrepancies()
    if bad or rep.violations():
        rep.dump(args.discrepancy_file)
        print(f"details written to {args.discrepancy_file}", file=sys.stderr)
    return EXIT_DISCREPANCY if bad else 0


def cmd_convert(args) -> int:
    try:
        if args.direction == "tour-to-pedigree":
            print(f"({','.join(f'({i},{j})' for i, j in tour_to_pedigree(parse_tour(args.input)).edges)})")
        elif args.direction == "pedigree-to-tour":
            print(" ".join(map(str, pedigree_to_tour(parse_pedigree(args.input)).cycle())))
        else:
            print(CharVector.from_pedigree(parse_pedigree(args.input)))
    except PedigreeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pedigree", description="Exact membership checks for the pedigree polytope.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("check", help="decide membership of a point file")
    c.add_argument("file")
    c.add_argument("--shortcuts", action="store_true", help="accept the cheap sufficient conditions when they apply")
    c.add_argument("--trace", action="store_true", help="print the per-stage trace")
    c.add_argument("--emit-dot", metavar="DIR", help="write one dot file per stage")
    c.add_argument("--restricted", action="store_true", help="with --emit-dot, also write every restricted network")
    c.add_argument("--oracle", action="store_true", help="cross-check against the brute-force oracle")
    c.add_argument("--lp", choices=("auto", "simplex"), default="auto")
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("random", help="generate test points")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--mode", choices=MODES, default="hull")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--count", type=int, default=1)
    r.add_argument("--out", metavar="DIR", help="write one JSON file per point instead of JSON lines")
    r.set_defaults(func=cmd_random)

    e = sub.add_parser("experiment", help="compare the driver with the oracle on generated points")
    e.add_argument("--n", type=int, nargs="*", default=[5, 6])
    e.add_argument("--count", type=int, nargs="+", default=[200])
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--modes", nargs="+", choices=MODES, default=list(MODES))
    e.add_argument("--shortcuts", action="store_true")
    e.add_argument("--discrepancy-file", default="discrepancies.json")
    e.set_defaults(func=cmd_experiment)

    v = sub.add_parser("convert", help="pedigree/tour/vector conversions")
    v.add_argument("direction", choices=("tour-to-pedigree", "pedigree-to-tour", "pedigree-to-cv"))
    v.add_argument("input")
    v.set_defaults(func=cmd_convert)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
