"""Command-line front end.

Subcommands: count, repair, construct, classify, core, test, corpus.
Exit codes: 0 success, 1 domain refusal, 2 input error.  Rational parameters
are given as 'p/q' strings and parsed exactly; no floats cross this boundary
for control parameters.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from . import constructions as cx
from . import repair as rp
from . import tester as ts
from .classify import classify_induced, classify_noninduced
from .counting import (
    count_copies,
    count_induced,
    count_induced_forks,
    estimate_induced,
)
from .graphs import (
    GraphFormatError,
    OrderedGraph,
    format_graph,
    read_graph,
    write_graph,
)
from .hom import core


class _InputError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational 'p/q', got {text!r}")


def _load_graph(path) -> OrderedGraph:
    try:
        return read_graph(path)
    except FileNotFoundError:
        raise _InputError(f"{path}: no such file")
    except GraphFormatError as exc:
        raise _InputError(f"{path}: {exc}")


def _cmd_count(args) -> int:
    g = _load_graph(args.graph)
    f = _load_graph(args.pattern)
    if args.estimate is not None:
        est = estimate_induced(f, g, args.estimate, args.seed)
        print(est)
        return 0
    if args.copies:
        print(count_copies(f, g))
    else:
        print(count_induced(f, g))
    return 0


def _cmd_repair(args) -> int:
    g = _load_graph(args.graph)
    overrides = {}
    for item in args.param or ():
        if "=" not in item:
            raise _InputError(f"bad --param {item!r}; expected name=p/q")
        key, value = item.split("=", 1)
        try:
            overrides[key] = Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise _InputError(f"bad rational in --param {item!r}")
    try:
        edits, trace = rp.repair_forks(
            g, args.epsilon, mode=args.mode, overrides=overrides or None
        )
    except ValueError as exc:
        raise _InputError(str(exc))
    if args.out_edits:
        with open(args.out_edits, "w", encoding="utf-8") as fh:
            fh.write(edits.to_text())
    if args.out_trace:
        with open(args.out_trace, "w", encoding="utf-8") as fh:
            fh.write(trace.to_text())
    if args.out_graph:
        write_graph(rp.apply_edits(g, edits), args.out_graph)
    print(f"edits: {len(edits)}")
    for step, count in sorted(edits.counts_by_step().items()):
        print(f"  {step}: {count}")
    return 0


def _cmd_construct(args) -> int:
    if args.family == "behrend":
        if args.m is None:
            raise _InputError("--family behrend requires --m")
        s = cx.solution_free_set(args.m, args.k or 3)
        lines = "\n".join(str(e) for e in s.elements) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(lines)
        else:
            sys.stdout.write(lines)
        print(f"# size {len(s.elements)} verified {s.verified}", file=sys.stderr)
        return 0
    if args.family == "design":
        if args.r is None:
            raise _InputError("--family design requires --r")
        tuples = cx.design_tuples(args.r, args.k or 3)
        lines = "\n".join(" ".join(map(str, t)) for t in tuples) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(lines)
        else:
            sys.stdout.write(lines)
        return 0
    if args.target is None:
        raise _InputError(f"--family {args.family} requires --target")
    f = _load_graph(args.target)
    if args.n is None:
        raise _InputError(f"--family {args.family} requires --n")
    try:
        if args.family == "rs":
            if cx._has_triangle(f):
                spec = cx.triangle_case_spec(f)
            else:
                spec = cx.core_case_spec(f)
            inst = cx.build_planted_instance(
                f, spec, args.epsilon or Fraction(1, 100), args.n, m=args.m
            )
        elif args.family == "hard-induced":
            inst = cx.hard_instance_induced(
                f, args.epsilon or Fraction(1, 100), args.n, m=args.m
            )
        else:
            inst = cx.hard_instance_noninduced(
                f, args.epsilon or Fraction(1, 100), args.n, m=args.m
            )
    except cx.DomainRefusal as exc:
        print(f"refusal: {exc}", file=sys.stderr)
        return 1
    except (cx.InfeasibleParameters, ValueError) as exc:
        raise _InputError(str(exc))
    if args.out:
        write_graph(inst.graph, args.out)
    if args.certificate:
        with open(args.certificate, "w", encoding="utf-8") as fh:
            if inst.edge_certificates is not None:
                for cert in inst.edge_certificates:
                    fh.write(" ".join(f"{u},{v}" for u, v in sorted(cert)) + "\n")
            else:
                for tup in inst.planted_copies:
                    fh.write(" ".join(map(str, tup)) + "\n")
    print(f"vertices: {inst.graph.n}")
    print(f"case: {inst.case}")
    print(f"planted: {len(inst.planted_copies)}")
    print(f"census: {inst.census}")
    return 0


def _cmd_classify(args) -> int:
    f = _load_graph(args.graph)
    if args.noninduced:
        verdict = classify_noninduced(f)
        print(f"{verdict.verdict}: {verdict.reason}")
        sys.stdout.write(format_graph(verdict.core))
    else:
        verdict = classify_induced(f)
        print(("polynomial" if verdict.polynomial else "not_polynomial") +
              f": {verdict.reason}")
    return 0


def _cmd_core(args) -> int:
    g = _load_graph(args.graph)
    sys.stdout.write(format_graph(core(g)))
    return 0


def _cmd_test(args) -> int:
    g = _load_graph(args.graph)
    f = _load_graph(args.pattern)
    rejected = 0
    print("trial\tverdict\twitness")
    for t in range(args.trials):
        run = ts.run_tester(g, f, args.q, induced=not args.copies, seed=args.seed,
                            trial=t)
        if run.accepted:
            print(f"{t}\taccept\t-")
        else:
            rejected += 1
            print(f"{t}\treject\t{','.join(map(str, run.witness))}")
    print(f"# rejected {rejected}/{args.trials}")
    return 0


def _cmd_corpus(args) -> int:
    out = []

    def row(section, key, value):
        out.append(f"{section}\t{key}\t{value}")

    rng = random.Random(args.seed)
    # repair on planted clique instances
    for idx, (n, m, noise) in enumerate([(80, 2, 30), (120, 3, 60)]):
        g, planted_cost = _planted_corpus_instance(n, m, noise, rng)
        edits, trace = rp.repair_forks(g, Fraction(1, 10), mode="practical")
        patched = rp.apply_edits(g, edits)
        row("repair", f"instance{idx}.n", n)
        row("repair", f"instance{idx}.noise", planted_cost)
        row("repair", f"instance{idx}.edits", len(edits))
        row("repair", f"instance{idx}.forks_after", count_induced_forks(patched))
    # hard instance: triangle case
    from .graphs import triangle

    inst = cx.hard_instance_induced(triangle(), Fraction(1, 100), 150, m=4)
    ok, _ = cx.check_pattern(inst.graph, inst.pattern, inst.parts)
    row("hard", "triangle.n", inst.graph.n)
    row("hard", "triangle.planted", len(inst.planted_copies))
    row("hard", "triangle.census", inst.census)
    row("hard", "triangle.pattern_ok", ok)
    # tester on the hard instance vs a dense control
    for q in (6, 12, 24, 48):
        rate = ts.rejection_rate(inst.graph, triangle(), q, trials=200, seed=args.seed)
        row("tester", f"hard.q{q}", f"{rate:.3f}")
    control = _dense_control(inst.graph.n, rng)
    for q in (6, 12, 24, 48):
        rate = ts.rejection_rate(control, triangle(), q, trials=200, seed=args.seed)
        row("tester", f"control.q{q}", f"{rate:.3f}")
    # solution-free sets and designs
    for m, k in ((100, 3), (500, 3)):
        s = cx.solution_free_set(m, k)
        row("sets", f"m{m}k{k}.size", len(s.elements))
        row("sets", f"m{m}k{k}.verified", s.verified)
    tuples = cx.design_tuples(20, 3)
    row("design", "r20k3.size", len(tuples))
    row("design", "r20k3.ok", cx.verify_design(tuples)[0])
    # classifier census on all 8 three-vertex patterns
    poly = 0
    for mask in range(8):
        edges = [(0, 1), (0, 2), (1, 2)]
        chosen = [edges[i] for i in range(3) if mask >> i & 1]
        if classify_induced(OrderedGraph.from_edges(3, chosen)).polynomial:
            poly += 1
    row("classify", "n3.polynomial", poly)

    text = "\n".join(out) + "\n"
    text += f"# corpus seed {args.seed}; {len(out)} rows\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _planted_corpus_instance(n, m, noise, rng):
    block = (2 * n) // (3 * m)
    edges = set()
    for b in range(m):
        lo, hi = b * block, (b + 1) * block
        for u in range(lo, hi):
            for v in range(u + 1, hi):
                edges.add((u, v))
    toggles = 0
    while toggles < noise:
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        if u > v:
            u, v = v, u
        if (u, v) in edges:
            edges.discard((u, v))
        else:
            edges.add((u, v))
        toggles += 1
    return OrderedGraph.from_edges(n, edges), toggles


def _dense_control(n, rng):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.3]
    return OrderedGraph.from_edges(n, edges)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ordgraph",
        description="Ordered graphs: counting, induced-fork repair, hard "
        "instances, cores, classification, and property testing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count (induced) copies of a pattern")
    p.add_argument("--pattern", required=True)
    p.add_argument("--graph", required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--induced", action="store_true", default=True)
    mode.add_argument("--copies", action="store_true")
    p.add_argument("--estimate", type=int, default=None, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("repair", help="make a graph induced-fork-free")
    p.add_argument("--graph", required=True)
    p.add_argument("--epsilon", type=_rational, required=True)
    p.add_argument("--mode", choices=("theorem", "practical"), default="practical")
    p.add_argument("--param", action="append", metavar="NAME=P/Q")
    p.add_argument("--out-edits")
    p.add_argument("--out-trace")
    p.add_argument("--out-graph")
    p.set_defaults(func=_cmd_repair)

    p = sub.add_parser("construct", help="build hard instances and ingredients")
    p.add_argument(
        "--family",
        required=True,
        choices=("behrend", "design", "rs", "hard-induced", "hard-noninduced"),
    )
    p.add_argument("--target")
    p.add_argument("--epsilon", type=_rational, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--out")
    p.add_argument("--certificate")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("classify", help="decide removability regime")
    p.add_argument("--graph", required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--induced", action="store_true", default=True)
    mode.add_argument("--noninduced", action="store_true")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("core", help="print the ordered core")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=_cmd_core)

    p = sub.add_parser("test", help="run the one-sided tester")
    p.add_argument("--graph", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--induced", action="store_true", default=True)
    mode.add_argument("--copies", action="store_true")
    p.set_defaults(func=_cmd_test)

    p = sub.add_parser("corpus", help="run the shipped instance catalog")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_corpus)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except cx.DomainRefusal as exc:
        print(f"refusal: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
