"""Command-line front end: ``bnucleolus <subcommand> ...``.

Every rational is printed as ``p`` or ``p/q``.  ``--format lines`` gives
tab-separated records (stable across runs); ``human`` aligns them for
reading.  Exit status is 0 on success, 1 on a failed verification and 2 on
bad input or a refused computation.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import bmatching
from .bmatching import RefusalError
from .game import Game, core_check, parse_allocation
from .gadgets import (GadgetGraph, X3CFormatError, build_nucleolus_gadget, build_x3c_graph,
                      compare_table, cover_to_cubic, delta_parameter, load_x3c,
                      original_excess, structural_check, x3c_bruteforce)
from .gadgets.nucleolus_gadget import StructuralError
from .graph import GameGraph, GraphFormatError, dump_graph, load_graph
from .instances import suite
from .nucleolus import (BRUTE_FORCE_PLAYER_CAP, PreconditionError, SchemeError,
                        charset_i_family, charset_ii_family, dual_core_allocation, is_nucleolus,
                        kopelowitz)
from .rational import format_rational, parse_rational

DEFAULT_SEED = 2024


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def record(self, tag: str, *fields) -> None:
        fields = [format_rational(f) if isinstance(f, (Fraction, int)) and not isinstance(f, bool)
                  else str(f) for f in fields]
        if self.fmt == "lines":
            print("\t".join([tag, *fields]), file=self.stream)
        else:
            print(f"{tag:<14}" + "  ".join(fields), file=self.stream)

    def text(self, block: str) -> None:
        """Free-form block, shown in human mode only."""
        if self.fmt == "human":
            print(block, file=self.stream)


def _label(names) -> str:
    return "{" + ",".join(names) + "}"


def _load(args) -> GameGraph:
    graph = load_graph(args.graph)
    if getattr(args, "nonsimple", False):
        graph = graph.with_simple(False)
    if getattr(args, "b", None) is not None:
        graph = graph.with_b(args.b)
    return graph


def _coalition(graph: GameGraph, text: str) -> int:
    names = [t for t in text.split(",") if t]
    return graph.mask_of(names)


def cmd_value(args, out: Output) -> int:
    graph = _load(args)
    if args.all:
        if graph.n > BRUTE_FORCE_PLAYER_CAP:
            raise RefusalError(f"--all enumerates 2^{graph.n} coalitions; cap is {BRUTE_FORCE_PLAYER_CAP} players")
        masks = range(1, graph.full_mask + 1)
    else:
        masks = [_coalition(graph, c) for c in args.coalitions] or [graph.full_mask]
    for mask in masks:
        out.record("value", _label(graph.names_of(mask)), bmatching.value(graph, mask))
    return 0


def cmd_nucleolus(args, out: Output) -> int:
    graph = _load(args)
    if args.mode == "brute":
        if graph.n > BRUTE_FORCE_PLAYER_CAP:
            raise RefusalError(f"{graph.n} players exceeds the brute-force cap of {BRUTE_FORCE_PLAYER_CAP}")
        game, family = Game.from_graph(graph), None
        out.record("family", "full", 2 ** graph.n - 2)
    elif args.mode == "charset-i":
        family, k = charset_i_family(graph, args.k)
        game = Game.from_graph(graph)
        out.record("family", family.provenance, len(family))
    else:
        family = charset_ii_family(graph)
        game = Game.from_graph(graph, bmatching.nonsimple2_value_fast)
        out.record("family", family.provenance, len(family))
    trace = kopelowitz(game, family)
    for k, r in enumerate(trace.rounds, 1):
        fixed = " ".join(_label(game.names(c)) for c in r.fixed)
        out.record("round", k, f"eps={format_rational(r.epsilon)}", f"fixed={len(r.fixed)}",
                   *([fixed] if args.trace else []))
    out.record("nucleolus", trace.final.format())
    return 0


def _core_report(graph: GameGraph, alloc, out: Output) -> int:
    game = Game.from_graph(graph)
    if graph.n > BRUTE_FORCE_PLAYER_CAP:
        raise RefusalError(f"full core check over 2^{graph.n} coalitions exceeds the cap")
    out.record("allocation", alloc.format())
    efficient = alloc.total() == game.grand_value
    out.record("efficient", "yes" if efficient else "no",
               f"x(N)={format_rational(alloc.total())}", f"v(N)={format_rational(game.grand_value)}")
    bad = core_check(game, alloc)
    if bad is not None:
        out.record("core", "no", _label(game.names(bad)),
                   f"x(S)={format_rational(alloc.of(bad))}", f"v(S)={format_rational(game.value(bad))}")
        return 1
    out.record("core", "yes" if efficient else "no")
    return 0 if efficient else 1


def _allocation_for(args, graph: GameGraph):
    if args.dual:
        return dual_core_allocation(graph)
    if not args.allocation:
        raise ValueError("give an allocation file or --dual")
    path = Path(args.allocation)
    return parse_allocation(path.read_text(), graph.names, str(path))


def cmd_core_check(args, out: Output) -> int:
    graph = _load(args)
    return _core_report(graph, _allocation_for(args, graph), out)


def _report(report, out: Output) -> int:
    for line in report.lines():
        tag, *fields = line.split("\t")
        out.record(tag, *fields)
    out.record("structure", "ok" if report.ok else "FAIL")
    return 0 if report.ok else 1


def cmd_gadget(args, out: Output) -> int:
    if args.kind == "nucleolus":
        g = build_nucleolus_gadget(load_graph(args.input))
        graph = g.graph
    else:
        g = build_x3c_graph(load_x3c(args.input))
        graph = g.stages[args.stage] if args.stage != "final" else g.graph
    text = dump_graph(graph)
    if args.output:
        Path(args.output).write_text(text)
        out.record("wrote", args.output)
    elif args.format == "human" and not args.quiet:
        sys.stdout.write(text)
    return _report(structural_check(g), out)


def cmd_detect(args, out: Output) -> int:
    graph = _load(args)
    delta, witness = delta_parameter(graph, args.cap)
    out.record("delta", "none" if delta is None else delta)
    if witness is not None:
        out.record("witness", witness.kind, " ".join(f"{a}-{b}" for a, b in witness.edges))
        if witness.kind == "2fc":
            out.record("special", " ".join(witness.special),
                       "trivial" if witness.trivial else "nontrivial")
    return 0


def _gadget_from(path: str | None) -> GadgetGraph:
    if path is None:
        return build_nucleolus_gadget(GameGraph.build(["u", "v"], [("u", "v", 1)]))
    graph = load_graph(path)
    if any(r == "original" for r in graph.roles.values()):
        return GadgetGraph.from_graph(graph)
    return build_nucleolus_gadget(graph)


def _verify_table(args, out: Output) -> int:
    delta = args.delta if args.kind == "table2" else None
    g = _gadget_from(args.graph)
    if delta is not None:
        out.record("delta", delta)
    checks = compare_table(g, args.kind, delta)
    passed = 0
    for c in checks:
        shape = " ".join(map(str, c.shape))
        got = c.computed or ("-", "-")
        want = c.expected or ("-", "-")
        passed += c.ok
        out.record("row", shape, f"nu={format_rational(got[0]) if c.computed else '-'}",
                   f"excess={format_rational(got[1]) if c.computed else '-'}",
                   f"expected={format_rational(want[1]) if c.expected else '-'}",
                   "ok" if c.ok else "FAIL")
    ok = passed == len(checks)
    out.record(args.kind, f"{passed}/{len(checks)}", "pass" if ok else "FAIL")
    return 0 if ok else 1


def _verify_suite(args, out: Output) -> int:
    out.record("seed", args.seed)
    failures = 0
    for i, graph in enumerate(suite(args.seed, args.kind, args.count)):
        game = Game.from_graph(graph)
        brute = kopelowitz(game).final
        if args.kind == "charset-i":
            family, _ = charset_i_family(graph)
            fast = kopelowitz(game, family).final
            extra = True
        else:
            family = charset_ii_family(graph)
            fast = kopelowitz(Game.from_graph(graph, bmatching.nonsimple2_value_fast), family).final
            extra = all(bmatching.nonsimple2_value_fast(graph, m) == game.value(m)
                        for m in range(1, graph.full_mask + 1))
        ok = fast == brute and extra
        failures += not ok
        out.record("instance", i, f"n={graph.n}", f"m={len(graph.edges)}",
                   "match" if ok else "MISMATCH", fast.format())
    out.record(args.kind, f"{args.count - failures}/{args.count}", "pass" if not failures else "FAIL")
    return 0 if not failures else 1


def _verify_delta(args, out: Output) -> int:
    base = load_graph(args.graph)
    delta, witness = delta_parameter(base, args.cap)
    g = build_nucleolus_gadget(base)
    exc = original_excess(g, base.names)
    out.record("delta", "none" if delta is None else delta)
    out.record("excess", _label(base.names), exc)
    ok = delta is not None and exc == delta
    out.record("delta-witness", "pass" if ok else "FAIL")
    return 0 if ok else 1


def cmd_verify(args, out: Output) -> int:
    if args.kind in ("table1", "table2"):
        return _verify_table(args, out)
    if args.kind in ("charset-i", "charset-ii"):
        return _verify_suite(args, out)
    if args.kind == "delta-witness":
        if not args.graph:
            raise ValueError("delta-witness needs a base graph")
        return _verify_delta(args, out)
    if not args.graph:
        raise ValueError(f"verify {args.kind} needs a graph file")
    graph = _load(args)
    if args.kind == "core":
        return _core_report(graph, _allocation_for(args, graph), out)
    # is-nucleolus
    if not args.allocation:
        raise ValueError("is-nucleolus needs a candidate allocation file")
    path = Path(args.allocation)
    candidate = parse_allocation(path.read_text(), graph.names, str(path))
    verdict = is_nucleolus(Game.from_graph(graph), candidate)
    out.record("is-nucleolus", "true" if verdict else "false")
    return 0 if verdict else 1


def cmd_x3c(args, out: Output) -> int:
    inst = load_x3c(args.instance)
    out.record("instance", f"k={inst.k}", f"subsets={len(inst.subsets)}",
               "restricted" if inst.is_restricted() else "unrestricted")
    if args.cover:
        cover = [int(t.lstrip("S")) - 1 for t in args.cover.split(",") if t]
        if not inst.is_cover(cover):
            out.record("cover", "invalid")
            return 1
    else:
        cover = x3c_bruteforce(inst)
        if cover is None:
            out.record("cover", "none")
            return 0
    out.record("cover", " ".join(f"S{j + 1}" for j in cover))
    if inst.is_restricted():
        witness = cover_to_cubic(build_x3c_graph(inst), inst, cover)
        out.record("cubic", "ok", f"vertices={len(witness.vertices)}", f"edges={len(witness.edges)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    # --format is accepted before or after the subcommand; the subcommand
    # copy must not overwrite an earlier value with its default
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "lines"), default=argparse.SUPPRESS)

    def graph_opts(p):
        p.add_argument("--nonsimple", action="store_true", help="allow repeated edges")
        p.add_argument("--b", type=int, help="override every capacity")

    parser = argparse.ArgumentParser(prog="bnucleolus",
                                     description="Exact b-matching games: values, core, nucleolus, gadgets.")
    parser.add_argument("--format", choices=("human", "lines"), default="human")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("value", parents=[common], help="coalition values")
    p.add_argument("graph")
    p.add_argument("coalitions", nargs="*", help="comma-separated player names (default: everyone)")
    p.add_argument("--all", action="store_true", help="every nonempty coalition")
    graph_opts(p)
    p.set_defaults(func=cmd_value)

    p = sub.add_parser("nucleolus", parents=[common], help="compute the nucleolus")
    p.add_argument("graph")
    p.add_argument("--mode", choices=("brute", "charset-i", "charset-ii"), default="brute")
    p.add_argument("--k", type=int, help="charset-i bound on b=2 vertices of side B")
    p.add_argument("--trace", action="store_true", help="list fixed coalitions per round")
    graph_opts(p)
    p.set_defaults(func=cmd_nucleolus)

    p = sub.add_parser("core-check", parents=[common], help="test core membership")
    p.add_argument("graph")
    p.add_argument("allocation", nargs="?")
    p.add_argument("--dual", action="store_true", help="check the dual-derived allocation")
    graph_opts(p)
    p.set_defaults(func=cmd_core_check)

    p = sub.add_parser("gadget", parents=[common], help="generate a hardness gadget graph")
    p.add_argument("kind", choices=("nucleolus", "x3c"))
    p.add_argument("input", help="base graph (nucleolus) or X3C instance (x3c)")
    p.add_argument("-o", "--output")
    p.add_argument("--stage", choices=("G0", "G1", "G2", "final"), default="final")
    p.add_argument("--quiet", action="store_true", help="do not echo the graph")
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("detect", parents=[common], help="cubic / 2FC subgraph search")
    p.add_argument("graph")
    p.add_argument("--cap", type=int, default=22)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("verify", parents=[common], help="reproduction and consistency checks")
    p.add_argument("kind", choices=("table1", "table2", "core", "is-nucleolus",
                                    "charset-i", "charset-ii", "delta-witness"))
    p.add_argument("graph", nargs="?")
    p.add_argument("allocation", nargs="?")
    p.add_argument("--delta", type=parse_rational, default=Fraction(1, 4))
    p.add_argument("--dual", action="store_true")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--cap", type=int, default=22)
    graph_opts(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("x3c", parents=[common], help="solve an X3C instance and build its cubic witness")
    p.add_argument("instance")
    p.add_argument("--cover", help="comma-separated subsets to check, e.g. S1,S2")
    p.set_defaults(func=cmd_x3c)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out = Output(args.format)
    try:
        return args.func(args, out)
    except (GraphFormatError, X3CFormatError, PreconditionError, RefusalError, SchemeError,
            StructuralError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
