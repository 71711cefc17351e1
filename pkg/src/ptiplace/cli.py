"""Command line interface: ``ptiplace SUBCOMMAND NET ...``.

Exit status is 0 for a positive answer, 1 for a negative one, 2 for usage
or parse errors and 3 when a search budget ran out.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from ptiplace import __version__
from ptiplace.bisim import Budget, decide_equiv, is_pti_place_bisimulation, maximal_bisimulations
from ptiplace.causal import cn_bisim_bounded, unfold, validate
from ptiplace.closure import closure_member
from ptiplace.dot import process_to_dot
from ptiplace.io import ParseError, VerdictReport, format_relation, load_net, load_relation
from ptiplace.net import NetError, NotEnabledError, enabled_transitions, fire

OK, NO, USAGE, BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE)


def _budget(args) -> Budget:
    if args.exhaustive:
        return Budget(max_nodes=None, exhaustive=True)
    return Budget(max_nodes=args.budget)


def cmd_fire(net, args) -> int:
    m = net.marking(args.marking)
    try:
        after = fire(net, m, args.transition)
    except NotEnabledError as exc:
        print(exc)
        return NO
    print(net.format_marking(after))
    return OK


def cmd_enabled(net, args) -> int:
    names = [net.transitions[t].name for t in enabled_transitions(net, net.marking(args.marking))]
    print(" ".join(names) if names else "(none)")
    return OK if names else NO


def cmd_closure(net, args) -> int:
    r = load_relation(args.relation, net)
    m1, m2 = net.marking(args.m1), net.marking(args.m2)
    match = closure_member(r, m1, m2)
    pairs = None if match is None else [(net.places[a], net.places[b]) for a, b in match]
    if args.json:
        q = {"net": net.name, "kind": "closure", "m1": args.m1, "m2": args.m2, "relation": str(args.relation)}
        print(VerdictReport(q, match is not None, pairs).to_json())
    elif pairs is None:
        print("false")
    else:
        print("true")
        print("witness: " + ", ".join(f"({a},{b})" for a, b in pairs))
    return OK if match is not None else NO


def cmd_check(net, args) -> int:
    r = load_relation(args.relation, net)
    t0 = time.perf_counter()
    cx = is_pti_place_bisimulation(net, r)
    ms = (time.perf_counter() - t0) * 1000
    if args.json:
        q = {"net": net.name, "kind": "check-relation", "relation": str(args.relation)}
        detail = None
        if cx is not None:
            detail = {
                "condition": cx.condition,
                "subcondition": cx.subcondition,
                "transition": net.transitions[cx.transition].name,
                "marking": net.format_marking(cx.marking),
                "description": cx.describe(net),
            }
        print(VerdictReport(q, cx is None, counterexample=detail, relations_examined=1, elapsed_ms=ms).to_json())
    elif cx is None:
        print("true")
    else:
        print("false")
        print("counterexample: " + cx.describe(net))
    return OK if cx is None else NO


def cmd_decide(net, args) -> int:
    m1, m2 = net.marking(args.m1), net.marking(args.m2)
    t0 = time.perf_counter()
    v = decide_equiv(net, m1, m2, _budget(args), maximal=not args.minimal)
    ms = (time.perf_counter() - t0) * 1000
    pairs = v.witness.named(net.places) if v.witness is not None else None
    if args.json:
        q = {"net": net.name, "kind": "decide", "m1": args.m1, "m2": args.m2}
        rep = VerdictReport(q, v.equivalent, pairs, relations_examined=v.relations_examined, pruned=v.pruned, elapsed_ms=ms)
        print(rep.to_json())
    else:
        print({True: "true", False: "false", None: "unknown"}[v.equivalent])
        if pairs is not None:
            print("witness: " + ", ".join(f"({a},{b})" for a, b in pairs))
        print(f"relations examined: {v.relations_examined}, pruned: {v.pruned}")
    return {True: OK, False: NO, None: BUDGET}[v.equivalent]


def cmd_maximal(net, args) -> int:
    res = maximal_bisimulations(net, _budget(args))
    for i, r in enumerate(res.relations):
        print(f"# relation {i + 1} ({len(r)} pairs)")
        print(format_relation(r, net), end="")
    if res.truncated:
        print("# budget exhausted: list may be incomplete")
        return BUDGET
    return OK


def cmd_unfold(net, args) -> int:
    m0 = net.marking(args.marking)
    levels = unfold(net, m0, args.events)
    for k, level in enumerate(levels):
        print(f"{k} events: {len(level)} processes")
        for p in level:
            bad = validate(p, m0)
            arcs = " ".join([f"b{b}-b->e{e}" for b, e in sorted(p.causal.before)] + [f"b{b}-a->e{e}" for b, e in sorted(p.causal.after)])
            line = f"  {' '.join(p.transitions()) or '-'}  max: {net.format_marking(p.final_marking)}"
            print(line + (f"  [{arcs}]" if arcs else "") + (f"  INVALID {bad}" if bad else ""))
    if args.dot:
        last = levels[-1]
        text = "".join(process_to_dot(p, f"process{i}") for i, p in enumerate(last))
        Path(args.dot).write_text(text)
    return OK


def cmd_cn_bisim(net, args) -> int:
    v = cn_bisim_bounded(net, net.marking(args.m1), net.marking(args.m2), args.depth, args.budget)
    print(v.status if v.status != "equivalent_to_depth" else f"equivalent_to_depth {v.depth}")
    for s in v.trace:
        side = "left" if s.side == 1 else "right"
        print(f"  {side} fires {s.attacker}; " + (f"answered by {s.defender}" if s.defender else "no answer"))
    return {"equivalent_to_depth": OK, "distinguished": NO, "budget_exhausted": BUDGET}[v.status]


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ptiplace", description="PTI nets and pti-place bisimilarity.")
    ap.add_argument("--version", action="version", version=f"ptiplace {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def add(name, fn, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("net", help="net file (.pti)")
        p.set_defaults(fn=fn)
        return p

    def pair(p):
        p.add_argument("-1", dest="m1", required=True, metavar="M1")
        p.add_argument("-2", dest="m2", required=True, metavar="M2")

    def budget(p, default=200_000):
        p.add_argument("--budget", type=int, default=default, help="search node limit")

    p = add("fire", cmd_fire, "fire one transition")
    p.add_argument("-m", dest="marking", required=True)
    p.add_argument("-t", dest="transition", required=True)
    p = add("enabled", cmd_enabled, "list enabled transitions")
    p.add_argument("-m", dest="marking", required=True)
    p = add("closure", cmd_closure, "additive closure membership")
    p.add_argument("-r", dest="relation", required=True)
    pair(p)
    p.add_argument("--json", action="store_true")
    p = add("check-relation", cmd_check, "is the relation a pti-place bisimulation")
    p.add_argument("-r", dest="relation", required=True)
    p.add_argument("--json", action="store_true")
    p = add("decide", cmd_decide, "decide pti-place bisimilarity of two markings")
    pair(p)
    budget(p)
    p.add_argument("--exhaustive", action="store_true", help="no node limit")
    p.add_argument("--minimal", action="store_true", help="report the first witness found, not a maximal one")
    p.add_argument("--json", action="store_true")
    p = add("maximal-bisims", cmd_maximal, "all maximal pti-place bisimulations")
    budget(p)
    p.add_argument("--exhaustive", action="store_true")
    p = add("unfold", cmd_unfold, "enumerate processes")
    p.add_argument("-m", dest="marking", required=True)
    p.add_argument("--events", type=int, required=True)
    p.add_argument("--dot", help="write the processes with the most events as DOT")
    p = add("cn-bisim", cmd_cn_bisim, "bounded causal-net bisimulation game")
    pair(p)
    p.add_argument("--depth", type=int, required=True)
    budget(p, 500_000)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("events", "depth", "budget"):
        if getattr(args, name, 0) is not None and getattr(args, name, 0) < 0:
            print(f"ptiplace: error: --{name} must be >= 0", file=sys.stderr)
            return USAGE
    try:
        net = load_net(args.net)
        return args.fn(net, args)
    except (ParseError, NetError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"ptiplace: error: {msg}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
