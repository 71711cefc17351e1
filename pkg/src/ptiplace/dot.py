"""Graphviz DOT output for nets and processes."""

from __future__ import annotations

from ptiplace.causal import PtiProcess
from ptiplace.net import PtiNet

NL = "\\n"


def _q(s: str) -> str:
    return '"' + s.replace('"', r"\"") + '"'


def _weight(k: int) -> str:
    return f" [label={k}]" if k > 1 else ""


def net_to_dot(net: PtiNet, marking=None) -> str:
    """Places as circles, transitions as boxes, inhibitor arcs ending in a circle."""
    out = [f"digraph {_q(net.name)} {{", "  rankdir=LR;"]
    for i, p in enumerate(net.places):
        k = marking.get(i, 0) if marking is not None else 0
        label = p if not k else p + NL + ("•" * k if k <= 3 else str(k))
        out.append(f"  {_q(p)} [shape=circle, label={_q(label)}];")
    for t in net.transitions:
        out.append(f"  {_q(t.name)} [shape=box, label={_q(f'{t.name}: {t.label}')}];")
    for t in net.transitions:
        for p, k in t.pre.items():
            out.append(f"  {_q(net.places[p])} -> {_q(t.name)}{_weight(k)};")
        for p, k in t.post.items():
            out.append(f"  {_q(t.name)} -> {_q(net.places[p])}{_weight(k)};")
        for p in sorted(t.inhib):
            out.append(f"  {_q(net.places[p])} -> {_q(t.name)} [arrowhead=odot];")
    out.append("}")
    return "\n".join(out) + "\n"


def process_to_dot(p: PtiProcess, name: str = "process") -> str:
    """Conditions ``bi`` and events ``ei`` annotated with their images.

    Flow arcs are solid; inhibitor arcs are dashed, labelled ``b`` (before)
    or ``a`` (after), and end in a circle on the event.
    """
    net, c, rho = p.net, p.causal, p.folding
    out = [f"digraph {_q(name)} {{", "  rankdir=LR;"]
    for b in range(c.n_conditions):
        label = f"b{b}" + NL + net.places[rho.conditions[b]]
        out.append(f"  b{b} [shape=circle, label={_q(label)}];")
    for i, e in enumerate(c.events):
        t = net.transitions[rho.events[i]]
        label = f"e{i}" + NL + f"{t.name}: {e.label}"
        out.append(f"  e{i} [shape=box, label={_q(label)}];")
    for i, e in enumerate(c.events):
        out.extend(f"  b{b} -> e{i};" for b in e.pre)
        out.extend(f"  e{i} -> b{b};" for b in e.post)
    for tag, arcs in (("b", c.before), ("a", c.after)):
        for b, e in sorted(arcs):
            out.append(f'  b{b} -> e{e} [style=dashed, arrowhead=odot, label="{tag}"];')
    out.append("}")
    return "\n".join(out) + "\n"
