import random
from dataclasses import replace

import pytest

from ptiplace import Multiset, decide_equiv, fire_sequence
from ptiplace.causal import (
    CausalNet,
    Folding,
    PtiProcess,
    cn_bisim_bounded,
    initial_process,
    process_extensions,
    process_of_sequence,
    unfold,
    validate,
)
from ptiplace.oracles import GenConfig, random_net


def shape(p):
    """Process structure in terms of place and transition names (fig1 has no repeated transitions)."""
    net, c, rho = p.net, p.causal, p.folding
    pl = lambda b: net.places[rho.conditions[b]]
    tr = lambda e: net.transitions[rho.events[e]].name
    events = {(tr(i), tuple(sorted(map(pl, e.pre))), tuple(sorted(map(pl, e.post)))) for i, e in enumerate(c.events)}
    return events, {(pl(b), tr(e)) for b, e in c.before}, {(pl(b), tr(e)) for b, e in c.after}


@pytest.fixture
def fig1(fig):
    net = fig("fig1")
    return net, net.marking("m0")


def test_initial_process(fig1):
    net, m0 = fig1
    p = initial_process(net, m0)
    assert p.causal.n_conditions == 2
    assert p.causal.initial() == p.causal.maximal() == [0, 1]
    assert [net.places[s] for s in p.folding.conditions] == ["s1", "s3"]


def test_initial_process_multiplicity(fig1):
    net, _ = fig1
    p = initial_process(net, net.marking("2*s2"))
    assert p.folding.conditions == (1, 1)
    assert p.causal.n_conditions == 2


def test_initial_process_empty(fig1):
    net, _ = fig1
    p = initial_process(net, Multiset())
    assert p.causal.n_conditions == 0 and validate(p) == []


def test_after_arc_when_inhibitor_cleared_first(fig1):
    net, m0 = fig1
    p = process_of_sequence(net, m0, ["t1", "t3"])
    ext = [q for t, q in process_extensions(net, p) if net.transitions[t].name == "t2"]
    assert len(ext) == 1
    _, before, after = shape(ext[0])
    assert after == {("s2", "t2")} and before == set()


def test_before_arc_when_inhibited_event_came_first(fig1):
    net, m0 = fig1
    p = process_of_sequence(net, m0, ["t2", "t1"])
    assert shape(p)[1] == {("s2", "t2")}
    ext = [q for t, q in process_extensions(net, p) if net.transitions[t].name == "t3"]
    assert len(ext) == 1
    _, before, after = shape(ext[0])
    assert before == {("s2", "t2")} and after == set()


def test_maximal_inhibiting_condition_blocks(fig1):
    net, m0 = fig1
    p = process_of_sequence(net, m0, ["t1"])
    assert [net.transitions[t].name for t, _ in process_extensions(net, p)] == ["t3"]


def test_same_causal_net_different_inhibitor_arcs(fig1):
    net, m0 = fig1
    c1 = process_of_sequence(net, m0, ["t1", "t3", "t2"])
    c2 = process_of_sequence(net, m0, ["t2", "t1", "t3"])
    e1, be1, af1 = shape(c1)
    e2, be2, af2 = shape(c2)
    assert e1 == e2
    assert (be1, af1) == (set(), {("s2", "t2")})
    assert (be2, af2) == ({("s2", "t2")}, set())


def test_valid_processes(fig1):
    net, m0 = fig1
    assert validate(process_of_sequence(net, m0, ["t1", "t3", "t2"]), m0) == []
    assert validate(initial_process(net, Multiset())) == []


def test_retagged_after_arc_gives_the_other_process(fig1):
    net, m0 = fig1
    c1 = process_of_sequence(net, m0, ["t1", "t3", "t2"])
    c = c1.causal
    retagged = replace(c1, causal=replace(c, before=c.after, after=frozenset()))
    # still a process: the one where t2 happened before the s2 token appeared
    assert validate(retagged, m0) == []
    assert shape(retagged) == shape(process_of_sequence(net, m0, ["t2", "t1", "t3"]))


def clauses(p, m0=None):
    return {v.clause for v in validate(p, m0)}


def test_missing_inhibitor_arc_detected(fig1):
    net, m0 = fig1
    c1 = process_of_sequence(net, m0, ["t1", "t3", "t2"])
    broken = replace(c1, causal=replace(c1.causal, after=frozenset()))
    assert clauses(broken) == {"inhibitor-coherence"}


def test_before_arc_on_initial_condition(fig1):
    net, m0 = fig1
    c1 = process_of_sequence(net, m0, ["t1", "t3", "t2"])
    # b1 maps to s3 (initial); t2 is not inhibited by s3 either
    broken = replace(c1, causal=replace(c1.causal, before=frozenset({(1, 2)})))
    assert {"before-requirement", "inhibitor-coherence"} <= clauses(broken)


def test_after_arc_on_maximal_condition(fig1):
    net, m0 = fig1
    p = process_of_sequence(net, m0, ["t2", "t1"])
    broken = replace(p, causal=replace(p.causal, after=p.causal.before, before=frozenset()))
    assert "after-requirement" in clauses(broken)


def test_inhibitor_order_cycle(fig, fig1):
    # a before arc forcing an event ahead of its own cause
    net, m0 = fig1
    p = process_of_sequence(net, m0, ["t1", "t3"])
    c = p.causal
    # before arc (b3, e0): e0 precedes the producer of b3, which is e1, itself caused by e0
    bad = replace(p, causal=replace(c, before=frozenset({(2, 1)})))
    assert "acyclic-inhibitor" in clauses(bad)


def test_flow_cycle_detected(fig1):
    net, _ = fig1
    from ptiplace.causal import Event

    c = CausalNet(2, (Event("a", (0,), (1,)), Event("c", (1,), (0,))))
    p = PtiProcess(net, c, Folding((0, 1), (0, 2)))
    assert "acyclic" in clauses(p)


def test_label_and_image_mismatch(fig1):
    net, m0 = fig1
    p = process_of_sequence(net, m0, ["t1"])
    wrong = replace(p, folding=Folding(p.folding.conditions, (2,)))
    assert {"label", "pre-image", "post-image"} <= clauses(wrong)
    assert "initial-marking" in clauses(p, net.marking("s1"))


def _all_processes(net, m0, depth):
    return [p for level in unfold(net, m0, depth) for p in level]


def test_token_game_agreement_fig1(fig1):
    net, m0 = fig1
    procs = _all_processes(net, m0, 6)
    assert len(procs) == 7
    for p in procs:
        assert p.final_marking == fire_sequence(net, m0, list(p.folding.events))


@pytest.mark.parametrize("seed", range(30))
def test_extensions_valid_and_agree_with_token_game(seed):
    net = random_net(GenConfig(places=(2, 4), transitions=(1, 4), inhibitor_density=0.3, seed=seed))
    m0 = Multiset.of(*random.Random(seed).choices(range(net.n_places), k=3))
    for p in _all_processes(net, m0, 4):
        assert validate(p, m0) == []
        assert p.final_marking == fire_sequence(net, m0, list(p.folding.events))


@pytest.mark.parametrize("seed", range(10))
def test_process_is_safe(seed):
    net = random_net(GenConfig(places=(2, 3), transitions=(2, 4), seed=seed))
    m0 = Multiset.of(*random.Random(seed).choices(range(net.n_places), k=3))
    for p in _all_processes(net, m0, 4):
        marked = set(p.causal.initial())
        for e in p.causal.events:
            assert set(e.pre) <= marked
            marked -= set(e.pre)
            assert not marked & set(e.post)
            marked |= set(e.post)


@pytest.mark.parametrize("m1, m2, status", [("s2", "s2p", "equivalent_to_depth"), ("s1", "s1p", "equivalent_to_depth"), ("2*s2", "2*s2p", "distinguished")])
def test_cn_bisim_fig5(fig, m1, m2, status):
    net = fig("fig5")
    v = cn_bisim_bounded(net, net.marking(m1), net.marking(m2), 6)
    assert v.status == status


def test_cn_bisim_trace(fig):
    net = fig("fig5")
    v = cn_bisim_bounded(net, net.marking("2*s2"), net.marking("2*s2p"), 3)
    assert v.depth == 1
    assert len(v.trace) == 1 and v.trace[0].attacker == "t4" and v.trace[0].defender is None


def test_cn_bisim_depth_zero(fig):
    net = fig("fig5")
    assert cn_bisim_bounded(net, net.marking("2*s2"), net.marking("2*s2p"), 0).status == "equivalent_to_depth"
    with pytest.raises(ValueError):
        cn_bisim_bounded(net, net.marking("s2"), net.marking("s2p"), -1)


def test_cn_bisim_budget(fig):
    net = fig("fig3-upac-upbc")
    v = cn_bisim_bounded(net, net.marking("upac"), net.marking("upbc"), 8, max_nodes=5)
    assert v.status == "budget_exhausted"


def test_cn_bisim_distinguishes_labels(fig):
    net = fig("fig1")
    v = cn_bisim_bounded(net, net.marking("s1"), net.marking("s3"), 2)
    assert v.status == "distinguished"


@pytest.mark.parametrize(
    "name, m1, m2",
    [("fig4", "s2", "s3"), ("fig2-n1", "left", "right"), ("fig2-n2", "left", "right"), ("fig3-upac-upbc", "upac", "upbc")],
)
def test_bisimilar_markings_not_distinguished(fig, name, m1, m2):
    net = fig(name)
    a, b = net.marking(m1), net.marking(m2)
    assert decide_equiv(net, a, b).equivalent
    v = cn_bisim_bounded(net, a, b, 4)
    assert v.status != "distinguished"
