import random

import pytest

from ptiplace import Budget, Multiset, PlaceRelation, closure_member, decide_equiv, is_pti_place_bisimulation, maximal_bisimulations
from ptiplace.io import format_net
from ptiplace.oracles import (
    GenConfig,
    OracleRefused,
    bisim_check_by_definition,
    closure_member_naive,
    random_marking,
    random_mirrored_net,
    random_net,
    random_relation,
)


def test_naive_permutes_second_marking():
    r = PlaceRelation(4, [(0, 2), (0, 3), (1, 3)])
    assert closure_member_naive(r, Multiset.of(0, 1), Multiset.of(3, 2))


def test_naive_trivial_cases():
    r = PlaceRelation(2, [(0, 1)])
    assert closure_member_naive(r, Multiset(), Multiset())
    assert not closure_member_naive(r, Multiset.of(0), Multiset.of(1, 1))


def test_naive_refuses_large_markings():
    with pytest.raises(OracleRefused):
        closure_member_naive(PlaceRelation.full(1), Multiset({0: 9}), Multiset({0: 9}))


def test_definition_check_fig4(fig, rel):
    net = fig("fig4")
    assert bisim_check_by_definition(net, rel("fig4", "fig4-r1"), 3) is None
    assert bisim_check_by_definition(net, rel("fig4", "fig4-union"), 2) is not None


def test_definition_check_empty_relation(fig):
    for name in ("fig1", "fig4", "fig5"):
        assert bisim_check_by_definition(fig(name), PlaceRelation(fig(name).n_places), 3) is None


def test_generation_is_deterministic():
    cfg = GenConfig(seed=42)
    assert format_net(random_net(cfg)) == format_net(random_net(cfg))
    net = random_net(cfg)
    assert random_relation(cfg, net) == random_relation(cfg, net)
    assert random_marking(cfg, net, 4) == random_marking(cfg, net, 4)


def test_generated_nets_are_well_formed():
    for seed in range(50):
        net = random_net(GenConfig(seed=seed))
        assert 2 <= net.n_places <= 4
        assert all(t.pre.size >= 1 and t.post.size >= 1 for t in net.transitions)


def test_zero_inhibitor_density_gives_plain_net():
    for seed in range(20):
        net = random_net(GenConfig(inhibitor_density=0.0, seed=seed))
        assert not net.inhibiting()


def test_single_token_closure_is_membership():
    cfg = GenConfig(max_pre=1, max_post=1, seed=3)
    net = random_net(cfg)
    r = random_relation(cfg, net)
    n = net.n_places
    for a in range(n):
        for b in range(n):
            assert (closure_member(r, Multiset.of(a), Multiset.of(b)) is not None) == ((a, b) in r)


def test_bad_config_rejected():
    with pytest.raises(ValueError):
        GenConfig(places=(3, 2))
    with pytest.raises(ValueError):
        GenConfig(max_pre=0)


def test_mirror_relates_each_place_to_its_copy():
    net, mirror = random_mirrored_net(GenConfig(places=(2, 3), seed=4))
    r = PlaceRelation(net.n_places, [(p, q) for p, q in enumerate(mirror)])
    assert is_pti_place_bisimulation(net, r) is None


def _brute_bisimulations(net, bound):
    n = net.n_places
    allp = [(a, b) for a in range(n) for b in range(n)]
    good = []
    for bits in range(1 << len(allp)):
        pairs = {p for i, p in enumerate(allp) if bits >> i & 1}
        if bisim_check_by_definition(net, pairs, bound) is None:
            good.append(pairs)
    return good


@pytest.mark.parametrize("seed", range(15))
def test_decide_and_maximal_against_brute_force(seed):
    cfg = GenConfig(places=(2, 3), transitions=(1, 4), inhibitor_density=0.3, max_post=3, seed=seed)
    net = random_net(cfg)
    good = _brute_bisimulations(net, 3)
    rng = random.Random(seed)
    for _ in range(4):
        k = rng.randint(1, 3)
        m1, m2 = (Multiset.of(*(rng.randrange(net.n_places) for _ in range(k))) for _ in "12")
        truth = any(closure_member_naive(g, m1, m2) for g in good)
        assert decide_equiv(net, m1, m2, Budget(max_nodes=None)).equivalent == truth
    maximal = [g for g in good if not any(g < h for h in good)]
    got = [set(r) for r in maximal_bisimulations(net, Budget(max_nodes=None)).relations]
    assert sorted(map(sorted, got)) == sorted(map(sorted, maximal))
