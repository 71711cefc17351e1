"""Place/Transition nets with inhibitor arcs and pti-place bisimilarity."""

__version__ = "0.1.0"

from ptiplace.net import (  # noqa: E402
    EMPTY,
    FiringSequenceError,
    Multiset,
    NotEnabledError,
    PtiNet,
    Transition,
    enabled,
    enabled_transitions,
    fire,
    fire_sequence,
    ms_add,
    ms_leq,
    ms_scale,
    ms_sub,
    reachable_bounded,
)
from ptiplace.closure import (  # noqa: E402
    PlaceRelation,
    closure_member,
    related_markings,
    relation_compose,
    relation_identity,
    relation_inverse,
    relation_is_equivalence,
)
from ptiplace.bisim import (  # noqa: E402
    BisimCounterexample,
    Budget,
    EquivVerdict,
    decide_equiv,
    inhibitor_consistent,
    is_pti_place_bisimulation,
    maximal_bisimulations,
)
from ptiplace.io import load_fixture, load_net, load_relation, parse_net, parse_relation  # noqa: E402
