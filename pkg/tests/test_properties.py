"""Laws checked on small random prime and asymmetric event structures."""

from itertools import combinations, islice

from hypothesis import HealthCheck, assume, given, settings, strategies as st

from esmin.behavior import decide_bisim
from esmin.errors import InvalidResult, LabelClash
from esmin.folding import (
    check_folding,
    check_folding_aes,
    check_folding_equivalence_pes,
    check_folding_pes,
    check_morphism,
    check_morphism_aes,
    check_morphism_pes,
    minimize,
    quotient,
    quotient_map,
    quotient_map_is_folding,
)
from esmin.iso import is_isomorphic
from esmin.maps import EventMap, EventPartition, compose
from esmin.models import AsymES, PrimeES, as_event_structure, recognize_aes, recognize_pes, validate_model
from esmin.poset import is_prefix, reach_chain
from esmin.unfold import canonical_pes, flt, hset, lift, phi

laws = settings(derandomize=True, max_examples=200, deadline=None)
slow_laws = settings(derandomize=True, max_examples=60, deadline=None)
# laws whose inputs are mostly filtered out
filtered_laws = settings(laws, suppress_health_check=[HealthCheck.filter_too_much])


@st.composite
def prime_structures(draw, max_events=6):
    n = draw(st.integers(min_value=1, max_value=max_events))
    labels = draw(st.lists(st.sampled_from("ab"), min_size=n, max_size=n))
    events = [f"{label}{i}" for i, label in enumerate(labels)]
    pairs = list(combinations(events, 2))
    causality = [p for p in pairs if draw(st.booleans()) and draw(st.booleans())]
    conflict = [p for p in pairs if p not in causality and draw(st.booleans())]
    p = PrimeES.build(events, causality=causality, conflict=conflict, name="r")
    assume(validate_model(p).valid)
    return p


@st.composite
def asym_structures(draw, max_events=5):
    n = draw(st.integers(min_value=1, max_value=max_events))
    labels = draw(st.lists(st.sampled_from("ab"), min_size=n, max_size=n))
    events = [f"{label}{i}" for i, label in enumerate(labels)]
    pairs = list(combinations(events, 2))
    causality = [p for p in pairs if draw(st.booleans()) and draw(st.booleans())]
    aconflict = []
    for x, y in pairs:
        if (x, y) in causality:
            continue
        way = draw(st.sampled_from(["none", "none", "forward", "back", "both"]))
        if way in ("forward", "both"):
            aconflict.append((x, y))
        if way in ("back", "both"):
            aconflict.append((y, x))
    a = AsymES.build(events, causality=causality, aconflict=aconflict, name="r")
    assume(validate_model(a).valid)
    return a


@st.composite
def label_maps(draw, source, target):
    """A random label-preserving function from ``source``'s events to ``target``'s."""
    mapping = {}
    for x in sorted(source.events):
        options = sorted(y for y in target.events if target.labels[y] == source.labels[x])
        assume(options)
        mapping[x] = draw(st.sampled_from(options))
    return EventMap.build(source, target, mapping, name="f")


@st.composite
def pes_maps(draw):
    p = draw(prime_structures(max_events=4))
    q = p if draw(st.booleans()) else draw(prime_structures(max_events=4))
    return draw(label_maps(p, q))


@st.composite
def aes_maps(draw):
    a = draw(asym_structures(max_events=4))
    b = a if draw(st.booleans()) else draw(asym_structures(max_events=4))
    return draw(label_maps(a, b))


@st.composite
def label_partitions(draw, p):
    """A random partition of ``p``'s events that never mixes labels."""
    blocks = []
    for label in sorted(set(p.labels.values())):
        members = sorted(x for x in p.events if p.labels[x] == label)
        slots = draw(st.lists(st.integers(0, len(members) - 1), min_size=len(members), max_size=len(members)))
        for k in range(len(members)):
            block = [x for x, s in zip(members, slots) if s == k]
            if block:
                blocks.append(block)
    return EventPartition.of(blocks)


@st.composite
def structures_with_partitions(draw, structures=None):
    p = draw(prime_structures() if structures is None else structures)
    return p, draw(label_partitions(p))


def quotient_onto(p, eq, recognize=recognize_pes):
    """The quotient map into the recognised PES (or AES), or None when the quotient is not one."""
    try:
        q = recognize(quotient(p, eq))
    except (InvalidResult, LabelClash):
        return None
    if q is None:
        return None
    return EventMap.build(p, q, {x: eq.name_of(x) for x in p.events}, name="q")


@laws
@given(structures_with_partitions())
def test_equivalence_criteria_match_quotient_folding(case):
    p, eq = case
    expected = quotient_map_is_folding(p, eq) and quotient_onto(p, eq) is not None
    assert check_folding_equivalence_pes(p, eq).verdict is expected


@laws
@given(structures_with_partitions())
def test_pes_criteria_match_configurations(case):
    p, eq = case
    f = quotient_onto(p, eq)
    assume(f is not None)
    morphism = check_morphism(f).verdict
    assert check_morphism_pes(f).verdict is morphism
    if morphism:
        assert check_folding_pes(f).verdict is check_folding(f).verdict


@laws
@given(prime_structures())
def test_pes_is_its_own_unfolding(p):
    assert is_isomorphic(canonical_pes(p).pes, p)
    assert check_folding(phi(p)).verdict


@laws
@given(structures_with_partitions())
def test_unfolding_of_quotient(case):
    p, eq = case
    try:
        q = quotient(p, eq)
    except InvalidResult:
        return
    cp = canonical_pes(q)
    assert check_folding(phi(q)).verdict
    for c in q.configs:
        assert flt(hset(c, cp), cp) == c


@laws
@given(prime_structures())
def test_bisimilar_to_itself(p):
    relation = decide_bisim(p, p)
    assert relation is not None
    assert relation.check().verdict


@slow_laws
@given(prime_structures())
def test_minimal_pes_is_bisimilar(p):
    result = minimize(p, "pes")
    (q,) = result.quotients
    assert check_folding(q.folding).verdict
    assert decide_bisim(p, q.structure) is not None
    assert len(q.structure.events) <= len(p.events)


@slow_laws
@given(prime_structures())
def test_pes_minimum_below_a_poset_maximum(p):
    pes_min = minimize(p, "pes").quotients[0].partition
    poset = minimize(as_event_structure(p), "poset").quotients
    assert any(pes_min.refines(q.partition) for q in poset)
    for q in poset:
        assert check_folding(q.folding).verdict


@filtered_laws
@given(pes_maps())
def test_pes_criteria_on_arbitrary_maps(f):
    morphism = check_morphism(f).verdict
    assert check_morphism_pes(f).verdict is morphism
    if morphism:
        assert check_folding_pes(f).verdict is check_folding(f).verdict


@filtered_laws
@given(aes_maps())
def test_aes_morphism_criteria_on_arbitrary_maps(f):
    assert check_morphism_aes(f).verdict is check_morphism(f).verdict


@filtered_laws
@given(structures_with_partitions(asym_structures()))
def test_aes_criteria_match_configurations(case):
    a, eq = case
    f = quotient_onto(a, eq, recognize_aes)
    assume(f is not None)
    morphism = check_morphism(f).verdict
    assert check_morphism_aes(f).verdict is morphism
    if morphism:
        assert check_folding_aes(f).verdict is check_folding(f).verdict


@laws
@given(asym_structures())
def test_aes_embedding_is_recognised(a):
    b = recognize_aes(as_event_structure(a))
    assert b is not None
    assert as_event_structure(b).family == as_event_structure(a).family


@slow_laws
@given(structures_with_partitions(st.one_of(prime_structures(max_events=5), asym_structures(max_events=4))))
def test_lift_reflects_folding(case):
    p, eq = case
    try:
        f = quotient_map(p, eq)
    except InvalidResult:
        return
    assert check_folding(f).verdict is check_folding(lift(f)).verdict


@laws
@given(structures_with_partitions())
def test_history_laws(case):
    p, eq = case
    try:
        es = quotient(p, eq)
    except InvalidResult:
        es = as_event_structure(p)
    for c in es.configs:
        for x in c.events:
            h = c.history(x)
            assert is_prefix(h, c)
            assert h in es
        for linearisation in islice(c.linearisations(), 3):
            chain = reach_chain(es, c, linearisation)
            assert [t.event for t in chain] == list(linearisation)
            assert (chain[-1].target if chain else c) == c
    for c1 in es.configs:
        for c2 in es.configs:
            same_histories = c1.events <= c2.events and all(c1.history(x) == c2.history(x) for x in c1.events)
            assert is_prefix(c1, c2) is same_histories
    for x in es.events:
        owned = es.histories_of(x)
        for h1, h2 in combinations(owned, 2):
            assert not es.compatible(h1.config, h2.config)


@settings(slow_laws, suppress_health_check=[HealthCheck.filter_too_much])
@given(structures_with_partitions(prime_structures(max_events=5)), st.data())
def test_foldings_compose(case, data):
    p, eq1 = case
    assume(quotient_map_is_folding(p, eq1))
    f = quotient_map(p, eq1)
    eq2 = data.draw(label_partitions(f.target))
    assume(quotient_map_is_folding(f.target, eq2))
    g = quotient_map(f.target, eq2)
    assert check_folding(compose(g, f)).verdict


@slow_laws
@given(structures_with_partitions(prime_structures(max_events=5)))
def test_bisimilarity_is_symmetric(case):
    p, eq = case
    try:
        q = quotient(p, eq)
    except InvalidResult:
        return
    hhp = decide_bisim(p, q)
    assert (decide_bisim(q, p) is None) is (hhp is None)
    if hhp is not None:
        assert decide_bisim(p, q, hereditary=False) is not None
    if quotient_map_is_folding(p, eq):
        assert hhp is not None
