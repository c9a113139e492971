import pytest

from esmin.errors import ConfigNotInFamily
from esmin.models import as_event_structure
from esmin.poset import (
    EMPTY,
    EventStructure,
    PosetConfig,
    are_compatible,
    default_label,
    histories,
    is_prefix,
    linearisations,
    reach_chain,
    successors,
    validate_family,
)
from tests.helpers import cfg


def test_default_label_strips_index():
    assert default_label("a12") == "a"
    assert default_label("c") == "c"
    assert default_label("42") == "42"


def test_config_key_uses_covering_pairs():
    c = cfg("a b c", "a<b", "b<c")
    assert ("a", "c") in c.order
    assert c.reduction == {("a", "b"), ("b", "c")}
    assert c.key == "{a b c : a<b b<c}"
    assert EMPTY.key == "{}"


def test_history_is_downward_part():
    c = cfg("a b c", "a<c")
    assert c.history("c") == cfg("a c", "a<c")
    assert c.history("b") == cfg("b")


class TestPrefix:
    def test_unordered_is_not_prefix_of_ordered(self):
        assert not is_prefix(cfg("c"), cfg("a c", "a<c"))

    def test_empty_is_prefix(self):
        assert is_prefix(EMPTY, cfg("a c", "a<c"))

    def test_order_free_extension(self):
        assert is_prefix(cfg("a"), cfg("a b"))

    def test_order_must_agree(self):
        assert not is_prefix(cfg("a b"), cfg("a b", "a<b"))


class TestEitherC:
    def test_valid(self, es):
        report = validate_family(es("either_c"))
        assert report.valid, report.render()

    def test_compatible(self, es):
        e = es("either_c")
        assert are_compatible(cfg("a"), cfg("b"), e)
        assert not are_compatible(cfg("a c", "a<c"), cfg("b c", "b<c"), e)
        assert are_compatible(cfg("c"), cfg("c"), e)

    def test_histories_of_c(self, es):
        e = es("either_c")
        keys = [h.config.key for h in e.histories_of("c")]
        assert keys == ["{c}", "{a c : a<c}", "{b c : b<c}"]
        assert len(histories(e)) == 5

    def test_require_unknown_config(self, es):
        with pytest.raises(ConfigNotInFamily) as err:
            es("either_c").require(cfg("a b c"))
        assert err.value.code == "config-not-in-family"


def test_missing_prefix_reported():
    e = EventStructure.build([EMPTY, cfg("a c", "a<c")])
    report = validate_family(e)
    assert not report.valid
    (violation,) = [v for v in report.violations if v.clause == "prefix-closed"]
    assert violation.witness == ["{a}"]


def test_incoherent_family():
    family = [cfg(s) for s in ("a", "b", "c", "a b", "b c", "a c")]
    report = validate_family(EventStructure.build([EMPTY, *family]))
    coherence = [v for v in report.violations if v.clause == "coherence"]
    assert [v.witness for v in coherence] == [["{a}", "{b}", "{c}"]]


def test_empty_configuration_inserted_with_note():
    e = EventStructure.build([cfg("a")])
    assert EMPTY in e
    assert "empty configuration inserted" in e.notes
    assert validate_family(e).warnings == ["empty configuration inserted"]


def test_orphan_event():
    e = EventStructure.build([EMPTY, cfg("a")], events=["a", "b"])
    assert {v.clause for v in validate_family(e).violations} == {"orphan"}


class TestTransitions:
    def test_p2_initial_steps(self, es):
        e = as_event_structure(es("p2"))
        assert sorted(x for x, _ in e.single_steps(EMPTY)) == ["a12", "b3", "c"]

    def test_maximal_has_no_successor(self, es):
        e = as_event_structure(es("p2"))
        top = cfg("a12 b12 c", "a12<b12")
        assert successors(e, top) == frozenset()

    def test_asymmetric_conflict_blocks_late_event(self, es):
        e = as_event_structure(es("a0"))
        moves = successors(e, cfg("b123"))
        assert moves
        assert all("a12" not in t.added for t in moves)

    def test_successors_include_multi_event_moves(self, es):
        e = as_event_structure(es("p2"))
        added = {frozenset(t.added) for t in successors(e, EMPTY)}
        assert frozenset({"a12", "b12", "c"}) in added


@pytest.mark.parametrize("name, count", [("p2", 8), ("p0", 12), ("a0", 8), ("either_c", 7), ("split_a0", 7)])
def test_configuration_counts(es, name, count):
    assert len(as_event_structure(es(name)).configs) == count


class TestReachability:
    def test_every_linearisation_gives_a_chain(self, es):
        e = as_event_structure(es("p0"))
        c = cfg("a1 b1 c", "a1<b1")
        orders = list(linearisations(c))
        assert len(orders) == 3
        for order in orders:
            chain = reach_chain(e, c, order)
            assert [t.event for t in chain] == list(order)
            assert chain[-1].target == c

    def test_rejects_non_linearisation(self, es):
        e = as_event_structure(es("p0"))
        with pytest.raises(ValueError):
            reach_chain(e, cfg("a1 b1", "a1<b1"), ["b1", "a1"])

    def test_discrete_pair(self):
        assert sorted(linearisations(cfg("a b"))) == [("a", "b"), ("b", "a")]


def test_configs_are_deterministically_ordered(es):
    configs = as_event_structure(es("p2")).configs
    assert configs[0] == EMPTY
    sizes = [len(c) for c in configs]
    assert sizes == sorted(sizes)


def test_poset_check_flags_bad_order():
    bad = PosetConfig(frozenset({"a", "b"}), frozenset({("a", "b"), ("b", "a")}))
    assert not bad.is_poset
    report = validate_family(EventStructure.build([EMPTY, cfg("a"), cfg("b"), bad]))
    assert "poset" in {v.clause for v in report.violations}
