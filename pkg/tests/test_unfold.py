import pytest

from esmin.errors import ImageNotAHistory, WrongClass
from esmin.folding import check_folding, check_morphism, check_morphism_pes
from esmin.iso import is_isomorphic
from esmin.maps import identity_map
from esmin.models import as_event_structure, validate_model
from esmin.poset import History
from esmin.textio import parse_es
from esmin.unfold import canonical_pes, factorize, flt, hset, lift, phi
from tests.helpers import cfg


class TestCanonicalPes:
    def test_either_c_unfolds_to_five_events(self, es):
        cp = canonical_pes(es("either_c"))
        assert sorted(cp.pes.events) == ["a@a", "b@b", "c@a.c", "c@b.c", "c@c"]
        assert cp.pes.name == "P(either_c)"
        assert is_isomorphic(cp.pes, es("either_c_pes"))
        assert validate_model(cp.pes).valid

    def test_histories_of_c_are_in_conflict(self, es):
        p = canonical_pes(es("either_c")).pes
        assert p.in_conflict("c@c", "c@a.c")
        assert p.in_conflict("c@a.c", "c@b.c")
        assert p.in_conflict("a@a", "c@b.c")
        assert p.leq("a@a", "c@a.c")

    def test_pes_unfolds_to_itself(self, es):
        assert is_isomorphic(canonical_pes(es("p0")).pes, es("p0"))

    def test_owner_and_history(self, es):
        cp = canonical_pes(es("either_c"))
        assert cp.owner("c@a.c") == "c"
        assert cp.history("c@a.c") == cfg("a c", "a<c")

    def test_unknown_history(self, es):
        cp = canonical_pes(es("either_c"))
        with pytest.raises(ImageNotAHistory):
            cp.id_of(History("a", cfg("a b")))

    def test_same_events_different_order(self):
        e = parse_es(
            "kind poset\nevent a\nevent b\nevent x\n"
            "config a\nconfig b\nconfig a b\nconfig a b : a<b\n"
            "config a b x : a<x b<x\nconfig a b x : a<b b<x\n"
        )
        cp = canonical_pes(e)
        assert sorted(cp.pes.events) == ["a@a", "b@a.b", "b@b", "x@a.b.x@a+b.b+x", "x@a.b.x@a+x.b+x"]
        assert cp.history("x@a.b.x@a+b.b+x") == cfg("a b x", "a<b", "b<x")


@pytest.mark.parametrize("name", ["either_c", "p0", "a0", "split_a0", "f0"])
def test_phi_is_a_folding(es, name):
    f = phi(es(name))
    assert f.surjective
    assert check_folding(f).verdict


@pytest.mark.parametrize("name", ["either_c", "a0", "split_a0"])
def test_hset_and_flt_are_inverse(es, name):
    e = as_event_structure(es(name))
    cp = canonical_pes(e)
    configs = cp.pes.embedding
    for c in e.configs:
        d = hset(c, cp)
        assert d in configs
        assert flt(d, cp) == c


def test_hset_builds_its_own_unfolding(es):
    e = es("either_c")
    assert hset(cfg("b c", "b<c"), e).events == frozenset({"b@b", "c@b.c"})


class TestFactorize:
    def test_f02_through_p2(self, fmap):
        f = fmap("f02", "p0", "p2")
        g = factorize(f)
        assert g.name == "factor(f02)"
        assert g("a1") == "a12@a12"
        assert g("b1") == "b12@a12.b12"
        assert check_morphism(g).verdict

    def test_phi1_factors_through_unfolding(self, fmap):
        g = factorize(fmap("phi1", "either_c_pes", "either_c"))
        assert g("ca") == "c@a.c"
        assert g("c0") == "c@c"
        assert check_folding(g).verdict

    def test_needs_prime_source(self, es):
        with pytest.raises(WrongClass):
            factorize(identity_map(es("either_c")))


class TestLift:
    def test_identity(self, es):
        f = lift(identity_map(es("either_c")))
        assert all(x == y for x, y in f.mapping.items())

    def test_lift_of_folding(self, fmap):
        f = lift(fmap("f02", "p0", "p2"))
        assert f.name == "P(f02)"
        assert len(f.target.events) == 4
        assert check_morphism_pes(f).verdict
        assert check_folding(f).verdict

    def test_lift_of_non_folding(self, fmap):
        f01 = fmap("f01", "p0", "p1")
        assert not check_folding(f01).verdict
        assert not check_folding(lift(f01)).verdict
