"""
The canonical PES of an event structure and the maps around it.

Events of P(E) are the histories of E: causality is prefix and conflict is
incompatibility. ``phi`` folds P(E) back onto E, ``hset``/``flt`` translate
configurations between the two, ``factorize`` pushes a map out of a PES through
P(E), and ``lift`` is the action of P on maps.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from esmin.errors import ImageNotAHistory, InvalidResult, WrongClass
from esmin.folding import require_morphism
from esmin.maps import EventMap, compose
from esmin.models import PrimeES, Structure, as_event_structure
from esmin.poset import EventStructure, History, PosetConfig, is_prefix

logger = logging.getLogger(__name__)


def history_id(h: History, ordered: bool = False) -> str:
    """``owner@e1.e2...``: the owner and the sorted events of the history.

    With ``ordered`` the covering pairs follow as ``@x+y.u+v``, which tells apart
    histories of one event over the same events.
    """
    base = f"{h.owner}@{'.'.join(sorted(h.config.events))}"
    if not ordered:
        return base
    return base + "@" + ".".join(f"{x}+{y}" for x, y in sorted(h.config.reduction))


@dataclass(frozen=True)
class CanonicalPes:
    pes: PrimeES
    source: EventStructure = field(compare=False)
    ids: dict[History, str] = field(hash=False, compare=False)

    @cached_property
    def histories(self) -> dict[str, History]:
        return {eid: h for h, eid in self.ids.items()}

    def owner(self, eid: str) -> str:
        return self.histories[eid].owner

    def history(self, eid: str) -> PosetConfig:
        return self.histories[eid].config

    def id_of(self, h: History) -> str:
        try:
            return self.ids[h]
        except KeyError:
            raise ImageNotAHistory(f"{h} is not a history of {self.source.name or 'the structure'}") from None

    def hset(self, c: PosetConfig) -> PosetConfig:
        """{C[x] | x ∈ C}, ordered by prefix."""
        self.source.require(c)
        events = frozenset(self.ids[History(x, c.history(x))] for x in c.events)
        rename = {x: self.ids[History(x, c.history(x))] for x in c.events}
        return PosetConfig(events, frozenset((rename[x], rename[y]) for x, y in c.order))

    def flt(self, d: PosetConfig) -> PosetConfig:
        """∪D, with x below y iff x lies in the history of y."""
        self.pes.embedding.require(d)
        owners = {eid: self.owner(eid) for eid in d.events}
        order = frozenset(
            (owners[a], owners[b])
            for a in d.events for b in d.events
            if a != b and owners[a] in self.history(b).events
        )
        return PosetConfig(frozenset(owners.values()), order)


def canonical_pes(structure: Structure) -> CanonicalPes:
    es = as_event_structure(structure)
    by_owner = sorted(es.histories, key=lambda h: (h.owner, h.config.sort_key))
    shared = Counter(history_id(h) for h in by_owner)
    ids: dict[History, str] = {}
    taken: Counter[str] = Counter()
    for h in by_owner:
        base = history_id(h, ordered=shared[history_id(h)] > 1)
        # names holding "+" or "." may still collide
        ids[h] = base if not taken[base] else f"{base}+{taken[base]}"
        taken[base] += 1
    causality = {
        (ids[h1], ids[h2])
        for h1 in by_owner for h2 in by_owner
        if h1 != h2 and is_prefix(h1.config, h2.config)
    }
    conflict = {
        (ids[h1], ids[h2])
        for h1, h2 in combinations(by_owner, 2)
        if not es.compatible(h1.config, h2.config)
    }
    labels = {eid: es.labels[h.owner] for h, eid in ids.items()}
    name = f"P({es.name})" if es.name else "P"
    pes = PrimeES.build(ids.values(), labels, causality, conflict, name=name, close=False)
    logger.info("%s: %d histories for %d events", name, len(ids), len(es.events))
    return CanonicalPes(pes, es, ids)


def _canonical(es: Structure | CanonicalPes) -> CanonicalPes:
    return es if isinstance(es, CanonicalPes) else canonical_pes(es)


def phi(structure: Structure) -> EventMap:
    """The folding P(E) → E sending each history to its owner."""
    cp = canonical_pes(structure)
    return EventMap(cp.pes, structure, {eid: h.owner for h, eid in cp.ids.items()}, name="phi")


def hset(c: PosetConfig, es: Structure | CanonicalPes) -> PosetConfig:
    return _canonical(es).hset(c)


def flt(d: PosetConfig, es: Structure | CanonicalPes) -> PosetConfig:
    return _canonical(es).flt(d)


def factorize(f: EventMap) -> EventMap:
    """The unique g: P′ → P(E) with φ ∘ g = f, for a morphism f out of a PES."""
    if not isinstance(f.source, PrimeES):
        raise WrongClass(f"{f}: the source must be a prime event structure")
    require_morphism(f)
    p = f.source
    configs = {c.events: c for c in f.source_es.configs}
    cp = canonical_pes(f.target)
    mapping = {}
    for x in sorted(p.events):
        image = configs[p.causes(x)].rename(f.mapping)
        mapping[x] = cp.id_of(History(f(x), image.history(f(x))))
    g = EventMap(p, cp.pes, mapping, name=f"factor({f.name})" if f.name else "factor")
    back = compose(phi(f.target), g)
    if back.mapping != dict(f.mapping):
        raise InvalidResult(f"phi after the factor of {f} does not give back {f}")
    return g


def lift(f: EventMap) -> EventMap:
    """P(f): P(E) → P(E′), H ↦ f(H)."""
    require_morphism(f)
    left, right = canonical_pes(f.source), canonical_pes(f.target)
    mapping = {
        eid: right.id_of(History(f(h.owner), h.config.rename(f.mapping)))
        for h, eid in left.ids.items()
    }
    return EventMap(left.pes, right.pes, mapping, name=f"P({f.name})" if f.name else "P(f)")
