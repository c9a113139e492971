"""Event maps (carriers of morphisms and foldings) and event partitions."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Mapping

import networkx as nx

from esmin.errors import InvalidPartition, NonTotalMap
from esmin.models import Structure, as_event_structure
from esmin.poset import EventStructure, PosetConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EventPartition:
    """An equivalence on events, as a set of disjoint non-empty classes."""

    classes: frozenset[frozenset[str]]

    @classmethod
    def of(cls, classes: Iterable[Iterable[str]], events: Iterable[str] = ()) -> "EventPartition":
        """Build from the listed classes; events of ``events`` not listed become singletons."""
        blocks: list[frozenset[str]] = []
        seen: set[str] = set()
        for block in classes:
            block = frozenset(block)
            if not block:
                continue
            overlap = block & seen
            if overlap:
                raise InvalidPartition("classes overlap on " + ", ".join(sorted(overlap)))
            seen |= block
            blocks.append(block)
        blocks.extend(frozenset({x}) for x in sorted(set(events) - seen))
        return cls(frozenset(blocks))

    @classmethod
    def identity(cls, events: Iterable[str]) -> "EventPartition":
        return cls(frozenset(frozenset({x}) for x in events))

    @cached_property
    def events(self) -> frozenset[str]:
        return frozenset(x for block in self.classes for x in block)

    @cached_property
    def _index(self) -> dict[str, frozenset[str]]:
        return {x: block for block in self.classes for x in block}

    def block(self, x: str) -> frozenset[str]:
        return self._index[x]

    def same(self, x: str, y: str) -> bool:
        return self._index[x] == self._index[y]

    @staticmethod
    def class_name(block: Iterable[str]) -> str:
        """Quotient event id of a class: members sorted and joined by ``+``."""
        return "+".join(sorted(block))

    def name_of(self, x: str) -> str:
        return self.class_name(self._index[x])

    @cached_property
    def nontrivial(self) -> tuple[frozenset[str], ...]:
        return tuple(sorted((b for b in self.classes if len(b) > 1), key=lambda b: sorted(b)))

    @property
    def is_identity(self) -> bool:
        return not self.nontrivial

    @property
    def is_elementary(self) -> bool:
        """At most one class merges events."""
        return len(self.nontrivial) <= 1

    def join(self, other: "EventPartition") -> "EventPartition":
        """Transitive closure of the union of both equivalences."""
        graph = nx.Graph()
        graph.add_nodes_from(self.events | other.events)
        for part in (self, other):
            for block in part.classes:
                first, *rest = sorted(block)
                graph.add_edges_from((first, x) for x in rest)
        return EventPartition(frozenset(frozenset(c) for c in nx.connected_components(graph)))

    def refines(self, other: "EventPartition") -> bool:
        """Every class of ``self`` lies inside a class of ``other``."""
        return all(block <= other.block(next(iter(block))) for block in self.classes)

    def coarser_than(self, other: "EventPartition") -> bool:
        return other.refines(self) and self != other

    @cached_property
    def key(self) -> str:
        return " ".join(sorted(self.class_name(b) for b in self.classes))

    def __str__(self) -> str:
        return self.key

    def elementary_refinements(self) -> Iterator["EventPartition"]:
        """Elementary partitions strictly between the identity and ``self``.

        Each merges a single subset (of size two or more) of one class of ``self``.
        """
        for block in self.nontrivial:
            members = sorted(block)
            for size in range(2, len(members) + 1):
                for subset in combinations(members, size):
                    candidate = EventPartition.of([subset], self.events)
                    if candidate != self:
                        yield candidate


@dataclass(frozen=True)
class EventMap:
    """A total function from the source's events to the target's events."""

    source: Structure
    target: Structure
    mapping: Mapping[str, str] = field(hash=False)
    name: str = field(default="", compare=False)

    @classmethod
    def build(
        cls,
        source: Structure,
        target: Structure,
        mapping: Mapping[str, str],
        name: str = "",
    ) -> "EventMap":
        missing = source.events - set(mapping)
        unknown = set(mapping) - source.events
        outside = {y for x, y in mapping.items() if x in source.events and y not in target.events}
        if missing or unknown or outside:
            raise NonTotalMap(missing, unknown, outside)
        return cls(source, target, dict(mapping), name)

    @classmethod
    def identity(cls, structure: Structure, name: str = "id") -> "EventMap":
        return cls(structure, structure, {x: x for x in structure.events}, name)

    def __call__(self, x: str) -> str:
        return self.mapping[x]

    def __str__(self) -> str:
        return self.name or "map"

    @cached_property
    def source_es(self) -> EventStructure:
        return as_event_structure(self.source)

    @cached_property
    def target_es(self) -> EventStructure:
        return as_event_structure(self.target)

    def image(self, events: Iterable[str]) -> frozenset[str]:
        return frozenset(self.mapping[x] for x in events)

    def preimage(self, y: str) -> frozenset[str]:
        return self._fibres.get(y, frozenset())

    @cached_property
    def _fibres(self) -> dict[str, frozenset[str]]:
        fibres: dict[str, set[str]] = {}
        for x, y in self.mapping.items():
            fibres.setdefault(y, set()).add(x)
        return {y: frozenset(xs) for y, xs in fibres.items()}

    def injective_on(self, events: Iterable[str]) -> bool:
        events = list(events)
        return len(self.image(events)) == len(events)

    def apply(self, config: PosetConfig) -> PosetConfig | None:
        """f(C) with the transported order; None when f is not injective on C."""
        if not self.injective_on(config.events):
            return None
        return config.rename(self.mapping)

    @property
    def surjective(self) -> bool:
        return set(self.mapping.values()) == set(self.target.events)

    def partition(self) -> EventPartition:
        """The equivalence ≡_f: events identified when they have the same image."""
        return EventPartition(frozenset(self._fibres.values()))

    def then(self, after: "EventMap") -> "EventMap":
        """``after ∘ self``."""
        return compose(after, self)


def compose(g: EventMap, f: EventMap) -> EventMap:
    """g ∘ f; ``f``'s target must have the events of ``g``'s source."""
    if f.target.events != g.source.events:
        raise NonTotalMap(unknown=set(f.target.events) ^ set(g.source.events))
    name = f"{g.name}.{f.name}" if f.name and g.name else ""
    return EventMap(f.source, g.target, {x: g(f(x)) for x in f.mapping}, name)


def identity_map(structure: Structure) -> EventMap:
    return EventMap.identity(structure)
