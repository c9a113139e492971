"""
Finite labelled posets, families of posets and the transition system they induce.

A configuration (``PosetConfig``) is a finite set of events with a strict partial
order. An ``EventStructure`` is a labelled family of configurations which must be
prefix-closed and coherent; ``validate_family`` reports on both. The family is kept
explicitly, so every question about it is answered by enumeration.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from functools import cached_property, reduce
from operator import and_
from typing import ClassVar, Iterable, Iterator, Mapping, Sequence

import networkx as nx

from esmin.errors import ConfigNotInFamily
from esmin.reports import ValidationReport

logger = logging.getLogger(__name__)

Pair = tuple[str, str]

LABEL_RE = re.compile(r"^[A-Za-z0-9_]+$")
EVENT_RE = re.compile(r"^[A-Za-z0-9_+@.]+$")


def default_label(event: str) -> str:
    """The label an event id stands for: the id without its trailing index digits."""
    return event.rstrip("0123456789") or event


@dataclass(frozen=True)
class PosetConfig:
    """A configuration: events plus a strict order, stored transitively closed."""

    events: frozenset[str]
    order: frozenset[Pair] = frozenset()

    @classmethod
    def build(cls, events: Iterable[str] = (), pairs: Iterable[Pair] = ()) -> "PosetConfig":
        events = frozenset(events)
        graph = nx.DiGraph()
        graph.add_edges_from(pairs)
        if graph.number_of_edges() == 0:
            return cls(events)
        closure = nx.transitive_closure(graph, reflexive=False)
        return cls(events, frozenset(closure.edges()))

    @classmethod
    def discrete(cls, events: Iterable[str]) -> "PosetConfig":
        return cls(frozenset(events))

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.events))

    def __contains__(self, event: object) -> bool:
        return event in self.events

    def __str__(self) -> str:
        return self.key

    def less(self, x: str, y: str) -> bool:
        return (x, y) in self.order

    def leq(self, x: str, y: str) -> bool:
        return x == y or (x, y) in self.order

    @cached_property
    def is_poset(self) -> bool:
        if any(x == y or x not in self.events or y not in self.events for x, y in self.order):
            return False
        succ: dict[str, set[str]] = {}
        for x, y in self.order:
            succ.setdefault(x, set()).add(y)
        return all(
            (x, z) in self.order
            for x, y in self.order
            for z in succ.get(y, ())
        )

    @cached_property
    def _below(self) -> dict[str, frozenset[str]]:
        below: dict[str, set[str]] = {x: set() for x in self.events}
        for x, y in self.order:
            below.setdefault(y, set()).add(x)
        return {x: frozenset(ys) for x, ys in below.items()}

    def below(self, x: str) -> frozenset[str]:
        """Events strictly below ``x``."""
        return self._below.get(x, frozenset())

    def above(self, x: str) -> frozenset[str]:
        return frozenset(y for (z, y) in self.order if z == x)

    @cached_property
    def maximal(self) -> frozenset[str]:
        return self.events - {x for x, _ in self.order}

    @cached_property
    def minimal(self) -> frozenset[str]:
        return self.events - {y for _, y in self.order}

    @cached_property
    def reduction(self) -> frozenset[Pair]:
        """The covering pairs of the order (its transitive reduction)."""
        return frozenset(
            (x, y) for x, y in self.order
            if not any((x, z) in self.order for z in self.below(y) if z != x)
        )

    @cached_property
    def key(self) -> str:
        """Canonical text: sorted events, then sorted covering pairs."""
        body = " ".join(sorted(self.events))
        if self.reduction:
            body += " : " + " ".join(f"{x}<{y}" for x, y in sorted(self.reduction))
        return "{" + body + "}"

    @cached_property
    def sort_key(self) -> tuple[int, str]:
        return (len(self.events), self.key)

    def restrict(self, subset: Iterable[str]) -> "PosetConfig":
        keep = self.events & frozenset(subset)
        return PosetConfig(keep, frozenset((x, y) for x, y in self.order if x in keep and y in keep))

    def without(self, event: str) -> "PosetConfig":
        return self.restrict(self.events - {event})

    def history(self, x: str) -> "PosetConfig":
        """The history of ``x`` in this configuration: ``x`` and everything below it."""
        return self.restrict(self.below(x) | {x})

    def rename(self, mapping: Mapping[str, str]) -> "PosetConfig":
        """Image under an injective renaming, with the transported order."""
        return PosetConfig(
            frozenset(mapping[x] for x in self.events),
            frozenset((mapping[x], mapping[y]) for x, y in self.order),
        )

    def digraph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(sorted(self.events))
        graph.add_edges_from(sorted(self.order))
        return graph

    def linearisations(self) -> Iterator[tuple[str, ...]]:
        if not self.events:
            yield ()
            return
        graph = nx.DiGraph()
        graph.add_nodes_from(sorted(self.events))
        graph.add_edges_from(sorted(self.reduction))
        for order in nx.all_topological_sorts(graph):
            yield tuple(order)


EMPTY = PosetConfig(frozenset())


@dataclass(frozen=True)
class History:
    """The history ``config`` of its maximum ``owner``."""

    owner: str
    config: PosetConfig

    @property
    def key(self) -> str:
        return f"{self.owner}@{self.config.key}"

    def __str__(self) -> str:
        return self.key


@dataclass(frozen=True)
class Transition:
    source: PosetConfig
    added: frozenset[str]
    target: PosetConfig

    @property
    def single(self) -> bool:
        return len(self.added) == 1

    @property
    def event(self) -> str:
        """The added event of a single-event transition."""
        (x,) = self.added
        return x

    def __str__(self) -> str:
        return f"{self.source.key} -{'+'.join(sorted(self.added))}-> {self.target.key}"


@dataclass(frozen=True)
class EventStructure:
    """A labelled family of finite posets (the poset event structure view).

    Built with ``EventStructure.build``, which inserts the empty configuration when it
    is missing. Validity (prefix-closure, coherence) is not enforced on construction;
    ask ``validate_family``.
    """

    events: frozenset[str]
    labels: Mapping[str, str] = field(hash=False)
    family: frozenset[PosetConfig] = frozenset()
    name: str = field(default="", compare=False)
    notes: tuple[str, ...] = field(default=(), compare=False)

    kind: ClassVar[str] = "poset"

    @classmethod
    def build(
        cls,
        configs: Iterable[PosetConfig],
        labels: Mapping[str, str] | None = None,
        events: Iterable[str] | None = None,
        name: str = "",
        notes: Sequence[str] = (),
    ) -> "EventStructure":
        family = set(configs)
        notes = list(notes)
        if EMPTY not in family:
            family.add(EMPTY)
            notes.append("empty configuration inserted")
            logger.warning("%s: empty configuration inserted", name or "structure")
        union: set[str] = set()
        for c in family:
            union |= c.events
        events = frozenset(union if events is None else events)
        all_labels = {x: default_label(x) for x in events}
        all_labels.update(labels or {})
        return cls(events, all_labels, frozenset(family), name, tuple(notes))

    def __contains__(self, config: object) -> bool:
        return config in self.family

    def label(self, event: str) -> str:
        return self.labels[event]

    def require(self, config: PosetConfig) -> int:
        try:
            return self.index[config]
        except KeyError:
            raise ConfigNotInFamily(config) from None

    @cached_property
    def configs(self) -> tuple[PosetConfig, ...]:
        """The family in deterministic order: by size, then canonical text."""
        return tuple(sorted(self.family, key=lambda c: c.sort_key))

    @cached_property
    def index(self) -> dict[PosetConfig, int]:
        return {c: i for i, c in enumerate(self.configs)}

    @cached_property
    def steps(self) -> tuple[tuple[tuple[str, int], ...], ...]:
        """For each configuration index, its single-event successors ``(event, index)``."""
        forward: list[list[tuple[str, int]]] = [[] for _ in self.configs]
        for j, c in enumerate(self.configs):
            for x in sorted(c.maximal):
                i = self.index.get(c.without(x))
                if i is not None:
                    forward[i].append((x, j))
        return tuple(tuple(s) for s in forward)

    @cached_property
    def back_steps(self) -> tuple[tuple[tuple[str, int], ...], ...]:
        """For each configuration index, its one-step prefixes ``(removed event, index)``."""
        back: list[list[tuple[str, int]]] = [[] for _ in self.configs]
        for i, succ in enumerate(self.steps):
            for x, j in succ:
                back[j].append((x, i))
        return tuple(tuple(s) for s in back)

    @cached_property
    def up(self) -> tuple[int, ...]:
        """Bitmask of the configurations each configuration is a prefix of."""
        masks = [1 << i for i in range(len(self.configs))]
        for i in reversed(range(len(self.configs))):
            for _, j in self.steps[i]:
                masks[i] |= masks[j]
        return tuple(masks)

    @cached_property
    def containing(self) -> dict[str, int]:
        """Bitmask of the configurations containing each event."""
        masks = {x: 0 for x in self.events}
        for i, c in enumerate(self.configs):
            for x in c.events:
                masks[x] = masks.get(x, 0) | (1 << i)
        return masks

    @cached_property
    def precedence(self) -> frozenset[Pair]:
        """Semantic precedence: x before y in every configuration holding both."""
        broken: set[Pair] = set()
        for c in self.configs:
            for x in c.events:
                for y in c.events:
                    if x != y and (x, y) not in c.order:
                        broken.add((x, y))
        return frozenset(
            (x, y) for x in self.events for y in self.events
            if x != y and (x, y) not in broken
        )

    def cooccur(self, x: str, y: str) -> bool:
        return bool(self.containing.get(x, 0) & self.containing.get(y, 0))

    def compatible(self, c1: PosetConfig, c2: PosetConfig) -> bool:
        return bool(self.up[self.require(c1)] & self.up[self.require(c2)])

    def upper_bounds(self, configs: Iterable[PosetConfig]) -> list[PosetConfig]:
        mask = reduce(and_, (self.up[self.require(c)] for c in configs), (1 << len(self.configs)) - 1)
        return [c for i, c in enumerate(self.configs) if mask >> i & 1]

    def single_steps(self, config: PosetConfig) -> list[tuple[str, PosetConfig]]:
        return [(x, self.configs[j]) for x, j in self.steps[self.require(config)]]

    def successors(self, config: PosetConfig) -> frozenset[Transition]:
        i = self.require(config)
        mask = self.up[i] & ~(1 << i)
        return frozenset(
            Transition(config, c.events - config.events, c)
            for j, c in enumerate(self.configs) if mask >> j & 1
        )

    @cached_property
    def histories(self) -> frozenset[History]:
        return frozenset(History(x, c.history(x)) for c in self.configs for x in c.events)

    def histories_of(self, event: str) -> list[History]:
        return sorted((h for h in self.histories if h.owner == event), key=lambda h: h.config.sort_key)


def is_prefix(c1: PosetConfig, c2: PosetConfig) -> bool:
    """Whether ``c1`` is a prefix of ``c2``: a down-closed part with the same order."""
    if not c1.events <= c2.events:
        return False
    if c1.order != c2.restrict(c1.events).order:
        return False
    return all(y in c1.events for y, x in c2.order if x in c1.events)


def are_compatible(c1: PosetConfig, c2: PosetConfig, es: EventStructure) -> bool:
    return es.compatible(c1, c2)


def histories(es: EventStructure) -> frozenset[History]:
    return es.histories


def successors(es: EventStructure, config: PosetConfig) -> frozenset[Transition]:
    return es.successors(config)


def linearisations(config: PosetConfig) -> Iterator[tuple[str, ...]]:
    return config.linearisations()


def reach_chain(
    es: EventStructure,
    config: PosetConfig,
    linearisation: Sequence[str] | None = None,
) -> list[Transition]:
    """Single-event transitions leading from the empty configuration to ``config``.

    Follows ``linearisation`` when given; it must list the events of ``config`` in
    an order compatible with its partial order.
    """
    es.require(config)
    if linearisation is None:
        linearisation = next(config.linearisations())
    if sorted(linearisation) != sorted(config.events):
        raise ValueError(f"{list(linearisation)} does not enumerate {config.key}")
    chain: list[Transition] = []
    current = EMPTY
    for k, x in enumerate(linearisation):
        if any(y not in linearisation[:k] for y in config.below(x)):
            raise ValueError(f"{list(linearisation)} is not a linearisation of {config.key}")
        nxt = config.restrict(linearisation[: k + 1])
        es.require(nxt)
        chain.append(Transition(current, frozenset({x}), nxt))
        current = nxt
    return chain


def validate_family(es: EventStructure) -> ValidationReport:
    """Check the axioms of a poset event structure, listing every violated clause."""
    report = ValidationReport(subject=es.name or "event structure", warnings=list(es.notes))
    covered: set[str] = set()
    for c in es.configs:
        covered |= c.events
        if not c.is_poset:
            report.add("poset", [c.key], "local order is not a partial order")
        outside = c.events - es.events
        if outside:
            report.add("events", [c.key, *sorted(outside)], "configuration uses undeclared events")
    orphans = es.events - covered
    if orphans:
        report.add("orphan", sorted(orphans), "events in no configuration")
    for x in sorted(es.events):
        if not EVENT_RE.match(x):
            report.add("event-id", [x], "event id outside [A-Za-z0-9_+@.]")
        if not LABEL_RE.match(es.labels.get(x, "")):
            report.add("label", [x], f"bad or missing label {es.labels.get(x)!r}")
    if EMPTY not in es.family:
        report.add("empty", [], "the empty configuration is missing")

    missing: dict[PosetConfig, PosetConfig] = {}
    for c in es.configs:
        for x in sorted(c.maximal):
            prefix = c.without(x)
            if prefix not in es.family and prefix not in missing:
                missing[prefix] = c
    for prefix, c in sorted(missing.items(), key=lambda kv: kv[0].sort_key):
        report.add("prefix-closed", [prefix.key], f"prefix of {c.key} is missing")

    for witness in _incoherent_sets(es):
        report.add("coherence", [c.key for c in witness],
                   "pairwise compatible configurations without an upper bound")
    return report


def _incoherent_sets(es: EventStructure) -> list[list[PosetConfig]]:
    nodes = [i for i, c in enumerate(es.configs) if c.events]
    graph = nx.Graph()
    graph.add_nodes_from(nodes)
    for k, i in enumerate(nodes):
        for j in nodes[k + 1:]:
            if es.up[i] & es.up[j]:
                graph.add_edge(i, j)
    full = (1 << len(es.configs)) - 1
    seen: set[frozenset[int]] = set()
    found: list[list[PosetConfig]] = []
    for clique in nx.find_cliques(graph):
        if reduce(and_, (es.up[i] for i in clique), full):
            continue
        members = sorted(clique)
        for i in list(members):
            trial = [m for m in members if m != i]
            if len(trial) > 1 and not reduce(and_, (es.up[m] for m in trial), full):
                members = trial
        key = frozenset(members)
        if key not in seen:
            seen.add(key)
            found.append([es.configs[i] for i in members])
    found.sort(key=lambda cs: [c.sort_key for c in cs])
    return found
