"""
Syntactic event structure classes: prime (PES), asymmetric (AES), flow (FES) and
bundle (BES) event structures.

Each class validates its own axioms (``validate_model``), enumerates its
configurations into an ``EventStructure`` (``configs_*``), and PES/AES can be
recognised back from a family (``recognize_pes`` / ``recognize_aes``).

Relations are stored as sets of ordered pairs. Causality is strict (x < y) and
kept transitively closed; symmetric relations hold both orientations.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import ClassVar, Iterable, Mapping, Union

import networkx as nx

from esmin.errors import InvalidModel, NonExecutableEvent
from esmin.poset import EventStructure, Pair, PosetConfig, default_label, validate_family
from esmin.reports import ValidationReport

logger = logging.getLogger(__name__)


def _labels(events: frozenset[str], labels: Mapping[str, str] | None) -> dict[str, str]:
    out = {x: default_label(x) for x in events}
    out.update(labels or {})
    return out


def _symmetric(pairs: Iterable[Pair]) -> frozenset[Pair]:
    out: set[Pair] = set()
    for x, y in pairs:
        out.add((x, y))
        out.add((y, x))
    return frozenset(out)


def _transitive(pairs: Iterable[Pair]) -> frozenset[Pair]:
    graph = nx.DiGraph()
    graph.add_edges_from(pairs)
    if graph.number_of_edges() == 0:
        return frozenset()
    return frozenset(nx.transitive_closure(graph, reflexive=False).edges())


def _strict_below(events: Iterable[str], order: Iterable[Pair]) -> dict[str, frozenset[str]]:
    below: dict[str, set[str]] = {x: set() for x in events}
    for x, y in order:
        below.setdefault(y, set()).add(x)
    return {x: frozenset(s) for x, s in below.items()}


def _acyclic(nodes: Iterable[str], pairs: Iterable[Pair]) -> bool:
    keep = set(nodes)
    graph = nx.DiGraph()
    graph.add_nodes_from(keep)
    graph.add_edges_from((x, y) for x, y in pairs if x in keep and y in keep)
    return nx.is_directed_acyclic_graph(graph)


def _cycle(nodes: Iterable[str], pairs: Iterable[Pair]) -> list[str]:
    keep = set(nodes)
    graph = nx.DiGraph()
    graph.add_nodes_from(sorted(keep))
    graph.add_edges_from(sorted((x, y) for x, y in pairs if x in keep and y in keep))
    try:
        return [f"{x}->{y}" for x, y in nx.find_cycle(graph)]
    except nx.NetworkXNoCycle:
        return []


class _Causal:
    """Helpers shared by classes with a causality relation."""

    events: frozenset[str]
    causality: frozenset[Pair]

    @cached_property
    def _below(self) -> dict[str, frozenset[str]]:
        return _strict_below(self.events, self.causality)

    @cached_property
    def _above(self) -> dict[str, frozenset[str]]:
        return _strict_below(self.events, ((y, x) for x, y in self.causality))

    def strict_causes(self, x: str) -> frozenset[str]:
        return self._below.get(x, frozenset())

    def causes(self, x: str) -> frozenset[str]:
        """⌈x⌉: the causes of ``x``, including ``x`` itself."""
        return self.strict_causes(x) | {x}

    def consequences(self, x: str) -> frozenset[str]:
        return self._above.get(x, frozenset())

    def causes_of(self, xs: Iterable[str]) -> frozenset[str]:
        out: set[str] = set()
        for x in xs:
            out |= self.causes(x)
        return frozenset(out)

    def leq(self, x: str, y: str) -> bool:
        return x == y or (x, y) in self.causality

    def less(self, x: str, y: str) -> bool:
        return (x, y) in self.causality

    @cached_property
    def direct_causality(self) -> frozenset[Pair]:
        return frozenset(
            (x, y) for x, y in self.causality
            if not any((x, z) in self.causality for z in self.strict_causes(y) if z != x)
        )

    def topological(self) -> list[str]:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.events)
        graph.add_edges_from(self.direct_causality)
        return list(nx.lexicographical_topological_sort(graph))


@dataclass(frozen=True)
class PrimeES(_Causal):
    events: frozenset[str]
    labels: Mapping[str, str] = field(hash=False)
    causality: frozenset[Pair] = frozenset()
    conflict: frozenset[Pair] = frozenset()
    name: str = field(default="", compare=False)
    notes: tuple[str, ...] = field(default=(), compare=False)

    kind: ClassVar[str] = "pes"

    @classmethod
    def build(
        cls,
        events: Iterable[str],
        labels: Mapping[str, str] | None = None,
        causality: Iterable[Pair] = (),
        conflict: Iterable[Pair] = (),
        name: str = "",
        close: bool = True,
    ) -> "PrimeES":
        events = frozenset(events)
        model = cls(events, _labels(events, labels), frozenset(causality), _symmetric(conflict), name)
        return model.closed() if close else model

    def closed(self) -> "PrimeES":
        """Close causality transitively and conflict under inheritance."""
        le = _transitive(self.causality)
        above = _strict_below(self.events, ((y, x) for x, y in le))
        cf: set[Pair] = set(self.conflict)
        for x, y in self.conflict:
            for x2 in above.get(x, frozenset()) | {x}:
                for y2 in above.get(y, frozenset()) | {y}:
                    cf.add((x2, y2))
                    cf.add((y2, x2))
        added_le = len(le - self.causality)
        added_cf = (len(cf) - len(self.conflict)) // 2
        notes = self.notes
        if added_le or added_cf:
            note = f"closure added {added_le} causality and {added_cf} conflict pairs"
            logger.info("%s: %s", self.name or "pes", note)
            notes = notes + (note,)
        return replace(self, causality=le, conflict=frozenset(cf), notes=notes)

    def in_conflict(self, x: str, y: str) -> bool:
        return (x, y) in self.conflict

    def consistent(self, xs: Iterable[str]) -> bool:
        xs = list(xs)
        return not any((x, y) in self.conflict for x in xs for y in xs)

    def concurrent(self, x: str) -> frozenset[str]:
        """Events neither causally related to nor in conflict with ``x``."""
        return frozenset(
            y for y in self.events
            if not (self.leq(x, y) or self.leq(y, x) or self.in_conflict(x, y))
        )

    @cached_property
    def direct_conflict(self) -> frozenset[Pair]:
        """Non-inherited conflicts, one orientation each (x < y lexicographically)."""
        out = set()
        for x, y in self.conflict:
            if x > y:
                continue
            inherited = any(
                (x2, y2) in self.conflict and (x2, y2) != (x, y)
                for x2 in self.causes(x) for y2 in self.causes(y)
            )
            if not inherited:
                out.add((x, y))
        return frozenset(out)

    @cached_property
    def embedding(self) -> EventStructure:
        return configs_pes(self)


@dataclass(frozen=True)
class AsymES(_Causal):
    events: frozenset[str]
    labels: Mapping[str, str] = field(hash=False)
    causality: frozenset[Pair] = frozenset()
    aconflict: frozenset[Pair] = frozenset()
    name: str = field(default="", compare=False)
    notes: tuple[str, ...] = field(default=(), compare=False)

    kind: ClassVar[str] = "aes"

    @classmethod
    def build(
        cls,
        events: Iterable[str],
        labels: Mapping[str, str] | None = None,
        causality: Iterable[Pair] = (),
        aconflict: Iterable[Pair] = (),
        name: str = "",
        close: bool = True,
    ) -> "AsymES":
        events = frozenset(events)
        model = cls(events, _labels(events, labels), frozenset(causality), frozenset(aconflict), name)
        return model.closed() if close else model

    @classmethod
    def from_pes(cls, p: PrimeES) -> "AsymES":
        """The AES with the same configurations: each conflict becomes ↗ both ways."""
        return cls.build(p.events, p.labels, p.causality, p.conflict, name=p.name)

    def closed(self) -> "AsymES":
        """Close ↗ under: x<y gives x↗y; x↗y<z gives x↗z; cycles on ⌈x⌉∪⌈y⌉ give x↗y."""
        le = _transitive(self.causality)
        below = _strict_below(self.events, le)
        above = _strict_below(self.events, ((y, x) for x, y in le))
        ac: set[Pair] = set(self.aconflict) | set(le)
        events = sorted(self.events)
        while True:
            before = len(ac)
            for x, y in list(ac):
                for z in above.get(y, ()):
                    ac.add((x, z))
            for i, x in enumerate(events):
                for y in events[i + 1:]:
                    if (x, y) in ac and (y, x) in ac:
                        continue
                    scope = below.get(x, frozenset()) | below.get(y, frozenset()) | {x, y}
                    if not _acyclic(scope, ac):
                        ac.add((x, y))
                        ac.add((y, x))
            if len(ac) == before:
                break
        added = len(ac) - len(self.aconflict)
        notes = self.notes
        if added:
            note = f"closure added {added} asymmetric conflict pairs"
            logger.info("%s: %s", self.name or "aes", note)
            notes = notes + (note,)
        return replace(self, causality=le, aconflict=frozenset(ac), notes=notes)

    def ac(self, x: str, y: str) -> bool:
        """x ↗ y: x precedes y whenever both occur."""
        return (x, y) in self.aconflict

    def ac_any(self, xs: Iterable[str], ys: Iterable[str]) -> bool:
        """Some element of ``xs`` ↗ some element of ``ys``."""
        ys = list(ys)
        return any((x, y) in self.aconflict for x in xs for y in ys)

    def is_configuration(self, xs: Iterable[str]) -> bool:
        xs = frozenset(xs)
        return self.causes_of(xs) == xs and _acyclic(xs, self.aconflict)

    @cached_property
    def direct_aconflict(self) -> frozenset[Pair]:
        return frozenset(
            (x, y) for x, y in self.aconflict
            if (x, y) not in self.causality
            and not any((x, w) in self.aconflict for w in self.strict_causes(y))
        )

    @cached_property
    def embedding(self) -> EventStructure:
        return configs_aes(self)


@dataclass(frozen=True)
class FlowES:
    events: frozenset[str]
    labels: Mapping[str, str] = field(hash=False)
    flow: frozenset[Pair] = frozenset()
    conflict: frozenset[Pair] = frozenset()
    name: str = field(default="", compare=False)
    notes: tuple[str, ...] = field(default=(), compare=False)

    kind: ClassVar[str] = "fes"

    @classmethod
    def build(
        cls,
        events: Iterable[str],
        labels: Mapping[str, str] | None = None,
        flow: Iterable[Pair] = (),
        conflict: Iterable[Pair] = (),
        name: str = "",
    ) -> "FlowES":
        events = frozenset(events)
        return cls(events, _labels(events, labels), frozenset(flow), _symmetric(conflict), name)

    @cached_property
    def embedding(self) -> EventStructure:
        return configs_fes(self)


@dataclass(frozen=True)
class BundleES:
    events: frozenset[str]
    labels: Mapping[str, str] = field(hash=False)
    bundles: frozenset[tuple[frozenset[str], str]] = frozenset()
    conflict: frozenset[Pair] = frozenset()
    name: str = field(default="", compare=False)
    notes: tuple[str, ...] = field(default=(), compare=False)

    kind: ClassVar[str] = "bes"

    @classmethod
    def build(
        cls,
        events: Iterable[str],
        labels: Mapping[str, str] | None = None,
        bundles: Iterable[tuple[Iterable[str], str]] = (),
        conflict: Iterable[Pair] = (),
        name: str = "",
    ) -> "BundleES":
        events = frozenset(events)
        bundle_set = frozenset((frozenset(xs), y) for xs, y in bundles)
        return cls(events, _labels(events, labels), bundle_set, _symmetric(conflict), name)

    @cached_property
    def embedding(self) -> EventStructure:
        return configs_bes(self)


Model = Union[PrimeES, AsymES, FlowES, BundleES]
Structure = Union[EventStructure, PrimeES, AsymES, FlowES, BundleES]


def as_event_structure(structure: Structure, prune: bool = False) -> EventStructure:
    """The poset event structure view of any structure."""
    if isinstance(structure, EventStructure):
        return structure
    if prune and isinstance(structure, FlowES):
        return configs_fes(structure, prune=True)
    if prune and isinstance(structure, BundleES):
        return configs_bes(structure, prune=True)
    return structure.embedding


# validation


def _relation_events(report: ValidationReport, model: Model, name: str, pairs: Iterable[Pair]) -> None:
    for x, y in sorted(pairs):
        for e in (x, y):
            if e not in model.events:
                report.add("events", [e], f"{name} mentions undeclared event")


def _check_conflict(report: ValidationReport, conflict: frozenset[Pair]) -> None:
    for x, y in sorted(conflict):
        if x == y:
            report.add("conflict-irreflexive", [x], "event in conflict with itself")
        elif (y, x) not in conflict:
            report.add("conflict-symmetric", [x, y], "conflict is not symmetric")


def _check_order(report: ValidationReport, events: frozenset[str], causality: frozenset[Pair]) -> bool:
    cycle = _cycle(events, causality)
    if cycle or any(x == y for x, y in causality):
        report.add("partial-order", cycle or sorted(x for x, y in causality if x == y),
                   "causality has a cycle")
        return False
    for x, y in sorted(causality):
        for _, z in sorted(p for p in causality if p[0] == y):
            if (x, z) not in causality:
                report.add("partial-order", [x, y, z], "causality is not transitive")
    return True


def validate_model(model: Model) -> ValidationReport:
    """Check the axioms of a syntactic model, with witnesses for each failure."""
    report = ValidationReport(subject=model.name or model.kind, warnings=list(model.notes))
    for x in sorted(model.events):
        if x not in model.labels:
            report.add("label", [x], "missing label")
    if isinstance(model, PrimeES):
        _validate_pes(report, model)
    elif isinstance(model, AsymES):
        _validate_aes(report, model)
    elif isinstance(model, FlowES):
        _relation_events(report, model, "flow", model.flow)
        _relation_events(report, model, "conflict", model.conflict)
        for x, y in sorted(model.flow):
            if x == y:
                report.add("flow-irreflexive", [x], "event flows into itself")
        _check_conflict(report, model.conflict)
    elif isinstance(model, BundleES):
        _relation_events(report, model, "conflict", model.conflict)
        _check_conflict(report, model.conflict)
        for xs, y in sorted(model.bundles, key=lambda b: (b[1], sorted(b[0]))):
            _relation_events(report, model, "bundle", [(x, y) for x in xs])
            for a in sorted(xs):
                for b in sorted(xs):
                    if a < b and (a, b) not in model.conflict:
                        report.add("bundle", [a, b, y], "bundle members must be pairwise in conflict")
    else:
        raise TypeError(f"not a model: {type(model).__name__}")
    return report


def _validate_pes(report: ValidationReport, p: PrimeES) -> None:
    _relation_events(report, p, "causality", p.causality)
    _relation_events(report, p, "conflict", p.conflict)
    _check_order(report, p.events, p.causality)
    _check_conflict(report, p.conflict)
    for x, y in sorted(p.conflict):
        for z in sorted(p.consequences(y)):
            if (x, z) not in p.conflict:
                report.add("conflict-hereditary", [x, y, z], f"{x}#{y} and {y}<{z} but not {x}#{z}")


def _validate_aes(report: ValidationReport, a: AsymES) -> None:
    _relation_events(report, a, "causality", a.causality)
    _relation_events(report, a, "asymmetric conflict", a.aconflict)
    if not _check_order(report, a.events, a.causality):
        return
    for x, y in sorted(a.causality):
        if (x, y) not in a.aconflict:
            report.add("aes-1", [x, y], f"{x}<{y} but not {x}↗{y}")
    for x, y in sorted(a.aconflict):
        for z in sorted(a.consequences(y)):
            if (x, z) not in a.aconflict:
                report.add("aes-2", [x, y, z], f"{x}↗{y}<{z} but not {x}↗{z}")
    for x in sorted(a.events):
        cycle = _cycle(a.causes(x), a.aconflict)
        if cycle:
            report.add("aes-3", [x, *cycle], f"↗ is cyclic on the causes of {x}")
    events = sorted(a.events)
    for x in events:
        for y in events:
            if x == y or (x, y) in a.aconflict:
                continue
            if not _acyclic(a.causes(x) | a.causes(y), a.aconflict):
                report.add("aes-4", [x, y], f"↗ cyclic on causes of {x},{y} but not {x}↗{y}")


def _require_valid(model: Model) -> None:
    report = validate_model(model)
    if not report.valid:
        raise InvalidModel(report)


# configuration enumeration


def _enumerate(order: list[str], admissible) -> list[frozenset[str]]:
    """All subsets built by deciding events in ``order``; ``admissible`` guards inclusion."""
    found: list[frozenset[str]] = []
    chosen: set[str] = set()

    def walk(k: int) -> None:
        if k == len(order):
            found.append(frozenset(chosen))
            return
        walk(k + 1)
        x = order[k]
        if admissible(x, chosen):
            chosen.add(x)
            walk(k + 1)
            chosen.discard(x)

    walk(0)
    return found


def configs_pes(p: PrimeES) -> EventStructure:
    """Conflict-free causally closed sets, ordered by restricted causality."""
    _require_valid(p)

    def admissible(x: str, chosen: set[str]) -> bool:
        return p.strict_causes(x) <= chosen and not any((x, y) in p.conflict for y in chosen)

    configs = [
        PosetConfig(s, frozenset((x, y) for x, y in p.causality if x in s and y in s))
        for s in _enumerate(p.topological(), admissible)
    ]
    logger.debug("%s: %d configurations", p.name or "pes", len(configs))
    return EventStructure.build(configs, p.labels, p.events, name=p.name)


def configs_aes(a: AsymES) -> EventStructure:
    """Causally closed ↗-acyclic sets, ordered by the closure of ↗."""
    _require_valid(a)

    def admissible(x: str, chosen: set[str]) -> bool:
        return a.strict_causes(x) <= chosen and _acyclic(chosen | {x}, a.aconflict)

    configs = [
        PosetConfig.build(s, ((x, y) for x, y in a.aconflict if x in s and y in s))
        for s in _enumerate(a.topological(), admissible)
    ]
    logger.debug("%s: %d configurations", a.name or "aes", len(configs))
    return EventStructure.build(configs, a.labels, a.events, name=a.name)


def _finish(model: FlowES | BundleES, configs: list[PosetConfig], prune: bool) -> EventStructure:
    covered: set[str] = set()
    for c in configs:
        covered |= c.events
    dead = model.events - covered
    events = model.events
    notes: list[str] = []
    if dead:
        if not prune:
            raise NonExecutableEvent(dead)
        events = model.events - dead
        notes.append("pruned non-executable events: " + ", ".join(sorted(dead)))
        logger.warning("%s: %s", model.name or model.kind, notes[-1])
    labels = {x: model.labels[x] for x in events}
    return EventStructure.build(configs, labels, events, name=model.name, notes=notes)


def configs_fes(f: FlowES, prune: bool = False) -> EventStructure:
    """Flow configurations: ≺-acyclic, conflict-free, every missing flow-cause excused.

    Events in no configuration raise ``NonExecutableEvent`` unless ``prune`` is set,
    in which case they are dropped from the event set.
    """
    _require_valid(f)

    def admissible(x: str, chosen: set[str]) -> bool:
        return not any((x, y) in f.conflict for y in chosen) and _acyclic(chosen | {x}, f.flow)

    def excused(c: frozenset[str]) -> bool:
        for y, x in f.flow:
            if x in c and y not in c:
                if not any((y, z) in f.conflict and (z, x) in f.flow for z in c):
                    return False
        return True

    configs = [
        PosetConfig.build(c, ((x, y) for x, y in f.flow if x in c and y in c))
        for c in _enumerate(sorted(f.events), admissible) if excused(c)
    ]
    return _finish(f, configs, prune)


def configs_bes(b: BundleES, prune: bool = False) -> EventStructure:
    """Bundle configurations: conflict-free, acyclic, meeting every bundle of each event."""
    _require_valid(b)
    edges = {(x, y) for xs, y in b.bundles for x in xs}

    def admissible(x: str, chosen: set[str]) -> bool:
        return not any((x, y) in b.conflict for y in chosen) and _acyclic(chosen | {x}, edges)

    def served(c: frozenset[str]) -> bool:
        return all(xs & c for xs, y in b.bundles if y in c)

    configs = [
        PosetConfig.build(c, ((x, y) for x, y in edges if x in c and y in c))
        for c in _enumerate(sorted(b.events), admissible) if served(c)
    ]
    return _finish(b, configs, prune)


# recognition


def recognize_pes(es: EventStructure) -> PrimeES | None:
    """A PES whose configurations are exactly ``es``'s family, if there is one."""
    causality = {(x, y) for x, y in es.precedence if es.cooccur(x, y)}
    conflict = {
        (x, y) for x in es.events for y in es.events
        if x != y and not es.cooccur(x, y)
    }
    candidate = PrimeES.build(es.events, es.labels, causality, conflict, name=es.name)
    if not validate_model(candidate).valid:
        return None
    if configs_pes(candidate).family != es.family:
        return None
    return candidate


def recognize_aes(es: EventStructure) -> AsymES | None:
    """An AES whose configurations are exactly ``es``'s family, if there is one."""
    causality = {
        (x, y) for x, y in es.precedence
        if es.containing.get(y, 0) and not es.containing[y] & ~es.containing[x]
    }
    candidate = AsymES.build(es.events, es.labels, causality, es.precedence, name=es.name)
    if not validate_model(candidate).valid:
        return None
    if configs_aes(candidate).family != es.family:
        return None
    return candidate


__all__ = [
    "AsymES",
    "BundleES",
    "FlowES",
    "Model",
    "PrimeES",
    "Structure",
    "as_event_structure",
    "configs_aes",
    "configs_bes",
    "configs_fes",
    "configs_pes",
    "recognize_aes",
    "recognize_pes",
    "validate_family",
    "validate_model",
]
