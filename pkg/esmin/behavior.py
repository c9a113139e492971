"""
Behavioural equivalences on event structures.

History preserving bisimulations are decided as greatest fixpoints over the finite
universe of iso-related triples (C1, f, C2). For hereditary bisimulation the universe
is generated from the empty triple by label-matching single-event extensions, which
reaches every triple whose prefixes are all related. Plain hp bisimulation starts from
every iso-related pair of configurations. Deletion then removes triples failing the
forward clauses (and, for hereditary bisimulation, the downward-closure clause) until
nothing changes.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Mapping, NamedTuple

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from esmin.errors import NotHereditary, TripleCapExceeded
from esmin.esmin_config import config
from esmin.maps import EventMap
from esmin.models import PrimeES, Structure, as_event_structure
from esmin.poset import EMPTY, EventStructure, Pair, PosetConfig, is_prefix
from esmin.reports import CheckReport

logger = logging.getLogger(__name__)

# a single-event move: added event and index of the reached configuration
Step = tuple[str, int]


@dataclass(frozen=True)
class ConfigIso:
    """A label- and order-preserving bijection between two configurations."""

    pairs: frozenset[Pair] = frozenset()

    @classmethod
    def of(cls, mapping: Mapping[str, str]) -> "ConfigIso":
        return cls(frozenset(mapping.items()))

    @cached_property
    def mapping(self) -> dict[str, str]:
        return dict(self.pairs)

    def __call__(self, x: str) -> str:
        return self.mapping[x]

    def __len__(self) -> int:
        return len(self.pairs)

    @cached_property
    def key(self) -> str:
        return " ".join(f"{x}:{y}" for x, y in sorted(self.pairs))

    def __str__(self) -> str:
        return "{" + self.key + "}"

    def restrict(self, events: Iterable[str]) -> "ConfigIso":
        keep = frozenset(events)
        return ConfigIso(frozenset(p for p in self.pairs if p[0] in keep))

    def extend(self, x: str, y: str) -> "ConfigIso":
        return ConfigIso(self.pairs | {(x, y)})


class Triple(NamedTuple):
    left: PosetConfig
    iso: ConfigIso
    right: PosetConfig

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.left.key, self.iso.key, self.right.key)

    def __str__(self) -> str:
        return f"({self.left.key}, {self.iso}, {self.right.key})"


@dataclass(frozen=True)
class BisimRelation:
    triples: frozenset[Triple]
    hereditary: bool
    left: EventStructure = field(compare=False)
    right: EventStructure = field(compare=False)

    def __contains__(self, triple: object) -> bool:
        return triple in self.triples

    def __len__(self) -> int:
        return len(self.triples)

    def sorted(self) -> list[Triple]:
        return sorted(self.triples, key=lambda t: t.key)

    def check(self) -> CheckReport:
        return check_bisimulation(self.triples, self.left, self.right, self.hereditary)


@dataclass(frozen=True)
class SemanticRelations:
    """Semantic precedence and conflict of an event structure."""

    precedence: frozenset[Pair]
    conflict: frozenset[Pair]
    structure: EventStructure = field(compare=False)

    def precedes(self, x: str, y: str) -> bool:
        return (x, y) in self.precedence

    def in_conflict(self, events: Iterable[str]) -> bool:
        return semantic_conflict(self.structure, events)

    def conflict_sets(self, size: int) -> Iterator[frozenset[str]]:
        """Event sets of the given size that occur together in no configuration."""
        for xs in combinations(sorted(self.structure.events), size):
            if self.in_conflict(xs):
                yield frozenset(xs)


def _labelled(c: PosetConfig, labels: Mapping[str, str]) -> nx.DiGraph:
    graph = c.digraph()
    nx.set_node_attributes(graph, {x: labels[x] for x in c.events}, "label")
    return graph


def config_iso(
    c1: PosetConfig,
    l1: Mapping[str, str],
    c2: PosetConfig,
    l2: Mapping[str, str],
) -> frozenset[ConfigIso]:
    """All label-respecting order isomorphisms from ``c1`` to ``c2``."""
    if len(c1) != len(c2) or len(c1.order) != len(c2.order):
        return frozenset()
    if not c1.events:
        return frozenset({ConfigIso()})
    matcher = DiGraphMatcher(
        _labelled(c1, l1), _labelled(c2, l2),
        node_match=lambda a, b: a["label"] == b["label"],
    )
    return frozenset(ConfigIso.of(m) for m in matcher.isomorphisms_iter())


class _Universe:
    """Iso-related triples and the single-event links between them."""

    def __init__(self, es1: EventStructure, es2: EventStructure, cap: int, seed_all: bool = False):
        self.es1 = es1
        self.es2 = es2
        self.ids: dict[tuple[int, ConfigIso, int], int] = {}
        self.nodes: list[tuple[int, ConfigIso, int]] = []
        self.children: list[list[tuple[Step, Step, int]]] = []
        self.parents: list[list[tuple[int, Step, Step]]] = []
        self._generate(cap, seed_all)

    def _add(self, node: tuple[int, ConfigIso, int], cap: int) -> tuple[int, bool]:
        tid = self.ids.get(node)
        if tid is not None:
            return tid, False
        if len(self.nodes) >= cap:
            raise TripleCapExceeded(cap)
        tid = len(self.nodes)
        self.ids[node] = tid
        self.nodes.append(node)
        self.children.append([])
        self.parents.append([])
        return tid, True

    def _generate(self, cap: int, seed_all: bool) -> None:
        es1, es2 = self.es1, self.es2
        root, _ = self._add((es1.index[EMPTY], ConfigIso(), es2.index[EMPTY]), cap)
        queue = deque([root])
        if seed_all:
            queue.extend(self._seeds(cap))
        while queue:
            tid = queue.popleft()
            i, iso, j = self.nodes[tid]
            for x, i2 in es1.steps[i]:
                image_below = frozenset(iso(z) for z in es1.configs[i2].below(x))
                for y, j2 in es2.steps[j]:
                    if es1.labels[x] != es2.labels[y]:
                        continue
                    if es2.configs[j2].below(y) != image_below:
                        continue
                    child, fresh = self._add((i2, iso.extend(x, y), j2), cap)
                    self.children[tid].append(((x, i2), (y, j2), child))
                    self.parents[child].append((tid, (x, i2), (y, j2)))
                    if fresh:
                        queue.append(child)
        logger.info("bisimulation universe: %d triples", len(self.nodes))

    def _seeds(self, cap: int) -> list[int]:
        """Every iso-related pair of configurations, reachable from the root or not."""
        fresh = []
        for i, c1 in enumerate(self.es1.configs):
            for j, c2 in enumerate(self.es2.configs):
                isos = config_iso(c1, self.es1.labels, c2, self.es2.labels)
                for iso in sorted(isos, key=lambda f: f.key):
                    tid, new = self._add((i, iso, j), cap)
                    if new:
                        fresh.append(tid)
        return fresh

    def triple(self, tid: int) -> Triple:
        i, iso, j = self.nodes[tid]
        return Triple(self.es1.configs[i], iso, self.es2.configs[j])

    def refine(self, hereditary: bool) -> list[bool]:
        alive = [True] * len(self.nodes)
        left: list[dict[Step, int]] = []
        right: list[dict[Step, int]] = []
        for tid, (i, _, j) in enumerate(self.nodes):
            lc: dict[Step, int] = {step: 0 for step in self.es1.steps[i]}
            rc: dict[Step, int] = {step: 0 for step in self.es2.steps[j]}
            for ls, rs, _ in self.children[tid]:
                lc[ls] += 1
                rc[rs] += 1
            left.append(lc)
            right.append(rc)
        failing = [
            tid for tid in range(len(self.nodes))
            if 0 in left[tid].values() or 0 in right[tid].values()
        ]
        queue = deque(sorted(failing, key=lambda t: self.triple(t).key))
        deleted = 0
        while queue:
            tid = queue.popleft()
            if not alive[tid]:
                continue
            alive[tid] = False
            deleted += 1
            for parent, ls, rs in self.parents[tid]:
                if not alive[parent]:
                    continue
                left[parent][ls] -= 1
                right[parent][rs] -= 1
                if left[parent][ls] == 0 or right[parent][rs] == 0:
                    queue.append(parent)
            if hereditary:
                queue.extend(c for _, _, c in self.children[tid] if alive[c])
        logger.info("fixpoint deleted %d of %d triples", deleted, len(self.nodes))
        return alive


def decide_bisim(
    es1: Structure,
    es2: Structure,
    hereditary: bool = True,
    cap: int | None = None,
) -> BisimRelation | None:
    """The greatest (h)hp-bisimulation between two structures, or None if they are not bisimilar."""
    left = as_event_structure(es1)
    right = as_event_structure(es2)
    universe = _Universe(left, right, cap or config.triple_cap, seed_all=not hereditary)
    alive = universe.refine(hereditary)
    if not alive[0]:
        return None
    triples = frozenset(universe.triple(t) for t, ok in enumerate(alive) if ok)
    return BisimRelation(triples, hereditary, left, right)


def check_bisimulation(
    triples: Iterable[Triple],
    es1: EventStructure,
    es2: EventStructure,
    hereditary: bool = True,
) -> CheckReport:
    """Check a relation against the (hereditary) history preserving bisimulation clauses."""
    triples = frozenset(triples)
    report = CheckReport(check="hhp-bisimulation" if hereditary else "hp-bisimulation")
    if Triple(EMPTY, ConfigIso(), EMPTY) not in triples:
        report.add("root", [], "the empty triple is missing")
    for t in sorted(triples, key=lambda t: t.key):
        c1, iso, c2 = t
        if c1 not in es1 or c2 not in es2 or iso not in config_iso(c1, es1.labels, c2, es2.labels):
            report.add("iso", [str(t)], "not an isomorphism between configurations")
            continue
        for x, d1 in es1.single_steps(c1):
            if not any(
                Triple(d1, iso.extend(x, y), d2) in triples
                for y, d2 in es2.single_steps(c2)
            ):
                report.add("clause-1", [str(t), x], f"left move {x} is not matched")
        for y, d2 in es2.single_steps(c2):
            if not any(
                Triple(d1, iso.extend(x, y), d2) in triples
                for x, d1 in es1.single_steps(c1)
            ):
                report.add("clause-2", [str(t), y], f"right move {y} is not matched")
        if hereditary:
            for x in sorted(c1.maximal):
                below = Triple(c1.without(x), iso.restrict(c1.events - {x}), c2.without(iso(x)))
                if below not in triples:
                    report.add("downward", [str(t), x], f"restriction removing {x} is missing")
    return report


def bisim_to_es(r: BisimRelation) -> tuple[PrimeES, EventMap, EventMap]:
    """The PES of history triples of a hereditary bisimulation, with its two projections."""
    if not r.hereditary:
        raise NotHereditary("the bisimulation-as-event-structure construction needs an hhp-bisimulation")
    histories = [t for t in r.sorted() if len(t.left.maximal) == 1]
    grouped: dict[tuple[str, str], list[Triple]] = {}
    for t in histories:
        (owner,) = t.left.maximal
        grouped.setdefault((owner, t.iso(owner)), []).append(t)
    ids: dict[Triple, str] = {}
    owner_of: dict[str, str] = {}
    image_of: dict[str, str] = {}
    for (owner, image), group in sorted(grouped.items()):
        for k, t in enumerate(group):
            eid = f"{owner}@{image}" if len(group) == 1 else f"{owner}@{image}+{k}"
            ids[t] = eid
            owner_of[eid] = owner
            image_of[eid] = image

    causality = {
        (ids[t1], ids[t2])
        for t1 in histories for t2 in histories
        if t1 != t2 and t1.iso.pairs <= t2.iso.pairs and is_prefix(t1.left, t2.left)
    }
    covers: list[int] = []
    position = {t: n for n, t in enumerate(histories)}
    for big in r.triples:
        mask = 0
        for t in histories:
            if t.iso.pairs <= big.iso.pairs and is_prefix(t.left, big.left):
                mask |= 1 << position[t]
        covers.append(mask)
    conflict = set()
    for a, b in combinations(histories, 2):
        both = (1 << position[a]) | (1 << position[b])
        if not any(mask & both == both for mask in covers):
            conflict.add((ids[a], ids[b]))
    labels = {eid: r.left.labels[owner] for eid, owner in owner_of.items()}
    pes = PrimeES.build(ids.values(), labels, causality, conflict, name="bisimulation")
    left = EventMap.build(pes, r.left, owner_of, name="pi1")
    right = EventMap.build(pes, r.right, image_of, name="pi2")
    return pes, left, right


def semantic_conflict(es: EventStructure, events: Iterable[str]) -> bool:
    """Whether no configuration contains all of ``events``."""
    mask = (1 << len(es.configs)) - 1
    for x in events:
        mask &= es.containing.get(x, 0)
    return mask == 0


def semantic_relations(es: Structure) -> SemanticRelations:
    es = as_event_structure(es)
    conflict = frozenset(
        (x, y) for x in es.events for y in es.events
        if x != y and not es.cooccur(x, y)
    )
    return SemanticRelations(es.precedence, conflict, es)


def has_global_precedence(es: Structure) -> bool:
    """Whether every local ordering x <_C y is a semantic precedence."""
    es = as_event_structure(es)
    return all(pair in es.precedence for c in es.configs for pair in c.order)
