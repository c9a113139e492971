"""
Morphisms, foldings and minimisation.

A morphism is checked on configurations (``check_morphism``); a folding is a morphism
whose graph relation is an hhp-bisimulation, decided by lifting every target
transition back to the source (``check_folding``). The per-class checks decide the
same questions syntactically on the relations of a PES or an AES, and their verdicts
agree with the configuration-level ones. Quotients, joins and ``minimize`` work on
event partitions.
"""

from __future__ import annotations

import logging
from itertools import combinations
from typing import Callable, Iterator, NamedTuple

import networkx as nx

from esmin.behavior import BisimRelation, ConfigIso, Triple, semantic_conflict
from esmin.errors import (
    InvalidPartition,
    InvalidResult,
    LabelClash,
    NotAMorphism,
    NotFoldings,
    PartitionCapExceeded,
    WrongClass,
)
from esmin.esmin_config import config
from esmin.maps import EventMap, EventPartition
from esmin.models import AsymES, PrimeES, Structure, as_event_structure, recognize_aes, recognize_pes
from esmin.poset import EventStructure, PosetConfig, validate_family
from esmin.reports import CheckReport

logger = logging.getLogger(__name__)

CLASSES = ("poset", "pes", "aes")


# configuration-level checks


def check_morphism(f: EventMap) -> CheckReport:
    """Labels are preserved and every configuration maps injectively onto a configuration."""
    src, tgt = f.source_es, f.target_es
    report = CheckReport(check="morphism", subject=f.name)
    for x in sorted(src.events):
        if src.labels[x] != tgt.labels[f(x)]:
            report.add("labels", [x, f(x)], f"{x} is labelled {src.labels[x]} but {f(x)} is labelled {tgt.labels[f(x)]}")
    for c in src.configs:
        image = f.apply(c)
        if image is None:
            merged = sorted(x for x in c.events if len(f.preimage(f(x)) & c.events) > 1)
            report.add("injective", [c.key, *merged], f"{c.key} is not mapped injectively")
        elif image not in tgt:
            report.add("image", [c.key, image.key], f"the image of {c.key} is not a configuration")
    return report


def require_morphism(f: EventMap) -> None:
    report = check_morphism(f)
    if not report.verdict:
        raise NotAMorphism(report)


def check_folding(f: EventMap) -> CheckReport:
    """Every target transition from f(C1) is matched by a source transition from C1."""
    require_morphism(f)
    src, tgt = f.source_es, f.target_es
    report = CheckReport(check="folding", subject=f.name)
    for i, c1 in enumerate(src.configs):
        d1 = c1.rename(f.mapping)
        matched = {src.configs[j].rename(f.mapping) for _, j in src.steps[i]}
        for x2, d2 in tgt.single_steps(d1):
            if d2 not in matched:
                report.add(
                    "transition", [c1.key, x2, d2.key],
                    f"{d1.key} -{x2}-> {d2.key} has no counterpart from {c1.key}",
                )
    logger.debug("%s: folding check found %d unmatched transitions", f, len(report.violations))
    return report


def graph_relation(f: EventMap) -> BisimRelation:
    """R_f = {(C, f|C, f(C))}; an hhp-bisimulation exactly when f is a folding."""
    require_morphism(f)
    src = f.source_es
    triples = frozenset(
        Triple(c, ConfigIso.of({x: f(x) for x in c.events}), c.rename(f.mapping))
        for c in src.configs
    )
    return BisimRelation(triples, True, src, f.target_es)


def check_morphism_properties(f: EventMap) -> CheckReport:
    """Merged events are in semantic conflict and semantic precedence is reflected."""
    require_morphism(f)
    src, tgt = f.source_es, f.target_es
    report = CheckReport(check="morphism-properties", subject=f.name)
    for x, y in combinations(sorted(src.events), 2):
        if f(x) == f(y) and not semantic_conflict(src, [x, y]):
            report.add("merge-conflict", [x, y], f"{x} and {y} are merged but can occur together")
    for x in sorted(src.events):
        for y in sorted(src.events):
            if x != y and (f(x), f(y)) in tgt.precedence and (x, y) not in src.precedence:
                report.add("precedence", [x, y], f"{f(x)} precedes {f(y)} but {x} does not precede {y}")
    return report


def partition_of(f: EventMap) -> EventPartition:
    return f.partition()


# PES criteria


def _pes_pair(f: EventMap) -> tuple[PrimeES, PrimeES]:
    if not (isinstance(f.source, PrimeES) and isinstance(f.target, PrimeES)):
        raise WrongClass(f"{f}: both endpoints must be prime event structures")
    return f.source, f.target


def check_morphism_pes(f: EventMap) -> CheckReport:
    """f(⌈x⌉) = ⌈f(x)⌉ and conflict is reflected, clause by clause."""
    p, q = _pes_pair(f)
    report = CheckReport(check="pes-morphism", subject=f.name)
    events = sorted(p.events)
    for x in events:
        if p.labels[x] != q.labels[f(x)]:
            report.add("1", [x, f(x)], f"{x} and {f(x)} carry different labels")
    for y in events:
        lifted = f.image(p.causes(y))
        for x2 in sorted(q.causes(f(y)) - lifted):
            report.add("2a", [y, x2], f"{x2} causes {f(y)} but no cause of {y} maps to it")
    for x, y in sorted(p.causality):
        if not q.leq(f(x), f(y)):
            report.add("2b", [x, y], f"{x} < {y} but not {f(x)} <= {f(y)}")
    for x, y in combinations(events, 2):
        if f(x) == f(y) and not p.in_conflict(x, y):
            report.add("3a", [x, y], f"{x} and {y} both map to {f(x)} without being in conflict")
        elif q.in_conflict(f(x), f(y)) and not p.in_conflict(x, y):
            report.add("3b", [x, y], f"{f(x)} # {f(y)} but not {x} # {y}")
    return report


def _unjoinable(p: PrimeES, x: str, y: str, fibre: frozenset[str]) -> list[str] | None:
    """A consistent W extending both x and y that no event of ``fibre`` extends."""
    pool = [w for w in sorted(p.events) if not p.in_conflict(w, x) or not p.in_conflict(w, y)]
    graph = nx.Graph()
    graph.add_nodes_from(pool)
    graph.add_edges_from((u, v) for u, v in combinations(pool, 2) if not p.in_conflict(u, v))
    for clique in sorted(sorted(c) for c in nx.find_cliques(graph)):
        if not any(all(not p.in_conflict(z, w) for w in clique) for z in fibre):
            return clique
    return None


def _missing_targets(f: EventMap) -> list[str]:
    return sorted(set(f.target.events) - set(f.mapping.values()))


def check_folding_pes(f: EventMap) -> CheckReport:
    p, q = _pes_pair(f)
    morphism = check_morphism_pes(f)
    if not morphism.verdict:
        raise NotAMorphism(morphism)
    report = CheckReport(check="pes-folding", subject=f.name)
    missing = _missing_targets(f)
    if missing:
        report.add("surjective", missing, "target events outside the image")
    for x in sorted(p.events):
        for y2 in sorted(q.events):
            fibre = f.preimage(y2)
            if fibre and all(p.in_conflict(x, z) for z in fibre) and not q.in_conflict(f(x), y2):
                report.add(
                    "1", [x, y2],
                    f"{x} conflicts with every preimage of {y2} but {f(x)} does not conflict with {y2}",
                )
    for x, y in combinations(sorted(p.events), 2):
        if f(x) != f(y):
            continue
        witness = _unjoinable(p, x, y, f.preimage(f(x)))
        if witness is not None:
            report.add(
                "2", [x, y, *witness],
                f"{{{' '.join(witness)}}} extends {x} and {y} but no preimage of {f(x)}",
            )
    return report


def check_abstraction_hom(f: EventMap) -> CheckReport:
    """Strict causes, consequences and concurrent events are mapped exactly onto their images."""
    p, q = _pes_pair(f)
    report = CheckReport(check="abstraction", subject=f.name)
    for x in sorted(p.events):
        y = f(x)
        if p.labels[x] != q.labels[y]:
            report.add("1", [x, y], f"{x} and {y} carry different labels")
        for clause, mine, theirs, what in (
            ("2", p.strict_causes(x), q.strict_causes(y), "strict causes"),
            ("3", p.consequences(x), q.consequences(y), "consequences"),
            ("4", p.concurrent(x), q.concurrent(y), "concurrent events"),
        ):
            image = f.image(mine)
            if image != theirs:
                diff = sorted(image ^ theirs)
                report.add(clause, [x, *diff], f"the {what} of {x} do not map onto those of {y}")
    morphism = check_morphism_pes(f)
    if morphism.verdict:
        report.related["folding"] = check_folding_pes(f)
    else:
        report.related["morphism"] = morphism
    return report


# AES criteria


def _aes_pair(f: EventMap) -> tuple[AsymES, AsymES]:
    if not (isinstance(f.source, AsymES) and isinstance(f.target, AsymES)):
        raise WrongClass(f"{f}: both endpoints must be asymmetric event structures")
    return f.source, f.target


def _ac_path(b: AsymES, scope: frozenset[str], x: str, y: str) -> bool:
    """x reaches y through ↗ inside ``scope``."""
    graph = nx.DiGraph()
    graph.add_nodes_from(scope)
    graph.add_edges_from((u, v) for u, v in b.aconflict if u in scope and v in scope)
    return x in scope and y in scope and nx.has_path(graph, x, y)


def check_morphism_aes(f: EventMap) -> CheckReport:
    """Relation-level morphism check; clause 3b accepts a ↗-chain through f(⌈x⌉ ∪ ⌈y⌉)."""
    a, b = _aes_pair(f)
    report = CheckReport(check="aes-morphism", subject=f.name)
    events = sorted(a.events)
    for x in events:
        if a.labels[x] != b.labels[f(x)]:
            report.add("1", [x, f(x)], f"{x} and {f(x)} carry different labels")
        extra = b.causes(f(x)) - f.image(a.causes(x))
        if extra:
            report.add("2", [x, *sorted(extra)], f"causes of {f(x)} are not images of causes of {x}")
    for x in events:
        for y in events:
            if x == y:
                continue
            if b.ac(f(x), f(y)) and not a.ac(x, y):
                report.add("3a", [x, y], f"{f(x)} ↗ {f(y)} but not {x} ↗ {y}")
            if a.ac(x, y) and not a.ac(y, x) and not _ac_path(b, f.image(a.causes(x) | a.causes(y)), f(x), f(y)):
                report.add("3b", [x, y], f"{x} ↗ {y} only one way but {f(x)} does not precede {f(y)}")
            if f(x) == f(y) and not a.ac(x, y):
                report.add("4", [x, y], f"{x} and {y} both map to {f(x)} but not {x} ↗ {y}")
    return report


def _enabling(a: AsymES, es: EventStructure, x: str) -> list[PosetConfig]:
    """Configurations where ``x`` can be added as a maximal event."""
    causes = a.strict_causes(x)
    return [
        c for c in es.configs
        if x not in c.events and causes <= c.events and not a.ac_any([x], c.events)
    ]


def check_folding_aes(f: EventMap) -> CheckReport:
    a, b = _aes_pair(f)
    morphism = check_morphism_aes(f)
    if not morphism.verdict:
        raise NotAMorphism(morphism)
    src, tgt = f.source_es, f.target_es
    report = CheckReport(check="aes-folding", subject=f.name)
    missing = _missing_targets(f)
    if missing:
        report.add("surjective", missing, "target events outside the image")

    for x in sorted(a.events):
        image = f.image(a.causes(x))
        for y2 in sorted(b.events - image):
            fibre = f.preimage(y2)
            if not fibre or not all(a.ac(z, x) for z in fibre):
                continue
            if b.strict_causes(y2) <= image and not b.ac_any([y2], image):
                report.add(
                    "1", [x, y2],
                    f"every preimage of {y2} precedes {x} but {y2} is not prevented by f(⌈{x}⌉)",
                )

    for x, y in combinations(sorted(a.events), 2):
        if f(x) != f(y):
            continue
        fibre = sorted(f.preimage(f(x)))
        found = None
        for cx in _enabling(a, src, x):
            for cy in _enabling(a, src, y):
                union = cx.events | cy.events
                if not a.is_configuration(union):
                    continue
                if not any(
                    z not in union and a.strict_causes(z) <= union and not a.ac_any([z], union)
                    for z in fibre
                ):
                    found = (cx, cy)
                    break
            if found:
                break
        if found:
            cx, cy = found
            report.add(
                "2", [x, y, cx.key, cy.key],
                f"{cx.key} enables {x} and {cy.key} enables {y} but no preimage of {f(x)} extends their union",
            )

    by_events = {c.events: c for c in src.configs}
    target_by_events = {c.events: c for c in tgt.configs}
    for c1 in src.configs:
        d1 = c1.rename(f.mapping)
        for x2 in sorted(b.events - d1.events):
            if not b.strict_causes(x2) <= d1.events or b.ac_any([x2], d1.events):
                continue
            enlarged = target_by_events.get(d1.events | {x2})
            if enlarged is None:
                continue
            h2 = enlarged.history(x2)
            h1 = frozenset(w for w in c1.events if f(w) in h2.events)
            rest = c1.events - h1
            if not any(
                _is_history(by_events.get(h1 | {x1}), x1) and not a.ac_any([x1], rest)
                for x1 in sorted(f.preimage(x2) - c1.events)
            ):
                report.add(
                    "3", [c1.key, x2, h2.key],
                    f"no preimage of {x2} has the history matching {h2.key} and extends {c1.key}",
                )
    return report


def _is_history(c: PosetConfig | None, x: str) -> bool:
    return c is not None and c.maximal == frozenset({x})


# quotients


def quotient(es: Structure, p: EventPartition) -> EventStructure:
    """E/≡: configurations with their events replaced by classes, orders transported."""
    es = as_event_structure(es)
    if p.events != es.events:
        raise InvalidPartition(
            "partition does not cover the events: " + ", ".join(sorted(p.events ^ es.events))
        )
    labels: dict[str, str] = {}
    for block in p.classes:
        seen = {es.labels[x] for x in block}
        if len(seen) > 1:
            raise LabelClash(block)
        labels[p.class_name(block)] = seen.pop()
    rename = {x: p.name_of(x) for x in es.events}
    family = set()
    for c in es.configs:
        if len({rename[x] for x in c.events}) != len(c):
            raise InvalidResult(f"configuration {c.key} merges events of one class")
        family.add(c.rename(rename))
    name = f"{es.name}/{p.key}" if es.name else p.key
    result = EventStructure.build(family, labels, events=labels, name=name)
    report = validate_family(result)
    if not report.valid:
        raise InvalidResult("the quotient family is not a valid event structure", report)
    return result


def quotient_map(es: Structure, p: EventPartition) -> EventMap:
    """The canonical map x ↦ [x] into ``quotient(es, p)``."""
    target = quotient(es, p)
    return EventMap(es, target, {x: p.name_of(x) for x in es.events}, name="quotient")


def quotient_map_is_folding(es: Structure, p: EventPartition) -> bool:
    try:
        return check_folding(quotient_map(es, p)).verdict
    except (LabelClash, InvalidResult, NotAMorphism) as exc:
        logger.debug("%s rejected: %s", p, exc)
        return False


def check_folding_equivalence_pes(p: PrimeES, eq: EventPartition) -> CheckReport:
    """Decide on the relations of ``p`` whether ``eq`` folds ``p`` onto a PES.

    Holds exactly when the quotient map is a folding and the quotient is again prime;
    merging b1 and b2 alone in P0 folds onto a poset structure that is not.
    """
    report = CheckReport(check="folding-equivalence", subject=f"{p.name or 'pes'}/{eq.key}")
    events = sorted(p.events)

    def classes(xs: frozenset[str]) -> set[frozenset[str]]:
        return {eq.block(w) for w in xs}

    for x, y in combinations(events, 2):
        if not eq.same(x, y):
            continue
        if p.labels[x] != p.labels[y]:
            report.add("1", [x, y], f"{x} and {y} carry different labels")
        if classes(p.causes(x)) != classes(p.causes(y)):
            report.add("2", [x, y], f"the causes of {x} and {y} fall into different classes")
        if not p.in_conflict(x, y):
            report.add("3", [x, y], f"{x} and {y} are equivalent but not in conflict")
    for x in events:
        for block in sorted(eq.classes, key=sorted):
            if not all(p.in_conflict(x, w) for w in block):
                continue
            for x2, w in sorted((x2, w) for x2 in eq.block(x) for w in block):
                if not p.in_conflict(x2, w):
                    report.add(
                        "4", [x, EventPartition.class_name(block), x2, w],
                        f"{x} conflicts with the whole class of {w} but {x2} does not conflict with {w}",
                    )
                    break
    for x, y in combinations(events, 2):
        if not eq.same(x, y):
            continue
        witness = _unjoinable(p, x, y, eq.block(x))
        if witness is not None:
            report.add(
                "5", [x, y, *witness],
                f"{{{' '.join(witness)}}} extends {x} and {y} but no member of their class",
            )
    return report


# joins


class JoinResult(NamedTuple):
    structure: EventStructure
    left: EventMap
    right: EventMap
    partition: EventPartition


def _induced(f: EventMap, target: EventStructure, p: EventPartition, name: str) -> EventMap:
    mapping = {}
    for y in f.target.events:
        fibre = f.preimage(y)
        if not fibre:
            raise NotFoldings(f"{f}: {y} is outside the image")
        mapping[y] = p.name_of(min(fibre))
    return EventMap.build(f.target, target, mapping, name=name)


def join_foldings(f1: EventMap, f2: EventMap) -> JoinResult:
    """The pushout of two foldings out of one structure, by joining their equivalences."""
    if as_event_structure(f1.source) != as_event_structure(f2.source):
        raise NotFoldings("the maps do not share their source")
    for f in (f1, f2):
        try:
            verdict = check_folding(f).verdict
        except NotAMorphism:
            verdict = False
        if not verdict:
            raise NotFoldings(f"{f} is not a folding")
    p = f1.partition().join(f2.partition())
    target = quotient(f1.source, p)
    left = _induced(f1, target, p, "g1")
    right = _induced(f2, target, p, "g2")
    for g in (left, right):
        report = check_folding(g)
        if not report.verdict:
            raise InvalidResult(f"induced map {g} is not a folding:\n{report.render()}")
    logger.info("join of %s and %s merges into %d classes", f1, f2, len(p.classes))
    return JoinResult(target, left, right, p)


# minimisation


class MinimizedQuotient(NamedTuple):
    partition: EventPartition
    structure: Structure
    folding: EventMap


class MinimizeResult(NamedTuple):
    cls: str
    quotients: tuple[MinimizedQuotient, ...]
    candidates: int
    accepted: int

    @property
    def unique(self) -> bool:
        return len(self.quotients) == 1


def _as_class(structure: Structure, cls: str) -> Structure:
    if cls == "poset":
        return structure
    if cls == "pes":
        if isinstance(structure, PrimeES):
            return structure
        if isinstance(structure, EventStructure):
            found = recognize_pes(structure)
            if found is not None:
                return found
    if cls == "aes":
        if isinstance(structure, AsymES):
            return structure
        if isinstance(structure, PrimeES):
            return AsymES.from_pes(structure)
        if isinstance(structure, EventStructure):
            found = recognize_aes(structure)
            if found is not None:
                return found
    raise WrongClass(f"{getattr(structure, 'name', '') or 'structure'} is not in the {cls} class")


def _mergeable(structure: Structure, cls: str) -> set[frozenset[str]]:
    """Pairs of events that may share a class in some folding equivalence."""
    es = as_event_structure(structure)
    pairs = set()
    for x, y in combinations(sorted(es.events), 2):
        if es.labels[x] != es.labels[y]:
            continue
        if isinstance(structure, PrimeES) and cls == "pes":
            same_causes = sorted(es.labels[w] for w in structure.causes(x)) == sorted(
                es.labels[w] for w in structure.causes(y)
            )
            if not structure.in_conflict(x, y) or not same_causes:
                continue
        elif es.cooccur(x, y):
            continue
        pairs.add(frozenset((x, y)))
    return pairs


def _candidates(events: frozenset[str], mergeable: set[frozenset[str]]) -> Iterator[EventPartition]:
    """Partitions whose classes contain only pairwise mergeable events."""
    movable = sorted({x for pair in mergeable for x in pair})
    blocks: list[list[str]] = []

    def walk(k: int) -> Iterator[EventPartition]:
        if k == len(movable):
            yield EventPartition.of(blocks, events)
            return
        x = movable[k]
        for block in blocks:
            if all(frozenset((x, w)) in mergeable for w in block):
                block.append(x)
                yield from walk(k + 1)
                block.pop()
        blocks.append([x])
        yield from walk(k + 1)
        blocks.pop()

    yield from walk(0)


def _acceptor(structure: Structure, cls: str) -> Callable[[EventPartition], Structure | None]:
    """Validation of one candidate; returns the quotient in the requested class or None."""

    def accept(p: EventPartition) -> Structure | None:
        if cls == "pes":
            if not check_folding_equivalence_pes(structure, p).verdict:
                return None
            return recognize_pes(quotient(structure, p))
        if not quotient_map_is_folding(structure, p):
            return None
        q = quotient(structure, p)
        return q if cls == "poset" else recognize_aes(q)

    return accept


def _result(structure: Structure, p: EventPartition, model: Structure) -> MinimizedQuotient:
    folding = EventMap.build(structure, model, {x: p.name_of(x) for x in structure.events}, name="minimize")
    return MinimizedQuotient(p, model, folding)


def minimize(structure: Structure, cls: str = "poset", cap: int | None = None) -> MinimizeResult:
    """Maximal folding equivalences of ``structure`` within a class.

    Every maximal accepted equivalence is returned, sorted by canonical text. In the
    ``pes`` class the accepted equivalences are closed under join, so there is exactly
    one. In the ``poset`` and ``aes`` classes the join of two foldings may merge events
    that occur together, and then there are several.
    """
    if cls not in CLASSES:
        raise WrongClass(f"unknown class {cls!r}; expected one of {', '.join(CLASSES)}")
    structure = _as_class(structure, cls)
    cap = cap or config.partition_cap
    accept = _acceptor(structure, cls)
    accepted: dict[EventPartition, Structure] = {}
    count = 0
    for p in _candidates(structure.events, _mergeable(structure, cls)):
        count += 1
        if count > cap:
            raise PartitionCapExceeded(cap)
        model = accept(p)
        if model is None:
            logger.debug("rejected %s", p)
            continue
        accepted[p] = model
    logger.info("minimize(%s): %d candidates, %d accepted", cls, count, len(accepted))

    maxima = sorted(
        (p for p in accepted if not any(other.coarser_than(p) for other in accepted)),
        key=lambda p: p.key,
    )
    if len(maxima) > 1 and cls != "aes":
        logger.warning("minimize(%s): %d incomparable maximal equivalences", cls, len(maxima))
    quotients = tuple(_result(structure, p, accepted[p]) for p in maxima)
    return MinimizeResult(cls, quotients, count, len(accepted))
