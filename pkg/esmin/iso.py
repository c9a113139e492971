"""Isomorphism of event structures up to event renaming."""

from __future__ import annotations

import logging

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from esmin.models import Structure, as_event_structure
from esmin.poset import EventStructure

logger = logging.getLogger(__name__)


def _encode(es: EventStructure) -> nx.DiGraph:
    """Events, configurations and the order pairs of each configuration as one graph.

    A configuration node points at its events; an order node hangs off its
    configuration and points at the lower and the upper event.
    """
    graph = nx.DiGraph()
    for x in es.events:
        graph.add_node(("event", x), kind="event", label=es.labels[x])
    for i, c in enumerate(es.configs):
        node = ("config", i)
        graph.add_node(node, kind="config", label=str(len(c)))
        for x in c.events:
            graph.add_edge(node, ("event", x), role="in")
        for x, y in c.order:
            pair = ("order", i, x, y)
            graph.add_node(pair, kind="order", label="")
            graph.add_edge(node, pair, role="has")
            graph.add_edge(pair, ("event", x), role="lo")
            graph.add_edge(pair, ("event", y), role="hi")
    return graph


def find_isomorphism(es1: Structure, es2: Structure) -> dict[str, str] | None:
    """A label-preserving bijection of events carrying the family of ``es1`` onto that of ``es2``."""
    left, right = as_event_structure(es1), as_event_structure(es2)
    if len(left.events) != len(right.events) or len(left.family) != len(right.family):
        return None
    if sorted(left.labels.values()) != sorted(right.labels.values()):
        return None
    matcher = DiGraphMatcher(
        _encode(left), _encode(right),
        node_match=lambda a, b: a["kind"] == b["kind"] and a["label"] == b["label"],
        edge_match=lambda a, b: a["role"] == b["role"],
    )
    for match in matcher.isomorphisms_iter():
        return {x: y for (kind, x, *_), (_, y, *_) in match.items() if kind == "event"}
    logger.debug("%s and %s are not isomorphic", left.name or "left", right.name or "right")
    return None


def is_isomorphic(es1: Structure, es2: Structure) -> bool:
    return find_isomorphism(es1, es2) is not None
