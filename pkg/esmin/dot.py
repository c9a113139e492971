"""Graphviz DOT text for structures, configuration families and maps.

Solid arrows are causality (or flow and bundles), dotted lines are conflict and
dotted arrows asymmetric conflict. Output is deterministic: nodes and edges sorted.
"""

from __future__ import annotations

from esmin.maps import EventMap
from esmin.models import AsymES, BundleES, FlowES, PrimeES, Structure, as_event_structure
from esmin.poset import EventStructure


def _quote(text: str) -> str:
    return '"' + text.replace('"', '\\"') + '"'


def _attrs(**attrs: str) -> str:
    if not attrs:
        return ""
    return " [" + ", ".join(f"{k}={_quote(v)}" for k, v in sorted(attrs.items())) + "]"


def _node(eid: str, label: str, prefix: str = "") -> str:
    return f"    {_quote(prefix + eid)}{_attrs(label=f'{eid}:{label}')};"


def _edge(x: str, y: str, prefix: str = "", to_prefix: str | None = None, **attrs: str) -> str:
    to_prefix = prefix if to_prefix is None else to_prefix
    return f"    {_quote(prefix + x)} -> {_quote(to_prefix + y)}{_attrs(**attrs)};"


def _body(model: Structure, prefix: str = "") -> list[str]:
    lines = [_node(x, model.labels[x], prefix) for x in sorted(model.events)]
    if isinstance(model, (PrimeES, AsymES)):
        lines += [_edge(x, y, prefix) for x, y in sorted(model.direct_causality)]
    if isinstance(model, PrimeES):
        lines += [
            _edge(x, y, prefix, style="dotted", dir="none")
            for x, y in sorted(model.direct_conflict)
        ]
    elif isinstance(model, AsymES):
        direct = model.direct_aconflict
        for x, y in sorted(direct):
            if (y, x) in direct:
                if x < y:
                    lines.append(_edge(x, y, prefix, style="dotted", dir="none"))
            else:
                lines.append(_edge(x, y, prefix, style="dotted"))
    elif isinstance(model, FlowES):
        lines += [_edge(x, y, prefix) for x, y in sorted(model.flow)]
    elif isinstance(model, BundleES):
        for n, (xs, y) in enumerate(sorted(model.bundles, key=lambda b: (b[1], sorted(b[0])))):
            lines += [_edge(x, y, prefix, label=f"b{n}") for x in sorted(xs)]
    if isinstance(model, (FlowES, BundleES)):
        lines += [
            _edge(x, y, prefix, style="dotted", dir="none")
            for x, y in sorted(model.conflict) if x < y
        ]
    return lines


def export_config_dot(structure: Structure) -> str:
    """Hasse diagram of the configurations under single-event extension."""
    es = as_event_structure(structure)
    lines = [f"digraph {_quote(es.name or 'configurations')} {{", "    rankdir=BT;"]
    for i, c in enumerate(es.configs):
        lines.append(f"    {_quote(f'c{i}')}{_attrs(label=c.key)};")
    for i, steps in enumerate(es.steps):
        for x, j in steps:
            lines.append(f"    {_quote(f'c{i}')} -> {_quote(f'c{j}')}{_attrs(label=x)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _map_dot(f: EventMap) -> str:
    lines = [f"digraph {_quote(f.name or 'map')} {{", "    rankdir=LR;"]
    for side, model in (("src", f.source), ("dst", f.target)):
        lines.append(f"  subgraph {_quote('cluster_' + side)} {{")
        lines.append(f"    label={_quote(model.name or side)};")
        if isinstance(model, EventStructure):
            lines += [_node(x, model.labels[x], side + ":") for x in sorted(model.events)]
        else:
            lines += _body(model, side + ":")
        lines.append("  }")
    lines += [_edge(x, f(x), "src:", "dst:", style="dashed") for x in sorted(f.mapping)]
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(obj: Structure | EventMap) -> str:
    """DOT text of a model, a map, or (for a plain family) its configurations."""
    if isinstance(obj, EventMap):
        return _map_dot(obj)
    if isinstance(obj, EventStructure):
        return export_config_dot(obj)
    lines = [f"digraph {_quote(obj.name or obj.kind)} {{", *_body(obj), "}"]
    return "\n".join(lines) + "\n"
