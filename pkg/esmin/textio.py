"""
Line-oriented text formats for structures, maps and partitions, and the fixture corpus.

Structure files start with ``kind pes|aes|fes|bes|poset``, declare events with
``event <id> [<label>]`` and then list relations. Only direct relations need be
written; loading closes them. ``#`` starts a comment.
"""

from __future__ import annotations

import logging
import re
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

from esmin.errors import DuplicateEvent, KindMismatch, ParseError, UndeclaredEvent
from esmin.esmin_config import config
from esmin.maps import EventMap, EventPartition
from esmin.models import AsymES, BundleES, FlowES, PrimeES, Structure
from esmin.poset import EVENT_RE, LABEL_RE, EventStructure, PosetConfig, default_label

logger = logging.getLogger(__name__)

KINDS = ("pes", "aes", "fes", "bes", "poset")

# which relation keywords each kind accepts
_ALLOWED = {
    "pes": {"le", "cf"},
    "aes": {"le", "ac"},
    "fes": {"fl", "cf"},
    "bes": {"bundle", "cf"},
    "poset": {"config"},
}
_RELATIONS = {"le", "cf", "ac", "fl", "bundle", "config"}


class Token(NamedTuple):
    text: str
    line: int
    column: int


def _lines(text: str) -> Iterator[list[Token]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        tokens = [Token(m.group(), number, m.start() + 1) for m in re.finditer(r"\S+", body)]
        if tokens:
            yield tokens


class _Reader:
    """Shared bookkeeping: declared events and positioned errors."""

    def __init__(self, source: str):
        self.source = source
        self.events: dict[str, str] = {}

    def fail(self, cls: type[ParseError], message: str, token: Token) -> ParseError:
        return cls(message, token.line, token.column, self.source)

    def arity(self, tokens: list[Token], low: int, high: int | None = None) -> None:
        count = len(tokens) - 1
        high = low if high is None else high
        if not low <= count <= high:
            want = str(low) if low == high else f"{low} to {high}"
            raise self.fail(ParseError, f"{tokens[0].text} takes {want} arguments, got {count}", tokens[0])

    def event_id(self, token: Token) -> str:
        if not EVENT_RE.match(token.text):
            raise self.fail(ParseError, f"bad event id {token.text!r}", token)
        return token.text

    def declared(self, token: Token, known: Iterable[str] | None = None) -> str:
        known = self.events if known is None else known
        if token.text not in known:
            raise self.fail(UndeclaredEvent, f"event {token.text!r} is not declared", token)
        return token.text


def _pair(reader: _Reader, tokens: list[Token]) -> tuple[str, str]:
    reader.arity(tokens, 2)
    return reader.declared(tokens[1]), reader.declared(tokens[2])


def parse_es(text: str, name: str = "", source: str = "") -> Structure:
    """Read a structure; relations are closed by the model constructors."""
    reader = _Reader(source or name)
    kind: str | None = None
    pairs: dict[str, list[tuple[str, str]]] = {k: [] for k in ("le", "cf", "ac", "fl")}
    bundles: list[tuple[list[str], str]] = []
    configs: list[PosetConfig] = []

    for tokens in _lines(text):
        head = tokens[0]
        word = head.text
        if word == "kind":
            reader.arity(tokens, 1)
            if kind is not None:
                raise reader.fail(ParseError, "kind is declared twice", head)
            if tokens[1].text not in KINDS:
                raise reader.fail(ParseError, f"unknown kind {tokens[1].text!r}", tokens[1])
            kind = tokens[1].text
            continue
        if kind is None:
            raise reader.fail(ParseError, "the first statement must be 'kind'", head)
        if word == "event":
            reader.arity(tokens, 1, 2)
            eid = reader.event_id(tokens[1])
            if eid in reader.events:
                raise reader.fail(DuplicateEvent, f"event {eid!r} is declared twice", tokens[1])
            label = tokens[2].text if len(tokens) == 3 else default_label(eid)
            if not LABEL_RE.match(label):
                raise reader.fail(ParseError, f"bad label {label!r}", tokens[-1])
            reader.events[eid] = label
            continue
        if word not in _RELATIONS:
            raise reader.fail(ParseError, f"unknown statement {word!r}", head)
        if word not in _ALLOWED[kind]:
            raise reader.fail(KindMismatch, f"{word!r} is not allowed in a {kind} file", head)
        if word == "bundle":
            arrow = [i for i, t in enumerate(tokens) if t.text == "->"]
            if len(arrow) != 1 or arrow[0] < 2 or arrow[0] != len(tokens) - 2:
                raise reader.fail(ParseError, "expected 'bundle x1 ... -> y'", head)
            members = [reader.declared(t) for t in tokens[1:arrow[0]]]
            bundles.append((members, reader.declared(tokens[-1])))
        elif word == "config":
            configs.append(_config(reader, tokens))
        else:
            pairs[word].append(_pair(reader, tokens))

    if kind is None:
        raise ParseError("missing 'kind' statement", 0, 0, reader.source)
    events, labels = reader.events.keys(), reader.events
    if kind == "pes":
        return PrimeES.build(events, labels, pairs["le"], pairs["cf"], name=name)
    if kind == "aes":
        return AsymES.build(events, labels, pairs["le"], pairs["ac"], name=name)
    if kind == "fes":
        return FlowES.build(events, labels, pairs["fl"], pairs["cf"], name=name)
    if kind == "bes":
        return BundleES.build(events, labels, bundles, pairs["cf"], name=name)
    return EventStructure.build(configs, labels, events=events, name=name)


def _config(reader: _Reader, tokens: list[Token]) -> PosetConfig:
    members: list[str] = []
    order: list[tuple[str, str]] = []
    seen_colon = False
    for token in tokens[1:]:
        if token.text == ":":
            if seen_colon:
                raise reader.fail(ParseError, "more than one ':' in config", token)
            seen_colon = True
        elif not seen_colon:
            members.append(reader.declared(token))
        else:
            parts = token.text.split("<")
            if len(parts) != 2:
                raise reader.fail(ParseError, f"expected x<y, got {token.text!r}", token)
            x, y = (reader.declared(Token(p, token.line, token.column), members) for p in parts)
            order.append((x, y))
    if len(set(members)) != len(members):
        raise reader.fail(DuplicateEvent, "an event is listed twice in config", tokens[0])
    return PosetConfig.build(members, order)


def _event_lines(model: Structure) -> list[str]:
    return [f"event {x} {model.labels[x]}" for x in sorted(model.events)]


def _pairs(word: str, pairs: Iterable[tuple[str, str]]) -> list[str]:
    return [f"{word} {x} {y}" for x, y in sorted(pairs)]


def _one_way(pairs: Iterable[tuple[str, str]]) -> list[tuple[str, str]]:
    return [(x, y) for x, y in pairs if x < y]


def serialize_es(model: Structure) -> str:
    """Canonical text: events by id, then reduced relations in sorted order."""
    lines = [f"kind {model.kind}", *_event_lines(model)]
    if isinstance(model, PrimeES):
        lines += _pairs("le", model.direct_causality)
        lines += _pairs("cf", model.direct_conflict)
    elif isinstance(model, AsymES):
        lines += _pairs("le", model.direct_causality)
        lines += _pairs("ac", model.direct_aconflict)
    elif isinstance(model, FlowES):
        lines += _pairs("fl", model.flow)
        lines += _pairs("cf", _one_way(model.conflict))
    elif isinstance(model, BundleES):
        for xs, y in sorted(model.bundles, key=lambda b: (b[1], sorted(b[0]))):
            lines.append(f"bundle {' '.join(sorted(xs))} -> {y}")
        lines += _pairs("cf", _one_way(model.conflict))
    else:
        for c in model.configs:
            line = " ".join(["config", *sorted(c.events)])
            if c.reduction:
                line += " : " + " ".join(f"{x}<{y}" for x, y in sorted(c.reduction))
            lines.append(line)
    return "\n".join(lines) + "\n"


def parse_map(text: str, source: Structure, target: Structure, name: str = "") -> EventMap:
    reader = _Reader(name)
    mapping: dict[str, str] = {}
    for tokens in _lines(text):
        if tokens[0].text != "map":
            raise reader.fail(ParseError, f"expected 'map', got {tokens[0].text!r}", tokens[0])
        reader.arity(tokens, 2)
        x = reader.declared(tokens[1], source.events)
        y = reader.declared(tokens[2], target.events)
        if x in mapping:
            raise reader.fail(DuplicateEvent, f"{x!r} is mapped twice", tokens[1])
        mapping[x] = y
    return EventMap.build(source, target, mapping, name=name)


def serialize_map(f: EventMap) -> str:
    return "".join(f"map {x} {f(x)}\n" for x in sorted(f.mapping))


def parse_partition(text: str, events: Iterable[str], name: str = "") -> EventPartition:
    """Read ``class`` lines; events not listed are singletons."""
    reader = _Reader(name)
    events = frozenset(events)
    seen: set[str] = set()
    classes: list[list[str]] = []
    for tokens in _lines(text):
        if tokens[0].text != "class":
            raise reader.fail(ParseError, f"expected 'class', got {tokens[0].text!r}", tokens[0])
        block = []
        for token in tokens[1:]:
            x = reader.declared(token, events)
            if x in seen:
                raise reader.fail(DuplicateEvent, f"{x!r} is in more than one class", token)
            seen.add(x)
            block.append(x)
        classes.append(block)
    return EventPartition.of(classes, events)


def serialize_partition(p: EventPartition) -> str:
    return "".join(f"class {' '.join(sorted(block))}\n" for block in p.nontrivial)


# files and fixtures


def read_es(path: str | Path) -> Structure:
    path = Path(path)
    return parse_es(path.read_text(encoding="utf-8"), name=path.stem, source=str(path))


def read_map(path: str | Path, source: Structure, target: Structure) -> EventMap:
    path = Path(path)
    return parse_map(path.read_text(encoding="utf-8"), source, target, name=path.stem)


def read_partition(path: str | Path, events: Iterable[str]) -> EventPartition:
    path = Path(path)
    return parse_partition(path.read_text(encoding="utf-8"), events, name=path.stem)


def _bundled() -> list[Path]:
    root = resources.files("esmin.fixtures")
    return [Path(str(entry)) for entry in root.iterdir() if entry.name.endswith((".es", ".map"))]


def list_fixtures() -> list[str]:
    """File names of the fixture corpus, the override directory first."""
    names = {p.name for p in _bundled()}
    if config.fixture_dir is not None and config.fixture_dir.is_dir():
        names |= {p.name for p in config.fixture_dir.iterdir() if p.suffix in (".es", ".map")}
    return sorted(names)


def fixture_path(name: str) -> Path:
    """Locate a fixture by file name; ``p0`` means ``p0.es``."""
    if "." not in name:
        name += ".es"
    if config.fixture_dir is not None:
        candidate = config.fixture_dir / name
        if candidate.is_file():
            return candidate
    for path in _bundled():
        if path.name == name:
            return path
    raise FileNotFoundError(f"no fixture named {name!r}")


def fixture_text(name: str) -> str:
    return fixture_path(name).read_text(encoding="utf-8")


def load_fixture(name: str) -> Structure:
    path = fixture_path(name)
    return parse_es(path.read_text(encoding="utf-8"), name=path.stem, source=path.name)


def load_fixture_map(name: str, source: Structure, target: Structure) -> EventMap:
    path = fixture_path(name if name.endswith(".map") else name + ".map")
    return parse_map(path.read_text(encoding="utf-8"), source, target, name=path.stem)
