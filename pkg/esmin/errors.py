"""
Error types raised by esmin.

Every error carries a stable kebab-case ``code`` so that the command line and the
tool server can report failures uniformly. Negative verdicts (not a folding, not
bisimilar, invalid structure) are never errors: they come back as reports.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Iterable

if TYPE_CHECKING:
    from esmin.reports import CheckReport, ValidationReport


class EsminError(ValueError):
    """Base class for all esmin errors."""

    code = "esmin-error"


class ConfigError(EsminError):
    code = "config-error"


class ConfigNotInFamily(EsminError):
    code = "config-not-in-family"

    def __init__(self, config: object):
        self.config = config
        super().__init__(f"configuration {config} is not in the family")


class NonExecutableEvent(EsminError):
    code = "non-executable-event"

    def __init__(self, events: Iterable[str]):
        self.events = sorted(events)
        super().__init__(
            "events occur in no configuration: " + ", ".join(self.events)
            + " (use prune to drop them)"
        )


class InvalidModel(EsminError):
    """A syntactic model violates its axioms and cannot be enumerated."""

    code = "invalid-model"

    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__(f"{report.subject or 'model'} is not valid:\n{report.render()}")


class InvalidPartition(EsminError):
    code = "invalid-partition"


class NonTotalMap(EsminError):
    code = "non-total-map"

    def __init__(self, missing: Iterable[str] = (), unknown: Iterable[str] = (),
                 outside: Iterable[str] = ()):
        self.missing = sorted(missing)
        self.unknown = sorted(unknown)
        self.outside = sorted(outside)
        parts = []
        if self.missing:
            parts.append("unmapped source events: " + ", ".join(self.missing))
        if self.unknown:
            parts.append("mapped events not in source: " + ", ".join(self.unknown))
        if self.outside:
            parts.append("images not in target: " + ", ".join(self.outside))
        super().__init__("; ".join(parts))


class NotAMorphism(EsminError):
    code = "not-a-morphism"

    def __init__(self, report: "CheckReport"):
        self.report = report
        super().__init__(f"map is not a morphism:\n{report.render()}")


class WrongClass(EsminError):
    code = "wrong-class"


class LabelClash(EsminError):
    code = "label-clash"

    def __init__(self, block: Iterable[str]):
        self.block = sorted(block)
        super().__init__("class mixes labels: " + " ".join(self.block))


class InvalidResult(EsminError):
    code = "invalid-result"

    def __init__(self, message: str, report: "ValidationReport | None" = None):
        self.report = report
        if report is not None:
            message = f"{message}\n{report.render()}"
        super().__init__(message)


class NotFoldings(EsminError):
    code = "not-foldings"


class NotHereditary(EsminError):
    code = "not-hereditary"


class ImageNotAHistory(EsminError):
    code = "image-not-a-history"


class TripleCapExceeded(EsminError):
    code = "triple-cap-exceeded"

    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(
            f"bisimulation universe exceeds {cap} triples (raise ESMIN_TRIPLE_CAP)"
        )


class PartitionCapExceeded(EsminError):
    code = "partition-cap-exceeded"

    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(
            f"more than {cap} candidate partitions (raise ESMIN_PARTITION_CAP)"
        )


class ParseError(EsminError):
    """A text input could not be read. Carries a 1-based line and column."""

    code = "syntax-error"

    def __init__(self, message: str, line: int = 0, column: int = 0, source: str = ""):
        self.line = line
        self.column = column
        self.source = source
        where = f"{source or '<text>'}:{line}:{column}: " if line else ""
        super().__init__(where + message)


class UndeclaredEvent(ParseError):
    code = "undeclared-event"


class DuplicateEvent(ParseError):
    code = "duplicate-event"


class KindMismatch(ParseError):
    code = "kind-mismatch"
