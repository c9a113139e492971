"""Verdict and validation reports shared by every check."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, computed_field


class Violation(BaseModel):
    """One failed clause, with the events or configurations that witness it."""

    model_config = ConfigDict(frozen=True)

    clause: str
    witness: list[str] = Field(default_factory=list)
    message: str = ""

    def render(self) -> str:
        text = f"[{self.clause}]"
        if self.message:
            text += f" {self.message}"
        if self.witness:
            text += f" (witness: {'; '.join(self.witness)})"
        return text


class ValidationReport(BaseModel):
    subject: str = ""
    violations: list[Violation] = Field(default_factory=list)
    warnings: list[str] = Field(default_factory=list)

    @computed_field
    @property
    def valid(self) -> bool:
        return not self.violations

    def add(self, clause: str, witness: list[str] | tuple[str, ...] = (), message: str = "") -> None:
        self.violations.append(Violation(clause=clause, witness=list(witness), message=message))

    def render(self) -> str:
        head = f"{self.subject or 'structure'}: {'valid' if self.valid else 'INVALID'}"
        lines = [head]
        lines.extend(f"  warning: {w}" for w in self.warnings)
        lines.extend(f"  {v.render()}" for v in self.violations)
        return "\n".join(lines)


class CheckReport(BaseModel):
    """Result of checking a map (or an equivalence) against a family of clauses.

    ``verdict`` is true iff there are no violations. ``related`` holds reports of
    checks run alongside the main one, e.g. whether an abstraction homomorphism is
    also a folding.
    """

    check: str
    subject: str = ""
    violations: list[Violation] = Field(default_factory=list)
    related: dict[str, "CheckReport"] = Field(default_factory=dict)

    @computed_field
    @property
    def verdict(self) -> bool:
        return not self.violations

    def add(self, clause: str, witness: list[str] | tuple[str, ...] = (), message: str = "") -> None:
        self.violations.append(Violation(clause=clause, witness=list(witness), message=message))

    def clauses(self) -> set[str]:
        return {v.clause for v in self.violations}

    def render(self) -> str:
        name = f"{self.check} {self.subject}".strip()
        lines = [f"{name}: {'yes' if self.verdict else 'no'}"]
        lines.extend(f"  {v.render()}" for v in self.violations)
        for key in sorted(self.related):
            sub = self.related[key].render().splitlines()
            lines.append(f"  {key}: {sub[0].split(': ', 1)[-1]}")
            lines.extend(f"  {line}" for line in sub[1:])
        return "\n".join(lines)


CheckReport.model_rebuild()
