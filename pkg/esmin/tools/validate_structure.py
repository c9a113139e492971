from typing import Annotated

from pydantic import BaseModel, Field
from fastmcp import FastMCP

from esmin.errors import EsminError, NonExecutableEvent
from esmin.models import BundleES, FlowES, as_event_structure, validate_model
from esmin.poset import EventStructure, validate_family
from esmin.reports import ValidationReport
from esmin.textio import parse_es


class ValidateStructureOut(BaseModel):
    kind: str | None = None
    valid: bool = False
    event_count: int = 0
    configuration_count: int | None = None
    report: ValidationReport | None = None
    error: str | None = None
    error_code: str | None = None


def register_validate_structure_tool(mcp: FastMCP) -> None:
    @mcp.tool(
        name="validate_structure",
        description="Parse an event structure in esmin text format (kind pes|aes|fes|bes|poset) and check its axioms. Returns violated clauses with witnesses and, for valid structures, the number of configurations."
    )
    async def validate_structure(
        text: Annotated[str, Field(description="Structure text, e.g. 'kind pes\\nevent a1\\nevent b1\\nle a1 b1'")],
        prune: Annotated[bool, Field(description="For FES/BES: drop events that occur in no configuration instead of failing")] = False,
    ) -> ValidateStructureOut:
        """
        Validate an event structure given as text.

        Args:
            text: Structure in esmin text format
            prune: Drop non-executable events of flow and bundle structures

        Returns:
            ValidateStructureOut: Kind, validity, counts and the validation report
        """
        try:
            model = parse_es(text, name="input")
            if isinstance(model, EventStructure):
                report = validate_family(model)
            else:
                report = validate_model(model)
            count = None
            if report.valid:
                try:
                    es = as_event_structure(model, prune=prune)
                    report.warnings.extend(n for n in es.notes if n not in report.warnings)
                    count = len(es.configs)
                except NonExecutableEvent as exc:
                    if not isinstance(model, (FlowES, BundleES)):
                        raise
                    report.add("fullness", exc.events, "events occur in no configuration")
            return ValidateStructureOut(
                kind=model.kind,
                valid=report.valid,
                event_count=len(model.events),
                configuration_count=count,
                report=report,
            )
        except EsminError as e:
            return ValidateStructureOut(error=str(e), error_code=e.code)
