from typing import Annotated, Callable, Literal

from pydantic import BaseModel, Field
from fastmcp import FastMCP

from esmin.errors import EsminError, NotAMorphism
from esmin.folding import (
    check_abstraction_hom,
    check_folding,
    check_folding_aes,
    check_folding_pes,
    check_morphism,
    check_morphism_aes,
    check_morphism_pes,
)
from esmin.maps import EventMap
from esmin.reports import CheckReport
from esmin.textio import parse_es, parse_map

Criterion = Literal["morphism", "folding", "pes-morphism", "pes-folding", "aes-morphism", "aes-folding", "abstraction"]

CHECKS: dict[str, Callable[[EventMap], CheckReport]] = {
    "morphism": check_morphism,
    "folding": check_folding,
    "pes-morphism": check_morphism_pes,
    "pes-folding": check_folding_pes,
    "aes-morphism": check_morphism_aes,
    "aes-folding": check_folding_aes,
    "abstraction": check_abstraction_hom,
}


class CheckMapOut(BaseModel):
    criterion: str
    verdict: bool = False
    report: CheckReport | None = None
    rendered: str = ""
    error: str | None = None
    error_code: str | None = None


def register_check_map_tool(mcp: FastMCP) -> None:
    @mcp.tool(
        name="check_map",
        description="Check an event map between two structures. Criteria: morphism and folding work on configurations of any kind; pes-*/aes-* use the relation-level criteria and need PES/AES endpoints; abstraction checks the abstraction homomorphism clauses (PES) and reports folding alongside. A map that is not a morphism is reported as a negative folding verdict with the morphism report."
    )
    async def check_map(
        source_text: Annotated[str, Field(description="Source structure in esmin text format")],
        target_text: Annotated[str, Field(description="Target structure in esmin text format")],
        map_text: Annotated[str, Field(description="Map lines 'map <source-event> <target-event>', total on the source")],
        criterion: Annotated[Criterion, Field(description="Which check to run")] = "folding",
    ) -> CheckMapOut:
        """
        Check a map against a morphism, folding or abstraction criterion.

        Returns:
            CheckMapOut: Verdict, the structured report and its text rendering
        """
        try:
            source = parse_es(source_text, name="source")
            target = parse_es(target_text, name="target")
            f = parse_map(map_text, source, target, name="f")
            try:
                report = CHECKS[criterion](f)
                verdict = report.verdict
            except NotAMorphism as e:
                report, verdict = e.report, False
            return CheckMapOut(criterion=criterion, verdict=verdict, report=report, rendered=report.render())
        except EsminError as e:
            return CheckMapOut(criterion=criterion, error=str(e), error_code=e.code)
