from typing import Annotated

from pydantic import BaseModel, Field
from fastmcp import FastMCP

from esmin.errors import EsminError
from esmin.textio import parse_es, serialize_es
from esmin.unfold import canonical_pes


class UnfoldStructureOut(BaseModel):
    pes: str = ""
    event_count: int = 0
    owners: dict[str, str] = Field(default_factory=dict)
    error: str | None = None
    error_code: str | None = None


def register_unfold_structure_tool(mcp: FastMCP) -> None:
    @mcp.tool(
        name="unfold_structure",
        description="Build the canonical prime event structure of a structure: one event per history, causality is prefix, conflict is incompatibility. Event ids are '<owner>@<history events joined by .>'."
    )
    async def unfold_structure(
        text: Annotated[str, Field(description="Structure in esmin text format")],
    ) -> UnfoldStructureOut:
        try:
            cp = canonical_pes(parse_es(text, name="input"))
            return UnfoldStructureOut(
                pes=serialize_es(cp.pes),
                event_count=len(cp.pes.events),
                owners={eid: cp.owner(eid) for eid in sorted(cp.pes.events)},
            )
        except EsminError as e:
            return UnfoldStructureOut(error=str(e), error_code=e.code)
