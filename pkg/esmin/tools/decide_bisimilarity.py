from typing import Annotated

from pydantic import BaseModel, Field
from fastmcp import FastMCP

from esmin.behavior import decide_bisim
from esmin.errors import EsminError
from esmin.textio import parse_es


class BisimSummary(BaseModel):
    hereditary: bool
    bisimilar: bool = False
    triple_count: int = 0
    triples: list[str] = Field(default_factory=list)
    error: str | None = None
    error_code: str | None = None


def register_decide_bisimilarity_tool(mcp: FastMCP) -> None:
    @mcp.tool(
        name="decide_bisimilarity",
        description="Decide whether two event structures are history preserving bisimilar (hereditary=false) or hereditary history preserving bisimilar (hereditary=true, the default). Returns the greatest bisimulation as triples 'C1 f C2' when it exists."
    )
    async def decide_bisimilarity(
        left_text: Annotated[str, Field(description="First structure in esmin text format")],
        right_text: Annotated[str, Field(description="Second structure in esmin text format")],
        hereditary: Annotated[bool, Field(description="Require downward closure (hhp) rather than plain hp")] = True,
        list_triples: Annotated[bool, Field(description="Include the triples of the relation in the answer")] = False,
    ) -> BisimSummary:
        try:
            relation = decide_bisim(
                parse_es(left_text, name="left"),
                parse_es(right_text, name="right"),
                hereditary=hereditary,
            )
            if relation is None:
                return BisimSummary(hereditary=hereditary)
            return BisimSummary(
                hereditary=hereditary,
                bisimilar=True,
                triple_count=len(relation),
                triples=[str(t) for t in relation.sorted()] if list_triples else [],
            )
        except EsminError as e:
            return BisimSummary(hereditary=hereditary, error=str(e), error_code=e.code)
