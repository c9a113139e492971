from typing import Annotated, Literal

from pydantic import BaseModel, Field
from fastmcp import FastMCP

from esmin.errors import EsminError
from esmin.folding import minimize
from esmin.textio import parse_es, serialize_es, serialize_map, serialize_partition


class QuotientOut(BaseModel):
    partition: str
    classes: list[list[str]]
    structure: str
    folding: str


class MinimizeStructureOut(BaseModel):
    cls: str
    quotients: list[QuotientOut] = Field(default_factory=list)
    unique: bool = False
    candidates: int = 0
    accepted: int = 0
    error: str | None = None
    error_code: str | None = None


def register_minimize_structure_tool(mcp: FastMCP) -> None:
    @mcp.tool(
        name="minimize_structure",
        description="Compute the maximal folding equivalences of a structure within a class (poset, pes or aes) and the corresponding quotients. The PES class has a unique answer; the poset and AES classes may have several incomparable maxima."
    )
    async def minimize_structure(
        text: Annotated[str, Field(description="Structure in esmin text format")],
        cls: Annotated[Literal["poset", "pes", "aes"], Field(description="Class the quotient must belong to")] = "poset",
    ) -> MinimizeStructureOut:
        """
        Minimise a structure by folding.

        Returns:
            MinimizeStructureOut: Each maximal equivalence with the serialized quotient
            and the folding map onto it
        """
        try:
            result = minimize(parse_es(text, name="input"), cls)
            return MinimizeStructureOut(
                cls=cls,
                quotients=[
                    QuotientOut(
                        partition=serialize_partition(q.partition),
                        classes=[sorted(b) for b in q.partition.nontrivial],
                        structure=serialize_es(q.structure),
                        folding=serialize_map(q.folding),
                    )
                    for q in result.quotients
                ],
                unique=result.unique,
                candidates=result.candidates,
                accepted=result.accepted,
            )
        except EsminError as e:
            return MinimizeStructureOut(cls=cls, error=str(e), error_code=e.code)
