from typing import Annotated

from pydantic import BaseModel, Field
from fastmcp import FastMCP

from esmin.errors import EsminError
from esmin.models import as_event_structure
from esmin.textio import parse_es


class ListConfigurationsOut(BaseModel):
    configurations: list[str] = Field(default_factory=list)
    histories: dict[str, list[str]] = Field(default_factory=dict)
    error: str | None = None
    error_code: str | None = None


def register_list_configurations_tool(mcp: FastMCP) -> None:
    @mcp.tool(
        name="list_configurations",
        description="List the configurations of an event structure as canonical strings '{a b c : a<c b<c}' (events, then covering pairs), plus the histories of every event."
    )
    async def list_configurations(
        text: Annotated[str, Field(description="Structure in esmin text format")],
        prune: Annotated[bool, Field(description="For FES/BES: drop events that occur in no configuration")] = False,
    ) -> ListConfigurationsOut:
        try:
            es = as_event_structure(parse_es(text, name="input"), prune=prune)
            return ListConfigurationsOut(
                configurations=[c.key for c in es.configs],
                histories={x: [h.config.key for h in es.histories_of(x)] for x in sorted(es.events)},
            )
        except EsminError as e:
            return ListConfigurationsOut(error=str(e), error_code=e.code)
