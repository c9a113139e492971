from typing import Annotated

from pydantic import BaseModel, Field
from fastmcp import FastMCP

from esmin.textio import fixture_text, list_fixtures


class FixtureListOut(BaseModel):
    names: list[str]


class FixtureOut(BaseModel):
    name: str
    text: str = ""
    error: str | None = None
    error_code: str | None = None


def register_list_fixtures_tool(mcp: FastMCP) -> None:
    @mcp.tool(name="list_fixtures", description="List the bundled example structures (.es) and maps (.map), e.g. p0.es, p2.es, f02.map.")
    async def list_fixtures_tool() -> FixtureListOut:
        return FixtureListOut(names=list_fixtures())


def register_get_fixture_tool(mcp: FastMCP) -> None:
    @mcp.tool(name="get_fixture", description="Get the text of a bundled structure or map, ready to pass to the other tools. A name without extension means the .es file.")
    async def get_fixture(
        name: Annotated[str, Field(description="Fixture file name, e.g. 'p0' or 'f02.map'")],
    ) -> FixtureOut:
        try:
            return FixtureOut(name=name, text=fixture_text(name))
        except FileNotFoundError as e:
            return FixtureOut(name=name, error=str(e), error_code="not-found")
