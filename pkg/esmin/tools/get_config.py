from pydantic import BaseModel
from fastmcp import FastMCP

from esmin.esmin_config import config


class EsminConfigOut(BaseModel):
    triple_cap: int
    partition_cap: int
    log_level: str
    fixture_dir: str | None = None


def register_get_config_tool(mcp: FastMCP) -> None:
    @mcp.tool(name="get_config", description="Get the current esmin configuration: the caps on the bisimulation universe and on candidate partitions, the log level and the extra fixture directory.")
    async def get_config() -> EsminConfigOut:
        """
        Get the current esmin configuration.

        The caps bound the work of decide_bisimilarity and minimize_structure; when a
        call fails with triple-cap-exceeded or partition-cap-exceeded, these are the
        values to raise (ESMIN_TRIPLE_CAP, ESMIN_PARTITION_CAP).

        Returns:
            EsminConfigOut: Current caps, log level and fixture directory
        """
        fixture_dir = config.fixture_dir
        return EsminConfigOut(
            triple_cap=config.triple_cap,
            partition_cap=config.partition_cap,
            log_level=config.log_level,
            fixture_dir=str(fixture_dir) if fixture_dir else None,
        )
