# esmin/app.py
from fastmcp import FastMCP
import argparse
from dotenv import load_dotenv
import os
import sys
import logging

MCP_SERVER_NAME = "esmin"
logger = logging.getLogger(__name__)

# load configuration variables from .env
env_path = os.path.join(os.getcwd(), ".env")
load_dotenv(env_path)
from esmin.esmin_config import config

# import server tools registration functions
from esmin.tools.get_config import register_get_config_tool
from esmin.tools.validate_structure import register_validate_structure_tool
from esmin.tools.list_configurations import register_list_configurations_tool
from esmin.tools.check_map import register_check_map_tool
from esmin.tools.decide_bisimilarity import register_decide_bisimilarity_tool
from esmin.tools.minimize_structure import register_minimize_structure_tool
from esmin.tools.unfold_structure import register_unfold_structure_tool
from esmin.tools.fixtures import register_get_fixture_tool, register_list_fixtures_tool


def build_server() -> FastMCP:
    mcp = FastMCP(
        MCP_SERVER_NAME,
        instructions=f"""esmin: foldings, bisimulations and minimal quotients of event structures.

        Structures are exchanged as text. A file starts with 'kind pes|aes|fes|bes|poset',
        declares events with 'event <id> [<label>]' (the label defaults to the id without
        trailing digits) and lists direct relations: 'le x y' (causality), 'cf x y'
        (conflict), 'ac x y' (asymmetric conflict, x before y), 'fl x y' (flow),
        'bundle x1 x2 -> y', or for kind poset 'config a b c : a<c b<c'. Maps are lines
        'map <source-event> <target-event>'.

        Typical workflow:
        1. Use list_fixtures / get_fixture to fetch example structures
        2. Use validate_structure and list_configurations to inspect a structure
        3. Use check_map to decide whether a map is a morphism or a folding
        4. Use decide_bisimilarity to compare two structures
        5. Use minimize_structure to compute minimal quotients in a class
        6. Use unfold_structure for the canonical prime event structure

        Current limits: bisimulation universe {config.triple_cap} triples,
        {config.partition_cap} candidate partitions. All operations are pure and read-only.
        """
    )

    # Register tools
    register_get_config_tool(mcp)
    register_list_fixtures_tool(mcp)
    register_get_fixture_tool(mcp)
    register_validate_structure_tool(mcp)
    register_list_configurations_tool(mcp)
    register_check_map_tool(mcp)
    register_decide_bisimilarity_tool(mcp)
    register_minimize_structure_tool(mcp)
    register_unfold_structure_tool(mcp)
    return mcp


# entry point
def main() -> None:
    ap = argparse.ArgumentParser(description="esmin MCP server (stdio)")
    ap.add_argument("--log-level", default=None, help="override ESMIN_LOG_LEVEL")
    args = ap.parse_args()

    # stdout carries JSON-RPC; logs go to stderr
    logging.basicConfig(
        level=(args.log_level or config.log_level).upper(),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    mcp = build_server()
    logger.info("starting %s over stdio", MCP_SERVER_NAME)
    mcp.run(transport="stdio")


if __name__ == "__main__":
    main()
