"""
esmin

Foldings and minimal quotients of event structures: configuration families, prime,
asymmetric, flow and bundle event structures, history preserving bisimulations,
canonical unfoldings, and a command line and MCP server around them.
"""

__version__ = "0.1.0"
