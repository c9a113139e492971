"""
esmin tools package

Tool implementations for the esmin MCP server.
"""
