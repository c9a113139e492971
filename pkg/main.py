#!/usr/bin/env python3
"""
esmin MCP server

A Model Context Protocol server for checking foldings and minimising event structures.
"""

from esmin.app import main

if __name__ == "__main__":
    main()
