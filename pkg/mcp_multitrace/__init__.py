"""
mcp_multitrace - command line and MCP front end for multitrace
Workflows are testable independently of the MCP protocol layer
"""
