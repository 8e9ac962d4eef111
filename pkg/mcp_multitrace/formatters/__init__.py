"""
Formatters - report rendering layer.

Converts workflow payloads into JSON text and one-line summaries.
"""

from mcp_multitrace.formatters.reports import format_json, format_summary

__all__ = [
    "format_json",
    "format_summary",
]
