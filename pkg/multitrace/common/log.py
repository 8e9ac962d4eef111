"""Logger accessor for library modules.

The library never configures handlers; the front end installs queue-based
logging (mcp_multitrace.logging_config) and records flow through the root logger.
"""

import logging


def get_logger(name: str) -> logging.Logger:
    """Get a library logger (usually called with __name__)"""
    return logging.getLogger(name)
