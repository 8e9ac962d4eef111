"""In-memory memo of witness computations keyed by system digest

A witness set depends only on the system, the slice dimensions, the seed and
the tracker threads; the MCP server reuses it across tool calls (a decompose
after a witness call on the same system does not re-solve).
"""

import hashlib
from collections import OrderedDict
from typing import Any

from mcp_multitrace.logging_config import get_logger
from multitrace.calculations.parser import render_system
from multitrace.calculations.polynomial import PolySystem

logger = get_logger(__name__)

MAX_ENTRIES = 32

_cache: OrderedDict[tuple[Any, ...], Any] = OrderedDict()


def system_digest(system: PolySystem) -> str:
    """sha256 of the canonical rendering; identical systems share a digest"""
    return hashlib.sha256(render_system(system).encode()).hexdigest()


def cache_key(kind: str, system: PolySystem, *params: Any) -> tuple[Any, ...]:  # noqa: ANN401
    return (kind, system_digest(system), *params)


def get_cached(key: tuple[Any, ...]) -> Any:  # noqa: ANN401
    """Cached value or None"""
    if key not in _cache:
        logger.debug(f"Cache MISS: {key[0]} {key[1][:12]}")
        return None
    _cache.move_to_end(key)
    logger.info(f"Cache HIT: {key[0]} {key[1][:12]}")
    return _cache[key]


def set_cached(key: tuple[Any, ...], value: Any) -> None:  # noqa: ANN401
    _cache[key] = value
    _cache.move_to_end(key)
    while len(_cache) > MAX_ENTRIES:
        evicted, _ = _cache.popitem(last=False)
        logger.debug(f"Cache EVICT: {evicted[0]} {evicted[1][:12]}")
    logger.info(f"Cache SET: {key[0]} {key[1][:12]} ({len(_cache)} entries)")


def clear_cache() -> None:
    _cache.clear()


def get_cache_stats() -> dict[str, Any]:
    return {
        "total_entries": len(_cache),
        "entries": [{"kind": k[0], "digest": k[1], "params": list(k[2:])} for k in _cache],
    }
