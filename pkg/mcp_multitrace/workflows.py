"""
Workflows behind the tools: witness, decompose, mtrace, multidegree.

Each returns an Outcome: a JSON-ready payload and whether the run
succeeded (certified, for decompose and mtrace). Input problems raise
InputError subclasses; numerical failures raise NumericalError subclasses.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

from mcp_multitrace.cache import cache_key, get_cached, set_cached
from mcp_multitrace.logging_config import get_logger
from multitrace.calculations.multidegree import (
    SLOT_CONVENTION,
    check_log_concavity,
    segre_degree,
)
from multitrace.calculations.polynomial import PolySystem, variety_dim
from multitrace.calculations.tracker import TrackerConfig
from multitrace.common.constants import DEFAULT_SEED, MONODROMY_BUDGET, TRACE_TOL
from multitrace.common.errors import InputError
from multitrace.serialization import (
    collection_from_json,
    collection_to_json,
    multidegree_to_json,
    mtrace_report_to_json,
    partition_to_json,
    trace_result_to_json,
    witness_set_to_json,
)
from multitrace.services.collection import WitnessCollection, multidegree, witness_collection
from multitrace.services.monodromy import monodromy_partition
from multitrace.services.mtrace import multihomogeneous_trace_test
from multitrace.services.trace import merge_blocks_by_trace
from multitrace.services.witness import WitnessSet, witness_set

logger = get_logger(__name__)


@dataclass(frozen=True)
class RunConfig:
    seed: int = DEFAULT_SEED
    tol: float = TRACE_TOL
    threads: int = 1  # 0 = one per CPU

    def __post_init__(self) -> None:
        if self.tol <= 0:
            msg = f"tol must be positive, got {self.tol}"
            raise InputError(msg)
        if self.threads < 0:
            msg = f"threads must be >= 0, got {self.threads}"
            raise InputError(msg)

    @property
    def tracker(self) -> TrackerConfig:
        return TrackerConfig(threads=self.threads)


@dataclass(frozen=True)
class Outcome:
    payload: dict[str, Any]
    ok: bool = True


def default_dims(system: PolySystem, dims: Sequence[int] | None) -> tuple[int, ...]:
    if dims is not None:
        return tuple(int(d) for d in dims)
    if len(system.groups) != 1:
        msg = "dims are required for systems with several variable groups"
        raise InputError(msg)
    return (variety_dim(system),)


def compute_witness(system: PolySystem, dims: Sequence[int], run: RunConfig) -> WitnessSet:
    key = cache_key("witness", system, tuple(dims), run.seed, run.threads)
    cached = get_cached(key)
    if isinstance(cached, WitnessSet):
        return cached
    w = witness_set(system, dims, run.seed, run.tracker)
    set_cached(key, w)
    return w


def compute_collection(system: PolySystem, m: int | None, run: RunConfig) -> WitnessCollection:
    key = cache_key("collection", system, m, run.seed, run.threads)
    cached = get_cached(key)
    if isinstance(cached, WitnessCollection):
        return cached
    coll = witness_collection(system, m, run.seed, run.tracker)
    set_cached(key, coll)
    return coll


def run_witness(
    system: PolySystem,
    run: RunConfig,
    dims: Sequence[int] | None = None,
    collection: int | None = None,
) -> Outcome:
    """One witness set, or with `collection` = m the witness collection of dimension m"""
    if collection is not None:
        if dims is not None:
            msg = "give either dims or a collection dimension, not both"
            raise InputError(msg)
        return Outcome(collection_to_json(compute_collection(system, collection, run)))
    w = compute_witness(system, default_dims(system, dims), run)
    return Outcome(witness_set_to_json(w))


def run_decompose(
    system: PolySystem,
    run: RunConfig,
    dims: Sequence[int] | None = None,
    budget: int = MONODROMY_BUDGET,
) -> Outcome:
    """Monodromy partition of a witness set, then a trace test per block"""
    if len(system.groups) != 1:
        msg = "decompose handles one variable group; use mtrace for biprojective varieties"
        raise InputError(msg)
    if budget < 0:
        msg = f"budget must be >= 0, got {budget}"
        raise InputError(msg)
    w = compute_witness(system, default_dims(system, dims), run)
    partition = monodromy_partition(w, budget, run.seed, run.tracker)
    if not w.points:
        return Outcome({"degree": 0, "partition": partition_to_json(partition), "blocks": []})

    merged, results = merge_blocks_by_trace(w, partition, run.seed, run.tracker, run.tol)
    complete = {r.subset for r in results}
    ok = all(b in complete for b in merged.blocks)
    logger.info(f"decompose: blocks {merged.sizes}, certified {ok}")
    return Outcome(
        {
            "degree": len(w),
            "partition": partition_to_json(merged),
            "blocks": [trace_result_to_json(r) for r in results],
            "uncertified": [list(b) for b in merged.blocks if b not in complete],
            "complete": ok,
        },
        ok,
    )


def run_mtrace(system: PolySystem, collection: Any, run: RunConfig) -> Outcome:  # noqa: ANN401
    """Multihomogeneous trace test of a (partial) witness collection given as decoded JSON"""
    coll = collection_from_json(collection, system)
    report = multihomogeneous_trace_test(system, coll, run.seed, run.tracker, run.tol)
    return Outcome(mtrace_report_to_json(report), report.complete)


def run_multidegree(system: PolySystem, run: RunConfig, m: int | None = None) -> Outcome:
    """Multidegree from the point counts of a witness collection"""
    md = multidegree(compute_collection(system, m, run))
    return Outcome(
        {
            "multidegree": list(md.values),
            "convention": SLOT_CONVENTION,
            "detail": multidegree_to_json(md),
            "segre_degree": segre_degree(md),
            "log_concave": check_log_concavity(md),
        }
    )
