"""
Services - workflows over polynomial systems.

Witness sets and slice moving, monodromy, trace tests, witness
collections and the multihomogeneous trace test.
"""

from multitrace.services.collection import WitnessCollection, multidegree, witness_collection
from multitrace.services.monodromy import Partition, monodromy_loop, monodromy_partition
from multitrace.services.mtrace import (
    MTraceReport,
    merge_witness_homotopy,
    multihomogeneous_trace_test,
)
from multitrace.services.reduction import classify_surface, reduce_to_curve, reduce_to_surface
from multitrace.services.solve import SolveReport, solve_square
from multitrace.services.trace import TraceTestResult, merge_blocks_by_trace, trace_test
from multitrace.services.witness import WitnessSet, move_slice, witness_set

__all__ = [
    "MTraceReport",
    "Partition",
    "SolveReport",
    "TraceTestResult",
    "WitnessCollection",
    "WitnessSet",
    "classify_surface",
    "merge_blocks_by_trace",
    "merge_witness_homotopy",
    "monodromy_loop",
    "monodromy_partition",
    "move_slice",
    "multidegree",
    "multihomogeneous_trace_test",
    "reduce_to_curve",
    "reduce_to_surface",
    "solve_square",
    "trace_test",
    "witness_collection",
    "witness_set",
]
