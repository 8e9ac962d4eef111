"""
multitrace - numerical algebraic geometry utilities

Pure library for witness sets, homotopy continuation, monodromy and
trace tests on affine, projective and biprojective varieties.
No MCP dependencies.

Modules:
- common: Utilities (constants, errors, logging, seeded randomness)
- calculations: Math (polynomial systems, parser, slices, start systems, tracker)
- services: Workflows (witness sets, monodromy, trace tests, multidegrees)
- serialization: JSON codecs
"""

from multitrace.calculations.multidegree import MultiDegree, check_log_concavity, segre_degree
from multitrace.calculations.parser import parse_system, render_system
from multitrace.calculations.polynomial import Point, PolySystem, VarGroup
from multitrace.calculations.tracker import TrackerConfig
from multitrace.services.collection import WitnessCollection, multidegree, witness_collection
from multitrace.services.monodromy import Partition, monodromy_partition
from multitrace.services.mtrace import MTraceReport, multihomogeneous_trace_test
from multitrace.services.trace import TraceTestResult, trace_test
from multitrace.services.witness import WitnessSet, move_slice, witness_set

__all__ = [
    # Systems
    "PolySystem",
    "VarGroup",
    "Point",
    "parse_system",
    "render_system",
    # Witness sets
    "TrackerConfig",
    "WitnessSet",
    "witness_set",
    "move_slice",
    # Decomposition and certification
    "Partition",
    "monodromy_partition",
    "TraceTestResult",
    "trace_test",
    # Biprojective
    "WitnessCollection",
    "witness_collection",
    "MultiDegree",
    "multidegree",
    "check_log_concavity",
    "segre_degree",
    "MTraceReport",
    "multihomogeneous_trace_test",
]

__version__ = "0.1.0"
