"""
JSON codecs.

Complex numbers are [re, im] pairs of floats. json writes floats with
repr, so encode followed by decode reproduces every value bit for bit.
Decoders raise SchemaError on any structural mismatch.
"""

from collections.abc import Callable, Mapping, Sequence
from typing import Any, TypeVar

import numpy as np

from multitrace.calculations.multidegree import MultiDegree
from multitrace.calculations.polynomial import ComplexMatrix, Point, PolySystem
from multitrace.calculations.slices import LinearForm, Slice
from multitrace.common.errors import MultitraceError, SchemaError
from multitrace.services.collection import Slot, WitnessCollection
from multitrace.services.monodromy import Partition
from multitrace.services.mtrace import MTraceReport, PairReport
from multitrace.services.reduction import SurfaceCase
from multitrace.services.trace import TraceLine, TraceSample, TraceTestResult
from multitrace.services.witness import WitnessSet

Json = dict[str, Any]
T = TypeVar("T")

SCHEMA_VERSION = 1


# Scalars and arrays

def complex_to_json(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def complex_from_json(data: Any) -> complex:
    if (
        not isinstance(data, list)
        or len(data) != 2  # noqa: PLR2004
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in data)
    ):
        msg = f"expected a [re, im] pair, got {data!r}"
        raise SchemaError(msg)
    return complex(float(data[0]), float(data[1]))


def vector_to_json(v: Sequence[complex] | np.ndarray) -> list[list[float]]:
    return [complex_to_json(complex(z)) for z in v]


def vector_from_json(data: Any, length: int | None = None) -> np.ndarray:
    if not isinstance(data, list):
        msg = "expected a list of [re, im] pairs"
        raise SchemaError(msg)
    if length is not None and len(data) != length:
        msg = f"expected {length} entries, got {len(data)}"
        raise SchemaError(msg)
    return np.array([complex_from_json(x) for x in data], dtype=np.complex128)


def matrix_to_json(m: ComplexMatrix | None) -> list[list[list[float]]] | None:
    return None if m is None else [vector_to_json(row) for row in m]


def matrix_from_json(data: Any) -> ComplexMatrix | None:
    if data is None:
        return None
    if not isinstance(data, list) or not data:
        msg = "expected a nonempty list of rows"
        raise SchemaError(msg)
    rows = [vector_from_json(row) for row in data]
    if len({len(r) for r in rows}) != 1:
        msg = "matrix rows have different lengths"
        raise SchemaError(msg)
    return np.vstack(rows)


def _field(data: Any, key: str, kind: type | tuple[type, ...] | None = None) -> Any:
    if not isinstance(data, Mapping):
        msg = f"expected an object with key {key!r}"
        raise SchemaError(msg)
    if key not in data:
        msg = f"missing key {key!r}"
        raise SchemaError(msg)
    value = data[key]
    if kind is not None and not isinstance(value, kind):
        msg = f"key {key!r} has the wrong type"
        raise SchemaError(msg)
    return value


def _guarded(decode: Callable[[], T]) -> T:
    """Library validation errors inside a decoder surface as SchemaError"""
    try:
        return decode()
    except SchemaError:
        raise
    except (MultitraceError, ValueError, TypeError, KeyError) as e:
        msg = f"invalid data: {e}"
        raise SchemaError(msg) from e


# Slices and witness sets

def form_to_json(form: LinearForm) -> Json:
    return {
        "coefficients": vector_to_json(form.coefficients),
        "constant": complex_to_json(form.constant),
        "group": form.group,
    }


def form_from_json(data: Any, n_vars: int) -> LinearForm:
    group = _field(data, "group")
    if group is not None and (not isinstance(group, int) or isinstance(group, bool)):
        msg = "form group must be an integer or null"
        raise SchemaError(msg)
    return LinearForm(
        vector_from_json(_field(data, "coefficients"), n_vars),
        complex_from_json(_field(data, "constant")),
        group,
    )


def charts_to_json(charts: Sequence[LinearForm | None]) -> list[Json | None]:
    return [None if c is None else form_to_json(c) for c in charts]


def charts_from_json(data: Any, system: PolySystem) -> tuple[LinearForm | None, ...]:
    if not isinstance(data, list) or len(data) != len(system.groups):
        msg = f"expected one chart entry per group ({len(system.groups)})"
        raise SchemaError(msg)
    charts = tuple(None if c is None else form_from_json(c, system.n_vars) for c in data)
    for group, chart in zip(system.groups, charts, strict=True):
        if group.homogeneous != (chart is not None):
            msg = f"group {group.name} chart does not match its kind"
            raise SchemaError(msg)
    return charts


def slice_to_json(sl: Slice, charts: bool = True) -> Json:
    out: Json = {"forms": [form_to_json(f) for f in sl.forms]}
    if charts:
        out["charts"] = charts_to_json(sl.charts)
    return out


def slice_from_json(
    data: Any, system: PolySystem, charts: tuple[LinearForm | None, ...] | None = None
) -> Slice:
    if charts is None:
        charts = charts_from_json(_field(data, "charts"), system)
    forms = tuple(form_from_json(f, system.n_vars) for f in _field(data, "forms", list))
    return Slice(charts, forms)


def _check_variables(data: Any, system: PolySystem) -> None:
    variables = _field(data, "variables", list)
    if tuple(variables) != system.variables:
        msg = f"data variables {variables} do not match the system {list(system.variables)}"
        raise SchemaError(msg)


def witness_set_to_json(w: WitnessSet) -> Json:
    return {
        "version": SCHEMA_VERSION,
        "variables": list(w.system.variables),
        "dims": list(w.dims),
        "slice": slice_to_json(w.slice),
        "randomization": matrix_to_json(w.randomization),
        "points": [vector_to_json(p.coordinates) for p in w.points],
    }


def _points_from_json(data: Any, n_vars: int) -> tuple[Point, ...]:
    if not isinstance(data, list):
        msg = "points must be a list"
        raise SchemaError(msg)
    return tuple(Point(vector_from_json(p, n_vars)) for p in data)


def _set_from_json(
    data: Any,
    system: PolySystem,
    charts: tuple[LinearForm | None, ...] | None,
    randomization: ComplexMatrix | None,
) -> WitnessSet:
    sl = slice_from_json(_field(data, "slice"), system, charts)
    dims = _field(data, "dims", list)
    if tuple(dims) != sl.dims:
        msg = f"dims {dims} do not match the slice {list(sl.dims)}"
        raise SchemaError(msg)
    points = _points_from_json(_field(data, "points"), system.n_vars)
    return WitnessSet(system, sl, points, randomization)


def witness_set_from_json(data: Any, system: PolySystem) -> WitnessSet:
    def decode() -> WitnessSet:
        _check_variables(data, system)
        randomization = matrix_from_json(data.get("randomization"))
        return _set_from_json(data, system, None, randomization)

    return _guarded(decode)


def _slot_key(slot: Slot) -> str:
    return f"{slot[0]},{slot[1]}"


def _parse_slot(key: str) -> Slot:
    try:
        a, b = (int(x) for x in key.split(","))
    except ValueError as e:
        msg = f"collection key {key!r} is not of the form 'm1,m2'"
        raise SchemaError(msg) from e
    return a, b


def collection_to_json(coll: WitnessCollection) -> Json:
    randomization = coll[coll.slots[0]].randomization
    return {
        "version": SCHEMA_VERSION,
        "variables": list(coll.system.variables),
        "m": coll.m,
        "charts": charts_to_json(coll.charts),
        "randomization": matrix_to_json(randomization),
        "sets": {
            _slot_key(slot): {
                "dims": list(w.dims),
                "slice": slice_to_json(w.slice, charts=False),
                "points": [vector_to_json(p.coordinates) for p in w.points],
            }
            for slot, w in coll
        },
    }


def collection_from_json(data: Any, system: PolySystem) -> WitnessCollection:
    def decode() -> WitnessCollection:
        _check_variables(data, system)
        m = _field(data, "m", int)
        charts = charts_from_json(_field(data, "charts"), system)
        randomization = matrix_from_json(data.get("randomization"))
        sets = {
            _parse_slot(key): _set_from_json(value, system, charts, randomization)
            for key, value in _field(data, "sets", dict).items()
        }
        return WitnessCollection(system, m, sets)

    return _guarded(decode)


# Reports

def trace_result_to_json(result: TraceTestResult) -> Json:
    return {
        "complete": result.complete,
        "residual": result.residual,
        "trace": {"c0": vector_to_json(result.trace.c0), "c1": vector_to_json(result.trace.c1)},
        "subset": list(result.subset),
        "samples": [
            {"tau": complex_to_json(s.tau), "sum": vector_to_json(s.sum), "count": s.count}
            for s in result.samples
        ],
    }


def trace_result_from_json(data: Any) -> TraceTestResult:
    def decode() -> TraceTestResult:
        trace = _field(data, "trace", dict)
        samples = tuple(
            TraceSample(
                complex_from_json(_field(s, "tau")),
                vector_from_json(_field(s, "sum")),
                _field(s, "count", int),
            )
            for s in data.get("samples", [])
        )
        return TraceTestResult(
            complete=_field(data, "complete", bool),
            residual=float(_field(data, "residual", (int, float))),
            trace=TraceLine(
                vector_from_json(_field(trace, "c0")), vector_from_json(_field(trace, "c1"))
            ),
            samples=samples,
            subset=tuple(data.get("subset", ())),
        )

    return _guarded(decode)


def partition_to_json(p: Partition) -> Json:
    return {
        "blocks": [list(b) for b in p.blocks],
        "sizes": p.sizes,
        "loops_run": p.loops_run,
        "failed_loops": p.failed_loops,
        "warning": p.warning,
    }


def partition_from_json(data: Any) -> Partition:
    def decode() -> Partition:
        return Partition(
            tuple(tuple(int(i) for i in b) for b in _field(data, "blocks", list)),
            int(data.get("loops_run", 0)),
            int(data.get("failed_loops", 0)),
            bool(data.get("warning", False)),
        )

    return _guarded(decode)


def multidegree_to_json(md: MultiDegree) -> Json:
    return {"m": md.m, "values": list(md.values), "entries": md.as_dict()}


def _surface_to_json(case: SurfaceCase | None) -> Json | None:
    return None if case is None else {"tag": case.tag.value, "ranks": list(case.ranks)}


def pair_report_to_json(pair: PairReport) -> Json:
    return {
        "pair": [list(s) for s in pair.slots],
        "merged_count": pair.merged_count,
        "residual": pair.residual,
        "passed": pair.passed,
        "surface": _surface_to_json(pair.surface),
        "error": pair.error,
    }


def mtrace_report_to_json(report: MTraceReport) -> Json:
    return {
        "complete": report.complete,
        "branch": report.branch,
        "pairs": [pair_report_to_json(p) for p in report.pairs],
        "projections": [trace_result_to_json(r) for r in report.projections],
        "product_ok": report.product_ok,
        "error": report.error,
    }
