"""
Multihomogeneous trace test.

Adjacent slots W_{m1+1,m2-1} (extra form lx on the first factor) and
W_{m1,m2} (extra form ly on the second) lie on one curve C cut by their
common forms. Tracking both along

    (1 - t) * gamma * lx * ly + t * g,   g = hx*ly' + lx'*hy + hx*hy

lands on C cut by V(g), which in the chart hx = hy = 1 is the affine
hyperplane lx' + ly' + 1 = 0: an ordinary witness set of C in
C^{n1+n2}, certified by the affine trace test.

When only one slot has points, the variety can only be complete if it
is a product; then both projections are tested separately and the points
must be the product of their projections.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from multitrace.calculations.polynomial import ComplexMatrix, ComplexVector, Point, PolySystem
from multitrace.calculations.slices import LinearForm, Slice, SlicedSystem, random_form
from multitrace.calculations.tracker import Homotopy, TrackerConfig, track_paths
from multitrace.common.constants import MERGE_RETRIES, PRODUCT_TOL, RANK_TOL, TRACE_TOL
from multitrace.common.errors import InputError, MergeFailure, MultitraceError, SchemaError
from multitrace.common.log import get_logger
from multitrace.common.rng import child_seed, make_rng, unit_complex
from multitrace.services.collection import Slot, WitnessCollection
from multitrace.services.reduction import (
    SurfaceCase,
    SurfaceTag,
    append_forms,
    classify_surface,
    onto_system,
    reduce_to_curve,
    reduce_to_surface,
    tangent_ranks,
)
from multitrace.services.solve import dedup
from multitrace.services.trace import (
    TraceTestResult,
    pencil_taus,
    point_traces,
    random_pencil,
    result_from,
    samples_from,
    trace_test,
)
from multitrace.services.witness import WitnessSet, move_slice

logger = get_logger(__name__)


# Merge homotopy

@dataclass(frozen=True, eq=False)
class _ProductLast:
    """base with its last linear equation lx replaced by lx * ly"""

    base: SlicedSystem
    ly: LinearForm

    @property
    def n_vars(self) -> int:
        return self.base.n_vars

    def evaluate(self, z: ComplexVector) -> ComplexVector:
        values = self.base.evaluate(z)
        values[-1] *= self.ly(z)
        return values

    def jacobian(self, z: ComplexVector) -> ComplexMatrix:
        jac = self.base.jacobian(z)
        lx_value = self.base.evaluate(z)[-1]
        jac[-1] = self.ly(z) * jac[-1] + lx_value * self.ly.coefficients
        return jac


def split_forms(w: WitnessSet, group: int) -> tuple[list[LinearForm], LinearForm]:
    """The forms of w other than its last form on `group`, and that form"""
    forms = list(w.slice.forms)
    index = max((i for i, f in enumerate(forms) if f.group == group), default=None)
    if index is None:
        msg = f"witness set has no slice form on group {group}"
        raise InputError(msg)
    extra = forms.pop(index)
    return forms, extra


def merged_form(primed: tuple[LinearForm, LinearForm]) -> LinearForm:
    """g = hx*ly' + lx'*hy + hx*hy on the chart hx = hy = 1"""
    lx, ly = primed
    return LinearForm(lx.coefficients + ly.coefficients, lx.constant + ly.constant + 1, None)


def _same_randomization(a: ComplexMatrix | None, b: ComplexMatrix | None) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return a.shape == b.shape and bool(np.array_equal(a, b))


def merge_witness_homotopy(
    wx: WitnessSet,
    wy: WitnessSet,
    seed: int | np.random.Generator = 0,
    cfg: TrackerConfig | None = None,
    primed: tuple[LinearForm, LinearForm] | None = None,
) -> WitnessSet:
    """
    Track wx (cut by its last first-factor form lx) and wy (cut by its last
    second-factor form ly) to the curve cut by V(g). Fresh primed forms are
    drawn on each retry unless given.
    """
    if wx.system.variables != wy.system.variables:
        msg = "witness sets belong to different systems"
        raise InputError(msg)
    common_x, lx = split_forms(wx, 0)
    common_y, ly = split_forms(wy, 1)
    if len(common_x) != len(common_y) or not all(
        a.same_as(b) for a, b in zip(common_x, common_y, strict=True)
    ):
        msg = "witness sets do not lie on a common curve"
        raise InputError(msg)
    if not Slice(wx.slice.charts).same_as(Slice(wy.slice.charts)):
        msg = "witness sets use different charts"
        raise InputError(msg)
    if not _same_randomization(wx.randomization, wy.randomization):
        msg = "witness sets use different square-up matrices"
        raise InputError(msg)

    system, charts = wx.system, wx.slice.charts
    rng = make_rng(seed)
    base = SlicedSystem(system, Slice(charts, (*common_x, lx)), wx.randomization)
    start = _ProductLast(base, ly)
    starts = [p.coordinates for p in (*wx.points, *wy.points)]

    for attempt in range(MERGE_RETRIES):
        forms = primed or (random_form(system, 0, rng), random_form(system, 1, rng))
        target_slice = Slice(charts, (*common_x, merged_form(forms)))
        target = SlicedSystem(system, target_slice, wx.randomization)
        results = track_paths(Homotopy(start, target, unit_complex(rng)), starts, cfg)
        distinct = dedup([r.endpoint for r in results if r.endpoint is not None])
        if len(distinct) == len(starts):
            logger.debug(f"merge homotopy: {len(starts)} point(s) on V(g)")
            return WitnessSet(system, target_slice, tuple(distinct), wx.randomization)
        logger.warning(
            f"merge homotopy attempt {attempt + 1}: "
            f"{len(distinct)} of {len(starts)} paths usable; reseeding"
        )
    msg = f"merge homotopy failed after {MERGE_RETRIES} attempts"
    raise MergeFailure(msg)


# Reports

@dataclass
class PairReport:
    m1: int
    slots: tuple[Slot, Slot]  # (W_{m1+1,m2-1}, W_{m1,m2})
    merged_count: int = 0
    residual: float | None = None
    passed: bool = False
    surface: SurfaceCase | None = None
    error: str | None = None


@dataclass
class MTraceReport:
    complete: bool
    branch: str  # "pairs", "product" or "empty"
    pairs: list[PairReport] = field(default_factory=list)
    projections: list[TraceTestResult] = field(default_factory=list)
    product_ok: bool | None = None
    error: str | None = None

    def __bool__(self) -> bool:
        return self.complete


# Pairs of adjacent slots

def _group_forms(w: WitnessSet, group: int) -> list[LinearForm]:
    return [f for f in w.slice.forms if f.group == group]


def _nested(a: Sequence[LinearForm], b: Sequence[LinearForm]) -> bool:
    return len(a) == len(b) and all(x.same_as(y) for x, y in zip(a, b, strict=True))


def _empty_on(w: WitnessSet, target: Slice) -> WitnessSet:
    return WitnessSet(w.system, target, (), w.randomization)


def common_curve(
    wx: WitnessSet, wy: WitnessSet, cfg: TrackerConfig | None = None
) -> tuple[WitnessSet, WitnessSet, list[LinearForm], list[LinearForm]]:
    """
    Bring an adjacent pair onto one curve: first-factor forms of wy and
    second-factor forms of wx are the common ones. Sets whose slices are not
    nested that way are moved onto it.
    """
    x1, x2 = _group_forms(wx, 0), _group_forms(wx, 1)
    y1, y2 = _group_forms(wy, 0), _group_forms(wy, 1)
    common1, common2 = y1, x2
    if not _nested(x1[:-1], common1):
        target = Slice(wx.slice.charts, (*common1, x1[-1], *x2))
        wx = move_slice(wx, target, cfg) if wx.points else _empty_on(wx, target)
    if not _nested(y2[:-1], common2):
        target = Slice(wy.slice.charts, (*y1, *common2, y2[-1]))
        wy = move_slice(wy, target, cfg) if wy.points else _empty_on(wy, target)
    return wx, wy, common1, common2


def curve_system(
    system: PolySystem,
    charts: tuple[LinearForm | None, ...],
    common1: Sequence[LinearForm],
    common2: Sequence[LinearForm],
    point: Point,
) -> tuple[PolySystem, SurfaceCase | None]:
    """The curve cut out by the common forms, reached through the surface above it"""
    if not common1 and not common2:
        return system, None
    if common1:
        dims = (len(common1), len(common2) + 1)
        surface = reduce_to_surface(system, dims, forms=[*common1[:-1], *common2], charts=charts)
        group, last = 0, common1[-1]
    else:
        dims = (1, len(common2))
        surface = reduce_to_surface(system, dims, forms=list(common2[:-1]), charts=charts)
        group, last = 1, common2[-1]

    try:
        case = classify_surface(surface.system, point, RANK_TOL)
    except MultitraceError as e:
        logger.debug(f"surface classification unavailable: {e}")
        case = None
    if case is None or case.tag is SurfaceTag.PRODUCT:
        # a product surface cut by a hyperplane is a union of complete curves
        return append_forms(surface.system, [last], 1, charts), case
    return reduce_to_curve(surface.system, case, group=group, form=last, charts=charts), case


def _pair_test(
    system: PolySystem,
    wx: WitnessSet,
    wy: WitnessSet,
    report: PairReport,
    rng: np.random.Generator,
    cfg: TrackerConfig | None,
    tol: float,
) -> None:
    wx, wy, common1, common2 = common_curve(wx, wy, cfg)
    point = (wx.points or wy.points)[0]
    curve, report.surface = curve_system(system, wx.slice.charts, common1, common2, point)
    cx = onto_system(wx, curve, [_group_forms(wx, 0)[-1]])
    cy = onto_system(wy, curve, [_group_forms(wy, 1)[-1]])
    merged = merge_witness_homotopy(cx, cy, child_seed(rng), cfg)
    report.merged_count = len(merged)
    result = trace_test(merged, None, child_seed(rng), cfg, tol)
    report.residual = result.residual
    report.passed = result.complete


# Single nonempty slot

def _distinct(coords: ComplexMatrix, tol: float = PRODUCT_TOL) -> tuple[list[int], list[int]]:
    """Representative indices of distinct rows, and each row's representative number"""
    reps: list[int] = []
    labels: list[int] = []
    for i, row in enumerate(coords):
        match = next((k for k, r in enumerate(reps) if np.max(np.abs(coords[r] - row)) < tol), None)
        if match is None:
            reps.append(i)
            match = len(reps) - 1
        labels.append(match)
    return reps, labels


def projection_trace_test(
    w: WitnessSet,
    group: int,
    rng: np.random.Generator,
    cfg: TrackerConfig | None = None,
    tol: float = TRACE_TOL,
) -> TraceTestResult:
    """Trace test of the projection of w to one factor, moving only that factor's forms"""
    sl = w.system.group_slices[group]
    reps, _ = _distinct(w.coordinates()[:, sl])
    sub = w.subset(reps)
    pencil = random_pencil(sub.slice, rng, group=group)
    taus = pencil_taus(rng)
    positions = point_traces(sub, pencil, taus, cfg)
    return result_from(samples_from(positions, taus, range(len(reps)), columns=sl), tol, reps)


def _single_slot(
    system: PolySystem,
    partial: WitnessCollection,
    slot: Slot,
    rng: np.random.Generator,
    cfg: TrackerConfig | None,
    tol: float,
) -> MTraceReport:
    w = partial[slot]
    report = MTraceReport(complete=False, branch="product")
    try:
        _, ranks = tangent_ranks(system, w.points[0], RANK_TOL, expected_dim=partial.m)
    except MultitraceError as e:
        report.error = str(e)
        return report
    degenerate = [r < partial.m for r in ranks]
    if not all(degenerate):
        report.error = f"projection ranks {ranks}: not a product, other slots cannot be empty"
        return report

    sls = system.group_slices
    labels = [_distinct(w.coordinates()[:, sl])[1] for sl in sls]
    counts = [len(set(lab)) for lab in labels]
    report.product_ok = (
        len(set(zip(*labels, strict=True))) == len(w) and len(w) == counts[0] * counts[1]
    )
    try:
        for group in range(2):
            if slot[group] == 0:
                continue
            report.projections.append(projection_trace_test(w, group, rng, cfg, tol))
    except MultitraceError as e:
        report.error = str(e)
        return report
    report.complete = bool(report.product_ok) and all(p.complete for p in report.projections)
    return report


def multihomogeneous_trace_test(
    system: PolySystem,
    partial: WitnessCollection,
    seed: int | np.random.Generator = 0,
    cfg: TrackerConfig | None = None,
    tol: float = TRACE_TOL,
) -> MTraceReport:
    """Is the (partial) witness collection complete?"""
    if partial.system.variables != system.variables:
        msg = "collection and system have different variables"
        raise SchemaError(msg)
    rng = make_rng(seed)
    nonempty = partial.nonempty()
    if not nonempty:
        return MTraceReport(complete=False, branch="empty", error="collection has no points")
    if len(nonempty) == 1:
        report = _single_slot(system, partial, nonempty[0], rng, cfg, tol)
        logger.info(f"multihomogeneous trace test (single slot {nonempty[0]}): {report.complete}")
        return report

    report = MTraceReport(complete=False, branch="pairs")
    for m1 in range(partial.m):
        m2 = partial.m - m1
        sx, sy = (m1 + 1, m2 - 1), (m1, m2)
        pair = PairReport(m1, (sx, sy))
        report.pairs.append(pair)
        wx, wy = partial[sx], partial[sy]
        if not wx.points and not wy.points:
            pair.passed = True
            continue
        try:
            _pair_test(system, wx, wy, pair, rng, cfg, tol)
        except MultitraceError as e:
            pair.error = str(e)
            logger.warning(f"pair {sx}/{sy}: {e}")
    report.complete = all(p.passed for p in report.pairs)
    logger.info(
        f"multihomogeneous trace test: {report.complete} "
        f"(residuals {[p.residual for p in report.pairs]})"
    )
    return report
