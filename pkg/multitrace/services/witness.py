"""
Witness sets: V cut by a generic slice, and slice moving.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from multitrace.calculations.polynomial import ComplexMatrix, Point, PolySystem
from multitrace.calculations.slices import (
    Slice,
    SlicedSystem,
    check_dims,
    core_size,
    random_slice,
    randomization_matrix,
)
from multitrace.calculations.tracker import Homotopy, TrackerConfig, track_paths
from multitrace.common.constants import MAX_FAILED_FRACTION, RESIDUAL_TOL
from multitrace.common.errors import DimsOutOfRange, GenericityFailure, MoveFailure
from multitrace.common.log import get_logger
from multitrace.common.rng import child_seed, make_rng
from multitrace.services.solve import solve_square

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class WitnessSet:
    """Points of V on the slice, with everything needed to move them"""

    system: PolySystem
    slice: Slice
    points: tuple[Point, ...] = field(default_factory=tuple)
    randomization: ComplexMatrix | None = None

    @property
    def dims(self) -> tuple[int, ...]:
        return self.slice.dims

    @property
    def degree(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def core(self) -> SlicedSystem:
        """Square system whose solutions are the witness points"""
        return SlicedSystem(self.system, self.slice, self.randomization)

    def coordinates(self) -> ComplexMatrix:
        if not self.points:
            return np.zeros((0, self.system.n_vars), dtype=np.complex128)
        return np.vstack([p.coordinates for p in self.points])

    def residuals(self) -> list[float]:
        return [self.core.full_residual(p) for p in self.points]

    def subset(self, indices: Sequence[int]) -> "WitnessSet":
        points = tuple(self.points[i] for i in indices)
        return WitnessSet(self.system, self.slice, points, self.randomization)

    def with_points(self, points: Sequence[Point]) -> "WitnessSet":
        return WitnessSet(self.system, self.slice, tuple(points), self.randomization)


def witness_set(
    system: PolySystem,
    dims: Sequence[int] | None,
    seed: int | np.random.Generator,
    cfg: TrackerConfig | None = None,
    slice: Slice | None = None,  # noqa: A002
    randomization: ComplexMatrix | None = None,
) -> WitnessSet:
    """
    Solve system + slice in the slice's chart.

    The slice is drawn from the seeded complex Gaussian unless given; an
    overdetermined system is squared up by a seeded randomization matrix
    (or the one supplied, so that sets of one collection share it).
    """
    rng = make_rng(seed)
    if slice is None:
        if dims is None:
            msg = "either dims or a slice is required"
            raise DimsOutOfRange(msg)
        slice = random_slice(system, dims, rng)  # noqa: A001
    else:
        check_dims(system, slice.dims)
        if dims is not None and tuple(dims) != slice.dims:
            msg = f"dims {tuple(dims)} do not match the slice ({slice.dims})"
            raise DimsOutOfRange(msg)

    rows = core_size(system, slice)
    if rows < 0:
        msg = f"too many slice forms ({len(slice.forms)}) for {system.n_vars} variables"
        raise DimsOutOfRange(msg)
    if randomization is None:
        randomization = randomization_matrix(system, rows, rng)

    w = WitnessSet(system, slice, (), randomization)
    report = solve_square(w.core, cfg, child_seed(rng))
    if report.n_paths and report.n_failed > MAX_FAILED_FRACTION * report.n_paths:
        msg = f"{report.n_failed} of {report.n_paths} paths failed; reseed"
        raise GenericityFailure(msg)

    logger.info(
        f"witness set {slice.dims}: {len(report.points)} point(s) from {report.n_paths} path(s)"
    )
    return w.with_points(report.points)


def slice_homotopy(w: WitnessSet, target: Slice) -> Homotopy:
    """Straight-line homotopy between two slices, system part held fixed"""
    return Homotopy(w.core, w.core.with_slice(target), 1 + 0j)


def move_slice(w: WitnessSet, target: Slice, cfg: TrackerConfig | None = None) -> WitnessSet:
    """Track every point from w.slice to target; order is preserved"""
    shape = [f.group for f in w.slice.forms]
    if [f.group for f in target.forms] != shape or target.n_groups != w.slice.n_groups:
        msg = "target slice has a different shape"
        raise DimsOutOfRange(msg)
    if target.same_as(w.slice):
        return WitnessSet(w.system, target, w.points, w.randomization)

    results = track_paths(slice_homotopy(w, target), list(w.points), cfg)
    for i, r in enumerate(results):
        if not r.ok:
            raise MoveFailure(i, r.status.value)
    endpoints = tuple(r.endpoint for r in results if r.endpoint is not None)
    moved = WitnessSet(w.system, target, endpoints, w.randomization)
    bad = [i for i, res in enumerate(moved.residuals()) if res >= RESIDUAL_TOL]
    if bad:
        raise MoveFailure(bad[0], "off the system")
    return moved
