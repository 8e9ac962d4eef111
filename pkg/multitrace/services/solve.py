"""
Square system solver: start system + gamma trick + all paths.
"""

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from multitrace.calculations.polynomial import Point, PolySystem
from multitrace.calculations.slices import Slice, SlicedSystem, random_chart
from multitrace.calculations.start_systems import start_system_for
from multitrace.calculations.tracker import (
    Homotopy,
    PathResult,
    PathStatus,
    TrackerConfig,
    track_paths,
)
from multitrace.common.constants import DEDUP_TOL, RESIDUAL_TOL
from multitrace.common.log import get_logger
from multitrace.common.rng import make_rng, unit_complex

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class SolveReport:
    points: tuple[Point, ...]
    results: tuple[PathResult, ...]
    rejected: int = 0  # successful endpoints off the full (unrandomized) system
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def n_paths(self) -> int:
        return len(self.results)

    @property
    def n_failed(self) -> int:
        return self.counts.get(PathStatus.FAILED.value, 0)


def dedup(points: list[Point], tol: float = DEDUP_TOL) -> list[Point]:
    """Drop points within tol (max-norm) of an earlier one"""
    kept: list[Point] = []
    for p in points:
        if all(np.max(np.abs(p.coordinates - q.coordinates)) > tol for q in kept):
            kept.append(p)
    return kept


def as_square(system: PolySystem | SlicedSystem, rng: np.random.Generator) -> SlicedSystem:
    """A bare PolySystem gets a random chart on each homogeneous group"""
    if isinstance(system, SlicedSystem):
        return system
    return SlicedSystem(system, Slice(random_chart(system, rng)))


def solve_square(
    system: PolySystem | SlicedSystem,
    cfg: TrackerConfig | None = None,
    seed: int | np.random.Generator = 0,
) -> SolveReport:
    """All finite isolated solutions reachable from the seeded start system"""
    cfg = cfg or TrackerConfig()
    rng = make_rng(seed)
    target = as_square(system, rng)
    gamma = unit_complex(rng)
    start, starts = start_system_for(
        target.shapes(), target.system.group_slices, target.n_vars, rng
    )
    logger.debug(f"solve_square: {len(starts)} path(s), gamma={gamma:.4f}")

    results = track_paths(Homotopy(start, target, gamma), starts, cfg)
    counts = Counter(r.status.value for r in results)

    finite = []
    rejected = 0
    for r in results:
        if r.endpoint is None:
            continue
        if target.full_residual(r.endpoint) >= RESIDUAL_TOL:
            rejected += 1
            continue
        finite.append(r.endpoint)
    points = dedup(finite)

    logger.debug(
        f"solve_square: {len(points)} point(s), "
        f"{counts.get('diverged', 0)} diverged, {counts.get('failed', 0)} failed, "
        f"{rejected} rejected"
    )
    return SolveReport(tuple(points), tuple(results), rejected, dict(counts))
