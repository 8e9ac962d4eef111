"""
Trace test.

Along a pencil of parallel slices the coordinate sum of a witness subset is
an affine function of the pencil parameter exactly when the subset is a
union of complete component witness sets. We sample at three equally
spaced parameters and check the second difference.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from multitrace.calculations.polynomial import ComplexMatrix, ComplexVector
from multitrace.calculations.slices import Slice
from multitrace.calculations.tracker import TrackerConfig
from multitrace.common.constants import PENCIL_RETRIES, TRACE_TAUS, TRACE_TOL
from multitrace.common.errors import (
    FewerThanThreeSamples,
    GenericityFailure,
    InputError,
    MoveFailure,
)
from multitrace.common.log import get_logger
from multitrace.common.rng import complex_gaussian, make_rng, unit_complex
from multitrace.services.monodromy import Partition
from multitrace.services.witness import WitnessSet, move_slice

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class Pencil:
    """slice(tau) = base with constants shifted by tau * direction"""

    base: Slice
    direction: tuple[complex, ...]

    def __post_init__(self) -> None:
        if len(self.direction) != len(self.base.forms):
            msg = "pencil direction needs one entry per slice form"
            raise InputError(msg)
        if not any(self.direction):
            msg = "pencil direction is zero"
            raise InputError(msg)

    def slice_at(self, tau: complex) -> Slice:
        if tau == 0:
            return self.base
        return self.base.shifted([tau * d for d in self.direction])


@dataclass(frozen=True, eq=False)
class TraceSample:
    tau: complex
    sum: ComplexVector
    count: int


@dataclass(frozen=True, eq=False)
class TraceLine:
    c0: ComplexVector
    c1: ComplexVector

    def at(self, tau: complex) -> ComplexVector:
        return self.c0 * tau + self.c1

    @classmethod
    def through(cls, a: TraceSample, b: TraceSample) -> "TraceLine":
        c0 = (b.sum - a.sum) / (b.tau - a.tau)
        return cls(c0, a.sum - c0 * a.tau)


@dataclass(frozen=True, eq=False)
class TraceTestResult:
    complete: bool
    residual: float
    trace: TraceLine
    samples: tuple[TraceSample, ...]
    subset: tuple[int, ...] = ()


def random_pencil(slice_: Slice, rng: np.random.Generator, group: int | None = None) -> Pencil:
    """
    Random parallel pencil. Shifts the forms of `group` when given, else the
    mixed forms when there are any, else every form.
    """
    forms = slice_.forms
    if group is not None:
        chosen = [f.group == group for f in forms]
    elif slice_.n_mixed:
        chosen = [f.group is None for f in forms]
    else:
        chosen = [True] * len(forms)
    if not any(chosen):
        msg = "slice has no forms to move"
        raise InputError(msg)
    draws = complex_gaussian(rng, len(forms))
    direction = tuple(complex(d) if c else 0j for d, c in zip(draws, chosen, strict=True))
    return Pencil(slice_, direction)


def point_traces(
    w: WitnessSet,
    pencil: Pencil,
    taus: Sequence[complex],
    cfg: TrackerConfig | None = None,
) -> list[ComplexMatrix]:
    """Coordinates of every point of w on each slice of the pencil (rows follow w.points)"""
    if len(set(taus)) != len(taus):
        msg = "pencil parameters must be distinct"
        raise InputError(msg)
    if not pencil.base.same_as(w.slice):
        w = move_slice(w, pencil.base, cfg)
    return [
        w.coordinates() if tau == 0 else move_slice(w, pencil.slice_at(tau), cfg).coordinates()
        for tau in taus
    ]


def samples_from(
    positions: Sequence[ComplexMatrix],
    taus: Sequence[complex],
    subset: Sequence[int],
    columns: Sequence[int] | slice | None = None,
) -> list[TraceSample]:
    cols = slice(None) if columns is None else columns
    rows = list(subset)
    return [
        TraceSample(complex(tau), pos[rows][:, cols].sum(axis=0), len(rows))
        for tau, pos in zip(taus, positions, strict=True)
    ]


def trace_samples(
    w: WitnessSet,
    subset: Sequence[int],
    pencil: Pencil,
    taus: Sequence[complex],
    cfg: TrackerConfig | None = None,
) -> list[TraceSample]:
    """Coordinate sums of the subset on slice(tau) for each tau"""
    if not subset:
        msg = "trace samples need a nonempty subset"
        raise InputError(msg)
    sub = w.subset(subset)
    positions = point_traces(sub, pencil, taus, cfg)
    return samples_from(positions, taus, range(len(subset)))


def collinearity_test(samples: Sequence[TraceSample], tol: float = TRACE_TOL) -> tuple[bool, float]:
    """Normalized second difference of the first three (equally spaced) samples"""
    if len(samples) < 3:  # noqa: PLR2004
        msg = f"collinearity needs three samples, got {len(samples)}"
        raise FewerThanThreeSamples(msg)
    s0, s1, s2 = (np.atleast_1d(s.sum) for s in samples[:3])
    scale = 1.0 + max(float(np.max(np.abs(s))) for s in (s0, s1, s2))
    residual = float(np.max(np.abs(s0 - 2 * s1 + s2))) / scale
    return residual < tol, residual


def result_from(
    samples: Sequence[TraceSample], tol: float, subset: Sequence[int] = ()
) -> TraceTestResult:
    ok, residual = collinearity_test(samples, tol)
    line = TraceLine.through(samples[0], samples[1])
    return TraceTestResult(ok, residual, line, tuple(samples), tuple(subset))


def pencil_taus(rng: np.random.Generator) -> list[complex]:
    u = unit_complex(rng)
    return [tau * u for tau in TRACE_TAUS]


def trace_test(
    w: WitnessSet,
    subset: Sequence[int] | None = None,
    seed: int | np.random.Generator = 0,
    cfg: TrackerConfig | None = None,
    tol: float = TRACE_TOL,
    pencil: Pencil | None = None,
    taus: Sequence[complex] | None = None,
) -> TraceTestResult:
    """Is the subset (default: all points) a complete witness set of its components?"""
    rng = make_rng(seed)
    subset = list(range(len(w.points))) if subset is None else list(subset)
    for attempt in range(PENCIL_RETRIES):
        use_pencil = pencil if pencil is not None and attempt == 0 else random_pencil(w.slice, rng)
        use_taus = list(taus) if taus is not None else pencil_taus(rng)
        try:
            samples = trace_samples(w, subset, use_pencil, use_taus, cfg)
        except MoveFailure as e:
            logger.warning(f"trace sampling failed ({e}); new pencil")
            continue
        result = result_from(samples, tol, subset)
        logger.debug(f"trace test on {len(subset)} point(s): residual {result.residual:.3e}")
        return result
    msg = f"trace sampling failed {PENCIL_RETRIES} times"
    raise GenericityFailure(msg)


def merge_blocks_by_trace(
    w: WitnessSet,
    partition: Partition,
    seed: int | np.random.Generator = 0,
    cfg: TrackerConfig | None = None,
    tol: float = TRACE_TOL,
) -> tuple[Partition, list[TraceTestResult]]:
    """
    Combinatorial trace test: join incomplete blocks whose union has an
    affine trace, smallest unions first. One pencil serves every subset.
    """
    rng = make_rng(seed)
    pencil = random_pencil(w.slice, rng)
    taus = pencil_taus(rng)
    positions = point_traces(w, pencil, taus, cfg)

    complete: list[tuple[int, ...]] = []
    results: list[TraceTestResult] = []
    pending: list[tuple[int, ...]] = []
    for block in partition.blocks:
        res = result_from(samples_from(positions, taus, block), tol, block)
        if res.complete:
            complete.append(block)
            results.append(res)
        else:
            pending.append(block)

    size = 2
    while size <= len(pending):
        for combo in combinations(pending, size):
            union = tuple(sorted(i for b in combo for i in b))
            res = result_from(samples_from(positions, taus, union), tol, union)
            if res.complete:
                complete.append(union)
                results.append(res)
                pending = [b for b in pending if b not in combo]
                break
        else:
            size += 1

    blocks = tuple(sorted(complete + pending, key=lambda b: b[0]))
    merged = Partition(blocks, partition.loops_run, partition.failed_loops, partition.warning)
    return merged, results
