"""
Monodromy: permutations of witness points from loops in slice space, and
the partition of the points into their orbits.
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from multitrace.calculations.slices import Slice, random_slice_like
from multitrace.calculations.tracker import TrackerConfig
from multitrace.common.constants import MATCH_TOL, MAX_LOOP_FAILURES, MONODROMY_BUDGET, STABLE_LOOPS
from multitrace.common.errors import AmbiguousMatch, MoveFailure
from multitrace.common.log import get_logger
from multitrace.common.rng import make_rng
from multitrace.services.witness import WitnessSet, move_slice

logger = get_logger(__name__)

Permutation = tuple[int, ...]


@dataclass(frozen=True)
class Partition:
    blocks: tuple[tuple[int, ...], ...]
    loops_run: int = 0
    failed_loops: int = 0
    warning: bool = False

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(tuple((i,) for i in range(n)))

    @property
    def sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]


def match_points(origin: np.ndarray, moved: np.ndarray, tol: float = MATCH_TOL) -> Permutation:
    """perm[j] = index of the origin point that moved point j landed on"""
    perm: list[int] = []
    for j, z in enumerate(moved):
        dist = np.max(np.abs(origin - z), axis=1)
        close = np.flatnonzero(dist < tol)
        if len(close) != 1:
            msg = f"moved point {j} matches {len(close)} original points"
            raise AmbiguousMatch(msg)
        perm.append(int(close[0]))
    if len(set(perm)) != len(perm):
        msg = "two moved points claim the same original point"
        raise AmbiguousMatch(msg)
    return tuple(perm)


def monodromy_loop(
    w: WitnessSet, waypoints: Sequence[Slice], cfg: TrackerConfig | None = None
) -> Permutation:
    """Move w through the waypoints and back to w.slice; return the induced permutation"""
    current = w
    for target in [*waypoints, w.slice]:
        current = move_slice(current, target, cfg)
    return match_points(w.coordinates(), current.coordinates())


def _blocks(n: int, perms: Sequence[Permutation]) -> tuple[tuple[int, ...], ...]:
    rows = [i for p in perms for i in range(n)]
    cols = [j for p in perms for j in p]
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    _, labels = connected_components(graph, directed=False)
    blocks: dict[int, list[int]] = {}
    for i, label in enumerate(labels):
        blocks.setdefault(int(label), []).append(i)
    return tuple(sorted((tuple(b) for b in blocks.values()), key=lambda b: b[0]))


def monodromy_partition(
    w: WitnessSet,
    budget: int = MONODROMY_BUDGET,
    seed: int | np.random.Generator = 0,
    cfg: TrackerConfig | None = None,
    initial: Partition | None = None,
) -> Partition:
    """
    Orbits of random triangle loops. Stops after `budget` loops, after
    STABLE_LOOPS loops without a merge, or once everything is one block.
    """
    rng = make_rng(seed)
    n = len(w.points)
    if n == 0:
        return Partition(())
    # chain each prior block so resuming keeps its merges
    perms: list[Permutation] = []
    if initial is not None:
        chain = list(range(n))
        for block in initial.blocks:
            for a, b in zip(block, block[1:], strict=False):
                chain[a] = b
        perms.append(tuple(chain))
    blocks = _blocks(n, perms)
    loops = initial.loops_run if initial else 0
    failed = initial.failed_loops if initial else 0
    stable = 0

    for _ in range(budget):
        if len(blocks) <= 1 or stable >= STABLE_LOOPS:
            break
        loops += 1
        waypoints = [random_slice_like(w.system, w.slice, rng) for _ in range(2)]
        try:
            perm = monodromy_loop(w, waypoints, cfg)
        except (MoveFailure, AmbiguousMatch) as e:
            failed += 1
            logger.warning(f"monodromy loop {loops} failed: {e}")
            if failed > MAX_LOOP_FAILURES:
                break
            continue
        perms.append(perm)
        merged = _blocks(n, perms)
        stable = stable + 1 if merged == blocks else 0
        blocks = merged

    warning = failed > MAX_LOOP_FAILURES
    sizes = [len(b) for b in blocks]
    logger.info(f"monodromy: blocks {sizes} after {loops} loop(s), {failed} failed")
    return Partition(blocks, loops, failed, warning)
