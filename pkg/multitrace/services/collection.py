"""
Witness collections of varieties in P^{n1} x P^{n2}: one witness set per
split m = m1 + m2 of the dimension, all in one chart.
"""

from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field

import numpy as np

from multitrace.calculations.multidegree import MultiDegree
from multitrace.calculations.polynomial import ComplexMatrix, PolySystem, variety_dim
from multitrace.calculations.slices import (
    LinearForm,
    Slice,
    random_chart,
    random_form,
    randomization_matrix,
)
from multitrace.calculations.tracker import TrackerConfig
from multitrace.common.errors import DimsOutOfRange, InputError
from multitrace.common.log import get_logger
from multitrace.common.rng import child_seed, make_rng
from multitrace.services.witness import WitnessSet, witness_set

logger = get_logger(__name__)

Slot = tuple[int, int]


@dataclass(frozen=True, eq=False)
class WitnessCollection:
    system: PolySystem
    m: int
    sets: Mapping[Slot, WitnessSet] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.system.groups) != 2:  # noqa: PLR2004
            msg = "witness collections need exactly two variable groups"
            raise InputError(msg)
        expected = {(m1, self.m - m1) for m1 in range(self.m + 1)}
        if set(self.sets) != expected:
            msg = f"collection slots {sorted(self.sets)} differ from {sorted(expected)}"
            raise DimsOutOfRange(msg)
        charts = [w.slice.charts for w in self.sets.values()]
        for other in charts[1:]:
            for a, b in zip(charts[0], other, strict=True):
                same = a is b if a is None or b is None else a.same_as(b)
                if not same:
                    msg = "witness sets of a collection must share one chart"
                    raise InputError(msg)

    @property
    def slots(self) -> list[Slot]:
        return [(m1, self.m - m1) for m1 in range(self.m + 1)]

    def __getitem__(self, slot: Slot) -> WitnessSet:
        return self.sets[slot]

    def __iter__(self) -> Iterator[tuple[Slot, WitnessSet]]:
        return ((s, self.sets[s]) for s in self.slots)

    @property
    def charts(self) -> tuple[LinearForm | None, ...]:
        return self.sets[self.slots[0]].slice.charts

    @property
    def sizes(self) -> dict[Slot, int]:
        return {s: len(w) for s, w in self}

    @property
    def total_points(self) -> int:
        return sum(len(w) for _, w in self)

    def nonempty(self) -> list[Slot]:
        return [s for s, w in self if w.points]

    def with_set(self, slot: Slot, w: WitnessSet) -> "WitnessCollection":
        sets = dict(self.sets)
        sets[slot] = w
        return WitnessCollection(self.system, self.m, sets)


def master_forms(
    system: PolySystem, m: int, rng: np.random.Generator
) -> tuple[list[LinearForm], list[LinearForm]]:
    """m random forms per group; slot (m1, m2) uses the first m1 and m2 of them"""
    return (
        [random_form(system, 0, rng) for _ in range(m)],
        [random_form(system, 1, rng) for _ in range(m)],
    )


def slot_slice(
    charts: tuple[LinearForm | None, ...],
    forms: tuple[list[LinearForm], list[LinearForm]],
    slot: Slot,
) -> Slice:
    return Slice(charts, tuple(forms[0][: slot[0]]) + tuple(forms[1][: slot[1]]))


def witness_collection(
    system: PolySystem,
    m: int | None,
    seed: int | np.random.Generator,
    cfg: TrackerConfig | None = None,
) -> WitnessCollection:
    """Nested witness sets W_{m1, m-m1} sharing one chart and one square-up matrix"""
    if len(system.groups) != 2:  # noqa: PLR2004
        msg = "witness collections need exactly two variable groups"
        raise InputError(msg)
    dim = variety_dim(system)
    m = dim if m is None else m
    if m < 1 or m != dim:
        msg = f"collection dimension {m} does not match the variety dimension {dim}"
        raise DimsOutOfRange(msg)

    rng = make_rng(seed)
    charts = random_chart(system, rng)
    forms = master_forms(system, m, rng)
    rows = system.n_vars - sum(1 for c in charts if c is not None) - m
    randomization: ComplexMatrix | None = randomization_matrix(system, rows, rng)

    n1, n2 = (g.projective_dim for g in system.groups)
    sets: dict[Slot, WitnessSet] = {}
    for m1 in range(m + 1):
        slot = (m1, m - m1)
        slice_ = slot_slice(charts, forms, slot)
        sub_seed = child_seed(rng)
        if m1 > n1 or m - m1 > n2:
            sets[slot] = WitnessSet(system, slice_, (), randomization)
            continue
        sets[slot] = witness_set(
            system, None, sub_seed, cfg, slice=slice_, randomization=randomization
        )

    coll = WitnessCollection(system, m, sets)
    logger.info(f"witness collection: {coll.sizes}")
    return coll


def multidegree(coll: WitnessCollection) -> MultiDegree:
    """Point counts per slot, ordered by m1"""
    return MultiDegree(coll.m, tuple(len(coll[s]) for s in coll.slots))
