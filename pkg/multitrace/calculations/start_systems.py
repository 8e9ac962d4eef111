"""
Start systems and Bezout counts.

One variable group: total-degree start z_k^{d_k} - 1.
Several groups: linear-product start, each equation a product of random
affine forms, d_{k,i} of them in the variables of group i. Linear
single-group equations (charts, slice forms) are kept as their own factor.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from functools import cache
from itertools import product

import numpy as np
from scipy import linalg

from multitrace.calculations.polynomial import ComplexMatrix, ComplexVector, PolySystem
from multitrace.calculations.slices import EquationShape, LinearForm, check_dims, core_rows
from multitrace.common.errors import InputError
from multitrace.common.log import get_logger
from multitrace.common.rng import complex_gaussian

logger = get_logger(__name__)


def bezout_count(shapes: Sequence[EquationShape], group_sizes: Sequence[int]) -> int:
    """
    Multihomogeneous Bezout number: sum over assignments of equations to
    groups (group i receiving exactly group_sizes[i] equations) of the
    product of the assigned degrees.
    """
    degrees = [s.degrees for s in shapes]
    if len(degrees) != sum(group_sizes):
        msg = f"{len(degrees)} equations for {sum(group_sizes)} unknowns"
        raise InputError(msg)

    @cache
    def count(k: int, remaining: tuple[int, ...]) -> int:
        if k == len(degrees):
            return 1
        total = 0
        for gi, d in enumerate(degrees[k]):
            if d and remaining[gi]:
                rest = remaining[:gi] + (remaining[gi] - 1,) + remaining[gi + 1 :]
                total += d * count(k + 1, rest)
        return total

    return count(0, tuple(group_sizes))


def multidegree_bound(system: PolySystem, dims: Sequence[int]) -> int:
    """Bezout bound on |V cut by dims[i] generic forms on group i| in a chart"""
    dims = check_dims(system, dims)
    n_charts = sum(1 for g in system.groups if g.homogeneous)
    rows = core_rows(system, system.n_vars - n_charts - sum(dims))
    pattern = system.degree_pattern
    shapes = [
        EquationShape(tuple(int(d) for d in pattern[members].max(axis=0))) for members in rows
    ]
    for gi, group in enumerate(system.groups):
        unit = tuple(1 if j == gi else 0 for j in range(len(system.groups)))
        shapes.extend([EquationShape(unit)] * (dims[gi] + (1 if group.homogeneous else 0)))
    return bezout_count(shapes, [len(g.variables) for g in system.groups])


# Start systems. Both satisfy the evaluate/jacobian protocol of the tracker.

@dataclass(frozen=True, eq=False)
class TotalDegreeSystem:
    degrees: tuple[int, ...]

    @property
    def n_vars(self) -> int:
        return len(self.degrees)

    def evaluate(self, z: ComplexVector) -> ComplexVector:
        d = np.array(self.degrees)
        return np.asarray(z**d - 1, dtype=np.complex128)

    def jacobian(self, z: ComplexVector) -> ComplexMatrix:
        d = np.array(self.degrees)
        return np.diag(d * z ** np.maximum(d - 1, 0)).astype(np.complex128)


@dataclass(frozen=True, eq=False)
class ProductSystem:
    """Equation k is the product of the affine forms factors[k]"""

    factors: tuple[tuple[LinearForm, ...], ...]
    n_vars: int

    def evaluate(self, z: ComplexVector) -> ComplexVector:
        return np.array(
            [np.prod([f(z) for f in eq]) for eq in self.factors],
            dtype=np.complex128,
        )

    def jacobian(self, z: ComplexVector) -> ComplexMatrix:
        jac = np.zeros((len(self.factors), self.n_vars), dtype=np.complex128)
        for k, eq in enumerate(self.factors):
            values = np.array([f(z) for f in eq], dtype=np.complex128)
            for j, f in enumerate(eq):
                others = np.prod(np.delete(values, j))
                jac[k] += others * f.coefficients
        return jac


def total_degree_start(degrees: Sequence[int]) -> tuple[TotalDegreeSystem, list[ComplexVector]]:
    """z_k^{d_k} - 1 and all its solutions (products of roots of unity)"""
    if any(d < 1 for d in degrees):
        return TotalDegreeSystem(tuple(degrees)), []
    roots = [np.exp(2j * np.pi * np.arange(d) / d) for d in degrees]
    starts = [np.array(combo, dtype=np.complex128) for combo in product(*roots)]
    return TotalDegreeSystem(tuple(degrees)), starts


def _group_form(n_vars: int, sl: slice, group: int, rng: np.random.Generator) -> LinearForm:
    coeffs = np.zeros(n_vars, dtype=np.complex128)
    coeffs[sl] = complex_gaussian(rng, sl.stop - sl.start)
    return LinearForm(coeffs, complex(complex_gaussian(rng)), group)


def _assignments(degrees: list[tuple[int, ...]], sizes: tuple[int, ...]) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []

    def walk(k: int, remaining: tuple[int, ...], chosen: tuple[int, ...]) -> None:
        if k == len(degrees):
            out.append(chosen)
            return
        for gi, d in enumerate(degrees[k]):
            if d and remaining[gi]:
                rest = remaining[:gi] + (remaining[gi] - 1,) + remaining[gi + 1 :]
                walk(k + 1, rest, (*chosen, gi))

    walk(0, sizes, ())
    return out


def linear_product_start(
    shapes: Sequence[EquationShape],
    group_slices: Sequence[slice],
    n_vars: int,
    rng: np.random.Generator,
) -> tuple[ProductSystem, list[ComplexVector]]:
    """Random linear-product start system matching the shapes, with all its solutions"""
    factors_by_group: list[list[list[LinearForm]]] = []
    for shape in shapes:
        per_group: list[list[LinearForm]] = []
        for gi, d in enumerate(shape.degrees):
            if shape.form is not None and gi == shape.form.group:
                per_group.append([shape.form])
            else:
                per_group.append([_group_form(n_vars, group_slices[gi], gi, rng) for _ in range(d)])
        factors_by_group.append(per_group)

    system = ProductSystem(
        factors=tuple(tuple(f for group in eq for f in group) for eq in factors_by_group),
        n_vars=n_vars,
    )

    sizes = tuple(sl.stop - sl.start for sl in group_slices)
    degrees = [s.degrees for s in shapes]
    starts: list[ComplexVector] = []
    singular = 0
    for assignment in _assignments(degrees, sizes):
        choices = [range(degrees[k][gi]) for k, gi in enumerate(assignment)]
        for picks in product(*choices):
            z = np.zeros(n_vars, dtype=np.complex128)
            ok = True
            chosen = list(zip(assignment, picks, strict=True))
            for gi, sl in enumerate(group_slices):
                rows = [factors_by_group[k][gi][j] for k, (g, j) in enumerate(chosen) if g == gi]
                a = np.array([f.coefficients[sl] for f in rows], dtype=np.complex128)
                c = np.array([f.constant for f in rows], dtype=np.complex128)
                try:
                    z[sl] = linalg.solve(a, -c, check_finite=False)
                except linalg.LinAlgError:
                    ok = False
                    break
            if ok and np.all(np.isfinite(z)):
                starts.append(z)
            else:
                singular += 1
    if singular:
        logger.warning(f"{singular} singular start subsystem(s) skipped")
    return system, starts


def start_system_for(
    shapes: Sequence[EquationShape],
    group_slices: Sequence[slice],
    n_vars: int,
    rng: np.random.Generator,
) -> tuple[TotalDegreeSystem | ProductSystem, list[ComplexVector]]:
    if len(group_slices) == 1:
        return total_degree_start([sum(s.degrees) for s in shapes])
    return linear_product_start(shapes, group_slices, n_vars, rng)

