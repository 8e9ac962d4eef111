"""
Dimension reduction for varieties in P^{n1} x P^{n2}.

A witness slot (m1, m2) of an m-dimensional V is studied on the surface
V' = V cut by m1-1 forms on the first factor and m2-1 on the second, whose
multidegree is (d_{m1-1,m2+1}, d_{m1,m2}, d_{m1+1,m2-1}) of V. Unless V' is
a product of curves, one more general hyperplane on a factor with a
nondegenerate projection leaves an irreducible curve.
"""

from collections.abc import Sequence
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy import linalg

from multitrace.calculations.multidegree import MultiDegree
from multitrace.calculations.polynomial import (
    ComplexMatrix,
    Point,
    Polynomial,
    PolySystem,
    dict_to_poly,
    linear_dict,
    variety_dim,
)
from multitrace.calculations.slices import LinearForm, Slice, random_form
from multitrace.common.constants import AMBIGUITY_BAND, RANK_TOL
from multitrace.common.errors import DimsOutOfRange, InputError, ProductCase, RankAmbiguous
from multitrace.common.log import get_logger
from multitrace.common.rng import make_rng
from multitrace.services.witness import WitnessSet

logger = get_logger(__name__)


class SurfaceTag(str, Enum):
    PRODUCT = "product"
    FIBERED_OVER_FIRST = "fibered_over_first"  # projection to the first factor is a curve
    FIBERED_OVER_SECOND = "fibered_over_second"
    GENERAL = "general"


@dataclass(frozen=True)
class SurfaceCase:
    tag: SurfaceTag
    ranks: tuple[int, int]


@dataclass(frozen=True, eq=False)
class SurfaceReduction:
    system: PolySystem
    forms: tuple[LinearForm, ...]
    expected: MultiDegree | None = None


def form_polynomial(
    form: LinearForm, system: PolySystem, charts: Sequence[LinearForm | None] | None = None
) -> Polynomial:
    """
    A slice form as a polynomial. On a homogeneous group a constant term c is
    rewritten as c*h(z) using the chart form h, keeping the polynomial homogeneous.
    """
    coeffs = np.array(form.coefficients, dtype=np.complex128)
    constant = form.constant
    if constant != 0 and form.group is not None and system.groups[form.group].homogeneous:
        chart = charts[form.group] if charts is not None else None
        if chart is None:
            msg = "a form with a constant term on a homogeneous group needs the chart"
            raise InputError(msg)
        coeffs = coeffs + constant * chart.coefficients
        constant = 0j
    return dict_to_poly(linear_dict(coeffs, constant), system.variables)


def append_forms(
    system: PolySystem,
    forms: Sequence[LinearForm],
    declared_dim: int,
    charts: Sequence[LinearForm | None] | None = None,
) -> PolySystem:
    start = system.n_polys
    extended = system.with_polynomials(
        [form_polynomial(f, system, charts) for f in forms],
        [f"slice{start + k}" for k in range(len(forms))],
    )
    return replace(extended, declared_dim=declared_dim)


def tangent_ranks(
    system: PolySystem,
    point: Point,
    tol: float = RANK_TOL,
    expected_dim: int | None = None,
) -> tuple[int, tuple[int, ...]]:
    """
    Dimension of the tangent space of V at point and the rank of each
    group projection restricted to it. Homogeneous groups get an Euler row
    (conj z_i on the group) removing the scaling direction.
    """
    z = point.coordinates
    rows = [system.jacobian(z)]
    for group, sl in zip(system.groups, system.group_slices, strict=True):
        if group.homogeneous:
            euler = np.zeros(system.n_vars, dtype=np.complex128)
            euler[sl] = np.conj(z[sl])
            rows.append(euler[None, :])
    a = np.vstack(rows)

    _, s, vh = linalg.svd(a, full_matrices=True)
    threshold = tol * (s[0] if s.size and s[0] > 0 else 1.0)
    _check_gap(s, threshold)
    rank = int(np.sum(s > threshold))
    null = vh[rank:].conj().T
    dim = null.shape[1]
    if expected_dim is not None and dim != expected_dim:
        msg = f"tangent space has dimension {dim}, expected {expected_dim}"
        raise RankAmbiguous(msg)

    ranks = []
    for sl in system.group_slices:
        block = null[sl]
        sb = linalg.svd(block, compute_uv=False) if block.size else np.zeros(0)
        _check_gap(sb, tol)
        ranks.append(int(np.sum(sb > tol)))
    return dim, tuple(ranks)


def _check_gap(s: np.ndarray, threshold: float) -> None:
    low, high = AMBIGUITY_BAND
    near = s[(s > low * threshold) & (s < high * threshold)]
    if near.size:
        msg = f"singular value {near[0]:.3e} too close to the rank threshold {threshold:.3e}"
        raise RankAmbiguous(msg)


def reduce_to_surface(
    system: PolySystem,
    dims: Sequence[int],
    seed: int | np.random.Generator = 0,
    forms: Sequence[LinearForm] | None = None,
    multidegree: MultiDegree | None = None,
    charts: Sequence[LinearForm | None] | None = None,
) -> SurfaceReduction:
    """Append m1-1 forms on the first group and m2-1 on the second"""
    m = variety_dim(system)
    if m == 1:
        return SurfaceReduction(system, (), multidegree)
    if len(system.groups) != 2 or len(dims) != 2:  # noqa: PLR2004
        msg = "surface reduction needs two variable groups and dims (m1, m2)"
        raise DimsOutOfRange(msg)
    m1, m2 = (int(d) for d in dims)
    if m1 < 1 or m2 < 1 or m1 + m2 != m:
        msg = f"dims {(m1, m2)} must be positive and sum to {m}"
        raise DimsOutOfRange(msg)
    for d, group in zip((m1, m2), system.groups, strict=True):
        if d - 1 > group.projective_dim:
            msg = f"dims {(m1, m2)} exceed the dimension of group {group.name}"
            raise DimsOutOfRange(msg)

    if forms is None:
        rng = make_rng(seed)
        forms = [random_form(system, 0, rng) for _ in range(m1 - 1)]
        forms += [random_form(system, 1, rng) for _ in range(m2 - 1)]
    elif [f.group for f in forms] != [0] * (m1 - 1) + [1] * (m2 - 1):
        msg = f"surface reduction at {(m1, m2)} needs {m1 - 1} + {m2 - 1} forms"
        raise DimsOutOfRange(msg)

    expected = None
    if multidegree is not None:
        v = multidegree.values

        def entry(k: int) -> int:
            return v[k] if 0 <= k <= multidegree.m else 0

        expected = MultiDegree(2, (entry(m1 - 1), entry(m1), entry(m1 + 1)))
    surface = append_forms(system, forms, 2, charts)
    return SurfaceReduction(surface, tuple(forms), expected)


def classify_surface(system: PolySystem, point: Point, tol: float = RANK_TOL) -> SurfaceCase:
    """Which case of the surface structure the tangent projections at point show"""
    _, ranks = tangent_ranks(system, point, tol, expected_dim=2)
    r1, r2 = ranks
    full = 2
    if r1 < full and r2 < full:
        tag = SurfaceTag.PRODUCT
    elif r1 < full:
        tag = SurfaceTag.FIBERED_OVER_FIRST
    elif r2 < full:
        tag = SurfaceTag.FIBERED_OVER_SECOND
    else:
        tag = SurfaceTag.GENERAL
    logger.debug(f"surface case {tag.value}, ranks {ranks}")
    return SurfaceCase(tag, (r1, r2))


def curve_group(case: SurfaceCase) -> int:
    """Factor to slice: one whose projection of the surface is two-dimensional"""
    if case.tag is SurfaceTag.PRODUCT:
        msg = "surface is a product of curves; decompose the factors instead"
        raise ProductCase(msg)
    return 1 if case.tag is SurfaceTag.FIBERED_OVER_FIRST else 0


def reduce_to_curve(
    surface: PolySystem,
    case: SurfaceCase,
    seed: int | np.random.Generator = 0,
    group: int | None = None,
    form: LinearForm | None = None,
    charts: Sequence[LinearForm | None] | None = None,
) -> PolySystem:
    """Append one general hyperplane on a factor with a nondegenerate projection"""
    if variety_dim(surface) == 1:
        return surface
    chosen = curve_group(case)
    if group is not None:
        chosen = group
    if form is None:
        form = random_form(surface, chosen, make_rng(seed))
    elif form.group != chosen:
        msg = f"curve form lies on group {form.group}, expected {chosen}"
        raise InputError(msg)
    return append_forms(surface, [form], 1, charts)


def extend_randomization(matrix: ComplexMatrix | None, n_extra: int) -> ComplexMatrix | None:
    """Square-up matrix for a system with n_extra exact rows appended"""
    if matrix is None or n_extra == 0:
        return matrix
    rows, cols = matrix.shape
    out = np.zeros((rows + n_extra, cols + n_extra), dtype=np.complex128)
    out[:rows, :cols] = matrix
    out[rows:, cols:] = np.eye(n_extra)
    return out


def onto_system(w: WitnessSet, system: PolySystem, kept: Sequence[LinearForm]) -> WitnessSet:
    """
    Re-express w on a system that absorbed the rest of its slice forms as
    polynomials; only the forms in `kept` stay in the slice.
    """
    n_extra = system.n_polys - w.system.n_polys
    return WitnessSet(
        system,
        Slice(w.slice.charts, tuple(kept)),
        w.points,
        extend_randomization(w.randomization, n_extra),
    )
