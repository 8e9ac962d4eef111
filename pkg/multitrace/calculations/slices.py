"""
Linear slices and the square systems they cut out.

A Slice holds one chart form per homogeneous group (h.z - 1 = 0), the slice
forms of each group (a.z + c = 0) and optionally "mixed" forms spanning
several groups. Every form carries coefficients over all system variables,
zero outside its group, so evaluation is a plain dot product.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from multitrace.calculations.polynomial import (
    ComplexMatrix,
    ComplexVector,
    Point,
    PolySystem,
    RealVector,
    variety_dim,
)
from multitrace.common.errors import DimensionMismatch, DimsOutOfRange, InputError
from multitrace.common.rng import complex_gaussian


@dataclass(frozen=True, eq=False)
class LinearForm:
    """a.z + c, restricted to one group (or mixed when group is None)"""

    coefficients: ComplexVector
    constant: complex = 0j
    group: int | None = None

    def __post_init__(self) -> None:
        coeffs = np.array(self.coefficients, dtype=np.complex128).reshape(-1)
        coeffs.flags.writeable = False
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "constant", complex(self.constant))

    def __call__(self, z: ComplexVector) -> complex:
        return complex(self.coefficients @ z + self.constant)

    def shifted(self, offset: complex) -> "LinearForm":
        return replace(self, constant=self.constant + offset)

    def same_as(self, other: "LinearForm", tol: float = 0.0) -> bool:
        return (
            self.group == other.group
            and self.coefficients.shape == other.coefficients.shape
            and bool(np.all(np.abs(self.coefficients - other.coefficients) <= tol))
            and abs(self.constant - other.constant) <= tol
        )


@dataclass(frozen=True, eq=False)
class Slice:
    charts: tuple[LinearForm | None, ...]
    forms: tuple[LinearForm, ...] = field(default_factory=tuple)

    @property
    def n_groups(self) -> int:
        return len(self.charts)

    @property
    def dims(self) -> tuple[int, ...]:
        """Number of slice forms on each group (mixed forms excluded)"""
        counts = [0] * self.n_groups
        for form in self.forms:
            if form.group is not None:
                counts[form.group] += 1
        return tuple(counts)

    @property
    def n_mixed(self) -> int:
        return sum(1 for form in self.forms if form.group is None)

    @property
    def chart_forms(self) -> tuple[LinearForm, ...]:
        return tuple(c for c in self.charts if c is not None)

    def group_forms(self, group: int | None) -> tuple[LinearForm, ...]:
        return tuple(f for f in self.forms if f.group == group)

    def with_forms(self, forms: Sequence[LinearForm]) -> "Slice":
        return Slice(self.charts, tuple(forms))

    def shifted(self, offsets: Sequence[complex]) -> "Slice":
        """Translate constant terms, one offset per form"""
        if len(offsets) != len(self.forms):
            msg = f"{len(offsets)} offsets for {len(self.forms)} forms"
            raise DimensionMismatch(msg)
        forms = tuple(f.shifted(o) for f, o in zip(self.forms, offsets, strict=True))
        return Slice(self.charts, forms)

    def same_as(self, other: "Slice", tol: float = 0.0) -> bool:
        if len(self.charts) != len(other.charts) or len(self.forms) != len(other.forms):
            return False
        for a, b in zip(self.charts, other.charts, strict=True):
            if a is None or b is None:
                if a is not b:
                    return False
            elif not a.same_as(b, tol):
                return False
        return all(a.same_as(b, tol) for a, b in zip(self.forms, other.forms, strict=True))


# Random construction

def check_dims(system: PolySystem, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if len(dims) != len(system.groups):
        msg = f"dims {dims} do not match {len(system.groups)} variable group(s)"
        raise DimsOutOfRange(msg)
    for d, group in zip(dims, system.groups, strict=True):
        if d < 0 or d > group.projective_dim:
            msg = (
                f"dims {dims}: {d} forms on group {group.name} "
                f"exceeds its dimension {group.projective_dim}"
            )
            raise DimsOutOfRange(msg)
    dim = variety_dim(system)
    if sum(dims) != dim:
        msg = f"dims {dims} do not sum to the variety dimension {dim}"
        raise DimsOutOfRange(msg)
    return dims


def random_chart(system: PolySystem, rng: np.random.Generator) -> tuple[LinearForm | None, ...]:
    charts: list[LinearForm | None] = []
    for gi, (group, sl) in enumerate(zip(system.groups, system.group_slices, strict=True)):
        if not group.homogeneous:
            charts.append(None)
            continue
        coeffs = np.zeros(system.n_vars, dtype=np.complex128)
        coeffs[sl] = complex_gaussian(rng, sl.stop - sl.start)
        charts.append(LinearForm(coeffs, -1.0, gi))
    return tuple(charts)


def random_form(system: PolySystem, group: int | None, rng: np.random.Generator) -> LinearForm:
    coeffs = np.zeros(system.n_vars, dtype=np.complex128)
    if group is None:
        coeffs[:] = complex_gaussian(rng, system.n_vars)
        return LinearForm(coeffs, complex(complex_gaussian(rng)), None)
    sl = system.group_slices[group]
    coeffs[sl] = complex_gaussian(rng, sl.stop - sl.start)
    constant = 0j if system.groups[group].homogeneous else complex(complex_gaussian(rng))
    return LinearForm(coeffs, constant, group)


def random_slice(
    system: PolySystem,
    dims: Sequence[int],
    rng: np.random.Generator,
    chart: Sequence[LinearForm | None] | None = None,
) -> Slice:
    """Complex Gaussian slice with dims[i] forms on group i"""
    dims = check_dims(system, dims)
    charts = tuple(chart) if chart is not None else random_chart(system, rng)
    forms = [random_form(system, gi, rng) for gi, m in enumerate(dims) for _ in range(m)]
    return Slice(charts, tuple(forms))


def random_slice_like(system: PolySystem, template: Slice, rng: np.random.Generator) -> Slice:
    """Fresh forms in the shape of template (same chart, same groups, same order)"""
    return Slice(template.charts, tuple(random_form(system, f.group, rng) for f in template.forms))


# Square-up

def core_rows(system: PolySystem, n_rows: int) -> list[list[int]]:
    """
    Polynomials mixed into each row of the square core.

    Rows only mix polynomials of equal degree pattern: one row per pattern
    class, remaining rows to the largest classes. With more classes than
    rows every row mixes everything.
    """
    if n_rows > system.n_polys:
        msg = f"{system.n_polys} polynomial(s) cannot cut out a set of codimension {n_rows}"
        raise InputError(msg)
    if n_rows == system.n_polys:
        return [[p] for p in range(system.n_polys)]
    classes: dict[tuple[int, ...], list[int]] = {}
    for p in range(system.n_polys):
        classes.setdefault(tuple(int(d) for d in system.degree_pattern[p]), []).append(p)
    members = list(classes.values())
    if len(members) > n_rows:
        return [list(range(system.n_polys)) for _ in range(n_rows)]
    quota = [1] * len(members)
    order = sorted(range(len(members)), key=lambda c: -len(members[c]))
    spare = n_rows - len(members)
    for c in order:
        take = min(spare, len(members[c]) - quota[c])
        quota[c] += take
        spare -= take
    return [members[c] for c in range(len(members)) for _ in range(quota[c])]


def randomization_matrix(
    system: PolySystem, n_rows: int, rng: np.random.Generator
) -> ComplexMatrix | None:
    """Seeded square-up matrix, None when the system is already the right size"""
    rows = core_rows(system, n_rows)
    if n_rows == system.n_polys:
        return None
    matrix = np.zeros((n_rows, system.n_polys), dtype=np.complex128)
    for r, members in enumerate(rows):
        matrix[r, members] = complex_gaussian(rng, len(members))
    return matrix


def core_size(system: PolySystem, slice_: Slice) -> int:
    """Rows the polynomial part needs so that system + slice is square"""
    return system.n_vars - len(slice_.chart_forms) - len(slice_.forms)


@dataclass(frozen=True)
class EquationShape:
    """Degree per group; linear single-group equations carry their own form"""

    degrees: tuple[int, ...]
    form: LinearForm | None = None


@dataclass(frozen=True, eq=False)
class SlicedSystem:
    """
    The square system {R.F, charts, slice forms} in the affine coordinates of
    all variables. R is the randomization matrix (identity when None).
    """

    system: PolySystem
    slice: Slice
    randomization: ComplexMatrix | None = None

    def __post_init__(self) -> None:
        if self.slice.n_groups != len(self.system.groups):
            msg = "slice and system disagree on the number of groups"
            raise DimensionMismatch(msg)
        rows = self.system.n_polys if self.randomization is None else self.randomization.shape[0]
        if self.randomization is not None and self.randomization.shape[1] != self.system.n_polys:
            msg = "randomization matrix does not match the system"
            raise DimensionMismatch(msg)
        if rows + len(self._linear) != self.system.n_vars:
            msg = (
                f"not square: {rows} polynomial rows + {len(self._linear)} linear forms "
                f"for {self.system.n_vars} variables"
            )
            raise DimensionMismatch(msg)

    @cached_property
    def _linear(self) -> tuple[LinearForm, ...]:
        return self.slice.chart_forms + self.slice.forms

    @cached_property
    def _linear_matrix(self) -> tuple[ComplexMatrix, ComplexVector]:
        if not self._linear:
            empty = np.zeros((0, self.system.n_vars), dtype=np.complex128)
            return empty, np.zeros(0, dtype=np.complex128)
        return (
            np.vstack([f.coefficients for f in self._linear]),
            np.array([f.constant for f in self._linear], dtype=np.complex128),
        )

    @property
    def n_vars(self) -> int:
        return self.system.n_vars

    def evaluate(self, z: ComplexVector) -> ComplexVector:
        values = self.system.evaluate(z)
        if self.randomization is not None:
            values = self.randomization @ values
        a, c = self._linear_matrix
        return np.concatenate([values, a @ z + c])

    def jacobian(self, z: ComplexVector) -> ComplexMatrix:
        jac = self.system.jacobian(z)
        if self.randomization is not None:
            jac = self.randomization @ jac
        return np.vstack([jac, self._linear_matrix[0]])

    def magnitudes(self, z: ComplexVector) -> RealVector:
        """Term magnitudes of each row of evaluate, the scale of its rounding error"""
        mags = self.system.magnitudes(z)
        if self.randomization is not None:
            mags = np.abs(self.randomization) @ mags
        a, c = self._linear_matrix
        return np.concatenate([mags, np.abs(a) @ np.abs(z) + np.abs(c)])

    def full_residual(self, z: ComplexVector | Point) -> float:
        """
        Max relative residual of the unrandomized system together with every
        linear form: |value| / (1 + sum of term magnitudes), row by row.
        """
        coords = z.coordinates if isinstance(z, Point) else z
        a, c = self._linear_matrix
        values = np.concatenate([self.system.evaluate(coords), a @ coords + c])
        scale = np.concatenate(
            [self.system.magnitudes(coords), np.abs(a) @ np.abs(coords) + np.abs(c)]
        )
        return float(np.max(np.abs(values) / (1.0 + scale)))

    def shapes(self) -> list[EquationShape]:
        pattern = self.system.degree_pattern
        if self.randomization is None:
            rows = [tuple(int(d) for d in pattern[p]) for p in range(self.system.n_polys)]
        else:
            rows = [
                tuple(int(d) for d in pattern[np.flatnonzero(row)].max(axis=0))
                for row in self.randomization
            ]
        shapes = [EquationShape(r) for r in rows]
        for form in self._linear:
            degrees = [0] * len(self.system.groups)
            if form.group is not None:
                degrees[form.group] = 1
                shapes.append(EquationShape(tuple(degrees), form))
                continue
            for gi, sl in enumerate(self.system.group_slices):
                if np.any(form.coefficients[sl] != 0):
                    degrees[gi] = 1
            shapes.append(EquationShape(tuple(degrees)))
        return shapes

    def with_slice(self, slice_: Slice) -> "SlicedSystem":
        return SlicedSystem(self.system, slice_, self.randomization)
