"""
Sparse polynomial systems over the complex numbers.

Variables are organized into groups (one per projective or affine factor).
Variable order is declaration order everywhere: every coordinate vector and
every Jacobian column follows it.
"""

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.typing import NDArray

from multitrace.common.errors import DimensionMismatch, InputError, VariableCollision

Exponents = tuple[int, ...]
PolyDict = dict[Exponents, complex]  # exponent vector over system variables -> coefficient

ComplexVector = NDArray[np.complex128]
ComplexMatrix = NDArray[np.complex128]
RealVector = NDArray[np.float64]


@dataclass(frozen=True)
class VarGroup:
    """One factor of the ambient space"""

    name: str
    variables: tuple[str, ...]
    homogeneous: bool = False

    @property
    def projective_dim(self) -> int:
        """n_i: P^{n_i} has n_i+1 homogeneous coordinates, C^{n_i} has n_i"""
        return len(self.variables) - 1 if self.homogeneous else len(self.variables)


@dataclass(frozen=True)
class Term:
    coefficient: complex
    exponents: Mapping[str, int] = field(default_factory=dict)

    def degree_in(self, variables: Iterable[str]) -> int:
        return sum(self.exponents.get(v, 0) for v in variables)


@dataclass(frozen=True, eq=False)
class Point:
    """A coordinate vector in the chart named by chart_tag"""

    coordinates: ComplexVector
    chart_tag: str = "affine"

    def __post_init__(self) -> None:
        coords = np.array(self.coordinates, dtype=np.complex128).reshape(-1)
        coords.flags.writeable = False
        object.__setattr__(self, "coordinates", coords)

    def __len__(self) -> int:
        return len(self.coordinates)


Polynomial = tuple[Term, ...]


@dataclass(frozen=True, eq=False)
class _DerivativeTable:
    rows: NDArray[np.intp]
    coefficients: ComplexVector
    exponents: NDArray[np.int64]


@dataclass(frozen=True, eq=False)
class PolySystem:
    """Immutable list of sparse polynomials in grouped variables"""

    groups: tuple[VarGroup, ...]
    polynomials: tuple[Polynomial, ...]
    names: tuple[str, ...] = ()
    declared_dim: int | None = None

    def __post_init__(self) -> None:
        if not self.groups:
            msg = "system declares no variable groups"
            raise InputError(msg)
        if not self.polynomials:
            msg = "system has no polynomials"
            raise InputError(msg)
        seen: set[str] = set()
        for group in self.groups:
            if not group.variables:
                msg = f"variable group {group.name} is empty"
                raise InputError(msg)
            for var in group.variables:
                if var in seen:
                    msg = f"duplicate variable: {var}"
                    raise VariableCollision(msg)
                seen.add(var)
        for poly in self.polynomials:
            for term in poly:
                if term.coefficient == 0:
                    msg = "terms must have nonzero coefficients"
                    raise InputError(msg)
                unknown = set(term.exponents) - seen
                if unknown:
                    msg = f"undeclared variable(s): {', '.join(sorted(unknown))}"
                    raise InputError(msg)
        if not self.names:
            object.__setattr__(self, "names", tuple(f"f{i}" for i in range(len(self.polynomials))))
        elif len(self.names) != len(self.polynomials):
            msg = "one name per polynomial required"
            raise InputError(msg)
        for gi, group in enumerate(self.groups):
            if group.homogeneous and not self.is_homogeneous_in(gi):
                msg = f"group {group.name} is declared homogeneous but a polynomial is not"
                raise InputError(msg)

    # Layout

    @cached_property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for g in self.groups for v in g.variables)

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def n_polys(self) -> int:
        return len(self.polynomials)

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.variables)}

    @cached_property
    def group_slices(self) -> tuple[slice, ...]:
        out = []
        start = 0
        for g in self.groups:
            out.append(slice(start, start + len(g.variables)))
            start += len(g.variables)
        return tuple(out)

    @property
    def is_square(self) -> bool:
        return self.n_polys == self.n_vars

    def is_homogeneous_in(self, group_index: int) -> bool:
        variables = self.groups[group_index].variables
        for poly in self.polynomials:
            if len({t.degree_in(variables) for t in poly}) > 1:
                return False
        return True

    @cached_property
    def degree_pattern(self) -> NDArray[np.int64]:
        """Degree of each polynomial in each group (rows: polynomials)"""
        pattern = np.zeros((self.n_polys, len(self.groups)), dtype=np.int64)
        for p, poly in enumerate(self.polynomials):
            for gi, group in enumerate(self.groups):
                pattern[p, gi] = max((t.degree_in(group.variables) for t in poly), default=0)
        return pattern

    def total_degrees(self) -> list[int]:
        return [
            max((sum(t.exponents.values()) for t in poly), default=0) for poly in self.polynomials
        ]

    # Evaluation

    @cached_property
    def _compiled(self) -> tuple[ComplexVector, NDArray[np.int64], NDArray[np.intp]]:
        coeffs: list[complex] = []
        exps: list[list[int]] = []
        rows: list[int] = []
        for p, poly in enumerate(self.polynomials):
            for term in poly:
                coeffs.append(complex(term.coefficient))
                exps.append([term.exponents.get(v, 0) for v in self.variables])
                rows.append(p)
        return (
            np.array(coeffs, dtype=np.complex128),
            np.array(exps, dtype=np.int64).reshape(len(coeffs), self.n_vars),
            np.array(rows, dtype=np.intp),
        )

    @cached_property
    def _derivatives(self) -> tuple[_DerivativeTable, ...]:
        coeffs, exps, rows = self._compiled
        tables = []
        for j in range(self.n_vars):
            mask = exps[:, j] > 0
            reduced = exps[mask].copy()
            reduced[:, j] -= 1
            tables.append(
                _DerivativeTable(
                    rows=rows[mask],
                    coefficients=coeffs[mask] * exps[mask, j],
                    exponents=reduced,
                )
            )
        return tuple(tables)

    def _check(self, z: ComplexVector | Point | Sequence[complex]) -> ComplexVector:
        coords = z.coordinates if isinstance(z, Point) else np.asarray(z, dtype=np.complex128)
        if coords.shape != (self.n_vars,):
            msg = f"point has {coords.size} coordinates, system has {self.n_vars} variables"
            raise DimensionMismatch(msg)
        return coords

    def evaluate(self, z: ComplexVector | Point | Sequence[complex]) -> ComplexVector:
        coords = self._check(z)
        coeffs, exps, rows = self._compiled
        out = np.zeros(self.n_polys, dtype=np.complex128)
        if coeffs.size:
            monomials = np.prod(coords[None, :] ** exps, axis=1)
            np.add.at(out, rows, coeffs * monomials)
        return out

    def jacobian(self, z: ComplexVector | Point | Sequence[complex]) -> ComplexMatrix:
        coords = self._check(z)
        jac = np.zeros((self.n_polys, self.n_vars), dtype=np.complex128)
        for j, table in enumerate(self._derivatives):
            if table.coefficients.size == 0:
                continue
            monomials = np.prod(coords[None, :] ** table.exponents, axis=1)
            column = np.zeros(self.n_polys, dtype=np.complex128)
            np.add.at(column, table.rows, table.coefficients * monomials)
            jac[:, j] = column
        return jac

    def magnitudes(self, z: ComplexVector | Point | Sequence[complex]) -> RealVector:
        """Sum of |c| |z^a| over the terms of each polynomial"""
        coords = self._check(z)
        coeffs, exps, rows = self._compiled
        out = np.zeros(self.n_polys, dtype=np.float64)
        if coeffs.size:
            monomials = np.prod(np.abs(coords)[None, :] ** exps, axis=1)
            np.add.at(out, rows, np.abs(coeffs) * monomials)
        return out

    def residual(self, z: ComplexVector | Point | Sequence[complex]) -> float:
        """Max-norm of the system at z"""
        return float(np.max(np.abs(self.evaluate(z))))

    # Construction

    def with_polynomials(
        self, extra: Sequence[Polynomial], names: Sequence[str] | None = None
    ) -> "PolySystem":
        if names is None:
            names = [f"f{self.n_polys + i}" for i in range(len(extra))]
        return PolySystem(
            groups=self.groups,
            polynomials=self.polynomials + tuple(extra),
            names=self.names + tuple(names),
            declared_dim=self.declared_dim,
        )

    def to_dicts(self) -> list[PolyDict]:
        return [poly_to_dict(poly, self.index) for poly in self.polynomials]

    def from_dicts(
        self, polys: Sequence[PolyDict], names: Sequence[str] | None = None
    ) -> "PolySystem":
        """New system over the same groups"""
        return PolySystem(
            groups=self.groups,
            polynomials=tuple(dict_to_poly(d, self.variables) for d in polys),
            names=tuple(names) if names is not None else (),
            declared_dim=self.declared_dim,
        )


def evaluate(system: PolySystem, point: Point | ComplexVector) -> ComplexVector:
    return system.evaluate(point)


def jacobian(system: PolySystem, point: Point | ComplexVector) -> ComplexMatrix:
    return system.jacobian(point)


# Dictionary arithmetic (used to build start systems, slices and products)

def poly_to_dict(poly: Polynomial, index: Mapping[str, int]) -> PolyDict:
    out: PolyDict = {}
    n = len(index)
    for term in poly:
        key = [0] * n
        for var, e in term.exponents.items():
            key[index[var]] = e
        k = tuple(key)
        out[k] = out.get(k, 0j) + complex(term.coefficient)
    return {k: c for k, c in out.items() if c != 0}


def dict_to_poly(d: Mapping[Exponents, complex], variables: Sequence[str]) -> Polynomial:
    terms = []
    for key, coeff in d.items():
        if coeff == 0:
            continue
        exps = {v: e for v, e in zip(variables, key, strict=True) if e}
        terms.append(Term(complex(coeff), exps))
    return tuple(terms)


def poly_add(a: Mapping[Exponents, complex], b: Mapping[Exponents, complex]) -> PolyDict:
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0j) + c
    return {k: c for k, c in out.items() if c != 0}


def poly_scale(a: Mapping[Exponents, complex], s: complex) -> PolyDict:
    if s == 0:
        return {}
    return {k: c * s for k, c in a.items()}


def poly_mul(a: Mapping[Exponents, complex], b: Mapping[Exponents, complex]) -> PolyDict:
    out: PolyDict = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb, strict=True))
            out[k] = out.get(k, 0j) + ca * cb
    return {k: c for k, c in out.items() if c != 0}


def linear_dict(coefficients: Sequence[complex], constant: complex = 0j) -> PolyDict:
    """a·z + c as a dictionary polynomial over len(coefficients) variables"""
    n = len(coefficients)
    out: PolyDict = {}
    for j, a in enumerate(coefficients):
        if a != 0:
            key = [0] * n
            key[j] = 1
            out[tuple(key)] = complex(a)
    if constant != 0:
        out[(0,) * n] = complex(constant)
    return out


def degree_pattern(system: PolySystem) -> NDArray[np.int64]:
    return system.degree_pattern


def homogeneous_groups(system: PolySystem) -> tuple[bool, ...]:
    return tuple(system.is_homogeneous_in(gi) for gi in range(len(system.groups)))


def variety_dim(system: PolySystem) -> int:
    """Declared dimension, else the expected dimension of a complete intersection"""
    if system.declared_dim is not None:
        return system.declared_dim
    expected = sum(g.projective_dim for g in system.groups) - system.n_polys
    if expected < 0:
        msg = (
            f"system has {system.n_polys} polynomials in {system.n_vars} variables; "
            "declare its dimension"
        )
        raise InputError(msg)
    return expected
