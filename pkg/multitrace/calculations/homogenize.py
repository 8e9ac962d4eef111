"""
Multihomogenization of affine systems.

Each affine group z = (z_1..z_n) becomes a homogeneous group (h, w_1..w_n)
with z_k = w_k / h. The homogenizing variable comes first in the new group.
Groups that are already homogeneous are carried over (positionally renamed).
"""

from collections.abc import Sequence

import numpy as np

from multitrace.calculations.polynomial import ComplexVector, Point, PolySystem, Term, VarGroup
from multitrace.common.errors import DimensionMismatch, VariableCollision


def default_groups(system: PolySystem) -> list[VarGroup]:
    """Prepend a fresh homogenizing variable `<group>_h` to every affine group"""
    taken = set(system.variables)
    groups = []
    for group in system.groups:
        if group.homogeneous:
            groups.append(group)
            continue
        name = f"{group.name}_h"
        while name in taken:
            name += "_"
        taken.add(name)
        groups.append(VarGroup(group.name, (name, *group.variables), homogeneous=True))
    return groups


def _check_groups(system: PolySystem, groups: Sequence[VarGroup]) -> None:
    if len(groups) != len(system.groups):
        msg = f"expected {len(system.groups)} target groups, got {len(groups)}"
        raise DimensionMismatch(msg)
    seen: set[str] = set()
    for old, new in zip(system.groups, groups, strict=True):
        extra = 0 if old.homogeneous else 1
        if len(new.variables) != len(old.variables) + extra:
            expected = len(old.variables) + extra
            msg = f"group {old.name}: expected {expected} variables, got {len(new.variables)}"
            raise DimensionMismatch(msg)
        for var in new.variables:
            if var in seen:
                msg = f"homogenizing variable name collision: {var}"
                raise VariableCollision(msg)
            seen.add(var)


def multihomogenize(system: PolySystem, groups: Sequence[VarGroup] | None = None) -> PolySystem:
    """
    Homogenize every polynomial separately in each affine group.

    Constants move onto the homogenizing variables, so x*y^2 - 1 in groups
    {x}, {y} becomes x1*y1^2 - x0*y0^2 for target groups (x0, x1), (y0, y1).
    """
    if groups is None:
        groups = default_groups(system)
    _check_groups(system, groups)

    renames: dict[str, str] = {}
    homogenizers: list[str | None] = []
    for old, new in zip(system.groups, groups, strict=True):
        tail = new.variables if old.homogeneous else new.variables[1:]
        renames.update(zip(old.variables, tail, strict=True))
        homogenizers.append(None if old.homogeneous else new.variables[0])

    pattern = system.degree_pattern
    polys = []
    for p, poly in enumerate(system.polynomials):
        terms = []
        for term in poly:
            exps = {renames[v]: e for v, e in term.exponents.items()}
            for gi, old in enumerate(system.groups):
                h = homogenizers[gi]
                if h is None:
                    continue
                missing = int(pattern[p, gi]) - term.degree_in(old.variables)
                if missing:
                    exps[h] = missing
            terms.append(Term(term.coefficient, exps))
        polys.append(tuple(terms))

    return PolySystem(
        groups=tuple(VarGroup(g.name, g.variables, homogeneous=True) for g in groups),
        polynomials=tuple(polys),
        names=system.names,
        declared_dim=system.declared_dim,
    )


def embed(affine: PolySystem, point: Point | ComplexVector) -> Point:
    """Place an affine point in the homogenized system (homogenizing coordinates = 1)"""
    coords = _coordinates(point)
    parts = []
    for group, sl in zip(affine.groups, affine.group_slices, strict=True):
        if not group.homogeneous:
            parts.append(np.ones(1, dtype=np.complex128))
        parts.append(coords[sl])
    return Point(np.concatenate(parts), chart_tag="homogeneous")


def dehomogenize(homogeneous: PolySystem, point: Point | ComplexVector) -> Point:
    """Inverse of embed: divide each group by its first coordinate and drop it"""
    coords = _coordinates(point)
    parts = [coords[sl][1:] / coords[sl][0] for sl in homogeneous.group_slices]
    return Point(np.concatenate(parts))


def _coordinates(point: Point | ComplexVector) -> ComplexVector:
    if isinstance(point, Point):
        return point.coordinates
    return np.asarray(point, dtype=np.complex128)
