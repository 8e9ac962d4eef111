#!/usr/bin/env python3
"""Test dimension reduction: surface slices, tangent ranks, curve slices."""

import sys
from pathlib import Path

import numpy as np

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from multitrace.calculations.multidegree import MultiDegree
from multitrace.calculations.parser import parse_system
from multitrace.calculations.polynomial import PolySystem, variety_dim
from multitrace.calculations.slices import random_form
from multitrace.common.errors import DimsOutOfRange, InputError, ProductCase, RankAmbiguous
from multitrace.services.reduction import (
    SurfaceTag,
    classify_surface,
    reduce_to_curve,
    reduce_to_surface,
    tangent_ranks,
)
from multitrace.services.witness import witness_set

FIXTURES = project_root / "fixtures"


def load(name: str) -> PolySystem:
    return parse_system((FIXTURES / name).read_text())


def test_curve_passes_through() -> None:
    curve = load("curve12.sys")
    reduction = reduce_to_surface(curve, (1, 0), 1)
    assert reduction.system is curve
    assert reduction.forms == ()
    print("✓ Curves need no surface reduction")


def test_surface_reduction_at_slot() -> None:
    """Slot (1,1) of a surface appends nothing; expected multidegree is the full one"""
    cremona = load("cremona2.sys")
    reduction = reduce_to_surface(cremona, (1, 1), 4, multidegree=MultiDegree(2, (1, 2, 1)))
    assert reduction.system.n_polys == cremona.n_polys
    assert variety_dim(reduction.system) == 2
    assert reduction.expected == MultiDegree(2, (1, 2, 1))

    for bad in ((2, 0), (1, 2), (0, 2)):
        try:
            reduce_to_surface(cremona, bad, 4)
        except DimsOutOfRange:
            continue
        msg = f"dims {bad} accepted"
        raise AssertionError(msg)
    print("✓ Surface reduction of the Cremona graph at (1, 1)")


def test_classify_graph_and_product() -> None:
    """Graph of a birational map projects onto both factors; a product does not"""
    cremona = load("cremona2.sys")
    point = witness_set(cremona, (1, 1), 3).points[0]
    case = classify_surface(cremona, point)
    assert case.tag is SurfaceTag.GENERAL
    assert case.ranks == (2, 2)

    conics = load("conic_product.sys")
    point = witness_set(conics, (1, 1), 11).points[0]
    case = classify_surface(conics, point)
    assert case.tag is SurfaceTag.PRODUCT
    assert case.ranks == (1, 1)
    try:
        reduce_to_curve(conics, case, 11)
    except ProductCase:
        print("✓ Cremona graph is general; conic x conic is a product")
        return
    msg = "product surface reduced to a curve"
    raise AssertionError(msg)


def test_tangent_ranks() -> None:
    cremona = load("cremona2.sys")
    point = witness_set(cremona, (1, 1), 3).points[0]
    dim, ranks = tangent_ranks(cremona, point)
    assert dim == 2
    assert ranks == (2, 2)
    try:
        tangent_ranks(cremona, point, expected_dim=3)
    except RankAmbiguous:
        print("✓ Tangent space dimension 2 with full projections")
        return
    msg = "wrong tangent dimension accepted"
    raise AssertionError(msg)


def test_reduce_to_curve() -> None:
    cremona = load("cremona2.sys")
    point = witness_set(cremona, (1, 1), 3).points[0]
    case = classify_surface(cremona, point)
    curve = reduce_to_curve(cremona, case, 8)
    assert curve.n_polys == cremona.n_polys + 1
    assert variety_dim(curve) == 1

    # the line cut on the first factor maps to a conic on the second
    assert witness_set(curve, (1, 0), 2).degree == 1
    w = witness_set(curve, (0, 1), 2)
    assert w.degree == 2
    assert max(w.residuals()) < 1e-8
    assert np.all(np.isfinite(w.coordinates()))

    wrong = random_form(cremona, 1, np.random.default_rng(0))
    try:
        reduce_to_curve(cremona, case, 8, group=0, form=wrong)
    except InputError:
        print("✓ One more hyperplane leaves a curve of slot sizes 1 and 2")
        return
    msg = "form on the wrong group accepted"
    raise AssertionError(msg)


if __name__ == "__main__":
    print("Testing dimension reduction...\n")

    test_curve_passes_through()
    test_surface_reduction_at_slot()
    test_classify_graph_and_product()
    test_tangent_ranks()
    test_reduce_to_curve()

    print("\nAll reduction tests passed! ✓")
