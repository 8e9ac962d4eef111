#!/usr/bin/env python3
"""Test witness sets and slice moving."""

import sys
from pathlib import Path

import numpy as np

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from multitrace.calculations.parser import parse_system
from multitrace.calculations.polynomial import PolySystem
from multitrace.calculations.slices import LinearForm, Slice, random_slice_like
from multitrace.common.errors import DimsOutOfRange
from multitrace.services.witness import move_slice, witness_set

FIXTURES = project_root / "fixtures"


def load(name: str) -> PolySystem:
    return parse_system((FIXTURES / name).read_text())


def test_folium_degree_is_seed_independent() -> None:
    """A general line meets the folium in three points, whatever the seed"""
    folium = load("folium.sys")
    for seed in (1, 2, 3, 42, 1234):
        w = witness_set(folium, (1,), seed)
        assert w.degree == 3, f"seed {seed}: {w.degree} points"
        assert max(w.residuals()) < 1e-10
    print("✓ Folium witness set has 3 points for 5 seeds")


def test_curve12_slots() -> None:
    """x0*y0^2 = x1*y1^2: a first-factor form leaves 2 points, a second-factor form 1"""
    curve = load("curve12.sys")
    assert witness_set(curve, (1, 0), 7).degree == 2
    assert witness_set(curve, (0, 1), 7).degree == 1
    print("✓ Bidegree (1,2) curve: |W(1,0)| = 2, |W(0,1)| = 1")


def test_exact_slice_point() -> None:
    """y1 + y0 = 0 in the chart x0 = y0 = 1 forces y1 = -1 and x1 = 1"""
    curve = load("curve12.sys")
    charts = (
        LinearForm([1, 0, 0, 0], -1, 0),
        LinearForm([0, 0, 1, 0], -1, 1),
    )
    ly = LinearForm([0, 0, 1, 1], 0, 1)
    w = witness_set(curve, None, 3, slice=Slice(charts, (ly,)))
    assert w.degree == 1
    assert np.allclose(w.points[0].coordinates, [1, 1, 1, -1], atol=1e-10)
    print("✓ Exact slice gives the point (1, -1)")


def test_empty_slot() -> None:
    """Two forms on one conic factor: no points, and no genericity failure"""
    conics = load("conic_product.sys")
    w = witness_set(conics, (2, 0), 5)
    assert w.degree == 0
    assert w.coordinates().shape == (0, conics.n_vars)
    print("✓ Empty witness slot")


def test_dims_validation() -> None:
    curve = load("curve12.sys")
    for dims in [(2, 0), (1,), (-1, 2)]:
        try:
            witness_set(curve, dims, 0)
        except DimsOutOfRange:
            continue
        msg = f"dims {dims} should be rejected"
        raise AssertionError(msg)
    print("✓ Out-of-range dims rejected")


def test_dims_must_sum_to_dimension() -> None:
    """Two generic lines make a curve: one form, never zero or two"""
    cases = [
        ("two_lines.sys", (0,)),
        ("two_lines.sys", (2,)),
        ("folium.sys", (2,)),
        ("cremona2.sys", (1, 0)),
        ("cremona2.sys", (2, 1)),
    ]
    for name, dims in cases:
        try:
            witness_set(load(name), dims, 0)
        except DimsOutOfRange:
            continue
        msg = f"{name}: dims {dims} should be rejected"
        raise AssertionError(msg)
    assert witness_set(load("two_lines.sys"), (1,), 3).degree == 2
    print("✓ Dims that miss the variety dimension rejected")


def test_move_slice_round_trip() -> None:
    """Move to a random slice and back: original points to 1e-8, order preserved"""
    rng = np.random.default_rng(17)
    for name, dims in [("folium.sys", (1,)), ("curve12.sys", (1, 0)), ("cremona2.sys", (1, 1))]:
        system = load(name)
        w = witness_set(system, dims, 9)
        target = random_slice_like(system, w.slice, rng)
        there = move_slice(w, target)
        assert there.degree == w.degree
        assert max(there.residuals(), default=0.0) < 1e-8
        back = move_slice(there, w.slice)
        assert np.max(np.abs(back.coordinates() - w.coordinates())) < 1e-8
    print("✓ move_slice round trips within 1e-8")


def test_move_slice_shape_check() -> None:
    curve = load("curve12.sys")
    w = witness_set(curve, (1, 0), 2)
    other = witness_set(curve, (0, 1), 2)
    try:
        move_slice(w, other.slice)
    except DimsOutOfRange:
        print("✓ Slice of another shape rejected")
        return
    msg = "move_slice should reject a slice of another shape"
    raise AssertionError(msg)


if __name__ == "__main__":
    print("Testing witness sets...\n")

    test_folium_degree_is_seed_independent()
    test_curve12_slots()
    test_exact_slice_point()
    test_empty_slot()
    test_dims_validation()
    test_dims_must_sum_to_dimension()
    test_move_slice_round_trip()
    test_move_slice_shape_check()

    print("\nAll witness tests passed! ✓")
