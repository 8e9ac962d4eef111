#!/usr/bin/env python3
"""
Test the merge homotopy and the multihomogeneous trace test.

The bidegree (1,2) curve x0*y0^2 = x1*y1^2 in P1 x P1 is worked with exact
forms in the chart x0 = y0 = 1, where it is x = 1/y^2:
  lx  = x1 - 7/2 x0                 (2 points)
  ly  = y1 + y0                     (1 point, (1, -1))
  lx' = 3/2 x1 - x0,  ly' = -4/3 y1 - 10/3 y0
so g + tau = 0 on the curve reads 8y^3 + (20 - 6 tau) y^2 - 9 = 0.
"""

import sys
from pathlib import Path

import numpy as np

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from multitrace.calculations.parser import parse_system
from multitrace.calculations.polynomial import PolySystem
from multitrace.calculations.slices import LinearForm, Slice
from multitrace.common.errors import InputError, SchemaError
from multitrace.services.collection import WitnessCollection, witness_collection
from multitrace.services.mtrace import (
    merge_witness_homotopy,
    merged_form,
    multihomogeneous_trace_test,
    split_forms,
)
from multitrace.services.trace import Pencil, trace_test
from multitrace.services.witness import WitnessSet, witness_set

FIXTURES = project_root / "fixtures"

TAUS = [0.0, -1.0, -2.0]
CHARTS = (LinearForm([1, 0, 0, 0], -1, 0), LinearForm([0, 0, 1, 0], -1, 1))
LX = LinearForm([-3.5, 1, 0, 0], 0, 0)
LY = LinearForm([0, 0, 1, 1], 0, 1)
PRIMED = (LinearForm([-1, 1.5, 0, 0], 0, 0), LinearForm([0, 0, -10 / 3, -4 / 3], 0, 1))

# averages of (x1, y1) on g + tau = 0 for tau = 0, -1, -2
AVERAGES = [(1.48148, -0.83333), (1.92592, -1.08333), (2.37037, -1.33333)]


def load(name: str) -> PolySystem:
    return parse_system((FIXTURES / name).read_text())


def exact_pair(curve: PolySystem) -> tuple[WitnessSet, WitnessSet]:
    wx = witness_set(curve, None, 1, slice=Slice(CHARTS, (LX,)))
    wy = witness_set(curve, None, 2, slice=Slice(CHARTS, (LY,)))
    return wx, wy


def test_exact_witness_sets() -> None:
    curve = load("curve12.sys")
    wx, wy = exact_pair(curve)
    assert wx.degree == 2
    assert wy.degree == 1
    assert np.allclose(wy.points[0].coordinates, [1, 1, 1, -1], atol=1e-10)
    y_values = sorted(p.coordinates[3].real for p in wx.points)
    assert np.allclose(y_values, [-1 / np.sqrt(3.5), 1 / np.sqrt(3.5)], atol=1e-10)
    print("✓ W(1,0) = 2 points at x = 7/2, W(0,1) = {(1, -1)}")


def test_merge_homotopy_exact_forms() -> None:
    """All 1 + 2 points reach the curve on V(g); averages and trace line match"""
    curve = load("curve12.sys")
    wx, wy = exact_pair(curve)
    merged = merge_witness_homotopy(wx, wy, seed=5, primed=PRIMED)
    assert merged.degree == 3
    g = merged_form(PRIMED)
    for p in merged.points:
        assert curve.residual(p) < 1e-10
        assert abs(g(p.coordinates)) < 1e-10

    direct = witness_set(curve, None, 6, slice=Slice(CHARTS, (g,)))
    assert direct.degree == merged.degree

    result = trace_test(merged, pencil=Pencil(merged.slice, (1,)), taus=TAUS)
    assert result.complete
    assert result.residual < 1e-6
    for sample, (x_avg, y_avg) in zip(result.samples, AVERAGES, strict=True):
        assert abs(sample.sum[1] / 3 - x_avg) < 1e-4
        assert abs(sample.sum[3] / 3 - y_avg) < 1e-4

    c0, c1 = result.trace.c0 / 3, result.trace.c1 / 3
    assert abs(c0[1] - (-4 / 9)) < 1e-6
    assert abs(c1[1] - 40 / 27) < 1e-6
    assert abs(c0[3] - 1 / 4) < 1e-6
    assert abs(c1[3] - (-5 / 6)) < 1e-6
    print("✓ Merge homotopy: trace (40/27 - 4 tau/9, -5/6 + tau/4)")


def test_univariate_oracle() -> None:
    """Samples agree with the roots of 8y^3 + (20 - 6 tau) y^2 - 9 and x = 1/y^2"""
    curve = load("curve12.sys")
    wx, wy = exact_pair(curve)
    merged = merge_witness_homotopy(wx, wy, seed=5, primed=PRIMED)
    result = trace_test(merged, pencil=Pencil(merged.slice, (1,)), taus=TAUS)
    for sample in result.samples:
        roots = np.roots([8, 20 - 6 * sample.tau, 0, -9])
        assert abs(sample.sum[3] - roots.sum()) < 1e-8
        assert abs(sample.sum[1] - (1 / roots**2).sum()) < 1e-8
        assert abs(sample.sum[0] - 3) < 1e-10
    roots = np.roots([8, 20, 0, -9])
    for p in merged.points:
        assert np.min(np.abs(roots - p.coordinates[3])) < 1e-8
    print("✓ Univariate oracle agrees at tau = 0, -1, -2")


def test_algorithm_on_exact_collection() -> None:
    """Complete collection passes; deleting any one point fails"""
    curve = load("curve12.sys")
    wx, wy = exact_pair(curve)
    complete = WitnessCollection(curve, 1, {(1, 0): wx, (0, 1): wy})
    report = multihomogeneous_trace_test(curve, complete, seed=3)
    assert report.complete
    assert report.branch == "pairs"
    assert report.pairs[0].merged_count == 3
    assert report.pairs[0].residual is not None
    assert report.pairs[0].residual < 1e-6

    partials = [
        complete.with_set((1, 0), wx.subset([0])),
        complete.with_set((1, 0), wx.subset([1])),
        complete.with_set((0, 1), wy.subset([])),
    ]
    for k, partial in enumerate(partials):
        report = multihomogeneous_trace_test(curve, partial, seed=3)
        assert not report.complete, f"deletion case {k} passed"
    print("✓ Complete collection certified; 3 deletion cases rejected")


def test_algorithm_on_random_collection() -> None:
    curve = load("curve12.sys")
    coll = witness_collection(curve, 1, 42)
    report = multihomogeneous_trace_test(curve, coll, seed=42)
    assert report.complete
    assert [p.slots for p in report.pairs] == [((1, 0), (0, 1))]
    print("✓ Random witness collection of the curve is complete")


def test_merge_with_empty_second_set() -> None:
    """No second-factor points: the merge carries exactly the |W(1,0)| points"""
    curve = load("curve12.sys")
    wx, wy = exact_pair(curve)
    merged = merge_witness_homotopy(wx, wy.subset([]), seed=5, primed=PRIMED)
    assert merged.degree == wx.degree == 2
    g = merged_form(PRIMED)
    for p in merged.points:
        assert curve.residual(p) < 1e-10
        assert abs(g(p.coordinates)) < 1e-10
    print("✓ Merge with an empty W(0,1) keeps the 2 points of W(1,0)")


def test_surfaces_complete_and_deletions() -> None:
    """Complete collections of graphs pass; dropping any single point fails"""
    for name in ("cremona2.sys", "lineargraph2.sys", "lineargraph3.sys"):
        system = load(name)
        coll = witness_collection(system, None, 42)
        report = multihomogeneous_trace_test(system, coll, seed=42)
        assert report.complete, f"{name}: complete collection rejected"
        assert report.branch == "pairs"

        deletions = 0
        for slot, w in coll:
            for i in range(w.degree):
                keep = [j for j in range(w.degree) if j != i]
                partial = coll.with_set(slot, w.subset(keep))
                report = multihomogeneous_trace_test(system, partial, seed=42)
                assert not report.complete, f"{name}: point {i} of {slot} not missed"
                deletions += 1
        assert deletions == sum(w.degree for _, w in coll)
        print(f"✓ {name}: complete, {deletions} single deletions rejected")


def test_product_branch() -> None:
    """Two conics: only W(1,1) is nonempty, certified as a product"""
    conics = load("conic_product.sys")
    coll = witness_collection(conics, 2, 11)
    assert coll.sizes == {(0, 2): 0, (1, 1): 4, (2, 0): 0}
    report = multihomogeneous_trace_test(conics, coll, seed=11)
    assert report.branch == "product"
    assert report.product_ok
    assert len(report.projections) == 2
    assert all(p.complete for p in report.projections)
    assert report.complete

    partial = coll.with_set((1, 1), coll[(1, 1)].subset([0, 1, 2]))
    report = multihomogeneous_trace_test(conics, partial, seed=11)
    assert not report.product_ok
    assert not report.complete
    print("✓ Product branch: 4 points certified, 3 points rejected")


def test_edge_cases() -> None:
    curve = load("curve12.sys")
    wx, wy = exact_pair(curve)
    empty = WitnessCollection(curve, 1, {(1, 0): wx.subset([]), (0, 1): wy.subset([])})
    report = multihomogeneous_trace_test(curve, empty)
    assert report.branch == "empty"
    assert not report

    try:
        split_forms(wx, 1)
    except InputError:
        pass
    else:
        msg = "a set without second-factor forms has nothing to split"
        raise AssertionError(msg)

    other = parse_system(
        "hom_variable_group a0, a1;\nhom_variable_group b0, b1;\nf = a0*b0 - a1*b1;"
    )
    try:
        multihomogeneous_trace_test(other, WitnessCollection(curve, 1, {(1, 0): wx, (0, 1): wy}))
    except SchemaError:
        print("✓ Empty collection, missing forms and foreign systems handled")
        return
    msg = "collection of another system accepted"
    raise AssertionError(msg)


if __name__ == "__main__":
    print("Testing multihomogeneous trace test...\n")

    test_exact_witness_sets()
    test_merge_homotopy_exact_forms()
    test_univariate_oracle()
    test_algorithm_on_exact_collection()
    test_algorithm_on_random_collection()
    test_merge_with_empty_second_set()
    test_surfaces_complete_and_deletions()
    test_product_branch()
    test_edge_cases()

    print("\nAll multihomogeneous trace tests passed! ✓")
