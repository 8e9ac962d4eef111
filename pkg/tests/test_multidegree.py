#!/usr/bin/env python3
"""Test witness collections and multidegrees."""

import sys
from pathlib import Path

import pytest

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from multitrace.calculations.multidegree import MultiDegree, check_log_concavity, segre_degree
from multitrace.calculations.parser import parse_system
from multitrace.calculations.polynomial import PolySystem
from multitrace.common.errors import DimsOutOfRange, InputError
from multitrace.services.collection import multidegree, witness_collection

FIXTURES = project_root / "fixtures"


def load(name: str) -> PolySystem:
    return parse_system((FIXTURES / name).read_text())


def test_multidegree_arithmetic() -> None:
    md = MultiDegree.from_counts([1, 2, 1])
    assert md.m == 2
    assert md.d(1, 1) == 2
    assert segre_degree(md) == 6
    assert check_log_concavity(md)
    assert md.as_dict() == {"0,2": 1, "1,1": 2, "2,0": 1}

    assert not check_log_concavity(MultiDegree(2, (1, 1, 2)))
    assert check_log_concavity(MultiDegree(1, (1, 2)))
    assert segre_degree(MultiDegree(3, (0, 12, 6, 3))) == 57

    invalid = [
        lambda: MultiDegree(2, (1, 2)),
        lambda: MultiDegree(1, (1, -1)),
        lambda: md.d(1, 2),
    ]
    for bad in invalid:
        try:
            bad()
        except InputError:
            continue
        msg = "invalid multidegree accepted"
        raise AssertionError(msg)
    print("✓ Multidegree arithmetic, Segre degree, log-concavity")


def test_curve12_collection() -> None:
    """One form on the first factor cuts 2 points, one on the second 1"""
    curve = load("curve12.sys")
    coll = witness_collection(curve, 1, 42)
    assert coll.sizes == {(0, 1): 1, (1, 0): 2}
    assert coll.total_points == 3
    md = multidegree(coll)
    assert md.values == (1, 2)
    assert segre_degree(md) == 3
    print(f"✓ curve12 collection {coll.sizes}")


def test_collection_shares_chart_and_forms() -> None:
    """Slots are nested: slot (m1, m2) uses the first m1 / m2 master forms"""
    cremona = load("cremona2.sys")
    coll = witness_collection(cremona, None, 5)
    charts = coll.charts
    for _, w in coll:
        assert all(a is b for a, b in zip(w.slice.charts, charts, strict=True))
    first = coll[(1, 1)].slice.group_forms(0)[0]
    assert coll[(2, 0)].slice.group_forms(0)[0].same_as(first)
    print("✓ Collection slices share one chart and nested forms")


def test_graph_multidegrees() -> None:
    """Cremona graph (1,2,1); graphs of linear isomorphisms are all ones"""
    cases = {
        "cremona2.sys": ((1, 2, 1), 6),
        "lineargraph2.sys": ((1, 1, 1), 4),
        "lineargraph3.sys": ((1, 1, 1, 1), 8),
    }
    for name, (values, segre) in cases.items():
        md = multidegree(witness_collection(load(name), None, 42))
        assert md.values == values, f"{name}: {md.values}"
        assert segre_degree(md) == segre
        assert check_log_concavity(md)
        print(f"✓ {name}: multidegree {md.values}, Segre degree {segre}")


def test_collection_validation() -> None:
    folium = load("folium.sys")
    try:
        witness_collection(folium, 1, 0)
    except InputError:
        pass
    else:
        msg = "one-group systems have no witness collection"
        raise AssertionError(msg)
    try:
        witness_collection(load("curve12.sys"), 2, 0)
    except DimsOutOfRange:
        print("✓ Collection input validation")
        return
    msg = "wrong collection dimension accepted"
    raise AssertionError(msg)


@pytest.mark.slow
def test_p4p4_multidegree() -> None:
    """Threefold in P4 x P4 cut by a cubic and the minors of [y, grad f]"""
    md = multidegree(witness_collection(load("p4p4.sys"), None, 42))
    assert md.values == (0, 12, 6, 3)
    assert segre_degree(md) == 57
    print("✓ P4 x P4 multidegree (0, 12, 6, 3)")


if __name__ == "__main__":
    print("Testing multidegrees...\n")

    test_multidegree_arithmetic()
    test_curve12_collection()
    test_collection_shares_chart_and_forms()
    test_graph_multidegrees()
    test_collection_validation()

    print("\nAll multidegree tests passed! ✓")
