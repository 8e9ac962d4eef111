#!/usr/bin/env python3
"""Test monodromy loops and the orbit partition."""

import sys
from pathlib import Path

import numpy as np

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from multitrace.calculations.parser import parse_system
from multitrace.calculations.polynomial import PolySystem
from multitrace.calculations.slices import random_slice_like
from multitrace.common.errors import AmbiguousMatch
from multitrace.services.monodromy import (
    Partition,
    match_points,
    monodromy_loop,
    monodromy_partition,
)
from multitrace.services.trace import merge_blocks_by_trace
from multitrace.services.witness import witness_set

FIXTURES = project_root / "fixtures"

ELLIPSE = parse_system("variable_group x, y;\ne = 8*(x + 1)^2 + 3*(2*y + x + 1)^2 - 8;")


def load(name: str) -> PolySystem:
    return parse_system((FIXTURES / name).read_text())


def test_match_points() -> None:
    """Matching recovers a known permutation and rejects coincident points"""
    rng = np.random.default_rng(0)
    origin = rng.normal(size=(5, 2)) + 1j * rng.normal(size=(5, 2))
    perm = (3, 0, 4, 1, 2)
    moved = origin[list(perm)] + 1e-9
    assert match_points(origin, moved) == perm

    clash = origin.copy()
    clash[1] = clash[0] + 1e-8
    try:
        match_points(clash, clash)
    except AmbiguousMatch:
        print("✓ Matching recovers permutations, rejects ambiguity")
        return
    msg = "coincident points should be ambiguous"
    raise AssertionError(msg)


def test_folium_loops_are_bijections() -> None:
    """Random triangle loops permute the folium witness points; some loop is nontrivial"""
    folium = load("folium.sys")
    w = witness_set(folium, (1,), 42)
    identity = tuple(range(w.degree))
    nontrivial = 0
    for seed in range(20):
        rng = np.random.default_rng(seed)
        waypoints = [random_slice_like(folium, w.slice, rng) for _ in range(2)]
        perm = monodromy_loop(w, waypoints)
        assert sorted(perm) == list(identity)
        nontrivial += perm != identity
    assert nontrivial > 0
    print(f"✓ 20 loops are bijections, {nontrivial} nontrivial")


def test_ellipse_folium_partition() -> None:
    """Monodromy never mixes components; with the trace fallback the blocks are {2, 3}"""
    system = load("ellipse_folium.sys")
    w = witness_set(system, (1,), 42)
    assert w.degree == 5
    on_ellipse = {i for i, p in enumerate(w.points) if ELLIPSE.residual(p) < 1e-6}
    assert len(on_ellipse) == 2

    partition = monodromy_partition(w, budget=30, seed=42)
    for block in partition.blocks:
        assert set(block) <= on_ellipse or not set(block) & on_ellipse, block

    merged, results = merge_blocks_by_trace(w, partition, seed=42)
    assert sorted(merged.sizes) == [2, 3]
    assert {r.subset for r in results} == set(merged.blocks)
    assert all(r.complete for r in results)
    print(f"✓ ellipse + folium: monodromy {partition.sizes}, certified {sorted(merged.sizes)}")


def test_two_lines() -> None:
    """Two generic lines in the plane: two singleton components"""
    system = load("two_lines.sys")
    w = witness_set(system, (1,), 3)
    partition = monodromy_partition(w, budget=10, seed=3)
    assert partition.sizes == [1, 1]
    merged, results = merge_blocks_by_trace(w, partition, seed=3)
    assert merged.sizes == [1, 1]
    assert len(results) == 2
    print("✓ Two lines stay apart")


def test_resume_from_partition() -> None:
    """A resumed run keeps the merges it starts from"""
    system = load("two_lines.sys")
    w = witness_set(system, (1,), 3)
    prior = Partition(((0, 1),), loops_run=4)
    resumed = monodromy_partition(w, budget=5, seed=1, initial=prior)
    assert resumed.blocks == ((0, 1),)
    assert resumed.loops_run == 4
    assert Partition.singletons(3).sizes == [1, 1, 1]
    print("✓ Partition resumes from prior merges")


if __name__ == "__main__":
    print("Testing monodromy...\n")

    test_match_points()
    test_folium_loops_are_bijections()
    test_ellipse_folium_partition()
    test_two_lines()
    test_resume_from_partition()

    print("\nAll monodromy tests passed! ✓")
