#!/usr/bin/env python3
"""Test polynomial systems: parsing, evaluation, homogenization."""

import sys
from pathlib import Path

import numpy as np

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from multitrace.calculations.homogenize import dehomogenize, embed, multihomogenize
from multitrace.calculations.parser import parse_system, render_system
from multitrace.calculations.polynomial import (
    Point,
    VarGroup,
    degree_pattern,
    homogeneous_groups,
    variety_dim,
)
from multitrace.common.errors import InputError, ParseError

FIXTURES = project_root / "fixtures"


def load(name: str):
    return parse_system((FIXTURES / name).read_text())


def test_parse_folium() -> None:
    """Folium: one affine group, one cubic with three terms"""
    system = load("folium.sys")
    assert system.variables == ("x", "y")
    assert len(system.groups) == 1
    assert not system.groups[0].homogeneous
    assert len(system.polynomials[0]) == 3
    assert system.total_degrees() == [3]
    assert variety_dim(system) == 1

    value = system.evaluate(np.array([1.5, 1.5], dtype=np.complex128))
    assert abs(value[0] - 0.0) < 1e-12, "(3/2, 3/2) lies on the folium"
    print(f"✓ Folium parsed: {len(system.polynomials[0])} terms, dim {variety_dim(system)}")


def test_parse_rationals_and_imaginary_unit() -> None:
    """Rational literals, constant division and i are exact"""
    system = parse_system("variable_group x;\nf = (7/2)*x - 3/4 + 2*i*x^2;")
    z = np.array([2.0 + 0j])
    expected = 3.5 * 2 - 0.75 + 2j * 4
    assert abs(system.evaluate(z)[0] - expected) < 1e-12
    print("✓ Rational and imaginary coefficients parsed")


def test_group_kind_detection() -> None:
    """variable_group is homogeneous iff every polynomial is"""
    curve = load("curve12.sys")
    assert homogeneous_groups(curve) == (True, True)
    assert degree_pattern(curve).tolist() == [[1, 2]]
    assert variety_dim(curve) == 1

    auto = parse_system("variable_group x0, x1;\nvariable_group y;\nf = x0*y - x1;")
    assert auto.groups[0].homogeneous
    assert not auto.groups[1].homogeneous
    print("✓ Group kinds detected")


def test_declared_dimension() -> None:
    """dimension statement overrides the complete-intersection count"""
    cremona = load("cremona2.sys")
    assert cremona.n_polys == 3
    assert variety_dim(cremona) == 2
    print("✓ Declared dimension honoured")


def test_parse_errors_carry_position() -> None:
    """Errors name line and column"""
    cases = {
        "variable_group x;\nf = x^ ;": 2,
        "variable_group x;\nf = x*y;": 2,
        "variable_group x, y;\nf = x/y;": 2,
        "f = 1;": 1,
        "variable_group x;\nf = x^1.5;": 2,
    }
    for source, line in cases.items():
        try:
            parse_system(source)
        except ParseError as e:
            assert e.line == line, f"{source!r}: line {e.line}, expected {line}"
            assert e.column >= 1
            continue
        msg = f"{source!r} should not parse"
        raise AssertionError(msg)
    assert issubclass(ParseError, InputError)
    print(f"✓ {len(cases)} malformed sources rejected with positions")


def test_render_round_trip() -> None:
    """render_system then parse_system gives the same polynomials"""
    rng = np.random.default_rng(7)
    for name in ("folium_transformed.sys", "lineargraph2.sys", "p4p4.sys"):
        system = load(name)
        again = parse_system(render_system(system))
        assert again.variables == system.variables
        assert [g.homogeneous for g in again.groups] == [g.homogeneous for g in system.groups]
        assert again.declared_dim == system.declared_dim
        z = rng.normal(size=system.n_vars) + 1j * rng.normal(size=system.n_vars)
        assert np.allclose(again.evaluate(z), system.evaluate(z), rtol=0, atol=1e-12)
    print("✓ render/parse round trip preserves systems")


def test_jacobian_matches_finite_differences() -> None:
    """Jacobian vs central differences"""
    rng = np.random.default_rng(3)
    for name in ("folium.sys", "ellipse_folium.sys", "cremona2.sys", "p4p4.sys"):
        system = load(name)
        z = rng.normal(size=system.n_vars) + 1j * rng.normal(size=system.n_vars)
        jac = system.jacobian(z)
        h = 1e-6
        for j in range(system.n_vars):
            e = np.zeros(system.n_vars, dtype=np.complex128)
            e[j] = h
            fd = (system.evaluate(z + e) - system.evaluate(z - e)) / (2 * h)
            assert np.max(np.abs(fd - jac[:, j])) < 1e-6 * (1 + np.max(np.abs(jac))), (
                f"{name}: column {j} differs"
            )
    print("✓ Jacobians agree with finite differences")


def test_multihomogenize_and_embed() -> None:
    """Affine folium -> projective cubic; embedded points stay on it"""
    folium = load("folium.sys")
    homog = multihomogenize(folium)
    assert len(homog.variables) == 3
    assert homog.groups[0].homogeneous
    assert homog.is_homogeneous_in(0)

    point = np.array([1.5, 1.5], dtype=np.complex128)
    lifted = embed(folium, point)
    assert abs(homog.evaluate(lifted)[0]) < 1e-12
    scaled = lifted.coordinates * (2 - 1j)
    assert abs(homog.evaluate(scaled)[0]) < 1e-10
    back = dehomogenize(homog, scaled)
    assert np.allclose(back.coordinates, point)
    print("✓ Homogenization, embedding and dehomogenization agree")


def test_literal_values() -> None:
    """Values and Jacobians at hand-checked points"""
    folium = load("folium.sys")
    curve = load("curve12.sys")
    origin = np.zeros(2, dtype=np.complex128)
    assert abs(folium.evaluate(origin)[0]) == 0
    ones = np.ones(4, dtype=np.complex128)
    assert abs(curve.evaluate(ones)[0]) == 0
    assert abs(curve.evaluate(np.array([1, 2, 1, 1], dtype=np.complex128))[0] + 1) < 1e-15

    assert np.allclose(folium.jacobian(np.ones(2, dtype=np.complex128)), [[0, 0]])
    assert np.allclose(curve.jacobian(ones), [[1, -1, 2, -2]])

    system = parse_system("affine_variable_group x, y;\nf = x - y;\ng = 5;")
    jac = system.jacobian(np.array([0.3, -2.0], dtype=np.complex128))
    assert np.allclose(jac, [[1, -1], [0, 0]])
    print("✓ Literal values and Jacobians")


def test_multihomogeneous_scaling() -> None:
    """F(lambda x, mu y) = lambda^d1 mu^d2 F(x, y) with (d1, d2) the bidegree"""
    rng = np.random.default_rng(11)
    for name in ("curve12.sys", "cremona2.sys"):
        system = load(name)
        pattern = degree_pattern(system)
        z = rng.normal(size=system.n_vars) + 1j * rng.normal(size=system.n_vars)
        factors = [complex(1.3, -0.4), complex(-0.7, 2.1)]
        scaled = z.copy()
        for sl, c in zip(system.group_slices, factors, strict=True):
            scaled[sl] *= c
        expected = system.evaluate(z) * np.prod(np.power(factors, pattern), axis=1)
        assert np.allclose(system.evaluate(scaled), expected, rtol=1e-12, atol=1e-12)
    print("✓ Evaluation scales with the multidegree of each polynomial")


def test_multihomogenize_two_groups() -> None:
    """x*y^2 - 1 in groups {x}, {y} becomes x1*y1^2 - x0*y0^2"""
    system = parse_system("affine_variable_group x;\naffine_variable_group y;\nf = x*y^2 - 1;")
    groups = [VarGroup("X", ("x0", "x1")), VarGroup("Y", ("y0", "y1"))]
    homog = multihomogenize(system, groups)
    assert homog.variables == ("x0", "x1", "y0", "y1")
    assert all(g.homogeneous for g in homog.groups)

    expected = parse_system(
        "hom_variable_group x0, x1;\nhom_variable_group y0, y1;\nf = x1*y1^2 - x0*y0^2;"
    )
    rng = np.random.default_rng(5)
    for _ in range(3):
        z = rng.normal(size=4) + 1j * rng.normal(size=4)
        assert np.allclose(homog.evaluate(z), expected.evaluate(z), rtol=0, atol=1e-12)

    lifted = embed(system, Point(np.array([0.5, 2.0], dtype=np.complex128)))
    assert np.allclose(lifted.coordinates, [1, 0.5, 1, 2])
    assert abs(homog.evaluate(lifted)[0]) < 1e-12
    print("✓ Two-group homogenization and embedding of a Point")


def test_malformed_declarations() -> None:
    for source in ("variable_group x, x;\nf = x;", "variable_group x;\nf = ;"):
        try:
            parse_system(source)
        except ParseError:
            continue
        msg = f"{source!r} should not parse"
        raise AssertionError(msg)
    print("✓ Duplicate variable and empty right-hand side rejected")


if __name__ == "__main__":
    print("Testing polynomial systems...\n")

    test_parse_folium()
    test_parse_rationals_and_imaginary_unit()
    test_group_kind_detection()
    test_declared_dimension()
    test_parse_errors_carry_position()
    test_render_round_trip()
    test_jacobian_matches_finite_differences()
    test_multihomogenize_and_embed()
    test_literal_values()
    test_multihomogeneous_scaling()
    test_multihomogenize_two_groups()
    test_malformed_declarations()

    print("\nAll polynomial system tests passed! ✓")
