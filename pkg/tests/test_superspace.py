"""Superspace calculus: generators, variations, Berezin integration."""

import pytest

from z22susy.algebra import (
    ALL_DEGREES,
    DEG_01,
    DEG_10,
    DEG_11,
    Degree,
    EVEN,
    Gaussian,
    GradedPoly,
    constant_atom,
    field_atom,
)
from z22susy.battery import algebra_relations, expected_component_variation
from z22susy.superspace import (
    D01,
    D10,
    H,
    OperatorExpr,
    Q01,
    Q10,
    SuperField,
    SuperspaceError,
    Z,
    berezin_integrate,
    check_operator_identity,
    generic_superfield,
    mul_superfields,
    supertranslate,
    susy_variation,
)

K = 4


def test_superfield_build_validates_degrees():
    phi = GradedPoly.atom(field_atom("phi", EVEN))
    SuperField.build(EVEN, K, {(0, 0, 0): phi}, True)
    with pytest.raises(SuperspaceError):
        # the (0,1,0) component of a degree-(0,0) field must be (1,0)
        SuperField.build(EVEN, K, {(0, 1, 0): phi}, True)


def test_component_degrees():
    psi = generic_superfield(DEG_10, K)
    assert psi.component_degree(0, 0, 0) == DEG_10
    assert psi.component_degree(1, 0, 0) == Degree(0, 1)
    assert psi.component_degree(0, 1, 1) == Degree(0, 1)


def test_all_operator_relations():
    for label, lhs, rhs in algebra_relations():
        res = check_operator_identity(lhs, rhs, K)
        assert res["ok"], (label, res["mismatches"][:3])


def test_operator_identity_detects_corruption():
    from z22susy.superspace import operator_bracket
    res = check_operator_identity(operator_bracket(Q10, Q10), Z.scale(2), K)
    assert not res["ok"]


def test_component_variation_law_all_degrees():
    for delta in ALL_DEGREES:
        psi = generic_superfield(delta, K)
        for charge in ("Q10", "Q01"):
            dpsi = susy_variation(psi, charge)
            for k in range(K):
                for a in (0, 1):
                    for b in (0, 1):
                        want = expected_component_variation(
                            delta, k, a, b, charge, K)
                        assert dpsi.component(k, a, b) == want, \
                            (delta, charge, k, a, b)


def test_supertranslate_time_shift():
    psi = generic_superfield(EVEN, K)
    a = constant_atom("a", EVEN)
    shifted = supertranslate(psi, a=a)
    f000 = field_atom("f000", EVEN)
    expect = GradedPoly({(a, f000.dot()): Gaussian(1)})
    assert shifted.component(0, 0, 0) == expect


def test_supertranslate_rejects_wrong_degree_parameter():
    psi = generic_superfield(EVEN, K)
    with pytest.raises(SuperspaceError):
        supertranslate(psi, a=constant_atom("a", DEG_11))


def test_berezin_picks_surviving_component():
    psi = generic_superfield(EVEN, K)
    res = berezin_integrate(psi)
    assert res.integrand == psi.component(0, 1, 1)
    assert res.obstruction == psi.component(1, 0, 0)
    assert not res.integrable  # generic superfield has nonzero f100


def test_berezin_integrable_when_z_independent():
    comps = {(0, a, b): GradedPoly.atom(
        field_atom(f"g0{a}{b}", Degree(a, b)))
        for a in (0, 1) for b in (0, 1)}
    sf = SuperField.build(EVEN, K, comps, True)
    res = berezin_integrate(sf)
    assert res.integrable and res.warning is None


def test_mul_superfields_koszul_sign():
    # (theta10 psi) * (theta10-free factor): signs from moving coordinates
    psi = field_atom("psi", DEG_10)
    chi = field_atom("chi", DEG_10)
    sf1 = SuperField.build(EVEN, K, {(0, 1, 0): GradedPoly.atom(psi)}, True)
    sf2 = SuperField.build(DEG_10, K, {(0, 0, 0): GradedPoly.atom(chi)}, True)
    prod = mul_superfields(sf1, sf2)
    # theta10 passes chi? no: chi sits right of psi; prefix of factor 2 is
    # empty, so the component is just psi*chi
    assert prod.component(0, 1, 0) == GradedPoly({(psi, chi): Gaussian(1)})
    # reversed order: theta10 prefix of factor 1... factor 2's prefix
    # theta10 must pass the degree-(1,0) component chi: sign -1
    prod2 = mul_superfields(sf2, sf1)
    assert prod2.component(0, 1, 0) == GradedPoly({(chi, psi): Gaussian(-1)})


def test_mul_superfields_truncation_marks_inexact():
    f = GradedPoly.atom(field_atom("g100", EVEN))
    sf = SuperField.build(DEG_11, 1, {(1, 0, 0): f}, True)
    prod = mul_superfields(sf, sf)
    assert not prod.exact  # z^2 overflowed the truncation
    # overlapping thetas vanish exactly and do not spoil exactness
    g = GradedPoly.atom(field_atom("g010", DEG_01))
    sf2 = SuperField.build(DEG_11, 1, {(0, 1, 0): g}, True)
    assert mul_superfields(sf2, sf2).exact


def test_operator_expr_degree_and_composition():
    assert (D10 @ D01).degree() == DEG_11
    assert (Q10 + D10).degree() == DEG_10
    assert (Q10 + H).degree() is None
    with pytest.raises(SuperspaceError):
        (Q10 + H).apply(generic_superfield(EVEN, K))


def test_inhomogeneous_component_rejected_at_build():
    phi = field_atom("phi", EVEN)
    psi = field_atom("psi", DEG_10)
    mixed = GradedPoly.atom(phi) + GradedPoly.atom(psi)
    with pytest.raises(SuperspaceError):
        SuperField.build(EVEN, K, {(0, 0, 0): mixed}, True)
    with pytest.raises(SuperspaceError):
        susy_variation(generic_superfield(EVEN, K), "Q99")
