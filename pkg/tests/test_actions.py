"""Action construction, Berezin reduction, and invariance certificates."""

import pytest

from z22susy import actions as A
from z22susy.algebra import DEG_11, Degree, EVEN, Gaussian, GradedPoly, constant_atom
from z22susy.battery import expected_lagrangians
from z22susy.superspace import (
    SuperField,
    strip_parameter,
    susy_variation,
    variation_parameter,
)

i = Gaussian(0, 1)


def _slot(name, n=0):
    return A.slot_atom(name, n)


@pytest.mark.parametrize("name", ["case-i-kinetic", "b11", "b10", "b01",
                                  "case-ii-kinetic"])
def test_reductions_match_expected_lagrangians(name):
    lag, _ = A.named_action(name)
    assert lag.poly == expected_lagrangians()[name]


@pytest.mark.parametrize("name", ["case-i-kinetic", "case-i-superpotential",
                                  "b11", "b10", "b01", "case-ii-kinetic"])
def test_invariance_certificates(name):
    lag, mats = A.named_action(name)
    certs = A.check_invariance(lag, A.matrix_multiplet(mats))
    assert {c.charge for c in certs} == {"Q10", "Q01"}
    for c in certs:
        assert c.ok, (name, c.charge, c.residue)
        # soundness: d(B)/dt reproduces the variation exactly is enforced
        # inside the solver; the boundary must be nonzero here
        assert not c.boundary.is_zero


def test_case_ii_attempt_not_integrable():
    with pytest.raises(A.NonIntegrableError) as exc:
        A.named_action("case-ii-attempt")
    obstruction = exc.value.obstruction
    psi, xi = _slot("psi"), _slot("xi")
    assert obstruction.terms[(psi, psi.dot())] == Gaussian(0, -1)
    assert obstruction.terms[(xi, xi.dot())] == Gaussian(0, 1)


def test_non_invariant_lagrangian_refuted():
    phi = _slot("phi")
    bad = A.Lagrangian.build(GradedPoly({(phi.dot(), phi.dot()): Gaussian(1)}))
    _, mats = A.named_action("case-i-kinetic")
    certs = A.check_invariance(bad, A.matrix_multiplet(mats))
    for c in certs:
        assert not c.ok
        assert c.residue is not None and not c.residue.is_zero


def test_paper_sign_variant_is_not_invariant():
    # the +i fermion-bilinear variant of the case-i kinetic term fails
    phi, F, psi, xi = (_slot(s) for s in ("phi", "F", "psi", "xi"))
    variant = A.Lagrangian.build(GradedPoly({
        (phi.dot(), phi.dot()): Gaussian(1), (F, F): Gaussian(1),
        (psi, psi.dot()): i, (xi, xi.dot()): i}))
    _, mats = A.named_action("case-i-kinetic")
    certs = A.check_invariance(variant, A.matrix_multiplet(mats))
    assert not any(c.ok for c in certs)


def test_lagrangian_must_be_degree_neutral():
    psi = _slot("psi")
    with pytest.raises(A.ActionError):
        A.Lagrangian.build(GradedPoly.atom(psi))


def test_superpotential_homogeneity_enforced():
    psi00 = A.multiplet_superfield(EVEN, 4)
    good = A.superpotential(psi00, [2, 3], A.MU_COUPLING)
    assert good.delta == DEG_11
    with pytest.raises(A.ActionError):
        A.superpotential(psi00, [2], constant_atom("mu1", EVEN))
    psi11 = A.multiplet_superfield(DEG_11, 4)
    # odd polynomial needs the even coupling, even polynomial the odd one
    assert A.superpotential(psi11, [1, 3], A.MU1_COUPLING).delta == DEG_11
    assert A.superpotential(psi11, [2], A.MU2_COUPLING).delta == DEG_11
    with pytest.raises(A.ActionError):
        A.superpotential(psi11, [1, 2], A.MU1_COUPLING)


def test_reduce_action_raises_on_obstruction():
    sf = A.case_ii_superfield(4)
    integrand = A.kinetic_integrand(sf, "D10*D01")
    with pytest.raises(A.NonIntegrableError):
        A.reduce_action(integrand)


def test_variation_commutes_with_reduction():
    X = A.kinetic_integrand(A.multiplet_superfield(EVEN, 4), "D10*D01")
    lag = A.reduce_action(X, sign=1)
    mult = A.matrix_multiplet(A.named_action("case-i-kinetic")[1])
    for charge in ("Q10", "Q01"):
        superspace_side = susy_variation(X, charge).component(0, 1, 1)
        dL = A.vary_poly(lag.poly, A.variation_map(mult, charge))
        carrier = SuperField.build(dL.homogeneous_degree(), 1,
                                   {(0, 0, 0): dL}, True)
        stripped = strip_parameter(
            carrier, variation_parameter(charge)).component(0, 0, 0)
        assert stripped == superspace_side, charge


def test_solver_boundary_is_sound():
    lag, mats = A.named_action("b10")
    mult = A.matrix_multiplet(mats)
    for charge in ("Q10", "Q01"):
        dL = A.vary_poly(lag.poly, A.variation_map(mult, charge))
        boundary, residue = A.solve_total_derivative(dL)
        assert residue.is_zero
        assert boundary.time_derivative() == dL


def test_kinetic_template_validation():
    sf = A.multiplet_superfield(EVEN, 4)
    with pytest.raises(A.ActionError):
        A.kinetic_integrand(sf, "bogus")
    with pytest.raises(A.ActionError):
        A.named_action("unknown-action")
