"""Constraint propagation and multiplet matrix extraction."""

import sympy as sp
import pytest

from z22susy.algebra import Degree, EVEN, Gaussian
from z22susy.multiplets import (
    ConstraintError,
    close_constraint,
    f011_expected_form,
    impose_f011_constraint,
    impose_z_constraint,
    _Closure_index,
)
from z22susy.representations import build_case_i, build_case_ii, dressed_expected
from z22susy.superspace import generic_superfield

E = sp.Symbol("E")
K = 4


def _zeros(m):
    return sp.expand(m) == sp.zeros(4, 4)


def test_z_constraint_kills_higher_orders():
    sf, mult = impose_z_constraint(generic_superfield(EVEN, K))
    assert sf.exact
    assert all(k == 0 for (k, _, _), _ in sf.comps)
    assert len(sf.comps) == 4


def test_z_constraint_matrices_match_lambda_zero_irrep():
    _, mult = impose_z_constraint(generic_superfield(EVEN, K))
    want = build_case_i().gens
    for g in ("H", "Z", "Q10", "Q01"):
        assert _zeros(mult.matrices[g] - want[g]), g


@pytest.mark.parametrize("delta,which", [
    (Degree(1, 1), 1), (Degree(1, 0), 2), (Degree(0, 1), 3)])
def test_z_constraint_nontrivial_degrees_match_dressed_matrices(delta, which):
    _, mult = impose_z_constraint(generic_superfield(delta, K))
    want = dressed_expected(which)
    for g in ("Q10", "Q01", "Z", "H"):
        assert _zeros(mult.matrices[g] - want[g]), (delta, g)


def test_f011_constraint_closed_forms():
    # spot-check the factorial coefficients of the generated series
    assert f011_expected_form(2, 0, 0) == ((0, 0, 0), 2, Gaussian(1, 0) / 2)
    assert f011_expected_form(3, 0, 0) == ((1, 0, 0), 2, Gaussian(1, 0) / 6)
    assert f011_expected_form(1, 1, 0) == ((0, 0, 1), 1, Gaussian(0, 1))
    assert f011_expected_form(1, 0, 1) == ((0, 1, 0), 1, Gaussian(0, -1))
    assert f011_expected_form(2, 1, 1)[2].is_zero


def test_f011_constraint_matrices_and_casimir():
    sf, mult, system = impose_f011_constraint(generic_superfield(EVEN, K))
    assert not sf.exact  # the series continues past any finite truncation
    want = build_case_ii().gens
    for g in ("H", "Z", "Q10", "Q01"):
        assert _zeros(mult.matrices[g] - want[g]), g
    Zm = mult.matrices["Z"]
    assert _zeros(Zm * Zm - E ** 2 * sp.eye(4))


def test_f011_identification_scale():
    # the degree-(1,1) multiplet slot is -i times the f100 generator
    _, mult, _ = impose_f011_constraint(generic_superfield(EVEN, K))
    slots = {slot: (atom.name, scale) for slot, atom, scale in mult.basis}
    assert slots["F"] == ("f100", Gaussian(0, -1))
    assert slots["phi"] == ("f000", Gaussian(1))


def test_single_high_order_zero_propagates_upward():
    K5 = 5
    system = close_constraint(generic_superfield(EVEN, K5), (2, 0, 0))
    vanished = {_Closure_index(a) for a in system.vanishing}
    for l in range(2, K5):
        for a in (0, 1):
            for b in (0, 1):
                assert (l, a, b) in vanished, (l, a, b)
    # components below the constraint order are untouched
    assert not any(k < 2 for (k, _, _) in vanished)


def test_truncation_too_small_rejected():
    with pytest.raises(ConstraintError):
        impose_z_constraint(generic_superfield(EVEN, 1))
