"""Representation verification: induced modules, the two-parameter
family, quotients, dressing, and (ir)reducibility."""

import sympy as sp
import pytest

from z22susy import representations as R


def _same(m1, m2):
    return sp.expand(m1 - m2) == sp.zeros(*m2.shape)


def test_case_i_and_ii_close():
    for rep in (R.build_case_i(), R.build_case_ii()):
        rpt = R.check_algebra(rep)
        assert rpt["ok"] and rpt["blocks_ok"], rpt
    z = R.build_case_ii().gens["Z"]
    assert _same(z * z, R.E ** 2 * sp.eye(4))


def test_casimir_values():
    rpt = R.check_algebra(R.build_case_ii())
    assert rpt["casimirs"]["H^2"] == {"scalar": True, "value": "E**2"}
    assert rpt["casimirs"]["Z^2"] == {"scalar": True, "value": "E**2"}
    rpt0 = R.check_algebra(R.build_case_i())
    assert rpt0["casimirs"]["Z^2"]["value"] == "0"


def test_induced_four_dim_equals_case_i():
    i4 = R.induce_from_nu_e()
    assert R.check_algebra(i4)["ok"]
    for g in ("H", "Z", "Q10", "Q01"):
        assert _same(i4.gens[g], R.build_case_i().gens[g]), g


def test_induced_eight_dim_closes_without_ideal():
    i8 = R.induce_from_nu_e_lambda()
    assert not i8.ideal
    rpt = R.check_algebra(i8)
    assert rpt["ok"] and rpt["blocks_ok"]
    assert rpt["casimirs"]["Z^2"] == {"scalar": True, "value": "lam"}


def test_two_param_requires_relation_ideal():
    bare = R.check_algebra(R.build_two_param(ideal=False))
    assert not bare["ok"]
    failing = [c["relation"] for c in bare["relations"] if not c["ok"]]
    assert failing == ["[Q01,Q10]=2iZ"]
    assert R.check_algebra(R.build_two_param())["ok"]


def test_two_param_specialization_is_case_ii():
    spec = R.build_two_param_specialized()
    assert R.check_algebra(spec)["ok"]
    for g in ("H", "Z", "Q10", "Q01"):
        assert _same(spec.gens[g], R.build_case_ii().gens[g]), g


def test_two_param_numeric_instance():
    num = R.build_two_param(ideal=False).with_subs(
        {R.E: 5, R.lam: 9, R.c: sp.Rational(12, 5) - sp.Rational(9, 5) * sp.I})
    rpt = R.check_algebra(num)
    assert rpt["ok"]
    assert rpt["casimirs"]["H^2"]["value"] == "25"
    assert rpt["casimirs"]["Z^2"]["value"] == "9"


def test_quotient_matches_two_param():
    assert R.check_algebra(R.quotient_four_dim())["ok"]
    assert R.two_param_matches_quotient()


def test_eight_dim_reducibility_witness():
    wit = R.reducibility_witness_8dim()
    assert wit["reducible"]
    assert wit["restriction_matches_two_param"]


def test_four_dim_reps_irreducible():
    for rep in (R.build_case_i(), R.build_case_ii(), R.build_two_param()):
        res = R.irreducible(rep)
        assert res["irreducible"] and res["guard_agrees"], res


def test_irreducible_detects_invariant_lines():
    # a decomposable direct sum 2+2 inside the subset search
    gens = {g: sp.diag(m[:2, :2], m[:2, :2]) * 0 for g, m in
            R.build_case_i().gens.items()}
    import z22susy.representations as reps
    rep = R.RepSpec("trivial", 4, R.BASIS_4,
                    {"H": R.E * sp.eye(4), "Z": sp.zeros(4, 4),
                     "Q10": sp.zeros(4, 4), "Q01": sp.zeros(4, 4)})
    res = R.irreducible(rep)
    assert not res["irreducible"]


def test_dressing_matches_printed_matrices():
    base = R.build_case_i()
    for which, U in ((1, R.U1), (2, R.U2), (3, R.U3)):
        dressed = R.dress(base, U)
        assert R.check_algebra(dressed)["ok"]
        want = R.dressed_expected(which)
        for g in ("H", "Z", "Q10", "Q01"):
            assert _same(dressed.gens[g], want[g]), (which, g)


def test_dressing_rejects_non_polynomial_conjugation():
    with pytest.raises(R.DressingError):
        R.dress(R.build_case_i(), sp.diag(1, R.E, 1, 1))


def test_reduce_mod_quadratic_relation():
    expr = (R.E * R.c + sp.I * R.lam) ** 2 - R.lam * (R.E ** 2 - R.lam)
    assert R.is_zero_mod(expr, [(R.REL_C, R.c)])
    assert R.is_zero_mod(R.mu ** 2 - R.lam * (R.E ** 2 - R.lam),
                         [(R.REL_MU, R.mu)])
    assert not R.is_zero_mod(R.mu ** 2, [(R.REL_MU, R.mu)])
