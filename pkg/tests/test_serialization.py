"""Canonical text and JSON round-trips."""

from fractions import Fraction

import pytest

from z22susy import textform as T
from z22susy.algebra import DEG_10, DEG_11, Degree, EVEN, Gaussian, GradedPoly
from z22susy.multiplets import impose_z_constraint
from z22susy.representations import build_two_param
from z22susy.superspace import generic_superfield
from z22susy.actions import check_invariance, matrix_multiplet, named_action


@pytest.mark.parametrize("c", [
    Gaussian(0), Gaussian(3), Gaussian(-7, 0), Gaussian(0, 1),
    Gaussian(0, Fraction(-3, 2)), Gaussian(Fraction(1, 2), Fraction(5, 3)),
    Gaussian(-2, -2)])
def test_gaussian_round_trip(c):
    assert T.parse_gaussian(T.format_gaussian(c)) == c


def test_gaussian_parse_rejects_garbage():
    with pytest.raises(T.ParseError):
        T.parse_gaussian("1 + i")
    with pytest.raises(T.ParseError):
        T.parse_gaussian("E**2")


def test_poly_round_trip_slots():
    resolver = T.default_resolver()
    phi = resolver("phi")
    psi = resolver("psi")
    mu = resolver("mu")
    p = GradedPoly({(phi.dot(2), psi): Gaussian(0, 1),
                    (mu, phi): Gaussian(Fraction(-1, 2))})
    text = T.format_poly(p)
    assert T.parse_poly(text, resolver) == p
    assert T.parse_poly("0", resolver).is_zero


def test_poly_parse_unknown_atom():
    with pytest.raises(T.ParseError):
        T.parse_poly("1 nonsense", T.default_resolver())
    with pytest.raises(T.ParseError):
        # component atoms need a superfield degree for their own degree
        T.parse_poly("1 f011", T.default_resolver(delta=None))


def test_superfield_round_trip():
    for delta in (EVEN, DEG_10, DEG_11):
        sf = generic_superfield(delta, 3)
        doc = T.superfield_to_json(sf)
        back = T.superfield_from_json(doc)
        assert back == sf and back.exact == sf.exact


def test_constrained_superfield_round_trip():
    sf, mult = impose_z_constraint(generic_superfield(EVEN, 4))
    back = T.superfield_from_json(T.superfield_to_json(sf))
    assert back == sf


def test_multiplet_round_trip():
    _, mult = impose_z_constraint(generic_superfield(EVEN, 4))
    back = T.multiplet_from_json(T.multiplet_to_json(mult))
    assert back.basis == mult.basis
    for g, m in mult.matrices.items():
        assert back.matrices[g] == m


def test_repspec_round_trip():
    rep = build_two_param()
    back = T.repspec_from_json(T.repspec_to_json(rep))
    assert back.name == rep.name and back.dim == rep.dim
    assert back.basis_degrees == rep.basis_degrees
    for g, m in rep.gens.items():
        assert (back.gens[g] - m).expand() == m * 0
    assert len(back.ideal) == 1
    rel, var = back.ideal[0]
    assert (rel - rep.ideal[0][0]).expand() == 0
    assert str(var) == "c"


def test_certificate_serialization():
    lag, mats = named_action("case-i-kinetic")
    certs = check_invariance(lag, matrix_multiplet(mats))
    for cert in certs:
        doc = T.certificate_to_json(cert)
        assert doc["charge"] in ("Q10", "Q01")
        assert doc["residue"] is None
        resolver = T.default_resolver()
        assert T.parse_poly(doc["boundary"], resolver) == cert.boundary
