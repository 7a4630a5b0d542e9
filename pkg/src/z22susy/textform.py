"""Canonical text and JSON serialization.

Polynomial grammar: terms joined by " + "; each term is a signed
Gaussian-rational coefficient followed by atom tokens (juxtaposition for
product); atom tokens are ``name`` or ``name^(n)`` for n time
derivatives.  The zero polynomial prints as "0".

Atom degrees are not part of the text; parsing needs a resolver mapping
atom names back to atoms.  Superfield documents carry their overall
degree, which determines the component-field degrees.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Dict, Optional

import sympy as sp

from .algebra import (
    Atom,
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
from .multiplets import Multiplet, SLOT_DEGREES
from .superspace import SuperField, component_index


class ParseError(Exception):
    pass


# -- Gaussian rationals ------------------------------------------------

def format_gaussian(c: Gaussian) -> str:
    return repr(c)


_RAT = r"-?\d+(?:/\d+)?"
_PURE_RE = re.compile(rf"^({_RAT})$")
_PURE_IM = re.compile(rf"^({_RAT})i$")
_MIXED = re.compile(rf"^\(({_RAT})([+-]\d+(?:/\d+)?)i\)$")


def parse_gaussian(text: str) -> Gaussian:
    s = text.strip()
    m = _PURE_RE.match(s)
    if m:
        return Gaussian(Fraction(m.group(1)))
    m = _PURE_IM.match(s)
    if m:
        return Gaussian(0, Fraction(m.group(1)))
    m = _MIXED.match(s)
    if m:
        return Gaussian(Fraction(m.group(1)), Fraction(m.group(2)))
    raise ParseError(f"bad Gaussian rational {text!r}")


# -- atoms and polynomials --------------------------------------------

AtomResolver = Callable[[str], Atom]

_CONSTANTS = {
    "mu": DEG_11,
    "mu1": EVEN,
    "mu2": DEG_11,
    "eps10": DEG_10,
    "eps01": DEG_01,
    "a": EVEN,
    "mu_t": DEG_11,
}

_ATOM_TOKEN = re.compile(r"^(\w+?)(?:\^\((\d+)\))?$")


def default_resolver(delta: Optional[Degree] = None,
                     stem: str = "f") -> AtomResolver:
    """Resolve slot names, known graded constants, and stem-indexed
    component names (the latter need the superfield degree)."""

    def resolve(name: str) -> Atom:
        if name in SLOT_DEGREES:
            return field_atom(name, SLOT_DEGREES[name])
        if name in _CONSTANTS:
            return constant_atom(name, _CONSTANTS[name])
        if name.startswith(stem) and name[len(stem):].isdigit() \
                and len(name) - len(stem) == 3:
            if delta is None:
                raise ParseError(
                    f"component atom {name!r} needs a superfield degree")
            k, a, b = component_index(name, stem)
            return field_atom(name, Degree((delta.a + k + a) % 2,
                                           (delta.b + k + b) % 2))
        raise ParseError(f"unknown atom name {name!r}")

    return resolve


def format_atom(a: Atom) -> str:
    return f"{a.name}^({a.deriv_order})" if a.deriv_order else a.name


def format_poly(p: GradedPoly) -> str:
    if p.is_zero:
        return "0"
    parts = []
    for atoms, coeff in sorted(
            p.terms.items(),
            key=lambda kv: [(a.name, a.deriv_order) for a in kv[0]]):
        tokens = [format_gaussian(coeff)] + [format_atom(a) for a in atoms]
        parts.append(" ".join(tokens))
    return " + ".join(parts)


def parse_poly(text: str, resolver: AtomResolver) -> GradedPoly:
    s = text.strip()
    if s == "0":
        return GradedPoly.zero()
    out = GradedPoly.zero()
    for term in s.split(" + "):
        tokens = term.split()
        if not tokens:
            raise ParseError(f"empty term in {text!r}")
        coeff = parse_gaussian(tokens[0])
        atoms = []
        for tok in tokens[1:]:
            m = _ATOM_TOKEN.match(tok)
            if not m:
                raise ParseError(f"bad atom token {tok!r}")
            base = resolver(m.group(1))
            n = int(m.group(2)) if m.group(2) else 0
            atoms.append(base.dot(n) if n else base)
        out = out + GradedPoly({tuple(atoms): coeff})
    return out


# -- superfields ------------------------------------------------------

def superfield_to_json(sf: SuperField) -> dict:
    return {
        "delta": [sf.delta.a, sf.delta.b],
        "truncation": sf.truncation,
        "exact": sf.exact,
        "components": [
            {"k": k, "alpha": a, "beta": b, "poly": format_poly(p)}
            for (k, a, b), p in sf.comps
        ],
    }


def superfield_from_json(doc: dict,
                         resolver: Optional[AtomResolver] = None) -> SuperField:
    delta = Degree(*doc["delta"])
    resolver = resolver or default_resolver(delta)
    comps = {}
    for entry in doc["components"]:
        key = (entry["k"], entry["alpha"], entry["beta"])
        comps[key] = parse_poly(entry["poly"], resolver)
    return SuperField.build(delta, doc["truncation"], comps,
                            doc.get("exact", True))


# -- multiplets and representation specs ------------------------------

def _matrix_to_json(m: sp.Matrix):
    return [[str(m[i, j]) for j in range(m.cols)] for i in range(m.rows)]


# sympify with no symbol table would read "E" as Euler's number
_SYMBOLS = {name: sp.Symbol(name)
            for name in ("E", "lam", "c", "mu", "alpha", "beta")}


def _sympify(text: str) -> sp.Expr:
    return sp.sympify(text, locals=dict(_SYMBOLS))


def _matrix_from_json(rows) -> sp.Matrix:
    return sp.Matrix([[_sympify(x) for x in row] for row in rows])


def multiplet_to_json(mult: Multiplet) -> dict:
    return {
        "basis": [
            {"slot": slot, "name": atom.name,
             "degree": [atom.degree.a, atom.degree.b],
             "scale": format_gaussian(scale)}
            for slot, atom, scale in mult.basis
        ],
        "matrices": {g: _matrix_to_json(m) for g, m in mult.matrices.items()},
    }


def multiplet_from_json(doc: dict) -> Multiplet:
    basis = tuple(
        (e["slot"], field_atom(e["name"], Degree(*e["degree"])),
         parse_gaussian(e["scale"]))
        for e in doc["basis"])
    matrices = {g: _matrix_from_json(rows)
                for g, rows in doc["matrices"].items()}
    return Multiplet(basis, matrices)


def repspec_to_json(rep) -> dict:
    return {
        "name": rep.name,
        "dim": rep.dim,
        "basis_degrees": [[d.a, d.b] for d in rep.basis_degrees],
        "gens": {g: _matrix_to_json(m) for g, m in rep.gens.items()},
        "ideal": [{"relation": str(rel), "variable": str(var)}
                  for rel, var in rep.ideal],
    }


def repspec_from_json(doc: dict):
    from .representations import RepSpec
    return RepSpec(
        doc["name"],
        doc["dim"],
        tuple(Degree(*d) for d in doc["basis_degrees"]),
        {g: _matrix_from_json(rows) for g, rows in doc["gens"].items()},
        tuple((_sympify(e["relation"]), sp.Symbol(e["variable"]))
              for e in doc["ideal"]),
    )


# -- certificates -----------------------------------------------------

def certificate_to_json(cert) -> dict:
    return {
        "charge": cert.charge,
        "boundary": None if cert.boundary is None else format_poly(cert.boundary),
        "residue": None if cert.residue is None else format_poly(cert.residue),
    }
