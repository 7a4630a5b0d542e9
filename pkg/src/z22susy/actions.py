"""Superspace Lagrangians, Berezin reduction, and invariance certificates.

Actions are built as superfield integrands whose component fields carry
the multiplet slot names (phi, F, psi, xi), reduced by Berezin
integration to a component Lagrangian, and certified invariant by
exhibiting an explicit boundary polynomial B with dB/dt equal to the
susy variation of the Lagrangian.  Invariance failure produces the
irreducible residue instead of an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy as sp

from .algebra import (
    Atom,
    DEG_11,
    Degree,
    EVEN,
    Gaussian,
    GradedPoly,
    constant_atom,
    field_atom,
    normalize,
)
from .multiplets import (
    Multiplet,
    SLOT_DEGREES,
    SLOT_ORDER,
    f011_expected_form,
    gaussian_to_sympy,
    identification_slots,
    sympy_to_gaussian,
)
from .superspace import (
    D01,
    D10,
    H,
    SuperField,
    SuperspaceError,
    berezin_integrate,
    left_multiply_constant,
    mul_superfields,
    variation_parameter,
)


class ActionError(Exception):
    pass


class NonIntegrableError(ActionError):
    """Raised when a Berezin reduction is attempted on an integrand whose
    z F_100 obstruction component is nonzero."""

    def __init__(self, obstruction: GradedPoly):
        super().__init__(f"integrand is not integrable; obstruction {obstruction!r}")
        self.obstruction = obstruction


@dataclass(frozen=True)
class Lagrangian:
    """A component Lagrangian: a degree-(0,0) homogeneous polynomial in
    the multiplet fields, their time derivatives, and graded couplings."""

    poly: GradedPoly

    @staticmethod
    def build(poly: GradedPoly) -> "Lagrangian":
        if poly.homogeneous_degree() != EVEN:
            raise ActionError(
                f"Lagrangian must be homogeneous of degree (0,0): {poly!r}")
        return Lagrangian(poly)


@dataclass(frozen=True)
class TotalDerivativeCertificate:
    """For one supercharge: either a boundary polynomial B with
    d(B)/dt = delta L exactly, or the unresolvable residue."""

    charge: str
    boundary: Optional[GradedPoly]
    residue: Optional[GradedPoly]

    @property
    def ok(self) -> bool:
        return self.boundary is not None and (
            self.residue is None or self.residue.is_zero)


# -- superfields in slot-named component fields -----------------------

def slot_atom(slot: str, deriv_order: int = 0) -> Atom:
    return field_atom(slot, SLOT_DEGREES[slot], deriv_order)


def multiplet_superfield(delta: Degree, truncation: int) -> SuperField:
    """The z-independent (z-constrained) superfield of overall degree
    delta whose four components are named by their multiplet slots."""
    comps = {}
    for slot, (a, b) in identification_slots(delta).items():
        comps[(0, a, b)] = GradedPoly.atom(slot_atom(slot))
    return SuperField.build(delta, truncation, comps, exact=True)


# map from generating-component key to (slot, scale): component = scale * slot
_CASE_II_GENERATORS = {
    (0, 0, 0): ("phi", Gaussian(1)),
    (0, 1, 0): ("psi", Gaussian(1)),
    (0, 0, 1): ("xi", Gaussian(1)),
    (1, 0, 0): ("F", Gaussian(0, 1)),
}


def case_ii_superfield(truncation: int) -> SuperField:
    """The degree-(0,0) superfield solving the f011-constraint, written in
    slot names: all components are factorial-coefficient time derivatives
    of (phi, i F, psi, xi).  Inexact: the series continues past the
    truncation order."""
    comps = {}
    for k in range(truncation + 1):
        for a in (0, 1):
            for b in (0, 1):
                gk, extra, coeff = f011_expected_form(k, a, b)
                if (k, a, b) in _CASE_II_GENERATORS:
                    gk, extra, coeff = (k, a, b), 0, Gaussian(1)
                if coeff.is_zero:
                    continue
                slot, scale = _CASE_II_GENERATORS[gk]
                comps[(k, a, b)] = GradedPoly.atom(
                    slot_atom(slot, extra), coeff * scale)
    return SuperField.build(EVEN, truncation, comps, exact=False)


# -- integrand construction -------------------------------------------

KINETIC_TEMPLATES = ("D10*D01", "D10D01*H")


def kinetic_integrand(sf: SuperField, template: str = "D10*D01") -> SuperField:
    """The standard kinetic integrands: (D10 Psi)(D01 Psi), or the
    higher-derivative variant (D10 D01 Psi)(H Psi)."""
    if template == "D10*D01":
        return mul_superfields(D10.apply(sf), D01.apply(sf))
    if template == "D10D01*H":
        return mul_superfields((D10 @ D01).apply(sf), H.apply(sf))
    raise ActionError(f"unknown kinetic template {template!r}; "
                      f"choose from {KINETIC_TEMPLATES}")


def superpotential(sf: SuperField, exponents: Sequence[int],
                   coupling: Atom) -> SuperField:
    """coupling * sum_n Psi^n.  The coupling degree must make the total
    integrand degree (1,1), so that the surviving Berezin component is
    degree-neutral; an inhomogeneous combination is rejected."""
    if not sf.exact:
        raise ActionError("superpotential needs a finite (z-constrained) superfield")
    if not exponents:
        raise ActionError("empty superpotential")
    target = None
    total = None
    for n in exponents:
        if n < 1:
            raise ActionError("superpotential exponents must be positive")
        power = sf
        for _ in range(n - 1):
            power = mul_superfields(power, sf)
        if target is None:
            target = power.delta
        elif power.delta != target:
            raise ActionError(
                "superpotential terms have mismatched degrees "
                f"({power.delta} vs {target}); result would be inhomogeneous")
        total = power if total is None else total + power
    needed = Degree((1 + target.a) % 2, (1 + target.b) % 2)
    if coupling.degree != needed:
        raise ActionError(
            f"coupling degree {coupling.degree} does not neutralize the "
            f"integrand; degree {needed} required")
    return left_multiply_constant(coupling, total)


def reduce_action(integrand: SuperField, sign: int = 1,
                  extras: Iterable[SuperField] = ()) -> Lagrangian:
    """Berezin-reduce sign * (integrand + extras) to a component
    Lagrangian.  A nonzero z F_100 component aborts the reduction."""
    total = integrand
    for extra in extras:
        total = total + extra
    result = berezin_integrate(total)
    if not result.integrable:
        raise NonIntegrableError(result.obstruction)
    return Lagrangian.build(result.integrand.scale(sign))


# -- susy variation of a component Lagrangian -------------------------

def matrix_multiplet(matrices: Dict[str, sp.Matrix]) -> Multiplet:
    """Wrap 4x4 generator matrices over the E-ring as a multiplet acting
    on the unit-scale slot atoms (phi, F, psi, xi)."""
    basis = tuple((slot, slot_atom(slot), Gaussian(1)) for slot in SLOT_ORDER)
    return Multiplet(basis, dict(matrices))


def _entry_to_poly(entry, atom: Atom, scale: Gaussian) -> GradedPoly:
    """Translate a matrix entry p(E) acting on scale*atom into a
    polynomial, with E = i d/dt so E^n -> i^n (d/dt)^n."""
    out = GradedPoly.zero()
    E = sp.Symbol("E")
    p = sp.Poly(sp.expand(entry), E)
    for (n,), c in p.terms():
        i_pow = Gaussian(1)
        for _ in range(n):
            i_pow = i_pow * Gaussian(0, 1)
        coeff = sympy_to_gaussian(c) * i_pow
        out = out + GradedPoly.atom(atom.dot(n) if n else atom, coeff * scale)
    return out


def variation_map(multiplet: Multiplet, charge: str) -> Dict[str, GradedPoly]:
    """delta(b_i) = (sum_j M[i, j] b_j) eps, as polynomials carrying an
    explicit eps constant; keys are the basis atom names."""
    eps = variation_parameter(charge)
    eps_poly = GradedPoly.atom(eps)
    M = multiplet.matrices[charge]
    out = {}
    for i, (slot_i, atom_i, scale_i) in enumerate(multiplet.basis):
        acc = GradedPoly.zero()
        for j, (slot_j, atom_j, scale_j) in enumerate(multiplet.basis):
            if M[i, j] == 0:
                continue
            acc = acc + _entry_to_poly(M[i, j], atom_j, scale_j / scale_i)
        out[atom_i.name] = acc * eps_poly
    return out


def vary_poly(poly: GradedPoly, varmap: Dict[str, GradedPoly]) -> GradedPoly:
    """Extend the variation to products by in-place replacement of each
    atom occurrence; the canonical normalization supplies every Koszul
    sign from moving the eps-carrying replacement into position."""
    out = GradedPoly.zero()
    for atoms, coeff in poly.terms.items():
        for i, a in enumerate(atoms):
            if a.kind != "field" or a.name not in varmap:
                continue
            rep = varmap[a.name]
            for _ in range(a.deriv_order):
                rep = rep.time_derivative()
            for ratoms, rcoeff in rep.terms.items():
                word = atoms[:i] + ratoms + atoms[i + 1:]
                out = out + GradedPoly({word: coeff * rcoeff})
    return out


# -- total-derivative certificates ------------------------------------

def _weight(atoms: Tuple[Atom, ...]) -> int:
    return sum(a.deriv_order for a in atoms)


def _name_multiset(atoms: Tuple[Atom, ...]):
    return tuple(sorted((a.name, a.kind) for a in atoms))


def _candidate_monomials(atoms: Tuple[Atom, ...], weight: int):
    """All canonical monomials on the same atom base-name multiset with
    the given total derivative weight (constants carry none)."""
    bases = [a.base() for a in atoms]
    field_pos = [i for i, a in enumerate(bases) if a.kind == "field"]
    seen = set()
    for combo in combinations_with_replacement(field_pos, weight):
        orders = [0] * len(bases)
        for i in combo:
            orders[i] += 1
        word = tuple(b.dot(n) if n else b for b, n in zip(bases, orders))
        nf = normalize(word, Gaussian(1))
        if nf is None:
            continue
        key, _ = nf
        if key not in seen:
            seen.add(key)
            yield key


def solve_total_derivative(expr: GradedPoly) -> Tuple[Optional[GradedPoly], GradedPoly]:
    """Find B with d(B)/dt = expr by an exact linear solve over the
    finite candidate basis, independently in each (atom-name multiset,
    derivative weight) sector.  Returns (B or None, residue)."""
    sectors: Dict[tuple, Dict[Tuple[Atom, ...], Gaussian]] = {}
    for atoms, coeff in expr.terms.items():
        key = (_name_multiset(atoms), _weight(atoms))
        sectors.setdefault(key, {})[atoms] = coeff
    boundary = GradedPoly.zero()
    residue = GradedPoly.zero()
    for (names, w), terms in sectors.items():
        rhs_poly = GradedPoly(dict(terms), _canonical=True)
        if w == 0:
            residue = residue + rhs_poly
            continue
        sample = next(iter(terms))
        candidates = list(_candidate_monomials(sample, w - 1))
        derivs = [GradedPoly({m: Gaussian(1)}, _canonical=True).time_derivative()
                  for m in candidates]
        rows = sorted({k for d in derivs for k in d.terms} | set(terms),
                      key=lambda word: [(a.name, a.deriv_order, a.kind)
                                        for a in word])
        index = {k: r for r, k in enumerate(rows)}
        A = sp.zeros(len(rows), len(candidates))
        for j, d in enumerate(derivs):
            for k, c in d.terms.items():
                A[index[k], j] = gaussian_to_sympy(c)
        rhs = sp.zeros(len(rows), 1)
        for k, c in terms.items():
            rhs[index[k], 0] = gaussian_to_sympy(c)
        try:
            sol = A.gauss_jordan_solve(rhs)[0]
        except ValueError:
            residue = residue + rhs_poly
            continue
        # a consistent underdetermined solve leaves free symbols; pin to 0
        if sol.free_symbols:
            sol = sol.subs({s: 0 for s in sol.free_symbols})
        if sp.expand(A * sol - rhs) != sp.zeros(len(rows), 1):
            residue = residue + rhs_poly
            continue
        piece = GradedPoly({m: sympy_to_gaussian(sol[j, 0])
                            for j, m in enumerate(candidates)}, _canonical=True)
        boundary = boundary + piece
    # soundness: the returned boundary must reproduce expr minus residue
    if boundary.time_derivative() != expr - residue:
        raise ActionError("total-derivative solver produced an unsound certificate")
    if not residue.is_zero:
        return None, residue
    return boundary, residue


def check_invariance(lagrangian: Lagrangian,
                     multiplet: Multiplet) -> List[TotalDerivativeCertificate]:
    """Certify delta L = d(B)/dt for each supercharge, or refute with the
    irreducible residue."""
    certs = []
    for charge in ("Q10", "Q01"):
        varmap = variation_map(multiplet, charge)
        dL = vary_poly(lagrangian.poly, varmap)
        boundary, residue = solve_total_derivative(dL)
        certs.append(TotalDerivativeCertificate(
            charge, boundary, None if residue.is_zero else residue))
    return certs


# -- the catalogue of actions ------------------------------------------

MU_COUPLING = constant_atom("mu", DEG_11)
MU1_COUPLING = constant_atom("mu1", EVEN)
MU2_COUPLING = constant_atom("mu2", DEG_11)


def named_action(name: str, truncation: int = 4):
    """Build one of the catalogued actions; returns (Lagrangian,
    generator matrices dict) ready for check_invariance, or raises
    NonIntegrableError for the documented non-integrable attempt."""
    from . import representations as reps
    if name == "case-i-kinetic":
        psi = multiplet_superfield(EVEN, truncation)
        lag = reduce_action(kinetic_integrand(psi, "D10*D01"), sign=-1)
        return lag, reps.build_case_i().gens
    if name == "case-i-superpotential":
        psi = multiplet_superfield(EVEN, truncation)
        pot = superpotential(psi, [2], MU_COUPLING)
        lag = reduce_action(kinetic_integrand(psi, "D10*D01"),
                            sign=-1, extras=[pot])
        return lag, reps.build_case_i().gens
    if name == "b11":
        psi = multiplet_superfield(DEG_11, truncation)
        lag = reduce_action(kinetic_integrand(psi, "D10*D01"), sign=1)
        return lag, reps.dressed_expected(1)
    if name == "b10":
        psi = multiplet_superfield(Degree(1, 0), truncation)
        lag = reduce_action(kinetic_integrand(psi, "D10D01*H"), sign=1)
        return lag, reps.dressed_expected(2)
    if name == "b01":
        psi = multiplet_superfield(Degree(0, 1), truncation)
        lag = reduce_action(kinetic_integrand(psi, "D10D01*H"), sign=1)
        return lag, reps.dressed_expected(3)
    if name == "case-ii-kinetic":
        # no superspace origin: entered directly as components
        lag = Lagrangian.build(case_ii_kinetic_poly())
        return lag, reps.build_case_ii().gens
    if name == "case-ii-attempt":
        psi = case_ii_superfield(truncation)
        reduce_action(kinetic_integrand(psi, "D10*D01"))
        raise ActionError("expected the case-ii kinetic attempt to be "
                          "non-integrable")  # pragma: no cover
    raise ActionError(f"unknown action {name!r}")


def _slot_poly(terms) -> GradedPoly:
    out = GradedPoly.zero()
    for coeff, word in terms:
        out = out + GradedPoly({tuple(word): Gaussian.coerce(coeff)})
    return out


def case_ii_kinetic_poly() -> GradedPoly:
    """-phidot^2 + F^2 + i psi psidot + i xi xidot."""
    phi, F, psi, xi = (slot_atom(s) for s in SLOT_ORDER)
    return _slot_poly([
        (-1, (phi.dot(), phi.dot())),
        (1, (F, F)),
        (Gaussian(0, 1), (psi, psi.dot())),
        (Gaussian(0, 1), (xi, xi.dot())),
    ])
