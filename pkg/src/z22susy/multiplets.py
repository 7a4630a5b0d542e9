"""Constraint propagation on superfields and multiplet extraction.

Imposing a single component constraint and closing it under both susy
variations either kills every higher z-order component (the z-constraint)
or expresses them in closed form through four generating fields (the
f011-constraint).  The closure is a worklist over linear component
equations, exactly the hand calculation done in the source analysis.

Extracted transformation matrices live over the commutative ring of
polynomials in the formal symbol E = i d/dt, represented as sympy
expressions in the symbol ``E``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import sympy as sp

from .algebra import Atom, Degree, EVEN, Gaussian, GradedPoly, field_atom
from .superspace import (
    CompKey,
    SuperField,
    SuperspaceError,
    component_atom_name,
    generic_superfield,
    susy_variation,
)

E = sp.Symbol("E")


class ConstraintError(Exception):
    pass


def gaussian_to_sympy(c: Gaussian):
    return sp.Rational(c.re.numerator, c.re.denominator) \
        + sp.I * sp.Rational(c.im.numerator, c.im.denominator)


def sympy_to_gaussian(x) -> Gaussian:
    x = sp.nsimplify(sp.expand(x))
    re, im = x.as_real_imag()
    if not (re.is_rational and im.is_rational):
        raise ValueError(f"not a Gaussian rational: {x}")
    from fractions import Fraction
    return Gaussian(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))


@dataclass(frozen=True)
class ConstraintSystem:
    vanishing: frozenset
    substitutions: Tuple[Tuple[Atom, GradedPoly], ...]

    def subst_map(self) -> Dict[Atom, GradedPoly]:
        return dict(self.substitutions)


@dataclass(frozen=True)
class Multiplet:
    """Ordered (phi, F, psi, xi) basis with 4x4 generator matrices over the
    E-ring.  basis entries are (slot, atom, scale): the multiplet field in
    a slot is scale * atom."""

    basis: Tuple[Tuple[str, Atom, Gaussian], ...]
    matrices: Dict[str, sp.Matrix]

    def matrix(self, gen: str) -> sp.Matrix:
        return self.matrices[gen]


SLOT_ORDER = ("phi", "F", "psi", "xi")
SLOT_DEGREES = {"phi": Degree(0, 0), "F": Degree(1, 1),
                "psi": Degree(1, 0), "xi": Degree(0, 1)}


def _apply_subst_poly(poly: GradedPoly, subst: Dict[Atom, GradedPoly]) -> GradedPoly:
    out = GradedPoly.zero()
    for atoms, coeff in poly.terms.items():
        acc = GradedPoly.scalar(coeff)
        for a in atoms:
            base = a.base()
            if base in subst:
                rep = subst[base]
                for _ in range(a.deriv_order):
                    rep = rep.time_derivative()
            else:
                rep = GradedPoly.atom(a)
            acc = acc * rep
        out = out + acc
    return out


class _Closure:
    """Worklist closure of a single component constraint under both susy
    variations, at truncation K.  Equations derived from the variation of a
    component at z-order K are outside the reliable window and are never
    enqueued."""

    def __init__(self, psi: SuperField, stem: str = "f"):
        self.psi = psi
        self.K = psi.truncation
        self.stem = stem
        self.subst: Dict[Atom, GradedPoly] = {}
        # per-atom variation tables, valid for components with k <= K-1
        self.var = {"Q10": {}, "Q01": {}}
        for charge in ("Q10", "Q01"):
            dpsi = susy_variation(psi, charge)
            for (k, a, b), p in psi.comps:
                atom = next(iter(p.terms))[0]
                self.var[charge][atom.base()] = (dpsi.component(k, a, b), k)

    def atom_index(self, atom: Atom) -> CompKey:
        digits = atom.name[len(self.stem):]
        return int(digits[0]), int(digits[1]), int(digits[2])

    def _variation(self, charge: str, poly: GradedPoly) -> Optional[GradedPoly]:
        """Variation of a linear equation; None when any atom sits outside
        the reliable window."""
        out = GradedPoly.zero()
        for atoms, coeff in poly.terms.items():
            if len(atoms) != 1:
                raise ConstraintError("closure handles linear equations only")
            a = atoms[0]
            entry = self.var[charge].get(a.base())
            if entry is None:
                return None
            dpoly, k = entry
            if k > self.K - 1:
                return None
            for _ in range(a.deriv_order):
                dpoly = dpoly.time_derivative()
            out = out + dpoly.scale(coeff)
        return out

    def _add_subst(self, atom: Atom, rhs: GradedPoly):
        rhs = _apply_subst_poly(rhs, self.subst)
        self.subst[atom] = rhs
        single = {atom: rhs}
        for key in list(self.subst):
            if key != atom:
                self.subst[key] = _apply_subst_poly(self.subst[key], single)

    def run(self, start_key: CompKey) -> ConstraintSystem:
        work: List[GradedPoly] = [self.psi.component(*start_key)]
        guard = 0
        while work:
            guard += 1
            if guard > 10000:
                raise ConstraintError("closure failed to terminate")
            eq = _apply_subst_poly(work.pop(0), self.subst)
            if eq.is_zero:
                continue
            target, coeff = self._solvable_atom(eq)
            rhs = (eq - GradedPoly.atom(target, coeff)).scale(Gaussian(-1) / coeff)
            self._add_subst(target, rhs)
            for charge in ("Q10", "Q01"):
                veq = self._variation(charge, GradedPoly.atom(target) - rhs)
                if veq is not None:
                    work.append(veq)
        return self._system()

    def _solvable_atom(self, eq: GradedPoly):
        best = None
        for atoms, coeff in eq.terms.items():
            a = atoms[0]
            if a.deriv_order != 0:
                continue
            key = self.atom_index(a)
            if best is None or key > best[2]:
                best = (a, coeff, key)
        if best is None:
            raise ConstraintError(f"no solvable component in equation {eq!r}")
        return best[0], best[1]

    def _system(self) -> ConstraintSystem:
        vanish = frozenset(a for a, p in self.subst.items() if p.is_zero)
        return ConstraintSystem(vanish, tuple(sorted(
            self.subst.items(), key=lambda kv: kv[0].name)))


def close_constraint(psi: SuperField, key: CompKey, stem: str = "f") -> ConstraintSystem:
    return _Closure(psi, stem).run(key)


def constrained_superfield(psi: SuperField, system: ConstraintSystem,
                           exact: bool = True) -> SuperField:
    subst = system.subst_map()
    out = {k: _apply_subst_poly(p, subst) for k, p in psi.comps}
    return SuperField.build(psi.delta, psi.truncation, out, exact)


def identification_slots(delta: Degree) -> Dict[str, Tuple[int, int]]:
    """Which k=0 component (alpha, beta) sits in each (phi, F, psi, xi)
    slot, by its intrinsic degree (delta.a + alpha, delta.b + beta)."""
    slots = {}
    for a in (0, 1):
        for b in (0, 1):
            deg = Degree((delta.a + a) % 2, (delta.b + b) % 2)
            for slot, sdeg in SLOT_DEGREES.items():
                if deg == sdeg:
                    slots[slot] = (a, b)
    return slots


def _poly_to_row(poly: GradedPoly, basis: List[Tuple[str, Atom, Gaussian]]):
    """Express a linear polynomial in basis atoms (and their derivatives)
    as a row over the E-ring, with f^(n) = (-i E)^n f."""
    row = [sp.Integer(0)] * len(basis)
    index = {atom.name: j for j, (_, atom, _) in enumerate(basis)}
    for atoms, coeff in poly.terms.items():
        if len(atoms) != 1:
            raise ConstraintError("variation escaped the linear span")
        a = atoms[0]
        if a.name not in index:
            raise ConstraintError(
                f"variation escaped the span: offending atom {a!r} in {poly!r}")
        j = index[a.name]
        row[j] += gaussian_to_sympy(coeff) * (-sp.I * E) ** a.deriv_order
    return [sp.expand(x) for x in row]


def extract_matrices(delta_rows: Dict[str, Dict[str, GradedPoly]],
                     basis: List[Tuple[str, Atom, Gaussian]]) -> Dict[str, sp.Matrix]:
    """Build Q10/Q01 matrices from per-slot variation rows, H = E*Id, and Z
    from the closure relation [Q01, Q10] = 2iZ."""
    n = len(basis)
    scales = sp.diag(*[gaussian_to_sympy(s) for _, _, s in basis])
    mats = {}
    for charge in ("Q10", "Q01"):
        m = sp.zeros(n, n)
        for i, (slot, atom, scale) in enumerate(basis):
            row = _poly_to_row(delta_rows[charge][slot], basis)
            for j in range(n):
                m[i, j] = row[j]
        mats[charge] = sp.expand(scales * m * scales.inv())
    mats["H"] = E * sp.eye(n)
    # rows encode Q(b_i) = sum_j M[i,j] b_j, so the matrix of a composition
    # A o B is M_B M_A; hence [Q01, Q10] = 2iZ reads M10 M01 - M01 M10
    mats["Z"] = sp.expand((mats["Q10"] * mats["Q01"]
                           - mats["Q01"] * mats["Q10"]) / (2 * sp.I))
    return mats


def _build_multiplet(psi: SuperField, system: ConstraintSystem,
                     scales: Dict[str, Gaussian], atoms_for_slot) -> Multiplet:
    subst = system.subst_map()
    basis = []
    for slot in SLOT_ORDER:
        atom = atoms_for_slot[slot]
        basis.append((slot, atom, scales.get(slot, Gaussian(1))))
    rows = {"Q10": {}, "Q01": {}}
    for charge in ("Q10", "Q01"):
        dpsi = susy_variation(constrained_superfield(psi, system), charge)
        for slot, atom, _ in basis:
            k, a, b = _Closure_index(atom)
            rows[charge][slot] = _apply_subst_poly(dpsi.component(k, a, b), subst)
    return Multiplet(tuple(basis), extract_matrices(rows, basis))


def _Closure_index(atom: Atom, stem: str = "f") -> CompKey:
    digits = atom.name[len(stem):]
    return int(digits[0]), int(digits[1]), int(digits[2])


def impose_z_constraint(psi: SuperField, stem: str = "f"):
    """Case (i): f100 = 0.  Closure kills every component with k >= 1; the
    remaining four k=0 fields carry the lambda = 0 irrep."""
    if psi.truncation < 2:
        raise ConstraintError("z-constraint needs truncation >= 2")
    system = close_constraint(psi, (1, 0, 0), stem)
    K = psi.truncation
    # every component the closure can reach must have been forced to zero
    for atom, rhs in system.substitutions:
        if not rhs.is_zero:
            raise ConstraintError(f"z-constraint left {atom!r} nonzero: {rhs!r}")
    derived = {_Closure_index(a, stem) for a in system.vanishing}
    for k in range(1, K):
        for a in (0, 1):
            for b in (0, 1):
                if (k, a, b) not in derived:
                    raise ConstraintError(f"component {(k, a, b)} not forced to zero")
    # top-order components beyond the derivation window vanish by the same
    # inductive step; drop them and return the finite superfield
    finite = {}
    for (k, a, b), p in psi.comps:
        if k == 0:
            finite[(k, a, b)] = p
    sf = SuperField.build(psi.delta, psi.truncation, finite, exact=True)
    slots = identification_slots(psi.delta)
    atoms_for_slot = {}
    for slot, (a, b) in slots.items():
        deg = psi.component_degree(0, a, b)
        atoms_for_slot[slot] = field_atom(component_atom_name(stem, 0, a, b), deg)
    mult = _build_multiplet(psi, system, {}, atoms_for_slot)
    return sf, mult


# closed forms of the f011-constraint: component key -> (generator key,
# extra derivatives, coefficient), generators named by their k=0/1 keys
def f011_expected_form(k: int, a: int, b: int):
    import math
    if a == 1 and b == 1:
        return (0, 1, 1), 0, Gaussian(0)  # zero (k=0 is the constraint itself)
    if a == 0 and b == 0:
        if k % 2 == 0:
            return (0, 0, 0), k, Gaussian(1) / math.factorial(k)
        return (1, 0, 0), k - 1, Gaussian(1) / math.factorial(k)
    if a == 1 and b == 0:
        if k % 2 == 0:
            return (0, 1, 0), k, Gaussian(1) / math.factorial(k)
        return (0, 0, 1), k, Gaussian(0, 1) / math.factorial(k)
    if a == 0 and b == 1:
        if k % 2 == 0:
            return (0, 0, 1), k, Gaussian(1) / math.factorial(k)
        return (0, 1, 0), k, Gaussian(0, -1) / math.factorial(k)


def impose_f011_constraint(psi: SuperField, stem: str = "f"):
    """Case (ii): f011 = 0.  Closure expresses all higher components as
    time derivatives of f000, f100, f010, f001 (finitely generated series);
    the four generators carry the lambda = E^2 irrep."""
    if psi.truncation < 2:
        raise ConstraintError("f011-constraint needs truncation >= 2")
    system = close_constraint(psi, (0, 1, 1), stem)
    K = psi.truncation
    subst = system.subst_map()
    # verify closed forms against the expected factorial coefficients for
    # every component inside the derivation window
    for k in range(0, K):
        for a in (0, 1):
            for b in (0, 1):
                if (k, a, b) in ((0, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 0)):
                    continue
                key_atoms = [at for at in subst
                             if _Closure_index(at, stem) == (k, a, b)]
                if not key_atoms:
                    raise ConstraintError(f"closure missed component {(k, a, b)}")
                got = subst[key_atoms[0]]
                form = f011_expected_form(k, a, b)
                gk, extra, coeff = form
                if coeff.is_zero:
                    expected = GradedPoly.zero()
                else:
                    deg = psi.component_degree(*gk)
                    gen = field_atom(component_atom_name(stem, *gk), deg, extra)
                    expected = GradedPoly.atom(gen, coeff)
                if got != expected:
                    raise ConstraintError(
                        f"closed form mismatch at {(k, a, b)}: {got!r} != {expected!r}")
    sf = constrained_superfield(psi, system, exact=False)
    slots = identification_slots(psi.delta)
    atoms_for_slot = {}
    scales = {}
    for slot, (a, b) in slots.items():
        if (a, b) == (1, 1):
            # the (1,1)-type generator is f100; multiplet field = -i * f100
            deg = psi.component_degree(1, 0, 0)
            atoms_for_slot[slot] = field_atom(
                component_atom_name(stem, 1, 0, 0), deg)
            scales[slot] = Gaussian(0, -1)
        else:
            deg = psi.component_degree(0, a, b)
            atoms_for_slot[slot] = field_atom(
                component_atom_name(stem, 0, a, b), deg)
    mult = _build_multiplet(psi, system, scales, atoms_for_slot)
    return sf, mult, system
