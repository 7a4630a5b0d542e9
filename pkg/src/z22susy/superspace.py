"""Superfields on the (t, z, theta10, theta01) coordinate space.

A superfield is a truncated formal series

    Psi = sum_{k<=K} sum_{alpha,beta} z^k theta10^alpha theta01^beta f_{k a b}(t)

stored as a map (k, alpha, beta) -> GradedPoly.  All derivatives act from
the left; the sign of an operator of degree d passing a graded factor is
the Koszul sign.  Correctness of the convention is pinned by the component
transformation law tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from .algebra import (
    ALL_DEGREES,
    Atom,
    DEG_01,
    DEG_10,
    DEG_11,
    Degree,
    EVEN,
    Gaussian,
    GradedPoly,
    I,
    ONE,
    field_atom,
    koszul_sign,
)

CompKey = Tuple[int, int, int]

# Degrees of coordinates and of the generators acting on superfields.
COORD_DEGREES = {"t": EVEN, "z": DEG_11, "theta10": DEG_10, "theta01": DEG_01}

GENERATOR_DEGREES = {
    "H": EVEN,
    "Z": DEG_11,
    "Q10": DEG_10,
    "Q01": DEG_01,
    "D10": DEG_10,
    "D01": DEG_01,
    "dt": EVEN,
    "dz": DEG_11,
    "dtheta10": DEG_10,
    "dtheta01": DEG_01,
    "theta10*": DEG_10,
    "theta01*": DEG_01,
    "z*": DEG_11,
}

# Generators that consume one z-order per application (via a d/dz factor).
_LOWERS_Z = {"Z", "Q10", "Q01", "D10", "D01", "dz"}
# Generators that raise z-order (may lose content at the truncation edge).
_RAISES_Z = {"z*"}


class SuperspaceError(Exception):
    pass


@dataclass(frozen=True)
class SuperField:
    delta: Degree
    truncation: int
    comps: Tuple[Tuple[CompKey, GradedPoly], ...]
    exact: bool = True

    @staticmethod
    def build(delta: Degree, truncation: int, comps: Dict[CompKey, GradedPoly],
              exact: bool = True) -> "SuperField":
        clean = {}
        for key, poly in comps.items():
            k, a, b = key
            if k < 0 or k > truncation or a not in (0, 1) or b not in (0, 1):
                raise SuperspaceError(f"bad component key {key}")
            if poly.is_zero:
                continue
            expect = Degree((delta.a + k + a) % 2, (delta.b + k + b) % 2)
            if poly.homogeneous_degree() != expect:
                raise SuperspaceError(
                    f"component {key} must be homogeneous of degree {expect}, "
                    f"got {poly!r}")
            clean[key] = poly
        items = tuple(sorted(clean.items()))
        return SuperField(delta, truncation, items, exact)

    def comp_map(self) -> Dict[CompKey, GradedPoly]:
        return dict(self.comps)

    def component(self, k: int, a: int, b: int) -> GradedPoly:
        for key, poly in self.comps:
            if key == (k, a, b):
                return poly
        return GradedPoly.zero()

    def component_degree(self, k: int, a: int, b: int) -> Degree:
        return Degree((self.delta.a + k + a) % 2, (self.delta.b + k + b) % 2)

    @property
    def is_zero(self) -> bool:
        return not self.comps

    def map_components(self, fn, exact: Optional[bool] = None) -> "SuperField":
        out = {key: fn(key, poly) for key, poly in self.comps}
        return SuperField.build(self.delta, self.truncation, out,
                                self.exact if exact is None else exact)

    def __add__(self, other: "SuperField") -> "SuperField":
        if self.delta != other.delta or self.truncation != other.truncation:
            raise SuperspaceError("superfield sum needs matching degree and truncation")
        out = self.comp_map()
        for key, poly in other.comps:
            out[key] = out.get(key, GradedPoly.zero()) + poly
        return SuperField.build(self.delta, self.truncation, out,
                                self.exact and other.exact)

    def __sub__(self, other: "SuperField") -> "SuperField":
        return self + other.scale(Gaussian(-1))

    def scale(self, c) -> "SuperField":
        return self.map_components(lambda key, p: p.scale(c))

    def __eq__(self, other):
        if not isinstance(other, SuperField):
            return NotImplemented
        return (self.delta == other.delta and self.truncation == other.truncation
                and self.comps == other.comps)

    def __hash__(self):
        return hash((self.delta, self.truncation, self.comps))


def component_atom_name(stem: str, k: int, a: int, b: int) -> str:
    return f"{stem}{k}{a}{b}"


def component_index(name: str, stem: str = "f") -> CompKey:
    """Inverse of component_atom_name for single-digit z-orders."""
    digits = name[len(stem):]
    if len(digits) != 3 or not digits.isdigit():
        raise ValueError(f"not a component atom name: {name!r}")
    return int(digits[0]), int(digits[1]), int(digits[2])


def generic_superfield(delta: Degree, truncation: int, stem: str = "f") -> SuperField:
    """A superfield with one fresh field atom per component slot.  Truncated,
    hence marked inexact."""
    if truncation < 0:
        raise SuperspaceError("truncation must be >= 0")
    comps = {}
    for k in range(truncation + 1):
        for a in (0, 1):
            for b in (0, 1):
                deg = Degree((delta.a + k + a) % 2, (delta.b + k + b) % 2)
                atom = field_atom(component_atom_name(stem, k, a, b), deg)
                comps[(k, a, b)] = GradedPoly.atom(atom)
    return SuperField.build(delta, truncation, comps, exact=False)


def coordinate_prefix_sign(d: Degree, k: int, a: int, b: int) -> int:
    """Sign for a degree-d object passing the coordinate monomial
    z^k theta10^a theta01^b from the left to the right."""
    parity = (k * (d.a + d.b) + a * d.a + b * d.b) % 2
    return -1 if parity else 1


# -- primitive coordinate operators ----------------------------------

def _d_t(sf: SuperField) -> SuperField:
    return sf.map_components(lambda key, p: p.time_derivative())


def _d_z(sf: SuperField) -> SuperField:
    comps = sf.comp_map()
    out = {}
    for (k, a, b), p in comps.items():
        if k >= 1:
            out[(k - 1, a, b)] = out.get((k - 1, a, b), GradedPoly.zero()) + p.scale(k)
    return SuperField.build(sf.delta + DEG_11, sf.truncation, out, sf.exact)


def _d_theta10(sf: SuperField) -> SuperField:
    out = {}
    for (k, a, b), p in sf.comps:
        if a == 1:
            sign = -1 if k % 2 else 1
            out[(k, 0, b)] = p.scale(sign)
    return SuperField.build(sf.delta + DEG_10, sf.truncation, out, sf.exact)


def _d_theta01(sf: SuperField) -> SuperField:
    out = {}
    for (k, a, b), p in sf.comps:
        if b == 1:
            sign = -1 if k % 2 else 1
            out[(k, a, 0)] = p.scale(sign)
    return SuperField.build(sf.delta + DEG_01, sf.truncation, out, sf.exact)


def _m_theta10(sf: SuperField) -> SuperField:
    out = {}
    for (k, a, b), p in sf.comps:
        if a == 0:
            sign = -1 if k % 2 else 1
            out[(k, 1, b)] = p.scale(sign)
    return SuperField.build(sf.delta + DEG_10, sf.truncation, out, sf.exact)


def _m_theta01(sf: SuperField) -> SuperField:
    out = {}
    for (k, a, b), p in sf.comps:
        if b == 0:
            sign = -1 if k % 2 else 1
            out[(k, a, 1)] = p.scale(sign)
    return SuperField.build(sf.delta + DEG_01, sf.truncation, out, sf.exact)


def _m_z(sf: SuperField) -> SuperField:
    out = {}
    exact = sf.exact
    for (k, a, b), p in sf.comps:
        if k + 1 > sf.truncation:
            exact = False
            continue
        out[(k + 1, a, b)] = p
    return SuperField.build(sf.delta + DEG_11, sf.truncation, out, exact)


# The d_theta derivatives change the overall degree by their own degree;
# so do the coordinate multiplications.  Compositions below keep the
# bookkeeping consistent because all summands shift by the same degree.

def apply_generator(name: str, sf: SuperField) -> SuperField:
    """Apply a single generator by its explicit coordinate action."""
    if name == "dt":
        return _d_t(sf)
    if name == "dz":
        return _d_z(sf)
    if name == "dtheta10":
        return _d_theta10(sf)
    if name == "dtheta01":
        return _d_theta01(sf)
    if name == "theta10*":
        return _m_theta10(sf)
    if name == "theta01*":
        return _m_theta01(sf)
    if name == "z*":
        return _m_z(sf)
    if name == "H":
        return _d_t(sf).scale(I)
    if name == "Z":
        return _d_z(sf).scale(I)
    if name == "Q10":
        return (_m_theta10(_d_t(sf)).scale(I) + _d_theta10(sf)
                - _m_theta01(_d_z(sf)))
    if name == "Q01":
        return (_m_theta01(_d_t(sf)).scale(I) + _d_theta01(sf)
                + _m_theta10(_d_z(sf)))
    if name == "D10":
        return (_d_theta10(sf) - _m_theta10(_d_t(sf)).scale(I)
                + _m_theta01(_d_z(sf)))
    if name == "D01":
        return (_d_theta01(sf) - _m_theta01(_d_t(sf)).scale(I)
                - _m_theta10(_d_z(sf)))
    raise SuperspaceError(f"unknown generator {name!r}")


class OperatorExpr:
    """A linear combination of generator words, applied right-to-left."""

    __slots__ = ("words",)

    def __init__(self, words):
        # words: tuple of (Gaussian coeff, tuple of generator names)
        acc = {}
        for coeff, word in words:
            coeff = Gaussian.coerce(coeff)
            acc[word] = acc.get(word, Gaussian(0)) + coeff
        self.words = tuple((c, w) for w, c in acc.items() if not c.is_zero)

    @staticmethod
    def gen(name: str) -> "OperatorExpr":
        if name not in GENERATOR_DEGREES:
            raise SuperspaceError(f"unknown generator {name!r}")
        return OperatorExpr([(ONE, (name,))])

    @staticmethod
    def zero() -> "OperatorExpr":
        return OperatorExpr([])

    @staticmethod
    def identity() -> "OperatorExpr":
        return OperatorExpr([(ONE, ())])

    def __add__(self, other):
        return OperatorExpr(self.words + other.words)

    def __sub__(self, other):
        return self + other.scale(Gaussian(-1))

    def scale(self, c) -> "OperatorExpr":
        c = Gaussian.coerce(c)
        return OperatorExpr([(coeff * c, w) for coeff, w in self.words])

    def __matmul__(self, other: "OperatorExpr") -> "OperatorExpr":
        out = []
        for c1, w1 in self.words:
            for c2, w2 in other.words:
                out.append((c1 * c2, w1 + w2))
        return OperatorExpr(out)

    def degree(self) -> Optional[Degree]:
        deg = None
        for _, word in self.words:
            d = EVEN
            for g in word:
                d = d + GENERATOR_DEGREES[g]
            if deg is None:
                deg = d
            elif d != deg:
                return None
        return deg if deg is not None else EVEN

    def z_consumption(self) -> int:
        """Worst-case number of z-orders an application can consume."""
        best = 0
        for _, word in self.words:
            best = max(best, sum(1 for g in word if g in _LOWERS_Z))
        return best

    def apply(self, sf: SuperField) -> SuperField:
        deg = self.degree()
        if deg is None:
            raise SuperspaceError("operator expression is not degree-homogeneous")
        result = SuperField.build(sf.delta + deg, sf.truncation, {}, sf.exact)
        for coeff, word in self.words:
            cur = sf
            for g in reversed(word):
                cur = apply_generator(g, cur)
            result = result + cur.scale(coeff)
        return result


def operator_bracket(x: OperatorExpr, y: OperatorExpr) -> OperatorExpr:
    dx, dy = x.degree(), y.degree()
    if dx is None or dy is None:
        raise SuperspaceError("bracket needs homogeneous operators")
    if koszul_sign(dx, dy) < 0:
        return (x @ y) + (y @ x)
    return (x @ y) - (y @ x)


H = OperatorExpr.gen("H")
Z = OperatorExpr.gen("Z")
Q10 = OperatorExpr.gen("Q10")
Q01 = OperatorExpr.gen("Q01")
D10 = OperatorExpr.gen("D10")
D01 = OperatorExpr.gen("D01")


def check_operator_identity(lhs: OperatorExpr, rhs: OperatorExpr,
                            truncation: int = 4, stem: str = "f") -> dict:
    """Verify lhs == rhs on generic superfields of all four degrees.

    Components whose z-order may have been consumed past the truncation
    are excluded from the comparison."""
    depth = max(lhs.z_consumption(), rhs.z_consumption())
    kmax = truncation - depth
    mismatches = []
    for delta in ALL_DEGREES:
        psi = generic_superfield(delta, truncation, stem)
        left = lhs.apply(psi).comp_map()
        right = rhs.apply(psi).comp_map()
        diff = dict(left)
        for key, poly in right.items():
            diff[key] = diff.get(key, GradedPoly.zero()) - poly
        for (k, a, b), poly in diff.items():
            if k <= kmax and not poly.is_zero:
                mismatches.append({"delta": (delta.a, delta.b),
                                   "component": (k, a, b),
                                   "difference": repr(poly)})
    return {"ok": not mismatches, "kmax": kmax, "mismatches": mismatches}


def left_multiply_constant(param: Atom, sf: SuperField) -> SuperField:
    """Multiply a superfield by a graded constant from the left, moving it
    through the coordinate prefix of each component."""
    ppoly = GradedPoly.atom(param)
    out = {}
    for (k, a, b), poly in sf.comps:
        sign = coordinate_prefix_sign(param.degree, k, a, b)
        out[(k, a, b)] = (ppoly * poly).scale(sign)
    return SuperField.build(sf.delta + param.degree, sf.truncation, out, sf.exact)


def strip_parameter(sf: SuperField, param: Atom) -> SuperField:
    """Remove one factor of a graded constant from every monomial, moving it
    to the right end first and recording the accumulated Koszul sign."""
    out = {}
    for (k, a, b), poly in sf.comps:
        acc = {}
        for atoms, coeff in poly.terms.items():
            positions = [i for i, at in enumerate(atoms) if at == param]
            if len(positions) != 1:
                raise SuperspaceError(
                    f"expected exactly one {param.name} factor, got {len(positions)}")
            i = positions[0]
            sign = 1
            for at in atoms[i + 1:]:
                sign *= koszul_sign(param.degree, at.degree)
            key = atoms[:i] + atoms[i + 1:]
            acc[key] = acc.get(key, Gaussian(0)) + coeff * sign
        out[(k, a, b)] = GradedPoly(acc, _canonical=True)
    return SuperField.build(sf.delta + param.degree, sf.truncation, out, sf.exact)


def variation_parameter(charge: str) -> Atom:
    from .algebra import constant_atom
    if charge == "Q10":
        return constant_atom("eps10", DEG_10)
    if charge == "Q01":
        return constant_atom("eps01", DEG_01)
    raise SuperspaceError(f"unknown supercharge {charge!r}")


def susy_variation(sf: SuperField, charge: str) -> SuperField:
    """The coefficient of eps in  delta Psi = -(eps Q) Psi.

    An explicit eps atom of the matching odd degree is adjoined, the full
    Koszul bookkeeping runs mechanically, and eps is stripped off to the
    right, so all (-1)^{k+Delta} factors of the component law emerge from
    normalization alone."""
    if any(p.homogeneous_degree() is None for _, p in sf.comps):
        raise SuperspaceError("susy variation needs homogeneous components")
    eps = variation_parameter(charge)
    qpsi = OperatorExpr.gen(charge).apply(sf)
    with_eps = left_multiply_constant(eps, qpsi).scale(Gaussian(-1))
    return strip_parameter(with_eps, eps)


def supertranslate(sf: SuperField, a: Optional[Atom] = None,
                   mu: Optional[Atom] = None,
                   eps10: Optional[Atom] = None,
                   eps01: Optional[Atom] = None) -> SuperField:
    """First-order supertranslation increment Psi(t',z',theta') - Psi.

    Parameters are explicit graded constants, kept to first order (no
    products of two translation parameters ever form)."""
    result = SuperField.build(sf.delta, sf.truncation, {}, sf.exact)
    pieces = [
        (a, OperatorExpr.gen("dt")),
        (mu, OperatorExpr.gen("dz")),
        (eps10, Q10),
        (eps01, Q01),
    ]
    for param, op in pieces:
        if param is None:
            continue
        term = left_multiply_constant(param, op.apply(sf))
        if term.delta != sf.delta:
            raise SuperspaceError(
                f"translation parameter {param.name} has the wrong degree")
        result = result + term
    return result


@dataclass(frozen=True)
class BerezinResult:
    integrand: GradedPoly
    obstruction: GradedPoly
    integrable: bool
    warning: Optional[str] = None


def berezin_integrate(sf: SuperField) -> BerezinResult:
    """Berezin integral over (z, theta10, theta01): the surviving F_{011}
    component, with the z F_{100} obstruction to integrability."""
    integrand = sf.component(0, 1, 1)
    obstruction = sf.component(1, 0, 0)
    warning = None
    if not sf.exact:
        warning = ("superfield is inexact: truncated content may have "
                   "affected the k<=1 components")
    return BerezinResult(integrand, obstruction, obstruction.is_zero, warning)


def mul_superfields(sf1: SuperField, sf2: SuperField) -> SuperField:
    """Cauchy product in (z, theta10, theta01) with Koszul signs from moving
    the second factor's coordinates past the first factor's components."""
    if sf1.truncation != sf2.truncation:
        raise SuperspaceError("mismatched truncations")
    K = sf1.truncation
    out = {}
    exact = sf1.exact and sf2.exact
    for (k1, a1, b1), p1 in sf1.comps:
        d1 = sf1.component_degree(k1, a1, b1)
        for (k2, a2, b2), p2 in sf2.comps:
            if (a1 and a2) or (b1 and b2):
                continue  # theta^2 = 0
            k = k1 + k2
            if k > K:
                exact = False
                continue
            bdeg = Degree((k2 + a2) % 2, (k2 + b2) % 2)
            sign = koszul_sign(bdeg, d1)
            if k2 % 2 and (a1 + b1) % 2:
                sign = -sign  # z^k2 passing theta10^a1 theta01^b1
            prod = (p1 * p2).scale(sign)
            key = (k, a1 + a2, b1 + b2)
            out[key] = out.get(key, GradedPoly.zero()) + prod
    return SuperField.build(sf1.delta + sf2.delta, K, out, exact)
