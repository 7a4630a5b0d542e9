"""Exact arithmetic for Z2xZ2-graded commutative polynomials.

Everything here is pure and immutable: degrees, Gaussian-rational
coefficients, graded atoms (component fields, graded constants) and
canonically normalized polynomials in them.  All commutation signs come
from the Koszul rule (-1)^{a.b}; odd atoms square to zero at
normalization time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable


@dataclass(frozen=True)
class Degree:
    """An element (a, b) of Z2 x Z2."""

    a: int
    b: int

    def __post_init__(self):
        if self.a not in (0, 1) or self.b not in (0, 1):
            raise ValueError(f"degree bits must be 0 or 1, got ({self.a},{self.b})")

    def __add__(self, other: "Degree") -> "Degree":
        return Degree((self.a + other.a) % 2, (self.b + other.b) % 2)

    def parity(self, other: "Degree") -> int:
        return (self.a * other.a + self.b * other.b) % 2

    @property
    def is_odd(self) -> bool:
        return self.parity(self) == 1

    def __repr__(self):
        return f"({self.a},{self.b})"


EVEN = Degree(0, 0)
DEG_11 = Degree(1, 1)
DEG_10 = Degree(1, 0)
DEG_01 = Degree(0, 1)

ALL_DEGREES = (EVEN, DEG_11, DEG_10, DEG_01)


def koszul_sign(d1: Degree, d2: Degree) -> int:
    """The sign picked up when homogeneous objects of degrees d1, d2 swap."""
    return -1 if d1.parity(d2) else 1


class Gaussian:
    """A Gaussian rational re + i*im with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, *a):
        raise AttributeError("Gaussian is immutable")

    @staticmethod
    def coerce(x) -> "Gaussian":
        if isinstance(x, Gaussian):
            return x
        return Gaussian(x)

    def __add__(self, other):
        other = Gaussian.coerce(other)
        return Gaussian(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = Gaussian.coerce(other)
        return Gaussian(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return Gaussian.coerce(other) - self

    def __mul__(self, other):
        other = Gaussian.coerce(other)
        return Gaussian(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Gaussian.coerce(other)
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return Gaussian(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __rtruediv__(self, other):
        return Gaussian.coerce(other) / self

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Gaussian(other)
        if not isinstance(other, Gaussian):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __repr__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


ONE = Gaussian(1)
I = Gaussian(0, 1)
ZERO = Gaussian(0)


@dataclass(frozen=True)
class Atom:
    """A graded symbol: a component field with time-derivative order, or a
    graded constant (coupling / translation parameter)."""

    name: str
    degree: Degree
    deriv_order: int = 0
    kind: str = "field"

    def __post_init__(self):
        if self.kind not in ("field", "constant"):
            raise ValueError(f"unknown atom kind {self.kind!r}")
        if self.kind == "constant" and self.deriv_order != 0:
            raise ValueError("constant atoms carry no time derivatives")
        if self.deriv_order < 0:
            raise ValueError("negative derivative order")

    def dot(self, n: int = 1) -> "Atom":
        """Raise the derivative order by n (fields only)."""
        if self.kind != "field":
            raise ValueError("cannot differentiate a constant atom")
        return Atom(self.name, self.degree, self.deriv_order + n, self.kind)

    def base(self) -> "Atom":
        return Atom(self.name, self.degree, 0, self.kind)

    def __repr__(self):
        if self.deriv_order:
            return f"{self.name}^({self.deriv_order})"
        return self.name


def field_atom(name: str, degree: Degree, deriv_order: int = 0) -> Atom:
    return Atom(name, degree, deriv_order, "field")


def constant_atom(name: str, degree: Degree) -> Atom:
    return Atom(name, degree, 0, "constant")


# Canonical monomial order.  Any total order on atoms works; results must
# not depend on the choice, which the test suite exercises by swapping in
# the reversed order.
_ORDER_MODE = "lex"


def set_atom_order(mode: str) -> None:
    global _ORDER_MODE
    if mode not in ("lex", "revlex"):
        raise ValueError("atom order must be 'lex' or 'revlex'")
    _ORDER_MODE = mode


def get_atom_order() -> str:
    return _ORDER_MODE


class atom_order:
    """Context manager temporarily switching the canonical atom order."""

    def __init__(self, mode: str):
        self.mode = mode
        self.saved = None

    def __enter__(self):
        self.saved = get_atom_order()
        set_atom_order(self.mode)

    def __exit__(self, *exc):
        set_atom_order(self.saved)


def _atom_precedes(x: Atom, y: Atom) -> bool:
    # the key must be total on distinct atoms, or normalization would not
    # bring equal monomials to the same canonical form
    kx = (x.name, x.deriv_order, x.degree.a, x.degree.b, x.kind)
    ky = (y.name, y.deriv_order, y.degree.a, y.degree.b, y.kind)
    if _ORDER_MODE == "lex":
        return kx < ky
    return kx > ky


def normalize(atoms: Iterable[Atom], coeff: Gaussian):
    """Sort atoms into canonical order by adjacent transpositions, tracking
    Koszul signs.  Returns (atom tuple, coefficient) or None when an odd
    atom repeats (nilpotency)."""
    arr = list(atoms)
    coeff = Gaussian.coerce(coeff)
    for i in range(1, len(arr)):
        j = i
        while j > 0 and _atom_precedes(arr[j], arr[j - 1]):
            if koszul_sign(arr[j].degree, arr[j - 1].degree) < 0:
                coeff = -coeff
            arr[j - 1], arr[j] = arr[j], arr[j - 1]
            j -= 1
    for x, y in zip(arr, arr[1:]):
        if x == y and x.degree.is_odd:
            return None
    if coeff.is_zero:
        return None
    return tuple(arr), coeff


def monomial_degree(atoms: Iterable[Atom]) -> Degree:
    d = EVEN
    for a in atoms:
        d = d + a.degree
    return d


class GradedPoly:
    """Canonical-form polynomial: map from atom tuple to nonzero Gaussian
    coefficient.  Values are immutable; all operations return new objects."""

    __slots__ = ("terms",)

    def __init__(self, terms=None, _canonical=False):
        out = {}
        if terms:
            if _canonical:
                out = {k: v for k, v in terms.items() if not v.is_zero}
            else:
                for atoms, coeff in terms.items():
                    nf = normalize(atoms, coeff)
                    if nf is None:
                        continue
                    key, c = nf
                    acc = out.get(key, ZERO) + c
                    if acc.is_zero:
                        out.pop(key, None)
                    else:
                        out[key] = acc
        object.__setattr__(self, "terms", out)

    def __setattr__(self, *a):
        raise AttributeError("GradedPoly is immutable")

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero() -> "GradedPoly":
        return GradedPoly()

    @staticmethod
    def scalar(c) -> "GradedPoly":
        c = Gaussian.coerce(c)
        if c.is_zero:
            return GradedPoly()
        return GradedPoly({(): c}, _canonical=True)

    @staticmethod
    def atom(a: Atom, coeff=ONE) -> "GradedPoly":
        c = Gaussian.coerce(coeff)
        if c.is_zero:
            return GradedPoly()
        return GradedPoly({(a,): c}, _canonical=True)

    # -- queries ------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    def homogeneous_degree(self):
        """Common degree of all terms, or None if inhomogeneous.  The zero
        polynomial is homogeneous of every degree (returns EVEN)."""
        deg = None
        for atoms in self.terms:
            d = monomial_degree(atoms)
            if deg is None:
                deg = d
            elif d != deg:
                return None
        return deg if deg is not None else EVEN

    @property
    def is_homogeneous(self) -> bool:
        return self.is_zero or self.homogeneous_degree() is not None

    def atoms(self):
        seen = set()
        for key in self.terms:
            for a in key:
                if a not in seen:
                    seen.add(a)
                    yield a

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: "GradedPoly") -> "GradedPoly":
        out = dict(self.terms)
        for key, c in other.terms.items():
            acc = out.get(key, ZERO) + c
            if acc.is_zero:
                out.pop(key, None)
            else:
                out[key] = acc
        return GradedPoly(out, _canonical=True)

    def __sub__(self, other: "GradedPoly") -> "GradedPoly":
        return self + (-other)

    def __neg__(self) -> "GradedPoly":
        return GradedPoly({k: -c for k, c in self.terms.items()}, _canonical=True)

    def scale(self, c) -> "GradedPoly":
        c = Gaussian.coerce(c)
        if c.is_zero:
            return GradedPoly()
        return GradedPoly({k: v * c for k, v in self.terms.items()}, _canonical=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Gaussian)):
            return self.scale(other)
        out = {}
        for a1, c1 in self.terms.items():
            for a2, c2 in other.terms.items():
                nf = normalize(a1 + a2, c1 * c2)
                if nf is None:
                    continue
                key, c = nf
                acc = out.get(key, ZERO) + c
                if acc.is_zero:
                    out.pop(key, None)
                else:
                    out[key] = acc
        return GradedPoly(out, _canonical=True)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Gaussian)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, GradedPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def time_derivative(self) -> "GradedPoly":
        """Graded Leibniz rule; d/dt is even so no signs appear.  Constant
        atoms are annihilated."""
        out = GradedPoly()
        for atoms, coeff in self.terms.items():
            for i, a in enumerate(atoms):
                if a.kind != "field":
                    continue
                raised = atoms[:i] + (a.dot(),) + atoms[i + 1:]
                out = out + GradedPoly({raised: coeff})
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for atoms, c in sorted(self.terms.items(), key=lambda kv: [
                (a.name, a.deriv_order) for a in kv[0]]):
            body = " ".join(repr(a) for a in atoms) or "1"
            parts.append(f"{c!r} {body}")
        return " + ".join(parts)


def graded_bracket(x: GradedPoly, y: GradedPoly) -> GradedPoly:
    """[[x, y]] = xy - (-1)^{deg x . deg y} yx for homogeneous x, y."""
    dx = x.homogeneous_degree()
    dy = y.homogeneous_degree()
    if dx is None or dy is None:
        raise ValueError("graded bracket requires homogeneous arguments")
    yx = y * x
    if koszul_sign(dx, dy) < 0:
        return x * y + yx
    return x * y - yx
