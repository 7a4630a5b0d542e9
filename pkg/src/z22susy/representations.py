"""Matrix representations of the Z2xZ2-SUSY algebra over parameter rings.

Matrices are sympy expressions in the formal symbols E, lam, c, mu over
Gaussian rationals, optionally reduced modulo a single relation polynomial
(quadratic in its designated variable, so plain polynomial division
suffices).  The convention throughout is the row-action one used by the
multiplet extraction: G(b_i) = sum_j M[i, j] b_j, so the matrix of a
composition A o B is M_B M_A.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sp

from .algebra import ALL_DEGREES, DEG_01, DEG_10, DEG_11, Degree, EVEN

E = sp.Symbol("E")
lam = sp.Symbol("lam")
c = sp.Symbol("c")
mu = sp.Symbol("mu")
alpha = sp.Symbol("alpha")
beta = sp.Symbol("beta")

GEN_DEGREES = {"H": EVEN, "Z": DEG_11, "Q10": DEG_10, "Q01": DEG_01}

# relation polynomials, each univariate in its designated symbol
REL_C = sp.expand((E * c + sp.I * lam) ** 2 - lam * (E ** 2 - lam))
REL_MU = sp.expand(mu ** 2 - lam * (E ** 2 - lam))
REL_ALPHA = sp.expand(alpha ** 2 - lam * beta ** 2 * (E ** 2 - lam))


@dataclass(frozen=True)
class RepSpec:
    name: str
    dim: int
    basis_degrees: Tuple[Degree, ...]
    gens: Dict[str, sp.Matrix]
    ideal: Tuple[Tuple[sp.Expr, sp.Symbol], ...] = ()

    def with_subs(self, subs: dict, name: Optional[str] = None,
                  keep_ideal: bool = False) -> "RepSpec":
        gens = {g: sp.simplify(m.subs(subs)) for g, m in self.gens.items()}
        return RepSpec(name or f"{self.name}|subs", self.dim,
                       self.basis_degrees, gens,
                       self.ideal if keep_ideal else ())


def reduce_mod(expr: sp.Expr, ideal: Sequence[Tuple[sp.Expr, sp.Symbol]]) -> sp.Expr:
    """Reduce a rational expression modulo relation polynomials, each
    treated as univariate in its designated variable."""
    num, den = sp.fraction(sp.cancel(sp.together(expr)))
    num = sp.expand(num)
    for rel, var in ideal:
        num = sp.expand(sp.rem(num, rel, var))
    return sp.cancel(num / den)


def is_zero_mod(expr: sp.Expr,
                ideal: Sequence[Tuple[sp.Expr, sp.Symbol]] = ()) -> bool:
    r = reduce_mod(expr, ideal) if ideal else sp.cancel(sp.together(expr))
    return sp.simplify(r) == 0


def matrix_zero_mod(m: sp.Matrix, ideal=()) -> bool:
    return all(is_zero_mod(x, ideal) for x in m)


def _compose(a: sp.Matrix, b: sp.Matrix) -> sp.Matrix:
    """Matrix of the operator composition a o b in row-action convention."""
    return b * a


def _anticommutator(a, b):
    return _compose(a, b) + _compose(b, a)


def _commutator(a, b):
    return _compose(a, b) - _compose(b, a)


def check_algebra(rep: RepSpec) -> dict:
    """Verify every defining relation as a matrix identity in the
    (possibly quotiented) parameter ring, and report the Casimirs."""
    H, Zm, Qa, Qb = rep.gens["H"], rep.gens["Z"], rep.gens["Q10"], rep.gens["Q01"]
    ideal = rep.ideal
    n = rep.dim
    relations = [
        ("{Q10,Q10}=2H", _anticommutator(Qa, Qa) - 2 * H),
        ("{Q01,Q01}=2H", _anticommutator(Qb, Qb) - 2 * H),
        ("[Q01,Q10]=2iZ", _commutator(Qb, Qa) - 2 * sp.I * Zm),
        ("[H,Q10]=0", _commutator(H, Qa)),
        ("[H,Q01]=0", _commutator(H, Qb)),
        ("[H,Z]=0", _commutator(H, Zm)),
        ("{Q10,Z}=0", _anticommutator(Qa, Zm)),
        ("{Q01,Z}=0", _anticommutator(Qb, Zm)),
    ]
    checks = []
    ok = True
    for label, m in relations:
        good = matrix_zero_mod(sp.expand(m), ideal)
        ok = ok and good
        entry = {"relation": label, "ok": good}
        if not good:
            entry["residue"] = str(sp.simplify(reduce_mod(m[0, 0], ideal))
                                   if ideal else sp.simplify(m))
        checks.append(entry)
    # degree block structure: G maps degree-d vectors into degree d+deg(G)
    blocks_ok = True
    for gname, m in rep.gens.items():
        gdeg = GEN_DEGREES[gname]
        for i in range(n):
            for j in range(n):
                if rep.basis_degrees[i] != rep.basis_degrees[j] + gdeg:
                    if not is_zero_mod(m[i, j], ideal):
                        blocks_ok = False
    casimirs = {}
    for label, m in (("H^2", _compose(H, H)), ("Z^2", _compose(Zm, Zm))):
        val = reduce_mod(m[0, 0], ideal) if ideal else sp.cancel(m[0, 0])
        scalar = matrix_zero_mod(sp.expand(m - val * sp.eye(n)), ideal)
        casimirs[label] = {"scalar": scalar, "value": str(sp.simplify(val))}
    return {"rep": rep.name, "ok": ok, "relations": checks,
            "blocks_ok": blocks_ok, "casimirs": casimirs}


# -- the two four-dimensional irreps ---------------------------------

BASIS_4 = (EVEN, DEG_11, DEG_10, DEG_01)  # (phi, F, psi, xi)


def build_case_i() -> RepSpec:
    """lambda = 0: Z acts trivially."""
    Q10 = sp.Matrix([[0, 0, 1, 0], [0, 0, 0, E], [E, 0, 0, 0], [0, 1, 0, 0]])
    Q01 = sp.Matrix([[0, 0, 0, 1], [0, 0, E, 0], [0, 1, 0, 0], [E, 0, 0, 0]])
    return RepSpec("case-i", 4, BASIS_4,
                   {"H": E * sp.eye(4), "Z": sp.zeros(4, 4),
                    "Q10": Q10, "Q01": Q01})


def build_case_ii() -> RepSpec:
    """lambda = E^2 != 0: Z acts nontrivially."""
    Q10 = sp.Matrix([[0, 0, 1, 0], [0, 0, 0, sp.I * E],
                     [E, 0, 0, 0], [0, -sp.I, 0, 0]])
    Q01 = sp.Matrix([[0, 0, 0, 1], [0, 0, -sp.I * E, 0],
                     [0, sp.I, 0, 0], [E, 0, 0, 0]])
    Zm = sp.Matrix([[0, 1, 0, 0], [E ** 2, 0, 0, 0],
                    [0, 0, 0, -sp.I * E], [0, 0, sp.I * E, 0]])
    return RepSpec("case-ii", 4, BASIS_4,
                   {"H": E * sp.eye(4), "Z": Zm, "Q10": Q10, "Q01": Q01})


# -- induced representations (bras/kets act by columns) ---------------

def _rep_from_action(name: str, basis_degrees, action: Dict[str, Dict[int, Dict[int, sp.Expr]]],
                     ideal=()) -> RepSpec:
    """action[g][j] = {i: coeff} meaning g|e_j> = sum_i coeff |e_i>.
    Stored in row-action convention M[j, i] = coeff, i.e. G(b_j) = sum M[j,i] b_i."""
    n = len(basis_degrees)
    gens = {}
    for g, cols in action.items():
        m = sp.zeros(n, n)
        for j, img in cols.items():
            for i, coeff in img.items():
                m[j, i] = coeff
        gens[g] = m
    gens.setdefault("H", E * sp.eye(n))
    return RepSpec(name, n, tuple(basis_degrees), gens, tuple(ideal))


def induce_from_nu_e() -> RepSpec:
    """Four-dimensional module induced from the one-dimensional Cartan
    module with Z acting as zero; basis (|00>, |~11>, |10>, |01>)."""
    action = {
        "Q10": {0: {2: 1}, 1: {3: E}, 2: {0: E}, 3: {1: 1}},
        "Q01": {0: {3: 1}, 1: {2: E}, 2: {1: 1}, 3: {0: E}},
        "Z": {},
    }
    return _rep_from_action("induced-4", BASIS_4, action)


# 8-dim basis order: |00>, |~00>, |11>, |~11>, |10>, |~10>, |01>, |~01>
BASIS_8 = (EVEN, EVEN, DEG_11, DEG_11, DEG_10, DEG_10, DEG_01, DEG_01)
K00, K00T, K11, K11T, K10, K10T, K01, K01T = range(8)


def induce_from_nu_e_lambda() -> RepSpec:
    """Eight-dimensional module induced from the two-dimensional Cartan
    module; lambda stays symbolic and the algebra closes identically."""
    action = {
        "Q10": {
            K00: {K10: 1},
            K00T: {K10: sp.I * lam, K10T: E},
            K11: {K01T: 1},
            K11T: {K01: E, K01T: sp.I},
            K10: {K00: E},
            K10T: {K00: -sp.I * lam, K00T: 1},
            K01: {K11: -sp.I, K11T: 1},
            K01T: {K11: E},
        },
        "Q01": {
            K00: {K01: 1},
            K00T: {K01: -sp.I * lam, K01T: E},
            K11: {K10T: 1},
            K11T: {K10: E, K10T: -sp.I},
            K10: {K11: sp.I, K11T: 1},
            K10T: {K11: E},
            K01: {K00: E},
            K01T: {K00: sp.I * lam, K00T: 1},
        },
        "Z": {
            K00: {K11: 1},
            K00T: {K11T: lam},
            K11: {K00: lam},
            K11T: {K00T: 1},
            K10: {K01T: -1},
            K10T: {K01: -lam},
            K01: {K10T: -1},
            K01T: {K10: -lam},
        },
    }
    return _rep_from_action("induced-8", BASIS_8, action)


def build_two_param(ideal: bool = True) -> RepSpec:
    """The novel four-dimensional irrep with parameters (E, lambda, c);
    consistent only modulo (Ec + i lam)^2 = lam (E^2 - lam)."""
    action = {
        "Q10": {0: {2: 1}, 1: {3: lam / c}, 2: {0: E}, 3: {1: c * E / lam}},
        "Q01": {0: {3: 1}, 1: {2: c}, 2: {1: E / c}, 3: {0: E}},
        "Z": {0: {1: 1}, 1: {0: lam}, 2: {3: -lam / c}, 3: {2: -c}},
    }
    return _rep_from_action("two-param", BASIS_4, action,
                            ideal=[(REL_C, c)] if ideal else [])


def build_two_param_specialized() -> RepSpec:
    """lambda = E^2 specialization: c = -iE; equals the case-ii matrices."""
    rep = build_two_param(ideal=False)
    gens = {g: sp.simplify(m.subs({lam: E ** 2, c: -sp.I * E}))
            for g, m in rep.gens.items()}
    return RepSpec("two-param|lam=E^2", 4, BASIS_4, gens)


def quotient_four_dim() -> RepSpec:
    """The 4-dim quotient when the tilded vectors are dependent,
    |~00> = mu |00> with mu^2 = lam (E^2 - lam); basis (|00>,|11>,|10>,|01>)."""
    action = {
        "Q10": {
            0: {2: 1},
            1: {3: (sp.I * lam + mu) / E},
            2: {0: E},
            3: {1: mu / lam - sp.I},
        },
        "Q01": {
            0: {3: 1},
            1: {2: (-sp.I * lam + mu) / E},
            2: {1: mu / lam + sp.I},
            3: {0: E},
        },
        "Z": {
            0: {1: 1},
            1: {0: lam},
            2: {3: -(sp.I * lam + mu) / E},
            3: {2: -(-sp.I * lam + mu) / E},
        },
    }
    return _rep_from_action("quotient-4", BASIS_4, action, ideal=[(REL_MU, mu)])


def two_param_matches_quotient() -> bool:
    """The quotient rep equals the two-parameter rep under Ec = mu - i lam,
    modulo mu^2 = lam (E^2 - lam)."""
    q = quotient_four_dim()
    t = build_two_param(ideal=False)
    subs = {c: (mu - sp.I * lam) / E}
    for g in ("Q10", "Q01", "Z", "H"):
        diff = sp.expand(t.gens[g].subs(subs) - q.gens[g])
        if not matrix_zero_mod(diff, [(REL_MU, mu)]):
            return False
    return True


# -- invariant subspace of the 8-dim module ---------------------------

def _sector_solve(w: sp.Matrix, v: sp.Matrix, sector: List[int], ideal):
    """Solve w = x * v inside a graded sector; returns (x, consistent)."""
    pivot = None
    for i in sector:
        if not is_zero_mod(v[i], ideal):
            pivot = i
            break
    if pivot is None:
        return None, all(is_zero_mod(w[i], ideal) for i in sector)
    x = sp.cancel(w[pivot] / v[pivot])
    for i in sector:
        if not is_zero_mod(w[i] - x * v[i], ideal):
            return x, False
    return x, True


def invariant_subspace(rep8: RepSpec, alpha_v, beta_v, c_v,
                       ideal: Sequence[Tuple[sp.Expr, sp.Symbol]] = ()) -> dict:
    """Restrict the 8-dim module to the span of v00 = alpha|00> + beta|~00>
    and its images; the restricted action must equal the two-parameter
    irrep matrices."""
    gens = rep8.gens
    n = rep8.dim

    def act(g, vec):
        # row-action: G(sum x_j b_j) = sum_j x_j sum_i M[j,i] b_i
        return sp.Matrix([sum(vec[j] * gens[g][j, i] for j in range(n))
                          for i in range(n)])

    v00 = sp.zeros(n, 1)
    v00[K00], v00[K00T] = alpha_v, beta_v
    v11 = act("Z", v00)
    v10 = act("Q10", v00)
    v01 = act("Q01", v00)
    basis = [v00, v11, v10, v01]
    sectors = {EVEN: [K00, K00T], DEG_11: [K11, K11T],
               DEG_10: [K10, K10T], DEG_01: [K01, K01T]}
    vec_degree = [EVEN, DEG_11, DEG_10, DEG_01]
    restricted = {}
    invariant = True
    detail = []
    for g in ("H", "Z", "Q10", "Q01"):
        m = sp.zeros(4, 4)
        for j, vj in enumerate(basis):
            w = act(g, vj)
            tdeg = vec_degree[j] + GEN_DEGREES[g]
            i = vec_degree.index(tdeg)
            x, okflag = _sector_solve(w, basis[i], sectors[tdeg], ideal)
            if not okflag:
                invariant = False
                detail.append(f"{g}(v[{j}]) escapes the span")
                continue
            m[j, i] = sp.simplify(sp.cancel(x)) if x is not None else 0
        restricted[g] = m
    expected = build_two_param(ideal=False).gens
    subs = {c: c_v}
    matches = True
    for g in ("Z", "Q10", "Q01"):
        diff = sp.expand(restricted[g] - expected[g].subs(subs))
        if not matrix_zero_mod(diff, ideal):
            matches = False
            detail.append(f"restricted {g} differs from the two-parameter form")
    return {"invariant": invariant, "matches_two_param": matches,
            "matrices": restricted, "detail": detail}


def reducibility_witness_8dim() -> dict:
    """Certify the 8-dim module reducible: with beta = 1, alpha = i lam + cE
    and (Ec + i lam)^2 = lam (E^2 - lam), the four vectors span a proper
    invariant graded subspace W(E, lam)."""
    rep8 = induce_from_nu_e_lambda()
    res = invariant_subspace(rep8, sp.I * lam + c * E, 1, c, ideal=[(REL_C, c)])
    return {"reducible": res["invariant"], "witness": "W(E,lam) = span(v00, Z v00, Q10 v00, Q01 v00)",
            "restriction_matches_two_param": res["matches_two_param"],
            "detail": res["detail"]}


# -- dressing ---------------------------------------------------------

U1 = sp.diag(E ** 2, 1, -E, -E)
U2 = sp.diag(E, -1, -1, E)
U3 = sp.diag(E, -1, E, -1)


class DressingError(Exception):
    pass


def dress(rep: RepSpec, U: sp.Matrix, name: str = "dressed") -> RepSpec:
    """Conjugate Q10, Q01 (and Z) by a diagonal matrix in E; H unchanged.
    Every resulting entry must be polynomial in E (the transformed matrix
    must remain a differential operator)."""
    Uinv = U.inv()
    gens = {"H": rep.gens["H"]}
    for g in ("Q10", "Q01", "Z"):
        m = sp.expand(sp.simplify(U * rep.gens[g] * Uinv))
        for entry in m:
            entry = sp.cancel(entry)
            num, den = sp.fraction(entry)
            if den.has(E):
                raise DressingError(
                    f"dressed {g} has non-polynomial entry {entry}")
        gens[g] = m
    return RepSpec(name, rep.dim, rep.basis_degrees, gens, rep.ideal)


def dressed_expected(which: int) -> Dict[str, sp.Matrix]:
    """The printed matrices for the degree (1,1), (1,0), (0,1) superfield
    multiplets, used for entrywise comparison against the conjugation."""
    if which == 1:
        Q10 = sp.Matrix([[0, 0, -E, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, -E, 0, 0]])
        Q01 = sp.Matrix([[0, 0, 0, -E], [0, 0, -1, 0], [0, -E, 0, 0], [-1, 0, 0, 0]])
    elif which == 2:
        Q10 = sp.Matrix([[0, 0, -E, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, -E, 0, 0]])
        Q01 = sp.Matrix([[0, 0, 0, 1], [0, 0, E, 0], [0, 1, 0, 0], [E, 0, 0, 0]])
    elif which == 3:
        Q10 = sp.Matrix([[0, 0, 1, 0], [0, 0, 0, E], [E, 0, 0, 0], [0, 1, 0, 0]])
        Q01 = sp.Matrix([[0, 0, 0, -E], [0, 0, -1, 0], [0, -E, 0, 0], [-1, 0, 0, 0]])
    else:
        raise ValueError("which must be 1, 2 or 3")
    return {"Q10": Q10, "Q01": Q01, "Z": sp.zeros(4, 4), "H": E * sp.eye(4)}


# -- irreducibility ---------------------------------------------------

def _random_gaussian(rng: random.Random):
    from sympy import Rational
    while True:
        x = Rational(rng.randint(-9, 9), rng.randint(1, 5)) \
            + sp.I * Rational(rng.randint(-9, 9), rng.randint(1, 5))
        if x != 0:
            return x


def irreducible(rep: RepSpec, seed: int = 7) -> dict:
    """Decide irreducibility for reps whose graded components are at most
    one-dimensional: a proper graded invariant subspace is then spanned by
    a subset of basis lines, so subset closure over the fraction field
    decides.  A randomized Gaussian-rational substitution guards the
    symbolic rank conclusion."""
    from collections import Counter
    counts = Counter(rep.basis_degrees)
    if max(counts.values()) > 1:
        raise ValueError("subset search needs one basis line per degree; "
                         "use reducibility_witness_8dim for the 8-dim module")
    n = rep.dim
    ideal = rep.ideal

    def find_witness(zero_test):
        for mask in range(1, 2 ** n - 1):
            subset = {i for i in range(n) if mask >> i & 1}
            closed = True
            for m in rep.gens.values():
                for j in subset:
                    for i in range(n):
                        if i not in subset and not zero_test(m[j, i]):
                            closed = False
            if closed:
                return sorted(subset)
        return None

    witness = find_witness(lambda x: is_zero_mod(x, ideal))
    # randomized guard: the symbolic conclusion should persist at random
    # Gaussian-rational parameter values (generic points)
    rng = random.Random(seed)
    syms = sorted(set().union(*[m.free_symbols for m in rep.gens.values()],
                              set()), key=str)
    guard_agrees = True
    if syms and not ideal:
        for _ in range(3):
            subs = {s: _random_gaussian(rng) for s in syms}
            num = find_witness(lambda x: sp.simplify(x.subs(subs)) == 0)
            if (num is None) != (witness is None):
                guard_agrees = False
    return {"rep": rep.name, "irreducible": witness is None,
            "witness_subset": witness, "guard_agrees": guard_agrees}
