"""Command-line interface: verification battery, constraint reduction,
representation checks, and action construction with JSON output.

Exit codes: 0 all checks passed (flagged notes allowed), 1 at least one
check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import sympy as sp

from . import representations as reps
from .algebra import Degree
from .battery import (
    Report,
    check_actions,
    check_algebra_closure,
    full_battery,
)
from .multiplets import impose_f011_constraint, impose_z_constraint
from .superspace import generic_superfield
from .textform import (
    certificate_to_json,
    format_poly,
    multiplet_to_json,
    repspec_to_json,
    superfield_to_json,
)

IRREP_CASES = ("i", "ii", "two-param", "induced8", "dress1", "dress2", "dress3")
ACTION_NAMES = ("case-i-kinetic", "case-i-superpotential", "b11", "b10",
                "b01", "case-ii-kinetic", "case-ii-attempt")


def _parse_delta(text: str) -> Degree:
    try:
        a, b = (int(x) for x in text.split(","))
        return Degree(a, b)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(
            f"degree must be 'a,b' with bits 0/1, got {text!r}") from exc


def cmd_verify_algebra(args) -> Report:
    rpt = check_algebra_closure(args.truncation, corrupt=args.corrupt)
    if args.truncation < 4:
        rpt.add("coverage note", True,
                f"truncation {args.truncation} verifies fewer z-orders than "
                "the default 4", flagged=True)
    return rpt


def cmd_constrain(args) -> Report:
    rpt = Report()
    psi = generic_superfield(args.delta, args.truncation)
    if args.which == "z":
        sf, mult = impose_z_constraint(psi)
        detail = "finite four-component superfield"
    else:
        sf, mult, _system = impose_f011_constraint(psi)
        detail = "finitely generated series through four component fields"
    spec = reps.RepSpec(f"constrained-{args.which}", 4,
                        tuple(d for _, a, _s in mult.basis
                              for d in (a.degree,)),
                        dict(mult.matrices))
    alg = reps.check_algebra(spec)
    rpt.add(f"constrain delta={args.delta} which={args.which}", alg["ok"],
            detail + f"; Casimirs {alg['casimirs']}",
            artifacts={"multiplet": multiplet_to_json(mult),
                       "superfield": superfield_to_json(sf)})
    return rpt


def cmd_irreps(args) -> Report:
    rpt = Report()
    case = args.case
    if case in ("i", "ii"):
        rep = reps.build_case_i() if case == "i" else reps.build_case_ii()
        alg = reps.check_algebra(rep)
        rpt.add(f"irrep case {case}: algebra relations", alg["ok"],
                f"Casimirs {alg['casimirs']}",
                artifacts={"rep": repspec_to_json(rep)})
        irr = reps.irreducible(rep, seed=args.seed)
        rpt.add(f"irrep case {case}: irreducible", irr["irreducible"],
                f"witness subset: {irr['witness_subset']}")
    elif case == "two-param":
        bare = reps.check_algebra(reps.build_two_param(ideal=False))
        failing = [c["relation"] for c in bare["relations"] if not c["ok"]]
        rpt.add("two-param: fails exactly [Q01,Q10]=2iZ without the ideal",
                failing == ["[Q01,Q10]=2iZ"], f"failing: {failing}")
        rep = reps.build_two_param()
        alg = reps.check_algebra(rep)
        rpt.add("two-param: closes modulo (Ec+i*lam)^2 = lam*(E^2-lam)",
                alg["ok"], f"Casimirs {alg['casimirs']}",
                artifacts={"rep": repspec_to_json(rep)})
        irr = reps.irreducible(rep, seed=args.seed)
        rpt.add("two-param: irreducible", irr["irreducible"])
        spec = reps.build_two_param_specialized()
        same = all(sp.expand(spec.gens[g] - reps.build_case_ii().gens[g])
                   == sp.zeros(4, 4) for g in ("H", "Z", "Q10", "Q01"))
        rpt.add("two-param: lam=E^2, c=-iE specialization equals case ii",
                same and reps.check_algebra(spec)["ok"])
        num = reps.build_two_param(ideal=False).with_subs(
            {reps.E: 5, reps.lam: 9,
             reps.c: sp.Rational(12, 5) - sp.Rational(9, 5) * sp.I})
        rpt.add("two-param: numeric instance E=5, lam=9, c=(12-9i)/5",
                reps.check_algebra(num)["ok"])
    elif case == "induced8":
        rep = reps.induce_from_nu_e_lambda()
        alg = reps.check_algebra(rep)
        rpt.add("induced8: algebra relations with lam symbolic", alg["ok"],
                f"Casimirs {alg['casimirs']}",
                artifacts={"rep": repspec_to_json(rep)})
        wit = reps.reducibility_witness_8dim()
        rpt.add("induced8: reducible with invariant subspace W(E,lam)",
                wit["reducible"] and wit["restriction_matches_two_param"],
                wit["witness"])
        rpt.add("induced8: quotient by the dependent tilded vectors equals "
                "the two-parameter rep", reps.two_param_matches_quotient())
    elif case.startswith("dress"):
        which = int(case[-1])
        U = {1: reps.U1, 2: reps.U2, 3: reps.U3}[which]
        try:
            dressed = reps.dress(reps.build_case_i(), U, name=case)
        except reps.DressingError as exc:
            rpt.add(f"{case}: polynomial conjugation", False, str(exc))
            return rpt
        alg = reps.check_algebra(dressed)
        rpt.add(f"{case}: conjugated matrices polynomial, algebra holds",
                alg["ok"], artifacts={"rep": repspec_to_json(dressed)})
        want = reps.dressed_expected(which)
        bad = [g for g in ("Q10", "Q01", "Z", "H")
               if sp.expand(dressed.gens[g] - want[g]) != sp.zeros(4, 4)]
        if bad:
            rpt.add(f"{case}: entrywise comparison", True,
                    f"mismatched generators: {bad}", flagged=True)
        else:
            rpt.add(f"{case}: entrywise comparison", True, "entrywise equal")
    return rpt


def cmd_action(args) -> Report:
    from .actions import (NonIntegrableError, check_invariance,
                          matrix_multiplet, named_action)
    rpt = Report()
    name = args.name
    if name == "case-ii-attempt":
        try:
            named_action(name, args.truncation)
            rpt.add("action case-ii-attempt: non-integrable", False,
                    "reduction unexpectedly succeeded")
        except NonIntegrableError as exc:
            rpt.add("action case-ii-attempt: non-integrable as expected",
                    True, f"obstruction = {format_poly(exc.obstruction)}",
                    artifacts={"obstruction": format_poly(exc.obstruction)})
        return rpt
    lag, mats = named_action(name, args.truncation)
    certs = check_invariance(lag, matrix_multiplet(mats))
    rpt.add(f"action {name}", all(c.ok for c in certs),
            f"L = {format_poly(lag.poly)}",
            artifacts={"lagrangian": format_poly(lag.poly),
                       "certificates": [certificate_to_json(c)
                                        for c in certs]})
    for c in certs:
        rpt.add(f"action {name}: {c.charge} invariance", c.ok,
                f"B = {format_poly(c.boundary)}" if c.ok
                else f"residue = {format_poly(c.residue)}")
    return rpt


def cmd_verify_all(args) -> Report:
    return full_battery(args.truncation, args.seed, args.instances)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="z22susy",
        description="Exact verification engine for Z2xZ2-graded superspace "
                    "calculus, irreps, and SUSY-invariant actions.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp_):
        sp_.add_argument("--truncation", type=int, default=4,
                         help="z-order truncation (default 4)")
        sp_.add_argument("--seed", type=int, default=11,
                         help="seed for randomized guards (default 11)")
        sp_.add_argument("--json", action="store_true",
                         help="emit the report as JSON")
        sp_.add_argument("--out", metavar="FILE",
                         help="write the report to FILE instead of stdout")

    pa = sub.add_parser("verify-algebra",
                        help="check every defining operator relation on "
                             "generic superfields of all degrees")
    common(pa)
    pa.add_argument("--corrupt", action="store_true",
                    help=argparse.SUPPRESS)  # negative-control test mode
    pa.set_defaults(fn=cmd_verify_algebra)

    pc = sub.add_parser("constrain",
                        help="impose a component constraint and extract "
                             "the multiplet matrices")
    common(pc)
    pc.add_argument("--delta", type=_parse_delta, default=Degree(0, 0),
                    help="superfield degree a,b (default 0,0)")
    pc.add_argument("--which", choices=("z", "f011"), default="z")
    pc.set_defaults(fn=cmd_constrain)

    pi = sub.add_parser("irreps", help="verify a representation case")
    common(pi)
    pi.add_argument("case", choices=IRREP_CASES)
    pi.set_defaults(fn=cmd_irreps)

    pact = sub.add_parser("action",
                          help="build a catalogued action and certify its "
                               "invariance")
    common(pact)
    pact.add_argument("name", choices=ACTION_NAMES)
    pact.set_defaults(fn=cmd_action)

    pv = sub.add_parser("verify-all",
                        help="run the complete verification battery")
    common(pv)
    pv.add_argument("--instances", type=int, default=1000,
                    help="randomized instances per algebraic property")
    pv.set_defaults(fn=cmd_verify_all)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    report = args.fn(args)
    text = json.dumps(report.to_json(), indent=2) if args.json \
        else report.to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
