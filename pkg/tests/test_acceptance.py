"""Acceptance gate: ten end-to-end criteria, one printed pass/fail line
each.  Every check is an exact symbolic identity (tolerance: exact
equality); each criterion runs in well under ten seconds at truncation
K=4 and the whole gate in under two minutes."""

import time

from z22susy.battery import (
    Report,
    check_actions,
    check_algebra_closure,
    check_case_i,
    check_case_ii,
    check_component_law,
    check_dressing,
    check_order_independence,
    check_properties,
    check_representations,
    check_vanishing_propagation,
)

K = 4
TIME_LIMIT = 10.0


def _gate(number, label, report):
    ok = report.ok
    failed = [c.name for c in report.checks if c.status == "fail"]
    flagged = [c.name for c in report.checks if c.status == "flagged"]
    verdict = "PASS" if ok else "FAIL"
    note = f" ({len(flagged)} documented note(s))" if flagged else ""
    print(f"{verdict} criterion-{number}: {label} — "
          f"{len(report.checks)} checks{note}")
    assert ok, (number, label, failed)


def _timed(fn, *args, **kwargs):
    start = time.monotonic()
    report = fn(*args, **kwargs)
    elapsed = time.monotonic() - start
    assert elapsed < TIME_LIMIT, f"{fn.__name__} took {elapsed:.1f}s"
    return report


def test_criterion_1_algebra_closure():
    _gate(1, "all defining operator relations hold on generic "
          "superfields of every degree", _timed(check_algebra_closure, K))


def test_criterion_2_component_law():
    rpt = _timed(check_component_law, K)
    assert "128 identities" in rpt.checks[0].detail
    _gate(2, "component-field variation law, 128 identities across all "
          "degrees and both supercharges", rpt)


def test_criterion_3_vanishing_propagation():
    _gate(3, "high-order vanishing propagates upward; integrable "
          "variations carry a boundary certificate",
          _timed(check_vanishing_propagation, 5))


def test_criterion_4_case_i():
    _gate(4, "z-constraint: finite superfield, extracted matrices, "
          "Casimirs (E^2, 0)", _timed(check_case_i, K))


def test_criterion_5_case_ii():
    _gate(5, "f011-constraint: closed-form series coefficients, "
          "matrices, Z^2 = E^2", _timed(check_case_ii, K))


def test_criterion_6_actions():
    _gate(6, "all catalogued actions reduce to the expected component "
          "Lagrangians with invariance certificates",
          _timed(check_actions, K))


def test_criterion_7_negative_control():
    rpt = _timed(check_actions, K)
    sub = [c for c in rpt.checks if "case-ii-attempt" in c.name]
    assert sub, "negative control missing from the action battery"
    _gate(7, "direct case-ii kinetic integrand refused with the exact "
          "fermion-bilinear obstruction", Report(sub))


def test_criterion_8_representations():
    _gate(8, "induced 8-dim rep, two-parameter family modulo its "
          "relation ideal, specialization, numeric instance, "
          "(ir)reducibility witnesses", _timed(check_representations))


def test_criterion_9_dressing():
    _gate(9, "dressing by U1/U2/U3 stays polynomial, satisfies the "
          "algebra, and matches entrywise", _timed(check_dressing))


def test_criterion_10_properties_and_order():
    start = time.monotonic()
    props = check_properties(seed=11, instances=1000)
    order = check_order_independence(K)
    elapsed = time.monotonic() - start
    assert elapsed < 2 * TIME_LIMIT, f"criterion 10 took {elapsed:.1f}s"
    props.extend(order)
    _gate(10, "1000-instance randomized property suites and "
          "canonical-order independence", props)
