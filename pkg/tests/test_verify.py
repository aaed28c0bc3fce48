import json

import numpy as np
import pytest

from liftcalc.calculus import nijenhuis
from liftcalc.expr import Quot, VarRef, add, const, cos, mul, power, sin, sub, var
from liftcalc.lifts import lift_endo_complete, lift_tensor12_complete
from liftcalc.theorems import exponential_structure
from liftcalc.verify import (
    INCONCLUSIVE,
    PROVEN,
    REFUTED,
    Check,
    DegenerateSampling,
    fd_check,
    overall,
    prove_zero,
    report_header,
    run_check,
    run_suite,
    sample_check,
    sample_points,
    serialize_json,
)

x1, x2 = var(0, 1), var(0, 2)
X1 = VarRef(0, 1)


def test_prove_zero_statuses():
    assert prove_zero(sub(sub(sub(power(add(x1, 1), 2), power(x1, 2)), mul(2, x1)), 1)).status == PROVEN
    st = prove_zero(x1)
    assert st.status == REFUTED and "x1@0" in st.witness
    assert prove_zero(sub(add(power(sin(x1), 2), power(cos(x1), 2)), 1)).status == INCONCLUSIVE


def test_numeric_fallback_for_pythagoras():
    e = add(power(sin(x1), 2), power(cos(x1), 2))
    assert sample_check(e, const(1), 100, 1e-12).passed


def test_identical_sides_have_zero_error():
    st = sample_check(x1, x1)
    assert st.passed and st.max_err == 0


def test_failing_sample_records_a_witness():
    st = sample_check(x1, const(0), 100, 1e-9)
    assert not st.passed and "x1@0" in st.witness


def test_sampling_is_seeded():
    a = sample_points([add(x1, x2)], 10, seed=3)
    b = sample_points([add(x1, x2)], 10, seed=3)
    assert all(np.array_equal(a[v], b[v]) for v in a)


def test_sampling_avoids_small_denominators():
    pts = sample_points([Quot(const(1), x1)], 500, seed=0)
    assert np.all(np.abs(pts[X1]) >= 1e-6)


def test_degenerate_denominator_raises():
    with pytest.raises(DegenerateSampling):
        sample_points([Quot(const(1), sub(x1, x1))], 5, seed=0)


def test_fd_exact_on_quadratics():
    assert fd_check(power(x1, 2), X1, 50, 1e-10).passed


def test_fd_on_product():
    st = fd_check(mul(sin(x1), x2), X1, 50, 1e-6)
    assert st.passed and st.max_err < 1e-6


def test_fd_on_constant():
    st = fd_check(const(4), X1)
    assert st.passed and st.max_err == 0


def test_nijenhuis_second_order_lift_passes_numerically():
    F = exponential_structure()
    lhs = nijenhuis(lift_endo_complete(F, 2))
    rhs = lift_tensor12_complete(nijenhuis(F), 2)
    assert sample_check(lhs, rhs, 100, 1e-9).passed


def test_empty_suite_passes():
    assert run_suite([]) == []
    assert overall([])


def test_duplicate_names_get_stable_suffixes():
    reps = run_suite([Check("same", lhs=x1, rhs=x1), Check("same", lhs=x2, rhs=x2)])
    assert [r.name for r in reps] == ["same#0", "same#1"]


def test_failures_inside_a_build_are_captured():
    def broken():
        raise RuntimeError("boom")
    rep = run_check(Check("b", build=broken))
    assert not rep.passed and "boom" in rep.note


def test_informational_checks_do_not_affect_the_verdict():
    reps = run_suite([Check("ok", lhs=x1, rhs=x1), Check("probe", lhs=x1, rhs=x2, informational=True)])
    probe = next(r for r in reps if r.name == "probe")
    assert not probe.passed and probe.note.startswith("informational residual")
    assert overall(reps)


def test_outcome_checks():
    rep = run_check(Check("v", outcome=lambda: (False, "detail")))
    assert rep.symbolic == "verdict" and not rep.passed and rep.note == "detail"


def test_json_report_is_deterministic_and_sorted():
    checks = [Check("b", lhs=add(x1, x2), rhs=add(x2, x1)), Check("a", lhs=x1, rhs=mul(2, x1))]
    one = serialize_json(run_suite(checks, fd_guard=True), report_header(42, 1e-9, 100))
    two = serialize_json(run_suite(checks, fd_guard=True), report_header(42, 1e-9, 100))
    assert one == two
    rows = [json.loads(line) for line in one.splitlines()]
    assert [r["name"] for r in rows[1:-1]] == ["a", "b", "fd-guard"]
    assert rows[-1]["summary"]["overall"] is False


def test_fd_guard_counts_derivatives():
    F = exponential_structure()
    reps = run_suite([Check("N", build=lambda: (nijenhuis(F), nijenhuis(F)))], fd_guard=True)
    guard = next(r for r in reps if r.name == "fd-guard")
    assert guard.passed and int(guard.note.split()[0]) > 0


def test_invalid_check_parameters():
    with pytest.raises(ValueError):
        Check("x", lhs=x1, rhs=x1, tolerance=0)
    with pytest.raises(ValueError):
        Check("x", lhs=x1, rhs=x1, mode="fast")
