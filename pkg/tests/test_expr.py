import numpy as np
import pytest
from conftest import sympy_equal, to_sympy

from liftcalc.expr import (
    I_EXPR,
    NumericError,
    UnassignedVariable,
    VarRef,
    add,
    const,
    cos,
    denominators,
    differentiate,
    eval_numeric,
    exp,
    iterated_total_derivative,
    mul,
    power,
    quot,
    record_derivatives,
    sin,
    to_text,
    total_derivative,
    var,
)
from liftcalc.parser import parse_expression

x1, x2 = var(0, 1), var(0, 2)
X1 = VarRef(0, 1)


def test_power_rule():
    assert sympy_equal(differentiate(power(x1, 2), X1), mul(2, x1))


def test_independent_variable_has_zero_derivative():
    assert differentiate(x2, X1).is_zero()


def test_derivative_of_product_against_central_differences(rng):
    e = mul(sin(x1), x2)
    d = differentiate(e, X1)
    want = mul(cos(x1), x2)
    h = 1e-5
    for _ in range(20):
        a, b = rng.uniform(-2, 2, size=2)
        fd = (np.sin(a + h) * b - np.sin(a - h) * b) / (2 * h)
        got = eval_numeric(d, {X1: a, VarRef(0, 2): b})
        assert abs(got - fd) <= 1e-6 * max(1.0, abs(fd))
        assert abs(got - eval_numeric(want, {X1: a, VarRef(0, 2): b})) < 1e-12


def test_derivatives_agree_with_sympy():
    e = parse_expression("exp(x1*x2)/(1 + x1^2) - cos(x2)^3")
    for v in (X1, VarRef(0, 2)):
        want = to_sympy(e).diff(to_sympy(var(0, v.index)))
        assert (to_sympy(differentiate(e, v)) - want).simplify() == 0


def test_total_derivative_of_coordinate_raises_level():
    assert total_derivative(x1) == var(1, 1)


def test_total_derivative_of_constant_is_zero():
    assert total_derivative(const(7, -2)).is_zero()


def test_total_derivative_obeys_leibniz():
    got = total_derivative(mul(x1, x2))
    want = add(mul(var(1, 1), x2), mul(x1, var(1, 2)))
    assert sympy_equal(got, want)


def test_iterated_total_derivative_matches_chain_rule_along_a_curve():
    # x_a^(r) plays the role of the r-th time derivative of x_a(t)
    import sympy as sp
    t = sp.Symbol("t")
    curves = {a: sp.Function(f"c{a}")(t) for a in (1, 2)}
    e = parse_expression("x1^2*x2 + sin(x2)")
    f = to_sympy(e).subs({sp.Symbol(f"x{a}_0"): curves[a] for a in curves})
    for r in (1, 2, 3):
        lifted = to_sympy(iterated_total_derivative(e, r))
        subs = {sp.Symbol(f"x{a}_{s}"): sp.diff(curves[a], t, s) for a in curves for s in range(r + 1)}
        assert sp.simplify(lifted.subs(subs) - sp.diff(f, t, r)) == 0


def test_evaluation_examples():
    assert eval_numeric(add(x1, mul(I_EXPR, x2)), {X1: 1, VarRef(0, 2): 2}) == 1 + 2j
    assert eval_numeric(add(power(x1, 2), 1), {X1: 2}) == 5
    assert eval_numeric(sin(x1), {X1: 0}) == 0


def test_evaluation_errors():
    with pytest.raises(UnassignedVariable):
        eval_numeric(x2, {X1: 1})
    with pytest.raises(NumericError):
        eval_numeric(quot(1, x1), {X1: 0})


def test_denominators_collects_divisors():
    e = add(quot(1, x1), power(add(x2, 1), -2))
    assert set(denominators([e])) == {x1, add(x2, 1)}


def test_record_derivatives_sees_top_level_calls():
    e = mul(x1, x2)
    with record_derivatives() as seen:
        differentiate(e, X1)
    assert (e, X1) in seen


@pytest.mark.parametrize("text", [
    "x1@0^2 + i*x2@1", "-(x1^2)", "(x1 + x2)^3", "1/(1 - x1)", "exp(-x1)*sin(2*x2)",
    "(1 - 3/4*i)*x1", "x1^-2", "(-x1)^2",
])
def test_printing_round_trips_through_the_parser(text):
    e = parse_expression(text)
    assert parse_expression(to_text(e)) == e


def test_exp_of_sum_matches_sympy():
    assert sympy_equal(exp(add(x1, x2)), mul(exp(x1), exp(x2)))
