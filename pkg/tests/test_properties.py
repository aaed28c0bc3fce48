"""Property-based checks against independent oracles (sympy, central differences)."""

import cmath

import sympy as sp
from conftest import to_sympy
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from liftcalc.canonical import is_zero, normalize, simplify
from liftcalc.expr import (
    VarRef,
    add,
    const,
    differentiate,
    eval_numeric,
    mul,
    power,
    sub,
    to_text,
    total_derivative,
    var,
)
from liftcalc.geometry import ExtendedChart, ScalarField
from liftcalc.lifts import binomial, lift_scalar
from liftcalc.parser import parse_expression

SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])

coeff = st.integers(-3, 3)
atoms = st.sampled_from([var(0, 1), var(0, 2)])


@st.composite
def polys(draw, max_terms=4):
    terms = []
    for _ in range(draw(st.integers(0, max_terms))):
        c = draw(coeff)
        factors = draw(st.lists(atoms, max_size=2))
        terms.append(mul(c, *factors))
    return add(*terms)


@st.composite
def exprs(draw):
    p, q = draw(polys()), draw(polys())
    shape = draw(st.integers(0, 3))
    if shape == 0:
        return p
    if shape == 1:
        return mul(p, q)
    if shape == 2:
        return power(add(p, 1), draw(st.integers(0, 3)))
    return sub(p, mul(const(0, draw(coeff)), q))


@SETTINGS
@given(exprs(), exprs())
def test_canonical_zero_agrees_with_sympy(a, b):
    assert is_zero(sub(a, b)) == (sp.expand(to_sympy(a) - to_sympy(b)) == 0)


@SETTINGS
@given(exprs())
def test_simplify_preserves_value(e):
    assert sp.expand(to_sympy(simplify(e)) - to_sympy(e)) == 0


@SETTINGS
@given(exprs())
def test_print_parse_round_trip(e):
    assert parse_expression(to_text(e)) == e


@SETTINGS
@given(exprs(), st.sampled_from([1, 2]))
def test_derivative_agrees_with_sympy(e, index):
    got = to_sympy(differentiate(e, VarRef(0, index)))
    assert sp.expand(got - sp.diff(to_sympy(e), sp.Symbol(f"x{index}_0"))) == 0


@SETTINGS
@given(polys(), polys())
def test_total_derivative_is_a_derivation(f, g):
    lhs = total_derivative(mul(f, g))
    rhs = add(mul(total_derivative(f), g), mul(f, total_derivative(g)))
    assert is_zero(sub(lhs, rhs))


@SETTINGS
@given(polys(), polys(), st.integers(1, 3))
def test_binomial_leibniz_for_scalar_lifts(f, g, r):
    B = ExtendedChart(2)
    F, G = ScalarField(B, f), ScalarField(B, g)
    lhs = lift_scalar(F * G, (r, 0)).expr
    rhs = add(*(mul(binomial(r, j), lift_scalar(F, (r - j, j)).expr, lift_scalar(G, (j, r - j)).expr)
                for j in range(r + 1)))
    assert is_zero(sub(lhs, rhs))


@SETTINGS
@given(exprs(), st.floats(-2, 2), st.floats(-2, 2))
def test_numeric_evaluation_matches_sympy(e, a, b):
    point = {VarRef(0, 1): a, VarRef(0, 2): b}
    want = complex(to_sympy(e).subs({sp.Symbol("x1_0"): a, sp.Symbol("x2_0"): b}).evalf())
    got = eval_numeric(e, point)
    assert cmath.isclose(got, want, rel_tol=1e-9, abs_tol=1e-9)


@SETTINGS
@given(exprs())
def test_normal_form_is_idempotent(e):
    assert normalize(simplify(e)) == normalize(e)
