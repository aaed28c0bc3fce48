import pytest
from conftest import sympy_equal

from liftcalc.canonical import is_zero
from liftcalc.expr import ONE_EXPR, add, mul, power, sub, var
from liftcalc.geometry import (
    Endo11,
    ExtendedChart,
    OneForm,
    ScalarField,
    VectorField,
    apply_endo,
    canonical_Jk,
    compose_endo,
)
from liftcalc.lifts import (
    LiftSpec,
    NotABaseField,
    complete,
    lift_endo_complete,
    lift_endo_vertical,
    lift_field,
    lift_oneform,
    lift_scalar,
    lift_vector,
    vertical,
)
from liftcalc.theorems import FieldFactory

B2, B3 = ExtendedChart(2), ExtendedChart(3)
x1, x2 = var(0, 1), var(0, 2)


def same(a, b):
    return a.chart == b.chart and all(is_zero(sub(p, q)) for p, q in zip(a.flat(), b.flat()))


def test_complete_lift_of_a_coordinate():
    assert lift_scalar(ScalarField(B2, x1), (1, 0)).expr == var(1, 1)


def test_vertical_lift_keeps_the_expression():
    f = ScalarField(B2, add(power(x1, 3), x2))
    for k in (1, 2, 3):
        g = lift_scalar(f, (0, k))
        assert g.expr == f.expr and g.chart.order == k


def test_second_complete_lift_of_a_square():
    got = lift_scalar(ScalarField(B2, power(x1, 2)), (2, 0)).expr
    want = add(mul(2, x1, var(2, 1)), mul(2, power(var(1, 1), 2)))
    # oracle: apply T twice by hand, T(x1^2) = 2 x1 x1', T(2 x1 x1') = 2 x1'^2 + 2 x1 x1''
    assert sympy_equal(got, want)


def test_target_order_is_complete_plus_vertical():
    X = FieldFactory(B3, 1).vector()
    assert lift_vector(X, LiftSpec(2, 1)).chart.order == 3


def test_vertical_lift_of_a_frame_field_sits_at_the_top_level():
    X = VectorField.basis(B2, 0, 1)
    assert lift_vector(X, (0, 1)) == VectorField.basis(ExtendedChart(2, 1), 1, 1)


def test_first_complete_lift_of_a_vector():
    X = VectorField(B2, (0, x1))
    got = lift_vector(X, (1, 0))
    C = ExtendedChart(2, 1)
    want = VectorField(C, (0, x1, 0, var(1, 1)))
    assert same(got, want)


def test_vertical_acting_on_complete_gives_vertical_of_action():
    X, f = VectorField(B2, (0, x1)), ScalarField(B2, x2)
    got = vertical(X, 1).act(complete(f, 1))
    assert is_zero(sub(got, x1))


def test_oneform_vertical_lift():
    a = OneForm.basis(B2, 0, 1)
    assert lift_oneform(a, (0, 1)) == OneForm.basis(ExtendedChart(2, 1), 0, 1)


def test_oneform_complete_lift_example():
    a = OneForm(B2, (x2, 0))
    C = ExtendedChart(2, 1)
    assert same(lift_oneform(a, (1, 0)), OneForm(C, (var(1, 2), 0, x2, 0)))


def test_oneform_complete_lift_against_pairing_oracle():
    fac = FieldFactory(B2, 9)
    a = OneForm(B2, (x2, 0))
    for _ in range(5):
        X = fac.vector()
        for r in (1, 2):
            lhs = complete(a, r)(complete(X, r))
            rhs = complete(ScalarField(B2, a(X)), r).expr
            assert is_zero(sub(lhs, rhs))


def test_vertical_form_on_complete_vector_pairs_to_one():
    a, X = OneForm.basis(B2, 0, 1), VectorField.basis(B2, 0, 1)
    assert is_zero(sub(vertical(a, 2)(complete(X, 2)), ONE_EXPR))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_identity_lifts_to_identity(k):
    assert lift_endo_complete(Endo11.identity(B3), k) == Endo11.identity(B3.with_order(k))


@pytest.mark.parametrize("k", [1, 2])
def test_constant_structure_lifts_to_canonical_structure(k):
    c = ExtendedChart(4, 0, 2)
    assert same(lift_endo_complete(canonical_Jk(c), k), canonical_Jk(c.with_order(k)))


@pytest.mark.parametrize("k", [1, 2])
def test_complete_endo_acts_on_complete_vectors(k):
    fac = FieldFactory(B2, 40 + k)
    F = Endo11(B2, ((x1, add(1, power(x1, 2))), (-1, mul(-1, x1))))
    for _ in range(5):
        X = fac.vector()
        assert same(apply_endo(lift_endo_complete(F, k), complete(X, k)), complete(apply_endo(F, X), k))


@pytest.mark.parametrize("k", [1, 2])
def test_vertical_endo_on_complete_vectors(k):
    fac = FieldFactory(B2, 50 + k)
    for _ in range(5):
        F, X = fac.endo(), fac.vector()
        assert same(apply_endo(lift_endo_vertical(F, k), complete(X, k)), vertical(apply_endo(F, X), k))


@pytest.mark.parametrize("k", [1, 2])
def test_vertical_endo_squares_to_zero(k):
    F = FieldFactory(B2, 60).endo()
    Fv = lift_endo_vertical(F, k)
    assert all(e.is_zero() for e in compose_endo(Fv, Fv).flat())


def test_vertical_identity_moves_base_frame_to_top_level():
    k = 2
    Iv = lift_endo_vertical(Endo11.identity(B2), k)
    C = B2.with_order(k)
    for a in (1, 2):
        assert Iv.column(C.flat(0, a)) == VectorField.basis(C, k, a)


def test_lifting_a_lifted_field_is_rejected():
    f = lift_scalar(ScalarField(B2, x1), (1, 0))
    with pytest.raises(NotABaseField, match="not a base field"):
        lift_scalar(f, (1, 0))


def test_mixed_endomorphism_lift_is_rejected():
    with pytest.raises(ValueError):
        lift_field(Endo11.identity(B2), LiftSpec(1, 1))


def test_negative_counts_are_rejected():
    with pytest.raises(ValueError):
        LiftSpec(-1, 0)
