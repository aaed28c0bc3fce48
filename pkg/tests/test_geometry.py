import numpy as np
import pytest

from liftcalc.canonical import is_zero
from liftcalc.expr import (
    I_EXPR,
    ONE_EXPR,
    ZERO_EXPR,
    VarRef,
    eval_numeric,
    neg,
    sub,
    var,
)
from liftcalc.geometry import (
    ChartMismatch,
    Endo11,
    ExtendedChart,
    OneForm,
    VectorField,
    apply_endo,
    canonical_Jk,
    compose_endo,
    from_wirtinger,
    tensor_product,
    to_wirtinger,
    wirtinger_frame,
)
from liftcalc.theorems import FieldFactory


def zero_endo(F):
    return all(is_zero(e) for e in F.flat())


def same_field(a, b):
    return all(is_zero(sub(x, y)) for x, y in zip(a.flat(), b.flat()))


def test_flat_index_layout():
    c = ExtendedChart(3, 2)
    assert c.dim == 9
    assert c.flat(2, 1) == 6
    assert all(c.slot(c.flat(r, a)) == (r, a) for r in range(3) for a in (1, 2, 3))


def test_chart_validation():
    with pytest.raises(ValueError):
        ExtendedChart(0)
    with pytest.raises(ValueError):
        ExtendedChart(2, -1)
    with pytest.raises(ValueError):
        ExtendedChart(3, 0, complex_pairs=1)


def test_fields_reject_variables_outside_the_chart():
    with pytest.raises(ValueError):
        VectorField(ExtendedChart(2), (var(1, 1), 0))
    with pytest.raises(ValueError):
        VectorField(ExtendedChart(2), (var(0, 3), 0))


def test_canonical_structure_on_the_plane():
    c = ExtendedChart(2, 0, 1)
    J = canonical_Jk(c)
    dx, dy = VectorField.basis(c, 0, 1), VectorField.basis(c, 0, 2)
    assert apply_endo(J, dx) == dy
    assert same_field(apply_endo(J, dy), -dx)


@pytest.mark.parametrize("m, k", [(1, 0), (1, 2), (2, 1)])
def test_canonical_structure_squares_to_minus_identity(m, k):
    c = ExtendedChart(2 * m, k, m)
    J = canonical_Jk(c)
    assert zero_endo(compose_endo(J, J) + Endo11.identity(c))


def test_compose_with_identity():
    F = FieldFactory(ExtendedChart(2), 3).endo()
    assert compose_endo(F, Endo11.identity(F.chart)) == F


def test_compose_matches_dense_matrix_product(rng):
    c = ExtendedChart(3)
    A = rng.integers(-5, 6, size=(3, 3))
    B = rng.integers(-5, 6, size=(3, 3))
    F = Endo11(c, tuple(tuple(int(v) for v in row) for row in A))
    G = Endo11(c, tuple(tuple(int(v) for v in row) for row in B))
    got = np.array([[eval_numeric(e, {}) for e in row] for row in compose_endo(F, G).matrix])
    np.testing.assert_allclose(got, A @ B)


def test_apply_identity_and_rank_one():
    fac = FieldFactory(ExtendedChart(3), 11)
    X, U, w = fac.vector(), fac.vector(), fac.oneform()
    assert apply_endo(Endo11.identity(X.chart), X) == X
    assert same_field(apply_endo(tensor_product(U, w), X), U.scale(w(X)))


def test_rank_one_projection_and_trace():
    c = ExtendedChart(2)
    P = tensor_product(VectorField.basis(c, 0, 1), OneForm.basis(c, 0, 1))
    assert P.matrix == ((ONE_EXPR, ZERO_EXPR), (ZERO_EXPR, ZERO_EXPR))
    assert is_zero(sub(P.trace(), 1))


def test_rank_one_square_is_pairing_times_itself(rng):
    fac = FieldFactory(ExtendedChart(3), 5)
    U, w = fac.vector(), fac.oneform()
    T = tensor_product(U, w)
    lhs, rhs = compose_endo(T, T), T.scale(w(U))
    point = {VarRef(0, a): complex(rng.uniform(-2, 2)) for a in (1, 2, 3)}
    for a, b in zip(lhs.flat(), rhs.flat()):
        assert abs(eval_numeric(a, point) - eval_numeric(b, point)) < 1e-9


def test_wirtinger_view_diagonalizes_the_canonical_structure():
    c = ExtendedChart(4, 1, 2)
    W = to_wirtinger(canonical_Jk(c))
    for q in range(c.dim):
        want = I_EXPR if c.slot(q)[1] <= 2 else neg(I_EXPR)
        for p in range(c.dim):
            assert is_zero(sub(W[p][q], want if p == q else ZERO_EXPR))


def test_wirtinger_eigenvector_on_the_plane():
    c = ExtendedChart(2, 0, 1)
    W = to_wirtinger(canonical_Jk(c))
    assert is_zero(sub(W[0][0], I_EXPR)) and is_zero(W[1][0])


def test_wirtinger_view_of_identity():
    c = ExtendedChart(2, 1, 1)
    W = to_wirtinger(Endo11.identity(c))
    assert all(is_zero(sub(W[p][q], ONE_EXPR if p == q else ZERO_EXPR)) for p in range(4) for q in range(4))


def test_frame_change_matrices_are_inverse():
    c = ExtendedChart(4, 1, 2)
    P, Pinv = wirtinger_frame(c)
    Pn = np.array([[eval_numeric(e, {}) for e in row] for row in P])
    Qn = np.array([[eval_numeric(e, {}) for e in row] for row in Pinv])
    np.testing.assert_allclose(np.linalg.inv(Pn), Qn, atol=1e-14)


def test_wirtinger_round_trip_on_a_random_endomorphism():
    c = ExtendedChart(2, 0, 1)
    F = FieldFactory(c, 17).endo()
    assert same_field(from_wirtinger(c, to_wirtinger(F)), F)


def test_chart_mismatch_is_rejected():
    a = VectorField.zero(ExtendedChart(2))
    b = Endo11.identity(ExtendedChart(3))
    with pytest.raises(ChartMismatch):
        apply_endo(b, a)
