"""Lie brackets, Lie derivatives, the Nijenhuis tensor and structure checks."""

from __future__ import annotations

from dataclasses import dataclass, field

from .expr import ONE_EXPR, ZERO_EXPR, Expr, add, as_expr, differentiate, neg
from .gaussian import GaussianRational
from .geometry import (
    ChartMismatch,
    Endo11,
    OneForm,
    ScalarField,
    Tensor12,
    VectorField,
    apply_endo,
    compose_endo,
    tensor_product,
)
from .lifts import complete, lift_endo_complete, vertical
from .verify import INCONCLUSIVE, PROVEN, flatten, prove_zero, sample_check


def _same(a, b):
    if a.chart != b.chart:
        raise ChartMismatch(f"chart mismatch: {a.chart} vs {b.chart}")
    return a.chart


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    chart = _same(X, Y)
    return VectorField(chart, tuple(add(X.act(y), neg(Y.act(x))) for x, y in zip(X.components, Y.components)))


def partial_of(Y: VectorField, j: int) -> VectorField:
    """Componentwise derivative of ``Y`` along frame slot ``j``; equals ``[d_j, Y]``."""
    v = Y.chart.coordinates()[j]
    return VectorField(Y.chart, tuple(differentiate(c, v) for c in Y.components))


def lie_derivative(X: VectorField, T):
    """Lie derivative of a scalar, vector, 1-form or (1,1)-tensor along ``X``."""
    _same(X, T)
    if isinstance(T, ScalarField):
        return ScalarField(T.chart, X.act(T.expr))
    if isinstance(T, VectorField):
        return lie_bracket(X, T)
    if isinstance(T, OneForm):
        # (L_X a)(d_j) = X(a_j) - a([X, d_j]) = X(a_j) + a(d_j X)
        d = T.chart.dim
        return OneForm(T.chart, tuple(add(X.act(T.components[j]), T(partial_of(X, j))) for j in range(d)))
    if isinstance(T, Endo11):
        # (L_X F)(d_j) = [X, F d_j] - F[X, d_j] = [X, F d_j] + F(d_j X)
        d = T.chart.dim
        cols = [lie_bracket(X, T.column(j)) + apply_endo(T, partial_of(X, j)) for j in range(d)]
        return Endo11.from_images(T.chart, cols)
    raise TypeError(f"no Lie derivative for {type(T).__name__}")


def nijenhuis(F: Endo11) -> Tensor12:
    """``N(X,Y) = [FX,FY] + F^2[X,Y] - F[FX,Y] - F[X,FY]`` on every ordered frame pair."""
    d = F.chart.dim
    cols = [F.column(j) for j in range(d)]
    values = {}
    for j in range(d):
        for l in range(d):
            if j == l:
                continue
            # frame fields commute; [F d_j, d_l] = -d_l(F d_j) and [d_j, F d_l] = d_j(F d_l)
            val = lie_bracket(cols[j], cols[l]) + apply_endo(F, partial_of(cols[j], l)) - apply_endo(F, partial_of(cols[l], j))
            values[(j, l)] = val
    return Tensor12.from_pairs(F.chart, values)


# -- verdicts ---------------------------------------------------------------

@dataclass(frozen=True)
class Condition:
    name: str
    holds: bool
    status: str
    residual: Expr = ZERO_EXPR
    message: str = ""


@dataclass(frozen=True)
class StructureVerdict:
    holds: bool
    residual: Expr
    diagnostics: tuple[Condition, ...]
    base_holds: bool | None = None
    lifted_holds: bool | None = None
    notes: tuple[str, ...] = field(default=())

    @property
    def agreement(self) -> bool | None:
        if self.base_holds is None or self.lifted_holds is None:
            return None
        return self.base_holds == self.lifted_holds

    def failed(self) -> list[str]:
        return [c.message or c.name for c in self.diagnostics if not c.holds]

    def condition(self, name: str) -> Condition:
        for c in self.diagnostics:
            if c.name == name:
                return c
        raise KeyError(name)


def check_condition(name: str, lhs, rhs, message: str = "") -> Condition:
    """Componentwise zero test of ``lhs - rhs``; primitives that survive fall back to sampling."""
    a, b = flatten(lhs), flatten(rhs)
    status = PROVEN
    for x, y in zip(a, b):
        if x == y:
            continue
        diff = add(x, neg(y))
        st = prove_zero(diff)
        if st.status == PROVEN:
            continue
        if st.status == INCONCLUSIVE and sample_check(diff, ZERO_EXPR, 100, 1e-9, seed=0).passed:
            status = "numeric-pass"
            continue
        return Condition(name, False, st.status, diff, message or f"{name} fails")
    return Condition(name, True, status)


def _verdict(conditions, base=None, lifted=None, notes=()) -> StructureVerdict:
    conditions = tuple(sorted(conditions, key=lambda c: c.name))
    bad = [c for c in conditions if not c.holds]
    return StructureVerdict(not bad, bad[0].residual if bad else ZERO_EXPR, conditions, base, lifted, tuple(notes))


def is_almost_complex(F: Endo11) -> StructureVerdict:
    """``F^2 + I = 0``."""
    I = Endo11.identity(F.chart)
    return _verdict([check_condition("F^2 + I = 0", compose_endo(F, F) + I, Endo11.zero(F.chart))])


def is_integrable(F: Endo11) -> StructureVerdict:
    N = nijenhuis(F)
    return _verdict([check_condition("N_F = 0", N, Tensor12(N.chart, _zeros3(N.chart.dim)))])


def _zeros3(d: int):
    return tuple(tuple((ZERO_EXPR,) * d for _ in range(d)) for _ in range(d))


@dataclass(frozen=True)
class AlmostContactTriple:
    F: Endo11
    U: VectorField
    omega: OneForm

    def __post_init__(self):
        if not (self.F.chart == self.U.chart == self.omega.chart):
            raise ChartMismatch("almost contact triple must live on one chart")

    @property
    def chart(self):
        return self.F.chart


PAIRING_ERRATUM = ("pairing convention w(U) = 1 (a literal w(U) = 0 contradicts the lifted relation "
                   "w^c(U^v) = 1 and admits no even-dimensional solution)")


def almost_contact_conditions(t: AlmostContactTriple) -> list[tuple[str, object, object, str]]:
    chart = t.chart
    I = Endo11.identity(chart)
    return [
        ("F^2 = -I + U(x)w", compose_endo(t.F, t.F), -I + tensor_product(t.U, t.omega), "F^2 ≠ -I + U⊗ω"),
        ("FU = 0", apply_endo(t.F, t.U), VectorField.zero(chart), "FU ≠ 0"),
        ("w o F = 0", t.omega.after(t.F), OneForm.zero(chart), "ω∘F ≠ 0"),
        ("w(U) = 1", t.omega(t.U), ONE_EXPR, "pairing ω(U) ≠ 1"),
    ]


def check_almost_contact(t: AlmostContactTriple) -> StructureVerdict:
    conds = [check_condition(name, lhs, rhs, msg) for name, lhs, rhs, msg in almost_contact_conditions(t)]
    return _verdict(conds, notes=(PAIRING_ERRATUM,))


class StructureError(ValueError):
    def __init__(self, message: str, verdict: StructureVerdict):
        super().__init__(message)
        self.verdict = verdict


def extended_structure(t: AlmostContactTriple, k: int) -> Endo11:
    """``F^c + U^v (x) w^v - U^c (x) w^c`` on the order-``k`` chart, without validating ``t``."""
    return (lift_endo_complete(t.F, k)
            + tensor_product(vertical(t.U, k), vertical(t.omega, k))
            - tensor_product(complete(t.U, k), complete(t.omega, k)))


def build_extended_structure(t: AlmostContactTriple, k: int) -> Endo11:
    verdict = check_almost_contact(t)
    if not verdict.holds:
        raise StructureError("not an almost contact structure: " + ", ".join(verdict.failed()), verdict)
    return extended_structure(t, k)


def lifted_contact_square_residual(t: AlmostContactTriple, k: int) -> Endo11:
    """``(F^c)^2 + I - U^v (x) w^c - U^c (x) w^v``: zero at ``k = 1``, not in general."""
    Fc = lift_endo_complete(t.F, k)
    I = Endo11.identity(Fc.chart)
    two_term = tensor_product(vertical(t.U, k), complete(t.omega, k)) + tensor_product(complete(t.U, k), vertical(t.omega, k))
    return compose_endo(Fc, Fc) + I - two_term


def almost_analytic_vertical(X: VectorField, t: AlmostContactTriple, k: int) -> StructureVerdict:
    """Both sides of the vertical almost-analyticity criterion, reported separately."""
    base = [
        check_condition("L_X F = 0", lie_derivative(X, t.F), Endo11.zero(t.chart), "£_X F ≠ 0"),
        check_condition("L_X U = 0", lie_derivative(X, t.U), VectorField.zero(t.chart), "£_X U ≠ 0"),
        check_condition("L_X w = 0", lie_derivative(X, t.omega), OneForm.zero(t.chart), "£_X ω ≠ 0"),
    ]
    J = build_extended_structure(t, k)
    LJ = lie_derivative(vertical(X, k), J)
    lifted = check_condition("lifted: L_{X^v} J~ = 0", LJ, Endo11.zero(J.chart), "£_{X^v} J̃ ≠ 0")
    base_ok = all(c.holds for c in base)
    return _verdict(base + [lifted], base_ok, lifted.holds)


def almost_analytic_complete(X: VectorField, t: AlmostContactTriple, k: int, C) -> StructureVerdict:
    """Base conditions ``L_X F = 0, L_X U = C U, L_X w = -C w`` against ``L_{X^c} J~ = 0``."""
    C = GaussianRational.coerce(C)
    if C.is_zero():
        raise ValueError("C must be non-zero")
    c = as_expr(C)
    base = [
        check_condition("L_X F = 0", lie_derivative(X, t.F), Endo11.zero(t.chart), "£_X F ≠ 0"),
        check_condition("L_X U = C U", lie_derivative(X, t.U), t.U.scale(c), "£_X U ≠ C·U"),
        check_condition("L_X w = -C w", lie_derivative(X, t.omega), t.omega.scale(neg(c)), "£_X ω ≠ −C·ω"),
    ]
    J = build_extended_structure(t, k)
    LJ = lie_derivative(complete(X, k), J)
    lifted = check_condition("lifted: L_{X^c} J~ = 0", LJ, Endo11.zero(J.chart), "£_{X^c} J̃ ≠ 0")
    base_ok = all(c.holds for c in base)
    return _verdict(base + [lifted], base_ok, lifted.holds)
