"""Vertical, complete and mixed lifts from a base chart to an order-k chart.

Vertical lifting leaves a component expression unchanged; complete lifting
applies the total derivative ``T``.  No factorial normalization is used, so
``f^{c^r} = T^r f`` and binomial coefficients appear wherever a product is
expanded.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

from .expr import ZERO_EXPR, Expr, iterated_total_derivative, mul
from .geometry import Endo11, ExtendedChart, OneForm, ScalarField, Tensor12, VectorField


class NotABaseField(ValueError):
    pass


@dataclass(frozen=True)
class LiftSpec:
    """``complete`` applications of the complete lift and ``vertical`` of the vertical one."""

    complete: int = 0
    vertical: int = 0

    def __post_init__(self):
        if self.complete < 0 or self.vertical < 0:
            raise ValueError("lift counts must be >= 0")

    @property
    def order(self) -> int:
        return self.complete + self.vertical

    @classmethod
    def c(cls, k: int) -> LiftSpec:
        return cls(k, 0)

    @classmethod
    def v(cls, k: int) -> LiftSpec:
        return cls(0, k)

    def __str__(self):
        return f"c^{self.complete} v^{self.vertical}"


def binomial(r: int, j: int) -> int:
    return comb(r, j)


def _require_base(field) -> None:
    chart = field.chart
    if chart.order != 0:
        raise NotABaseField(f"not a base field: chart order is {chart.order}")
    for e in field.flat():
        if e.max_level() > 0:
            raise NotABaseField(f"not a base field: {e} uses level > 0")


def _T(e: Expr, times: int) -> Expr:
    return iterated_total_derivative(e, times)


def _spec(spec) -> LiftSpec:
    if isinstance(spec, LiftSpec):
        return spec
    a, b = spec
    return LiftSpec(a, b)


def lift_scalar(f: ScalarField, spec) -> ScalarField:
    spec = _spec(spec)
    _require_base(f)
    chart = f.chart.with_order(spec.order)
    return ScalarField(chart, _T(f.expr, spec.complete))


def lift_vector(X: VectorField, spec) -> VectorField:
    """Component ``T^s(X^i)`` at level ``s + vertical`` for ``s = 0..complete``."""
    spec = _spec(spec)
    _require_base(X)
    n = X.chart.base_dim
    chart = X.chart.with_order(spec.order)
    comps = [ZERO_EXPR] * chart.dim
    for s in range(spec.complete + 1):
        level = s + spec.vertical
        for a in range(1, n + 1):
            comps[chart.flat(level, a)] = _T(X.components[a - 1], s)
    return VectorField(chart, tuple(comps))


def lift_oneform(alpha: OneForm, spec) -> OneForm:
    """Component ``C(complete, s) T^(complete-s)(alpha_i)`` at level ``s``."""
    spec = _spec(spec)
    _require_base(alpha)
    n = alpha.chart.base_dim
    a_ = spec.complete
    chart = alpha.chart.with_order(spec.order)
    comps = [ZERO_EXPR] * chart.dim
    for s in range(a_ + 1):
        for i in range(1, n + 1):
            comps[chart.flat(s, i)] = mul(comb(a_, s), _T(alpha.components[i - 1], a_ - s))
    return OneForm(chart, tuple(comps))


def lift_endo_complete(F: Endo11, k: int) -> Endo11:
    """``F^c(d/dx^(b)j) = sum_{s>=b} C(s,b) T^(s-b)(F^i_j) d/dx^(s)i``."""
    _require_base(F)
    n = F.chart.base_dim
    chart = F.chart.with_order(k)
    d = chart.dim
    rows = [[ZERO_EXPR] * d for _ in range(d)]
    for b in range(k + 1):
        for s in range(b, k + 1):
            c = comb(s, b)
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    rows[chart.flat(s, i)][chart.flat(b, j)] = mul(c, _T(F.matrix[i - 1][j - 1], s - b))
    return Endo11(chart, tuple(tuple(r) for r in rows))


def lift_endo_vertical(F: Endo11, k: int) -> Endo11:
    """``F^v(d/dx^(0)j) = F^i_j d/dx^(k)i``; zero on higher-level frame fields."""
    _require_base(F)
    n = F.chart.base_dim
    chart = F.chart.with_order(k)
    d = chart.dim
    rows = [[ZERO_EXPR] * d for _ in range(d)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            rows[chart.flat(k, i)][chart.flat(0, j)] = F.matrix[i - 1][j - 1]
    return Endo11(chart, tuple(tuple(r) for r in rows))


def lift_tensor12_complete(N: Tensor12, k: int) -> Tensor12:
    """Complete lift of a (1,2)-tensor, characterized by ``N^c(X^c, Y^c) = (N(X, Y))^c``.

    ``N^c(d/dx^(b)j, d/dx^(e)l) = sum_{s >= b+e} s!/(b! e! (s-b-e)!) T^(s-b-e)(N^i_jl) d/dx^(s)i``.
    """
    _require_base(N)
    n = N.chart.base_dim
    chart = N.chart.with_order(k)
    d = chart.dim
    comps = [[[ZERO_EXPR] * d for _ in range(d)] for _ in range(d)]
    for b in range(k + 1):
        for e in range(k + 1 - b):
            for s in range(b + e, k + 1):
                c = factorial(s) // (factorial(b) * factorial(e) * factorial(s - b - e))
                for i in range(1, n + 1):
                    for j in range(1, n + 1):
                        for l in range(1, n + 1):
                            base = N.components[i - 1][j - 1][l - 1]
                            if base.is_zero():
                                continue
                            comps[chart.flat(s, i)][chart.flat(b, j)][chart.flat(e, l)] = mul(c, _T(base, s - b - e))
    return Tensor12(chart, comps)


def lift_field(field, spec):
    """Dispatch on field kind.  Endomorphisms accept pure complete or pure vertical lifts only."""
    spec = _spec(spec)
    if isinstance(field, ScalarField):
        return lift_scalar(field, spec)
    if isinstance(field, VectorField):
        return lift_vector(field, spec)
    if isinstance(field, OneForm):
        return lift_oneform(field, spec)
    if isinstance(field, Endo11):
        if spec.vertical == 0:
            return lift_endo_complete(field, spec.complete)
        if spec.complete == 0:
            return lift_endo_vertical(field, spec.vertical)
        raise ValueError("mixed lifts of endomorphisms are not supported")
    if isinstance(field, Tensor12):
        if spec.vertical:
            raise ValueError("only complete lifts of (1,2)-tensors are supported")
        return lift_tensor12_complete(field, spec.complete)
    raise TypeError(f"cannot lift {type(field).__name__}")


def complete(field, k: int):
    return lift_field(field, LiftSpec(k, 0))


def vertical(field, k: int):
    return lift_field(field, LiftSpec(0, k))


def base_chart(n: int, complex_pairs: int | None = None) -> ExtendedChart:
    return ExtendedChart(n, 0, complex_pairs)
