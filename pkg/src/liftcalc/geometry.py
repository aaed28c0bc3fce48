"""Charts of extended manifolds and tensor fields stored as component arrays.

Every field lives on an :class:`ExtendedChart` of base dimension ``n`` and
order ``k``; the extended frame is ``d/dx^(r)a`` for ``r = 0..k`` and
``a = 1..n``, flattened as ``r*n + (a-1)``.  Base-manifold fields are the
``k = 0`` case.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .expr import (
    I_EXPR,
    ONE_EXPR,
    ZERO_EXPR,
    Expr,
    VarRef,
    add,
    as_expr,
    const,
    differentiate,
    mul,
    neg,
    var,
)


class ChartMismatch(ValueError):
    pass


@dataclass(frozen=True)
class ExtendedChart:
    base_dim: int
    order: int = 0
    complex_pairs: int | None = None

    def __post_init__(self):
        if self.base_dim < 1:
            raise ValueError("base dimension must be >= 1")
        if self.order < 0:
            raise ValueError("order must be >= 0")
        if self.complex_pairs is not None and 2 * self.complex_pairs != self.base_dim:
            raise ValueError(
                f"complex_pairs = {self.complex_pairs} requires dim = {2 * self.complex_pairs}, got {self.base_dim}"
            )

    @property
    def dim(self) -> int:
        return self.base_dim * (self.order + 1)

    def flat(self, level: int, index: int) -> int:
        return level * self.base_dim + index - 1

    def slot(self, i: int) -> tuple[int, int]:
        """Inverse of :meth:`flat`: ``(level, index)``."""
        return divmod(i, self.base_dim)[0], i % self.base_dim + 1

    def coordinates(self) -> list[VarRef]:
        return [VarRef(*self.slot(i)) for i in range(self.dim)]

    def coordinate(self, level: int, index: int) -> Expr:
        return var(level, index)

    def base(self) -> ExtendedChart:
        return ExtendedChart(self.base_dim, 0, self.complex_pairs)

    def with_order(self, order: int) -> ExtendedChart:
        return ExtendedChart(self.base_dim, order, self.complex_pairs)

    def check_expr(self, e: Expr, what: str = "expression") -> None:
        for v in e.free:
            if v.index > self.base_dim:
                raise ValueError(f"{what} uses {v} but the chart has dimension {self.base_dim}")
            if v.level > self.order:
                raise ValueError(f"{what} uses {v} above chart order {self.order}")

    def label(self, i: int) -> str:
        r, a = self.slot(i)
        return f"{a}@{r}"


def _same_chart(*fields) -> ExtendedChart:
    chart = fields[0].chart
    for f in fields[1:]:
        if f.chart != chart:
            raise ChartMismatch(f"chart mismatch: {chart} vs {f.chart}")
    return chart


@dataclass(frozen=True)
class ScalarField:
    chart: ExtendedChart
    expr: Expr

    kind = "scalar"

    def __post_init__(self):
        object.__setattr__(self, "expr", as_expr(self.expr))
        self.chart.check_expr(self.expr, "scalar field")

    def flat(self) -> tuple[Expr, ...]:
        return (self.expr,)

    def __add__(self, other: ScalarField) -> ScalarField:
        return ScalarField(_same_chart(self, other), add(self.expr, other.expr))

    def __sub__(self, other: ScalarField) -> ScalarField:
        return ScalarField(_same_chart(self, other), add(self.expr, neg(other.expr)))

    def __mul__(self, other: ScalarField) -> ScalarField:
        return ScalarField(_same_chart(self, other), mul(self.expr, other.expr))

    def scale(self, c) -> ScalarField:
        return ScalarField(self.chart, mul(c, self.expr))


class _ComponentField:
    """Shared behaviour of vector fields and 1-forms (one Expr per frame slot)."""

    __slots__ = ()
    kind = "?"

    def _validate(self):
        comps = tuple(as_expr(c) for c in self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) != self.chart.dim:
            raise ValueError(f"{self.kind} has {len(comps)} components, chart needs {self.chart.dim}")
        for i, c in enumerate(comps):
            self.chart.check_expr(c, f"{self.kind} component {self.chart.label(i)}")

    def flat(self) -> tuple[Expr, ...]:
        return self.components

    def __getitem__(self, slot: tuple[int, int]) -> Expr:
        return self.components[self.chart.flat(*slot)]

    def __add__(self, other):
        chart = _same_chart(self, other)
        return type(self)(chart, tuple(add(a, b) for a, b in zip(self.components, other.components)))

    def __sub__(self, other):
        chart = _same_chart(self, other)
        return type(self)(chart, tuple(add(a, neg(b)) for a, b in zip(self.components, other.components)))

    def __neg__(self):
        return type(self)(self.chart, tuple(neg(c) for c in self.components))

    def scale(self, f) -> _ComponentField:
        f = f.expr if isinstance(f, ScalarField) else as_expr(f)
        return type(self)(self.chart, tuple(mul(f, c) for c in self.components))

    @classmethod
    def zero(cls, chart: ExtendedChart):
        return cls(chart, (ZERO_EXPR,) * chart.dim)

    @classmethod
    def basis(cls, chart: ExtendedChart, level: int, index: int):
        comps = [ZERO_EXPR] * chart.dim
        comps[chart.flat(level, index)] = ONE_EXPR
        return cls(chart, tuple(comps))


@dataclass(frozen=True)
class VectorField(_ComponentField):
    """``sum X^(r,a) d/dx^(r)a``."""

    chart: ExtendedChart
    components: tuple[Expr, ...]

    kind = "vector"

    def __post_init__(self):
        self._validate()

    def act(self, f) -> Expr:
        """Directional derivative ``X(f)``."""
        f = f.expr if isinstance(f, ScalarField) else as_expr(f)
        coords = self.chart.coordinates()
        return add(*(mul(c, differentiate(f, v)) for c, v in zip(self.components, coords) if not c.is_zero()))


@dataclass(frozen=True)
class OneForm(_ComponentField):
    """``sum w_(r,a) dx^(r)a``."""

    chart: ExtendedChart
    components: tuple[Expr, ...]

    kind = "oneform"

    def __post_init__(self):
        self._validate()

    def __call__(self, X: VectorField) -> Expr:
        _same_chart(self, X)
        return add(*(mul(a, b) for a, b in zip(self.components, X.components)))

    def after(self, F: Endo11) -> OneForm:
        """The 1-form ``w o F``."""
        chart = _same_chart(self, F)
        d = chart.dim
        return OneForm(chart, tuple(add(*(mul(self.components[i], F.matrix[i][j]) for i in range(d))) for j in range(d)))


@dataclass(frozen=True)
class Endo11:
    """A (1,1)-tensor: ``matrix[i][j]`` is the ``d/dx_i`` component of ``F(d/dx_j)``."""

    chart: ExtendedChart
    matrix: tuple[tuple[Expr, ...], ...]

    kind = "endo"

    def __post_init__(self):
        m = tuple(tuple(as_expr(e) for e in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        d = self.chart.dim
        if len(m) != d or any(len(row) != d for row in m):
            raise ValueError(f"endomorphism must be {d}x{d}")
        for i, row in enumerate(m):
            for j, e in enumerate(row):
                self.chart.check_expr(e, f"endomorphism entry ({self.chart.label(i)}, {self.chart.label(j)})")

    @classmethod
    def from_images(cls, chart: ExtendedChart, images: Sequence[VectorField]) -> Endo11:
        """Build from the images of the frame fields, in frame order."""
        d = chart.dim
        return cls(chart, tuple(tuple(images[j].components[i] for j in range(d)) for i in range(d)))

    @classmethod
    def identity(cls, chart: ExtendedChart) -> Endo11:
        d = chart.dim
        return cls(chart, tuple(tuple(ONE_EXPR if i == j else ZERO_EXPR for j in range(d)) for i in range(d)))

    @classmethod
    def zero(cls, chart: ExtendedChart) -> Endo11:
        d = chart.dim
        return cls(chart, ((ZERO_EXPR,) * d,) * d)

    def flat(self) -> tuple[Expr, ...]:
        return tuple(e for row in self.matrix for e in row)

    def column(self, j: int) -> VectorField:
        """Image of the ``j``-th frame field."""
        return VectorField(self.chart, tuple(row[j] for row in self.matrix))

    def __call__(self, X: VectorField) -> VectorField:
        return apply_endo(self, X)

    def __matmul__(self, other: Endo11) -> Endo11:
        return compose_endo(self, other)

    def __add__(self, other: Endo11) -> Endo11:
        chart = _same_chart(self, other)
        return Endo11(chart, tuple(tuple(add(a, b) for a, b in zip(r1, r2)) for r1, r2 in zip(self.matrix, other.matrix)))

    def __sub__(self, other: Endo11) -> Endo11:
        return self + (-other)

    def __neg__(self) -> Endo11:
        return Endo11(self.chart, tuple(tuple(neg(e) for e in row) for row in self.matrix))

    def scale(self, f) -> Endo11:
        f = as_expr(f)
        return Endo11(self.chart, tuple(tuple(mul(f, e) for e in row) for row in self.matrix))

    def trace(self) -> Expr:
        return add(*(self.matrix[i][i] for i in range(self.chart.dim)))


@dataclass(frozen=True)
class Tensor12:
    """``components[i][j][l]``: ``d/dx_i`` component of ``N(d/dx_j, d/dx_l)``."""

    chart: ExtendedChart
    components: tuple

    kind = "tensor12"

    def __post_init__(self):
        c = tuple(tuple(tuple(as_expr(e) for e in row) for row in plane) for plane in self.components)
        object.__setattr__(self, "components", c)
        d = self.chart.dim
        if len(c) != d or any(len(p) != d or any(len(r) != d for r in p) for p in c):
            raise ValueError(f"(1,2)-tensor must be {d}x{d}x{d}")

    @classmethod
    def from_pairs(cls, chart: ExtendedChart, values: dict[tuple[int, int], VectorField]) -> Tensor12:
        """Build from ``N(frame_j, frame_l)`` given for every pair present in ``values``."""
        d = chart.dim
        zero = VectorField.zero(chart)
        return cls(chart, tuple(tuple(tuple(values.get((j, l), zero).components[i] for l in range(d))
                                      for j in range(d)) for i in range(d)))

    def flat(self) -> tuple[Expr, ...]:
        return tuple(e for p in self.components for r in p for e in r)

    def on_frame(self, j: int, l: int) -> VectorField:
        return VectorField(self.chart, tuple(self.components[i][j][l] for i in range(self.chart.dim)))

    def __call__(self, X: VectorField, Y: VectorField) -> VectorField:
        chart = _same_chart(self, X, Y)
        d = chart.dim
        out = []
        for i in range(d):
            out.append(add(*(mul(self.components[i][j][l], X.components[j], Y.components[l])
                             for j in range(d) if not X.components[j].is_zero()
                             for l in range(d) if not Y.components[l].is_zero())))
        return VectorField(chart, tuple(out))

    def __sub__(self, other: Tensor12) -> Tensor12:
        chart = _same_chart(self, other)
        return Tensor12(chart, tuple(tuple(tuple(add(a, neg(b)) for a, b in zip(r1, r2)) for r1, r2 in zip(p1, p2))
                                     for p1, p2 in zip(self.components, other.components)))

    def swapped(self) -> Tensor12:
        """``N'(X, Y) = N(Y, X)``."""
        d = self.chart.dim
        c = self.components
        return Tensor12(self.chart, tuple(tuple(tuple(c[i][l][j] for l in range(d)) for j in range(d)) for i in range(d)))


# -- operations -------------------------------------------------------------

def apply_endo(F: Endo11, X: VectorField) -> VectorField:
    chart = _same_chart(F, X)
    d = chart.dim
    nz = [j for j in range(d) if not X.components[j].is_zero()]
    return VectorField(chart, tuple(add(*(mul(F.matrix[i][j], X.components[j]) for j in nz)) for i in range(d)))


def compose_endo(F: Endo11, G: Endo11) -> Endo11:
    """``(FG)X = F(GX)``."""
    chart = _same_chart(F, G)
    d = chart.dim
    rows = []
    for i in range(d):
        Fi = F.matrix[i]
        rows.append(tuple(
            add(*(mul(Fi[l], G.matrix[l][j]) for l in range(d) if not Fi[l].is_zero()))
            for j in range(d)
        ))
    return Endo11(chart, tuple(rows))


def tensor_product(U: VectorField, w: OneForm) -> Endo11:
    """``(U (x) w)(X) = w(X) U``."""
    chart = _same_chart(U, w)
    return Endo11(chart, tuple(tuple(mul(u, a) for a in w.components) for u in U.components))


def canonical_Jk(chart: ExtendedChart) -> Endo11:
    """The standard structure ``d/dx -> d/dy, d/dy -> -d/dx`` on every level."""
    if chart.complex_pairs is None:
        raise ValueError("chart has no complex pairing")
    m = chart.complex_pairs
    images = []
    for i in range(chart.dim):
        r, a = chart.slot(i)
        if a <= m:
            images.append(VectorField.basis(chart, r, a + m))
        else:
            images.append(-VectorField.basis(chart, r, a - m))
    return Endo11.from_images(chart, images)


# -- Wirtinger view ---------------------------------------------------------

def wirtinger_frame(chart: ExtendedChart) -> tuple[list[list[Expr]], list[list[Expr]]]:
    """Frame-change matrices ``(P, P_inv)``.

    Column ``q`` of ``P`` holds the real-frame components of the ``q``-th
    complex frame field.  Complex frame order per level: ``d/dz_1..d/dz_m``
    then ``d/dzbar_1..d/dzbar_m``.
    """
    if chart.complex_pairs is None:
        raise ValueError("chart has no complex pairing")
    m = chart.complex_pairs
    d = chart.dim
    half = const(1, 0) / 2
    P = [[ZERO_EXPR] * d for _ in range(d)]
    Pinv = [[ZERO_EXPR] * d for _ in range(d)]
    for r in range(chart.order + 1):
        for a in range(1, m + 1):
            x, y = chart.flat(r, a), chart.flat(r, a + m)
            z, zb = x, y  # complex slots reuse the real slot positions
            # d/dz = (d/dx - i d/dy)/2, d/dzbar = (d/dx + i d/dy)/2
            P[x][z] = half
            P[y][z] = mul(half, neg(I_EXPR))
            P[x][zb] = half
            P[y][zb] = mul(half, I_EXPR)
            # d/dx = d/dz + d/dzbar, d/dy = i (d/dz - d/dzbar)
            Pinv[z][x] = ONE_EXPR
            Pinv[zb][x] = ONE_EXPR
            Pinv[z][y] = I_EXPR
            Pinv[zb][y] = neg(I_EXPR)
    return P, Pinv


def _matmul(A, B) -> list[list[Expr]]:
    n = len(A)
    return [[add(*(mul(A[i][l], B[l][j]) for l in range(n) if not A[i][l].is_zero() and not B[l][j].is_zero()))
             for j in range(n)] for i in range(n)]


def to_wirtinger(F: Endo11) -> list[list[Expr]]:
    """Matrix of ``F`` in the complex frame: ``P_inv . F . P``."""
    P, Pinv = wirtinger_frame(F.chart)
    return _matmul(_matmul(Pinv, [list(r) for r in F.matrix]), P)


def from_wirtinger(chart: ExtendedChart, W: Sequence[Sequence[Expr]]) -> Endo11:
    P, Pinv = wirtinger_frame(chart)
    return Endo11(chart, tuple(tuple(r) for r in _matmul(_matmul(P, [list(r) for r in W]), Pinv)))


def fields_chart(fields: Iterable) -> ExtendedChart:
    return _same_chart(*fields)
