"""Immutable expression trees over leveled coordinates.

Coordinates are ``x<a>@<r>``: slot ``a`` (1-based) of the base manifold at
extension level ``r``.  Constants are exact :class:`GaussianRational` values.
Construction applies only local simplifications (flattening, constant
folding, dropping neutral elements); anything stronger lives in
:mod:`liftcalc.canonical`.
"""

from __future__ import annotations

import cmath
import contextlib
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .gaussian import ONE, ZERO, GaussianRational

PRIMITIVES = ("sin", "cos", "exp")


@dataclass(frozen=True, order=True)
class VarRef:
    level: int
    index: int

    def __post_init__(self):
        if self.level < 0 or self.index < 1:
            raise ValueError(f"invalid coordinate level={self.level} index={self.index}")

    def __str__(self):
        return f"x{self.index}@{self.level}"

    def raised(self, by: int = 1) -> VarRef:
        return VarRef(self.level + by, self.index)


class NumericError(ArithmeticError):
    """Raised when numeric evaluation divides by zero."""

    def __init__(self, message: str, subexpr: Expr | None = None):
        super().__init__(message)
        self.subexpr = subexpr


class UnassignedVariable(KeyError):
    def __init__(self, ref: VarRef):
        super().__init__(f"no value assigned to {ref}")
        self.ref = ref

    def __str__(self):
        return self.args[0]


class Expr:
    """Base node.  Subclasses define ``_key`` (structural identity)."""

    __slots__ = ("_free", "_hash")

    def _init(self, key) -> None:
        self._hash = hash((type(self).__name__, key))
        self._free = None

    def _key(self):  # pragma: no cover - abstract
        raise NotImplementedError

    def children(self) -> tuple[Expr, ...]:
        return ()

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or self._hash != other._hash:
            return False
        return self._key() == other._key()

    def __ne__(self, other):
        return not self == other

    @property
    def free(self) -> frozenset[VarRef]:
        """Coordinates the expression depends on (syntactically)."""
        if self._free is None:
            acc: frozenset[VarRef] = frozenset()
            for c in self.children():
                acc = acc | c.free
            self._free = acc
        return self._free

    def max_level(self) -> int:
        """Highest coordinate level used, or -1 for constants."""
        return max((v.level for v in self.free), default=-1)

    def is_zero(self) -> bool:
        return isinstance(self, Const) and self.value.is_zero()

    def is_one(self) -> bool:
        return isinstance(self, Const) and self.value.is_one()

    # operator sugar
    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __truediv__(self, other):
        return quot(self, other)

    def __rtruediv__(self, other):
        return quot(other, self)

    def __pow__(self, n):
        return power(self, n)

    def __neg__(self):
        return neg(self)

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"Expr({to_text(self)!r})"


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value: GaussianRational):
        self.value = value
        self._init(value)

    def _key(self):
        return self.value


class Var(Expr):
    __slots__ = ("ref",)

    def __init__(self, ref: VarRef):
        self.ref = ref
        self._init(ref)
        self._free = frozenset((ref,))

    def _key(self):
        return self.ref


class Add(Expr):
    __slots__ = ("terms",)

    def __init__(self, terms: tuple[Expr, ...]):
        self.terms = terms
        self._init(terms)

    def _key(self):
        return self.terms

    def children(self):
        return self.terms


class Mul(Expr):
    __slots__ = ("factors",)

    def __init__(self, factors: tuple[Expr, ...]):
        self.factors = factors
        self._init(factors)

    def _key(self):
        return self.factors

    def children(self):
        return self.factors


class Pow(Expr):
    __slots__ = ("base", "exp")

    def __init__(self, base: Expr, exp: int):
        self.base = base
        self.exp = exp
        self._init((base, exp))

    def _key(self):
        return (self.base, self.exp)

    def children(self):
        return (self.base,)


class Quot(Expr):
    __slots__ = ("den", "num")

    def __init__(self, num: Expr, den: Expr):
        self.num = num
        self.den = den
        self._init((num, den))

    def _key(self):
        return (self.num, self.den)

    def children(self):
        return (self.num, self.den)


class Func(Expr):
    __slots__ = ("arg", "name")

    def __init__(self, name: str, arg: Expr):
        self.name = name
        self.arg = arg
        self._init((name, arg))

    def _key(self):
        return (self.name, self.arg)

    def children(self):
        return (self.arg,)


# -- construction -----------------------------------------------------------

def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, VarRef):
        return Var(value)
    return Const(GaussianRational.coerce(value))


def const(re=0, im=0) -> Const:
    return Const(GaussianRational(re, im))


def var(level: int, index: int) -> Var:
    return Var(VarRef(level, index))


ZERO_EXPR = Const(ZERO)
ONE_EXPR = Const(ONE)
I_EXPR = Const(GaussianRational(0, 1))


def add(*terms) -> Expr:
    flat: list[Expr] = []
    c = ZERO
    for t in terms:
        t = as_expr(t)
        parts = t.terms if isinstance(t, Add) else (t,)
        for p in parts:
            if isinstance(p, Const):
                c = c + p.value
            else:
                flat.append(p)
    if not c.is_zero():
        flat.insert(0, Const(c))
    if not flat:
        return ZERO_EXPR
    if len(flat) == 1:
        return flat[0]
    return Add(tuple(flat))


def mul(*factors) -> Expr:
    flat: list[Expr] = []
    c = ONE
    for f in factors:
        f = as_expr(f)
        parts = f.factors if isinstance(f, Mul) else (f,)
        for p in parts:
            if isinstance(p, Const):
                c = c * p.value
            else:
                flat.append(p)
        if c.is_zero():
            return ZERO_EXPR
    if not c.is_one():
        flat.insert(0, Const(c))
    if not flat:
        return ONE_EXPR
    if len(flat) == 1:
        return flat[0]
    return Mul(tuple(flat))


def neg(e) -> Expr:
    return mul(Const(GaussianRational(-1)), e)


def sub(a, b) -> Expr:
    return add(a, neg(b))


def power(base, n: int) -> Expr:
    if not isinstance(n, int):
        raise TypeError("exponents must be integers")
    base = as_expr(base)
    if n == 0:
        return ONE_EXPR
    if n == 1:
        return base
    if isinstance(base, Const):
        if base.value.is_zero() and n < 0:
            raise ZeroDivisionError("zero denominator")
        return Const(base.value ** n)
    return Pow(base, n)


def quot(num, den) -> Expr:
    num, den = as_expr(num), as_expr(den)
    if isinstance(den, Const):
        if den.value.is_zero():
            raise ZeroDivisionError("zero denominator")
        if isinstance(num, Const):
            return Const(num.value / den.value)
        if den.value.is_one():
            return num
    if num.is_zero():
        return ZERO_EXPR
    return Quot(num, den)


def func(name: str, arg) -> Expr:
    if name not in PRIMITIVES:
        raise ValueError(f"unknown primitive {name!r}; expected one of {', '.join(PRIMITIVES)}")
    arg = as_expr(arg)
    if arg.is_zero():
        return ZERO_EXPR if name == "sin" else ONE_EXPR
    return Func(name, arg)


def sin(arg) -> Expr:
    return func("sin", arg)


def cos(arg) -> Expr:
    return func("cos", arg)


def exp(arg) -> Expr:
    return func("exp", arg)


# -- differentiation --------------------------------------------------------

_recorders: list[dict] = []


@contextlib.contextmanager
def record_derivatives() -> Iterator[dict]:
    """Collect every top-level ``(expr, var)`` pair passed to :func:`differentiate`.

    Yields an insertion-ordered dict used as an ordered set.
    """
    seen: dict = {}
    _recorders.append(seen)
    try:
        yield seen
    finally:
        _recorders.remove(seen)


def differentiate(e: Expr, v: VarRef) -> Expr:
    """Partial derivative of ``e`` with respect to coordinate ``v``."""
    for rec in _recorders:
        rec.setdefault((e, v), None)
    return _diff(e, v)


@lru_cache(maxsize=1 << 17)
def _diff(e: Expr, v: VarRef) -> Expr:
    if v not in e.free:
        return ZERO_EXPR
    if isinstance(e, Var):
        return ONE_EXPR
    if isinstance(e, Add):
        return add(*(_diff(t, v) for t in e.terms))
    if isinstance(e, Mul):
        fs = e.factors
        out = []
        for i, f in enumerate(fs):
            df = _diff(f, v)
            if not df.is_zero():
                out.append(mul(*fs[:i], df, *fs[i + 1:]))
        return add(*out)
    if isinstance(e, Pow):
        return mul(e.exp, power(e.base, e.exp - 1), _diff(e.base, v))
    if isinstance(e, Quot):
        u, w = e.num, e.den
        top = sub(mul(_diff(u, v), w), mul(u, _diff(w, v)))
        return quot(top, power(w, 2))
    if isinstance(e, Func):
        da = _diff(e.arg, v)
        if e.name == "sin":
            return mul(cos(e.arg), da)
        if e.name == "cos":
            return neg(mul(sin(e.arg), da))
        return mul(e, da)
    raise TypeError(f"cannot differentiate {type(e).__name__}")


def total_derivative(e: Expr) -> Expr:
    """``T(e) = sum over coordinates x^(r)a of x^(r+1)a * de/dx^(r)a``."""
    return add(*(mul(Var(v.raised()), differentiate(e, v)) for v in sorted(e.free)))


def iterated_total_derivative(e: Expr, times: int) -> Expr:
    for _ in range(times):
        e = total_derivative(e)
    return e


# -- numeric evaluation -----------------------------------------------------

def eval_numeric(e: Expr, point: Mapping[VarRef, complex]) -> complex:
    """Evaluate ``e`` in double-precision complex arithmetic at ``point``."""
    return complex(evaluate(e, point))


def evaluate(e: Expr, point: Mapping, memo: dict | None = None):
    """Evaluate with scalar or numpy-array coordinate values.

    ``memo`` may be shared across calls with the same ``point`` so common
    subtrees of many components are evaluated once.
    """
    if memo is None:
        memo = {}
    return _eval(e, point, memo)


def _eval(e: Expr, point, memo):
    hit = memo.get(e)
    if hit is not None:
        return hit
    if isinstance(e, Const):
        val = complex(e.value)
    elif isinstance(e, Var):
        try:
            val = point[e.ref]
        except KeyError:
            raise UnassignedVariable(e.ref) from None
    elif isinstance(e, Add):
        val = _eval(e.terms[0], point, memo)
        for t in e.terms[1:]:
            val = val + _eval(t, point, memo)
    elif isinstance(e, Mul):
        val = _eval(e.factors[0], point, memo)
        for f in e.factors[1:]:
            val = val * _eval(f, point, memo)
    elif isinstance(e, Pow):
        b = _eval(e.base, point, memo)
        if e.exp < 0:
            _check_nonzero(b, e.base)
        val = b ** e.exp
    elif isinstance(e, Quot):
        d = _eval(e.den, point, memo)
        _check_nonzero(d, e.den)
        val = _eval(e.num, point, memo) / d
    elif isinstance(e, Func):
        a = _eval(e.arg, point, memo)
        if isinstance(a, np.ndarray):
            val = getattr(np, e.name)(a)
        else:
            val = getattr(cmath, e.name)(a)
    else:  # pragma: no cover
        raise TypeError(type(e).__name__)
    memo[e] = val
    return val


def _check_nonzero(value, subexpr: Expr) -> None:
    if np.any(value == 0):
        raise NumericError(f"division by zero in {to_text(subexpr)}", subexpr)


def walk(e: Expr) -> Iterator[Expr]:
    """Pre-order traversal visiting each distinct subtree once."""
    seen = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        yield node
        stack.extend(node.children())


def denominators(exprs: Iterable[Expr]) -> list[Expr]:
    """Every expression that appears as a divisor (quotient or negative power)."""
    out = {}
    seen: set = set()
    for root in exprs:
        stack = [root]
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            if isinstance(node, Quot):
                out.setdefault(node.den, None)
            elif isinstance(node, Pow) and node.exp < 0:
                out.setdefault(node.base, None)
            stack.extend(node.children())
    return list(out)


# -- printing ---------------------------------------------------------------

def to_text(e: Expr) -> str:
    """Render in the grammar accepted by :func:`liftcalc.parser.parse_expression`.

    Parsing the output rebuilds a structurally equal tree.
    """
    if isinstance(e, Const):
        return _const_text(e.value)
    if isinstance(e, Var):
        return str(e.ref)
    if isinstance(e, Add):
        return " + ".join(_wrap(t, _ADD) for t in e.terms)
    if isinstance(e, Mul):
        return "*".join(_wrap(f, _MUL) for f in e.factors)
    if isinstance(e, Pow):
        ex = str(e.exp) if e.exp >= 0 else f"({e.exp})"
        return f"{_wrap(e.base, _POW)}^{ex}"
    if isinstance(e, Quot):
        return f"{_wrap(e.num, _MUL)}/{_wrap(e.den, _POW)}"
    if isinstance(e, Func):
        return f"{e.name}({to_text(e.arg)})"
    raise TypeError(type(e).__name__)


_ADD, _MUL, _POW = 1, 2, 3


def _const_text(c: GaussianRational) -> str:
    re, im = c.re, c.im
    if im == 0:
        return str(re)
    mag = "i" if abs(im) == 1 else f"{abs(im)}*i"
    if re == 0:
        return mag if im > 0 else f"-{mag}"
    return f"{re} {'+' if im > 0 else '-'} {mag}"


def _precedence(e: Expr) -> int:
    if isinstance(e, Add):
        return _ADD
    if isinstance(e, (Mul, Quot)):
        return _MUL
    if isinstance(e, Pow):
        return _POW
    if isinstance(e, Const):
        c = e.value
        if not c.is_real() and c.re != 0:
            return _ADD
        if c.re == 0 and c.im == 1:
            return 4
        if not c.is_real() or c.re.denominator != 1:
            return _MUL
        if c.re < 0:
            return _MUL
        return 4
    return 4


def _wrap(e: Expr, ctx: int) -> str:
    text = to_text(e)
    if _precedence(e) <= ctx:
        return f"({text})"
    return text
