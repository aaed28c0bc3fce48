"""Canonical rational-function forms used as the zero-proof backend.

A :class:`CanonicalForm` is ``num / den`` with both sides sparse polynomials
over Gaussian rationals in *atoms*: coordinates, plus primitive applications
(``sin``, ``cos``, ``exp``) treated as opaque symbols keyed by the canonical
form of their argument.  ``gcd(num, den) == 1`` and the graded-lex leading
coefficient of ``den`` is 1, so equal rational functions of the atoms have
identical forms.

``exp`` gets one extra rule: integer-coefficient terms of its argument are
split off, ``exp(n*m + rest) = exp(m)**n * exp(rest)``, which makes
``exp(x) * exp(-x)`` cancel.  No other relation between primitives is used.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key, lru_cache

from .expr import (
    Add,
    Const,
    Expr,
    Func,
    Mul,
    Pow,
    Quot,
    Var,
    VarRef,
    add,
    as_expr,
    func,
    mul,
    power,
    quot,
)
from .gaussian import ONE, ZERO, GaussianRational

# Monomial: tuple of (atom_key, exponent) sorted by atom_key, exponents > 0.
# Atom keys: (0, level, index) for coordinates, (1, name, argtext) for primitives.
_ATOMS: dict[tuple, object] = {}


@dataclass(frozen=True)
class PrimAtom:
    name: str
    arg: CanonicalForm

    @property
    def key(self) -> tuple:
        return (1, self.name, self.arg.text())


def _atom_key(atom) -> tuple:
    if isinstance(atom, VarRef):
        key = (0, atom.level, atom.index)
    else:
        key = atom.key
    _ATOMS.setdefault(key, atom)
    return key


def _mono_mul(m1: tuple, m2: tuple) -> tuple:
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    while i < len(m1) and j < len(m2):
        k1, e1 = m1[i]
        k2, e2 = m2[j]
        if k1 == k2:
            out.append((k1, e1 + e2))
            i += 1
            j += 1
        elif k1 < k2:
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def _mono_degree(m: tuple) -> int:
    return sum(e for _, e in m)


def _grlex_cmp(m1: tuple, m2: tuple) -> int:
    d1, d2 = _mono_degree(m1), _mono_degree(m2)
    if d1 != d2:
        return -1 if d1 < d2 else 1
    i = 0
    while i < len(m1) and i < len(m2):
        (k1, e1), (k2, e2) = m1[i], m2[i]
        if k1 != k2:
            # the monomial carrying the earlier variable is larger
            return 1 if k1 < k2 else -1
        if e1 != e2:
            return 1 if e1 > e2 else -1
        i += 1
    return (len(m1) > i) - (len(m2) > i)


_GRLEX = cmp_to_key(_grlex_cmp)


class Poly:
    """Immutable sparse polynomial ``{monomial: GaussianRational}``."""

    __slots__ = ("_hash", "terms")

    def __init__(self, terms: dict):
        self.terms = terms
        self._hash = None

    @classmethod
    def constant(cls, c: GaussianRational) -> Poly:
        return cls({} if c.is_zero() else {(): c})

    @classmethod
    def atom(cls, atom) -> Poly:
        return cls({((_atom_key(atom), 1),): ONE})

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_value(self) -> GaussianRational:
        return self.terms.get((), ZERO)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other: Poly) -> Poly:
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s.is_zero():
                    del out[m]
                else:
                    out[m] = s
        return Poly(out)

    def __neg__(self) -> Poly:
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        if not self.terms or not other.terms:
            return ZERO_POLY
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                c = c1 * c2
                s = out.get(m)
                if s is None:
                    out[m] = c
                else:
                    s = s + c
                    if s.is_zero():
                        del out[m]
                    else:
                        out[m] = s
        return Poly(out)

    def scale(self, c: GaussianRational) -> Poly:
        if c.is_zero():
            return ZERO_POLY
        return Poly({m: v * c for m, v in self.terms.items()})

    def __pow__(self, n: int) -> Poly:
        result = ONE_POLY
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def sorted_terms(self) -> list[tuple[tuple, GaussianRational]]:
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: _GRLEX(t[0]), reverse=True)

    def leading(self) -> tuple[tuple, GaussianRational]:
        return max(self.terms.items(), key=lambda t: _GRLEX(t[0]))

    def atom_keys(self) -> set:
        return {k for m in self.terms for k, _ in m}

    def monomial_content(self) -> tuple:
        """Largest monomial dividing every term."""
        it = iter(self.terms)
        common = dict(next(it))
        for m in it:
            md = dict(m)
            common = {k: min(e, md[k]) for k, e in common.items() if k in md}
            if not common:
                break
        return tuple(sorted(common.items()))

    def divide_monomial(self, mono: tuple) -> Poly:
        if not mono:
            return self
        md = dict(mono)
        out = {}
        for m, c in self.terms.items():
            nm = []
            for k, e in m:
                r = e - md.get(k, 0)
                if r < 0:
                    raise ArithmeticError("monomial does not divide polynomial")
                if r:
                    nm.append((k, r))
            out[tuple(nm)] = c
        return Poly(out)

    def to_expr(self) -> Expr:
        terms = []
        for m, c in self.sorted_terms():
            factors = [power(_atom_expr(k), e) for k, e in m]
            terms.append(mul(Const(c), *factors))
        return add(*terms)

    def text(self) -> str:
        from .expr import to_text

        return to_text(self.to_expr())


ZERO_POLY = Poly({})
ONE_POLY = Poly({(): ONE})


def _atom_expr(key: tuple) -> Expr:
    atom = _ATOMS[key]
    if isinstance(atom, VarRef):
        return Var(atom)
    return func(atom.name, atom.arg.to_expr())


def _mono_text(mono: tuple) -> str:
    from .expr import to_text

    return to_text(mul(*(power(_atom_expr(k), e) for k, e in mono))) if mono else "1"


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    num: Poly
    den: Poly

    def __eq__(self, other):
        return isinstance(other, CanonicalForm) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    @property
    def residual(self) -> bool:
        """True when a primitive atom survives in the form."""
        return any(k[0] == 1 for k in self.num.atom_keys() | self.den.atom_keys())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den == ONE_POLY

    def to_expr(self) -> Expr:
        if self.is_polynomial():
            return self.num.to_expr()
        return quot(self.num.to_expr(), self.den.to_expr())

    def text(self) -> str:
        from .expr import to_text

        return to_text(self.to_expr())

    def leading_monomial_text(self) -> str:
        """Human-readable monomial of the leading numerator term."""
        if self.num.is_zero():
            return "0"
        mono, coeff = self.num.leading()
        return f"{coeff}*{_mono_text(mono)}" if mono else str(coeff)

    def __str__(self):
        return self.text()


ZERO_FORM = CanonicalForm(ZERO_POLY, ONE_POLY)


# -- rational arithmetic ----------------------------------------------------

def _reduce(num: Poly, den: Poly) -> CanonicalForm:
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return ZERO_FORM
    if not den.is_constant():
        content = _common_monomial(num, den)
        if content:
            num = num.divide_monomial(content)
            den = den.divide_monomial(content)
        if not den.is_monomial() and not num.is_monomial():
            num, den = _cancel(num, den)
    _, lc = den.leading()
    if not lc.is_one():
        inv = lc.inverse()
        num, den = num.scale(inv), den.scale(inv)
    return CanonicalForm(num, den)


def _common_monomial(a: Poly, b: Poly) -> tuple:
    ca, cb = dict(a.monomial_content()), dict(b.monomial_content())
    return tuple(sorted((k, min(e, cb[k])) for k, e in ca.items() if k in cb))


def _cancel(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    """Divide out the polynomial gcd (delegated to sympy's sparse rings)."""
    from sympy.polys.domains import QQ_I
    from sympy.polys.rings import ring

    keys = sorted(num.atom_keys() | den.atom_keys())
    R, *_ = ring(",".join(f"g{i}" for i in range(len(keys))), QQ_I)
    index = {k: i for i, k in enumerate(keys)}

    def to_sympy(p: Poly):
        out = R.zero
        for m, c in p.terms.items():
            expv = [0] * len(keys)
            for k, e in m:
                expv[index[k]] = e
            out += R({tuple(expv): QQ_I(_mpq(c.re), _mpq(c.im))})
        return out

    def from_sympy(p) -> Poly:
        terms = {}
        for expv, c in p.terms():
            mono = tuple((keys[i], e) for i, e in enumerate(expv) if e)
            terms[mono] = GaussianRational(_frac(c.x), _frac(c.y))
        return Poly(terms)

    sn, sd = to_sympy(num), to_sympy(den)
    g = sn.gcd(sd)
    if g.is_ground:
        return num, den
    return from_sympy(sn.exquo(g)), from_sympy(sd.exquo(g))


def _mpq(fr):
    from sympy.polys.domains import QQ

    return QQ(fr.numerator, fr.denominator)


def _frac(q):
    from fractions import Fraction

    return Fraction(int(q.numerator), int(q.denominator))


def form_add(a: CanonicalForm, b: CanonicalForm) -> CanonicalForm:
    if a.num.is_zero():
        return b
    if b.num.is_zero():
        return a
    if a.den == b.den:
        if a.den == ONE_POLY:
            return CanonicalForm(a.num + b.num, ONE_POLY)
        return _reduce(a.num + b.num, a.den)
    return _reduce(a.num * b.den + b.num * a.den, a.den * b.den)


def form_mul(a: CanonicalForm, b: CanonicalForm) -> CanonicalForm:
    if a.num.is_zero() or b.num.is_zero():
        return ZERO_FORM
    if a.den == ONE_POLY and b.den == ONE_POLY:
        return CanonicalForm(a.num * b.num, ONE_POLY)
    return _reduce(a.num * b.num, a.den * b.den)


def form_inv(a: CanonicalForm) -> CanonicalForm:
    if a.num.is_zero():
        raise ZeroDivisionError("zero denominator")
    return _reduce(a.den, a.num)


def form_pow(a: CanonicalForm, n: int) -> CanonicalForm:
    if n < 0:
        a = form_inv(a)
        n = -n
    if n == 0:
        return CanonicalForm(ONE_POLY, ONE_POLY)
    return CanonicalForm(a.num ** n, a.den ** n)


def _constant_form(c: GaussianRational) -> CanonicalForm:
    return CanonicalForm(Poly.constant(c), ONE_POLY)


# -- normalization ----------------------------------------------------------

def normalize(e: Expr) -> CanonicalForm:
    """Canonical form of ``e``.

    Raises ``ZeroDivisionError("zero denominator")`` when a divisor
    normalizes to the zero form.
    """
    return _normalize(as_expr(e))


@lru_cache(maxsize=1 << 16)
def _normalize(e: Expr) -> CanonicalForm:
    if isinstance(e, Const):
        return _constant_form(e.value)
    if isinstance(e, Var):
        return CanonicalForm(Poly.atom(e.ref), ONE_POLY)
    if isinstance(e, Add):
        acc = ZERO_FORM
        for t in e.terms:
            acc = form_add(acc, _normalize(t))
        return acc
    if isinstance(e, Mul):
        acc = _constant_form(ONE)
        for f in e.factors:
            acc = form_mul(acc, _normalize(f))
        return acc
    if isinstance(e, Pow):
        return form_pow(_normalize(e.base), e.exp)
    if isinstance(e, Quot):
        return form_mul(_normalize(e.num), form_inv(_normalize(e.den)))
    if isinstance(e, Func):
        return _primitive(e.name, _normalize(e.arg))
    raise TypeError(type(e).__name__)


def _primitive(name: str, arg: CanonicalForm) -> CanonicalForm:
    if arg.is_zero():
        return _constant_form(ZERO if name == "sin" else ONE)
    if name != "exp" or not arg.is_polynomial():
        return CanonicalForm(Poly.atom(PrimAtom(name, arg)), ONE_POLY)
    result = _constant_form(ONE)
    rest = {}
    for mono, c in arg.num.terms.items():
        if c.is_integer():
            base = CanonicalForm(Poly({mono: ONE}), ONE_POLY)
            atom = CanonicalForm(Poly.atom(PrimAtom("exp", base)), ONE_POLY)
            result = form_mul(result, form_pow(atom, int(c.re)))
        else:
            rest[mono] = c
    if rest:
        leftover = CanonicalForm(Poly(rest), ONE_POLY)
        result = form_mul(result, CanonicalForm(Poly.atom(PrimAtom("exp", leftover)), ONE_POLY))
    return result


def is_zero(e: Expr) -> bool:
    """True iff ``e`` normalizes to the zero form."""
    return normalize(e).is_zero()


def simplify(e: Expr) -> Expr:
    """Rebuild ``e`` from its canonical form (for display)."""
    return normalize(e).to_expr()
