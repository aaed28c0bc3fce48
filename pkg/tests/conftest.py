"""Shared oracles.

The sympy translation below is deliberately independent of the engine's own
canonical form: it rebuilds an expression tree node by node and lets sympy
decide equality.
"""

from __future__ import annotations

import numpy as np
import pytest
import sympy as sp

from liftcalc.expr import Add, Const, Func, Mul, Pow, Quot, Var, VarRef, eval_numeric


def sym_var(ref: VarRef) -> sp.Symbol:
    return sp.Symbol(f"x{ref.index}_{ref.level}")


def to_sympy(e):
    if isinstance(e, Const):
        return sp.Rational(e.value.re.numerator, e.value.re.denominator) + sp.I * sp.Rational(
            e.value.im.numerator, e.value.im.denominator)
    if isinstance(e, Var):
        return sym_var(e.ref)
    if isinstance(e, Add):
        return sp.Add(*(to_sympy(t) for t in e.terms))
    if isinstance(e, Mul):
        return sp.Mul(*(to_sympy(f) for f in e.factors))
    if isinstance(e, Pow):
        return to_sympy(e.base) ** e.exp
    if isinstance(e, Quot):
        return to_sympy(e.num) / to_sympy(e.den)
    if isinstance(e, Func):
        return getattr(sp, e.name)(to_sympy(e.arg))
    raise TypeError(type(e))


def sympy_equal(a, b) -> bool:
    return sp.simplify(to_sympy(a) - to_sympy(b)) == 0


def random_point(exprs, rng, box=2.0):
    refs = sorted({v for e in exprs for v in e.free})
    return {v: complex(rng.uniform(-box, box)) for v in refs}


def numeric_equal(a, b, n=20, tol=1e-9, seed=0) -> bool:
    rng = np.random.default_rng(seed)
    for _ in range(n):
        p = random_point([a, b], rng)
        if abs(eval_numeric(a, p) - eval_numeric(b, p)) > tol * (1 + abs(eval_numeric(b, p))):
            return False
    return True


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
