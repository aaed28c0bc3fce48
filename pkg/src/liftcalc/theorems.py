"""Reference instances, random field generators and the built-in theorem suite.

Every identity in the suite is expressed as a :class:`~liftcalc.verify.Check`
whose sides are built lazily, so derivative recording (for the
finite-difference guard) and error capture both happen inside the run.

Formulas whose literal statement is false under the constructive lift
definitions appear twice: once in corrected form as a normal check and
once verbatim as an informational probe, so the residual stays visible.
"""

from __future__ import annotations

import random
from itertools import combinations_with_replacement
from math import comb

from .calculus import (
    AlmostContactTriple,
    almost_analytic_complete,
    almost_analytic_vertical,
    extended_structure,
    lie_bracket,
    lie_derivative,
    lifted_contact_square_residual,
    nijenhuis,
)
from .canonical import is_zero
from .expr import I_EXPR, ONE_EXPR, ZERO_EXPR, Expr, add, exp, mul, neg, var
from .geometry import (
    Endo11,
    ExtendedChart,
    OneForm,
    ScalarField,
    Tensor12,
    VectorField,
    apply_endo,
    canonical_Jk,
    compose_endo,
)
from .lifts import (
    complete,
    lift_endo_complete,
    lift_oneform,
    lift_scalar,
    lift_tensor12_complete,
    lift_vector,
    vertical,
)
from .verify import Check, derive_seed

COEFF_BOUND = 3
MAX_DEGREE = 2
TERM_PROBABILITY = 0.4


# -- random polynomial fields ----------------------------------------------

class FieldFactory:
    """Seeded source of random polynomial fields on a base chart."""

    def __init__(self, chart: ExtendedChart, seed: int):
        if chart.order != 0:
            raise ValueError("random fields live on a base chart")
        self.chart = chart
        self.rng = random.Random(seed)
        vs = [var(0, a) for a in range(1, chart.base_dim + 1)]
        self._monomials = [()] + [m for d in range(1, MAX_DEGREE + 1) for m in combinations_with_replacement(vs, d)]

    def poly(self) -> Expr:
        terms = []
        for mono in self._monomials:
            if self.rng.random() < TERM_PROBABILITY:
                c = self.rng.randint(-COEFF_BOUND, COEFF_BOUND)
                if c:
                    terms.append(mul(c, *mono))
        return add(*terms)

    def scalar(self) -> ScalarField:
        return ScalarField(self.chart, self.poly())

    def vector(self, zero_slots=()) -> VectorField:
        return VectorField(self.chart, tuple(ZERO_EXPR if a in zero_slots else self.poly()
                                             for a in range(self.chart.dim)))

    def oneform(self) -> OneForm:
        return OneForm(self.chart, tuple(self.poly() for _ in range(self.chart.dim)))

    def endo(self) -> Endo11:
        d = self.chart.dim
        return Endo11(self.chart, tuple(tuple(self.poly() for _ in range(d)) for _ in range(d)))


# -- reference instances ---------------------------------------------------

def r3_contact() -> AlmostContactTriple:
    """Real 3-d triple: F d1 = d2, F d2 = -d1, F d3 = 0, U = d3, w = dx3."""
    B = ExtendedChart(3)
    F = Endo11(B, ((0, -1, 0), (1, 0, 0), (0, 0, 0)))
    return AlmostContactTriple(F, VectorField(B, (0, 0, 1)), OneForm(B, (0, 0, 1)))


def complex_plane_contact() -> AlmostContactTriple:
    """Complex-valued 2-d triple: F d1 = 0, F d2 = i d2, U = d1, w = dx1."""
    B = ExtendedChart(2)
    F = Endo11(B, ((0, 0), (0, I_EXPR)))
    return AlmostContactTriple(F, VectorField(B, (1, 0)), OneForm(B, (1, 0)))


def exponential_structure() -> Endo11:
    """4-d almost complex F with d3 -> e^{x1} d4, d4 -> -e^{-x1} d3; not integrable."""
    B = ExtendedChart(4)
    x1 = var(0, 1)
    return Endo11.from_images(B, [
        VectorField(B, (0, 1, 0, 0)),
        VectorField(B, (-1, 0, 0, 0)),
        VectorField(B, (0, 0, 0, exp(x1))),
        VectorField(B, (0, 0, neg(exp(neg(x1))), 0)),
    ])


def trace_free_structure() -> Endo11:
    """``[[x1, 1 + x1^2], [-1, -x1]]``: trace 0 and determinant 1, so it squares to -I."""
    B = ExtendedChart(2)
    x1 = var(0, 1)
    return Endo11(B, ((x1, add(1, mul(x1, x1))), (-1, neg(x1))))


# -- suite assembly --------------------------------------------------------

def _sum(fields):
    total = None
    for f in fields:
        total = f if total is None else total + f
    return total


def _flag(holds: bool) -> str:
    return "holds" if holds else "fails"


class _Suite:
    def __init__(self, seed: int, samples: int, tol: float):
        self.seed, self.samples, self.tol = seed, samples, tol
        self.checks: list[Check] = []

    def factory(self, chart: ExtendedChart, label: str) -> FieldFactory:
        return FieldFactory(chart, derive_seed(self.seed, label))

    def add(self, name, build, mode="both", informational=False, note=""):
        self.checks.append(Check(name, build=build, mode=mode, samples=self.samples, tolerance=self.tol,
                                 seed=self.seed, informational=informational, note=note))

    def verdict(self, name, outcome, informational=False, note=""):
        self.checks.append(Check(name, outcome=outcome, samples=self.samples, tolerance=self.tol,
                                 seed=self.seed, informational=informational, note=note))


def _lift_algebra(s: _Suite, instances: int):
    for m in (1, 2):
        B = ExtendedChart(2 * m, 0, m)
        for idx in range(instances):
            tag = f"m={m} #{idx}"
            fac = s.factory(B, f"lift-algebra {tag}")
            _lift_instance(s, B, tag, fac.scalar(), fac.scalar(), fac.vector(), fac.vector(),
                           fac.oneform(), fac.oneform())


def _lift_instance(s: _Suite, B, tag, f, g, X, Y, a, b):
    _scalar_laws(s, B, tag, f, g)
    _vector_laws(s, B, tag, X, Y, f)
    _oneform_laws(s, B, tag, a, b, X, f)


def _scalar_laws(s: _Suite, B, tag, f, g, orders=(1, 2, 3)):
    for r in orders:
        s.add(f"lift.scalar-leibniz r={r} {tag}", lambda r=r: (
            lift_scalar(ScalarField(B, mul(f.expr, g.expr)), (r, 0)),
            ScalarField(B.with_order(r), add(*[
                mul(comb(r, j), lift_scalar(f, (r - j, j)).expr, lift_scalar(g, (j, r - j)).expr)
                for j in range(r + 1)])),
        ))
        s.add(f"lift.scalar-additive r={r} {tag}", lambda r=r: (
            lift_scalar(ScalarField(B, add(f.expr, g.expr)), (r - 1, 1)),
            ScalarField(B.with_order(r), add(lift_scalar(f, (r - 1, 1)).expr, lift_scalar(g, (r - 1, 1)).expr)),
        ))


def _vector_laws(s: _Suite, B, tag, X, Y, f, orders=(1, 2)):
    def Xf():
        return ScalarField(B, X.act(f.expr))

    for r in orders:
        Br = B.with_order(r)
        s.add(f"lift.vector-additive r={r} {tag}", lambda r=r: (
            lift_vector(X + Y, (r - 1, 1)), lift_vector(X, (r - 1, 1)) + lift_vector(Y, (r - 1, 1))))
        s.add(f"lift.eval complete-complete r={r} {tag}", lambda r=r, Br=Br: (
            ScalarField(Br, complete(X, r).act(complete(f, r).expr)), complete(Xf(), r)))
        s.add(f"lift.eval vertical-vertical r={r} {tag}", lambda r=r, Br=Br: (
            ScalarField(Br, vertical(X, r).act(vertical(f, r).expr)), ScalarField(Br, ZERO_EXPR)))
        s.add(f"lift.eval complete-vertical r={r} {tag}", lambda r=r, Br=Br: (
            ScalarField(Br, complete(X, r).act(vertical(f, r).expr)), vertical(Xf(), r)))
        s.add(f"lift.eval vertical-complete r={r} {tag}", lambda r=r, Br=Br: (
            ScalarField(Br, vertical(X, r).act(complete(f, r).expr)), vertical(Xf(), r)))
        s.add(f"lift.bracket complete r={r} {tag}", lambda r=r: (
            lie_bracket(complete(X, r), complete(Y, r)), complete(lie_bracket(X, Y), r)))
        s.add(f"lift.bracket mixed r={r} {tag}", lambda r=r: (
            lie_bracket(complete(X, r), vertical(Y, r)), vertical(lie_bracket(X, Y), r)))
        s.add(f"lift.bracket vertical r={r} {tag}", lambda r=r, Br=Br: (
            lie_bracket(vertical(X, r), vertical(Y, r)), VectorField.zero(Br)))
        s.add(f"lift.vector-module r={r} {tag}", lambda r=r: (
            lift_vector(X.scale(f.expr), (r, 0)),
            _sum(lift_vector(X, (j, r - j)).scale(mul(comb(r, j), lift_scalar(f, (r - j, j)).expr))
                 for j in range(r + 1))),
              informational=r > 1,
              note="binomial vector module law; fails for r >= 2 under the constructive lifts" if r > 1 else "")


def _oneform_laws(s: _Suite, B, tag, a, b, X, f, orders=(1, 2)):
    for r in orders:
        Br = B.with_order(r)
        s.add(f"lift.oneform-additive r={r} {tag}", lambda r=r: (
            lift_oneform(a + b, (r - 1, 1)), lift_oneform(a, (r - 1, 1)) + lift_oneform(b, (r - 1, 1))))
        s.add(f"lift.oneform-pairing r={r} {tag}", lambda r=r, Br=Br: (
            ScalarField(Br, complete(a, r)(complete(X, r))), complete(ScalarField(B, a(X)), r)))
        s.add(f"lift.oneform-module r={r} {tag}", lambda r=r: (
            lift_oneform(a.scale(f.expr), (r, 0)),
            _sum(lift_oneform(a, (j, r - j)).scale(mul(comb(r, j), lift_scalar(f, (r - j, j)).expr))
                 for j in range(r + 1))))


def _composition(s: _Suite, instances: int):
    for m in (1, 2):
        B = ExtendedChart(2 * m, 0, m)
        for k in (1, 2):
            s.add(f"endo.identity-lift m={m} k={k}", lambda B=B, k=k: (
                lift_endo_complete(Endo11.identity(B), k), Endo11.identity(B.with_order(k))))
            s.add(f"endo.canonical-structure-lift m={m} k={k}", lambda B=B, k=k: (
                lift_endo_complete(canonical_Jk(B), k), canonical_Jk(B.with_order(k))))
            for idx in range(instances):
                fac = s.factory(B, f"composition m={m} k={k} #{idx}")
                _composition_instance(s, f"m={m} k={k} #{idx}", k, fac.endo(), fac.endo(), fac.vector())


def _composition_instance(s: _Suite, tag: str, k: int, F: Endo11, G: Endo11, X: VectorField):
    s.add(f"endo.composition-lift {tag}", lambda: (
        lift_endo_complete(compose_endo(F, G), k),
        compose_endo(lift_endo_complete(F, k), lift_endo_complete(G, k))))
    s.add(f"endo.complete-action {tag}", lambda: (
        apply_endo(lift_endo_complete(F, k), complete(X, k)), complete(apply_endo(F, X), k)))
    s.add(f"endo.vertical-action {tag}", lambda: (
        apply_endo(vertical(F, k), complete(X, k)), vertical(apply_endo(F, X), k)))


def _almost_complex(s: _Suite):
    F = trace_free_structure()
    for k in (1, 2):
        s.add(f"almost-complex.trace-free lift k={k}", lambda k=k: (
            compose_endo(lift_endo_complete(F, k), lift_endo_complete(F, k)),
            -Endo11.identity(F.chart.with_order(k))))


def _nijenhuis(s: _Suite):
    F = exponential_structure()
    s.add("nijenhuis.exponential frame value", lambda: (
        nijenhuis(F).on_frame(0, 2), VectorField(F.chart, (0, 0, 1, 0))))
    s.add("nijenhuis.complete-lift k=1", lambda: (
        nijenhuis(lift_endo_complete(F, 1)), lift_tensor12_complete(nijenhuis(F), 1)), mode="symbolic")
    s.add("nijenhuis.complete-lift k=2", lambda: (
        nijenhuis(lift_endo_complete(F, 2)), lift_tensor12_complete(nijenhuis(F), 2)), mode="numeric")
    for m in (1, 2):
        J = canonical_Jk(ExtendedChart(2 * m, 0, m))
        for k in (0, 1, 2):
            s.add(f"nijenhuis.canonical m={m} k={k}", lambda J=J, k=k: (
                nijenhuis(lift_endo_complete(J, k)), _zero_tensor(J.chart.with_order(k))))


def _zero_tensor(chart) -> Tensor12:
    d = chart.dim
    return Tensor12(chart, tuple(tuple((ZERO_EXPR,) * d for _ in range(d)) for _ in range(d)))


def _contact(s: _Suite, instances: int):
    for label, t in (("r3", r3_contact()), ("complex-plane", complex_plane_contact())):
        _contact_instance(s, label, t, instances)


def _contact_instance(s: _Suite, label: str, t: AlmostContactTriple, instances: int):
    _contact_fixed(s, label, t)
    for idx in range(instances):
        X = s.factory(t.chart, f"contact {label} #{idx}").vector()
        _contact_actions(s, label, t, X, f"#{idx}")


def _contact_fixed(s: _Suite, label: str, t: AlmostContactTriple):
    B = t.chart
    B1, B2 = B.with_order(1), B.with_order(2)
    s.add(f"extended.square {label} k=1", lambda: (
        compose_endo(extended_structure(t, 1), extended_structure(t, 1)), -Endo11.identity(B1)))
    s.add(f"extended.acts U-vertical {label}", lambda: (
        apply_endo(extended_structure(t, 1), vertical(t.U, 1)), -complete(t.U, 1)))
    s.add(f"extended.acts U-complete {label}", lambda: (
        apply_endo(extended_structure(t, 1), complete(t.U, 1)), vertical(t.U, 1)))
    s.add(f"extended.acts U-complete literal-sign {label}", lambda: (
        apply_endo(extended_structure(t, 1), complete(t.U, 1)), -vertical(t.U, 1)),
          informational=True, note="negative sign contradicts the square of the structure")
    s.add(f"extended.two-term expansion k=1 {label}", lambda: (
        lifted_contact_square_residual(t, 1), Endo11.zero(B1)))
    s.add(f"extended.two-term expansion k=2 probe {label}", lambda: (
        lifted_contact_square_residual(t, 2), Endo11.zero(B2)),
          informational=True, note="two-term expansion of the lifted square")
    s.add(f"extended.square k=2 probe {label}", lambda: (
        compose_endo(extended_structure(t, 2), extended_structure(t, 2)), -Endo11.identity(B2)),
          informational=True)


def _contact_actions(s: _Suite, label: str, t: AlmostContactTriple, X: VectorField, tag: str):
    wX = ScalarField(t.chart, t.omega(X))
    s.add(f"extended.acts X-vertical {label} {tag}", lambda: (
        apply_endo(extended_structure(t, 1), vertical(X, 1)),
        vertical(apply_endo(t.F, X), 1) - complete(t.U, 1).scale(vertical(wX, 1).expr)))
    s.add(f"extended.acts X-complete {label} {tag}", lambda: (
        apply_endo(extended_structure(t, 1), complete(X, 1)),
        complete(apply_endo(t.F, X), 1) + vertical(t.U, 1).scale(vertical(wX, 1).expr)
        - complete(t.U, 1).scale(complete(wX, 1).expr)))
    s.add(f"extended.acts X-complete literal {label} {tag}", lambda: (
        apply_endo(extended_structure(t, 1), complete(X, 1)),
        complete(apply_endo(t.F, X), 1) + vertical(t.U, 1).scale(vertical(wX, 1).expr)
        - complete(t.U, 1).scale(vertical(wX, 1).expr)),
          informational=True, note="coefficient of U^c taken as a vertical lift")


def _lie_lifts(s: _Suite, instances: int):
    for m in (1, 2):
        B = ExtendedChart(2 * m, 0, m)
        for idx in range(instances):
            fac = s.factory(B, f"lie-lifts m={m} #{idx}")
            for r in (1, 2):
                _lie_instance(s, B, fac.vector(), fac.vector(), fac.scalar(), r, f"r={r} m={m} #{idx}")


def _lie_instance(s: _Suite, B, X, Y, f, r, tag):
    Br = B.with_order(r)
    Lf = lambda: lie_derivative(X, f)
    LY = lambda: lie_derivative(X, Y)
    cases = {
        "scalar vertical-vertical": lambda: (lie_derivative(vertical(X, r), vertical(f, r)), ScalarField(Br, ZERO_EXPR)),
        "scalar vertical-complete": lambda: (lie_derivative(vertical(X, r), complete(f, r)), vertical(Lf(), r)),
        "scalar complete-vertical": lambda: (lie_derivative(complete(X, r), vertical(f, r)), vertical(Lf(), r)),
        "scalar complete-complete": lambda: (lie_derivative(complete(X, r), complete(f, r)), complete(Lf(), r)),
        "vector vertical-vertical": lambda: (lie_derivative(vertical(X, r), vertical(Y, r)), VectorField.zero(Br)),
        "vector vertical-complete": lambda: (lie_derivative(vertical(X, r), complete(Y, r)), vertical(LY(), r)),
        "vector complete-vertical": lambda: (lie_derivative(complete(X, r), vertical(Y, r)), vertical(LY(), r)),
        "vector complete-complete": lambda: (lie_derivative(complete(X, r), complete(Y, r)), complete(LY(), r)),
    }
    for label, build in cases.items():
        s.add(f"lie.{label} {tag}", build)


STRUCTURE_ERRATA = frozenset({"complete on U-vertical"})


def lie_structure_formulas(t: AlmostContactTriple, X: VectorField, Y: VectorField) -> dict:
    """Lazy builders for the lifted Lie derivatives of the extended structure at order 1.

    Keys name the lift of ``X`` and the lifted argument.  The eight plain keys
    are the formulas as usually stated (``w(Y) = 0`` assumed); the key in
    :data:`STRUCTURE_ERRATA` is false as stated and has a ``corrected`` twin.
    """
    U = t.U
    B = t.chart
    c = lambda obj: complete(obj, 1)
    v = lambda obj: vertical(obj, 1)

    def lhs(lift_x, lift_y, Z):
        return apply_endo(lie_derivative(lift_x(X), extended_structure(t, 1)), lift_y(Z))

    def lfz(Z):
        return apply_endo(lie_derivative(X, t.F), Z)

    def lwz(Z):
        return ScalarField(B, lie_derivative(X, t.omega)(Z))

    def xu():
        return lie_bracket(X, U)

    zero = VectorField.zero(B.with_order(1))
    return {
        "vertical on Y-vertical": lambda: (lhs(v, v, Y), zero),
        "vertical on Y-complete": lambda: (lhs(v, c, Y), v(lfz(Y)) - c(U).scale(v(lwz(Y)).expr)),
        "complete on Y-vertical": lambda: (lhs(c, v, Y), v(lfz(Y)) - c(U).scale(v(lwz(Y)).expr)),
        "complete on Y-complete": lambda: (lhs(c, c, Y), c(lfz(Y)) + v(U).scale(v(lwz(Y)).expr)
                                           - c(U).scale(c(lwz(Y)).expr)),
        "vertical on U-vertical": lambda: (lhs(v, v, U), -v(lie_derivative(X, U))),
        "vertical on U-complete": lambda: (lhs(v, c, U), v(lfz(U)) - c(U).scale(v(lwz(U)).expr)),
        "complete on U-vertical": lambda: (lhs(c, v, U), c(lfz(U)) - c(xu()) - c(U).scale(c(lwz(U)).expr)),
        "complete on U-vertical corrected": lambda: (lhs(c, v, U), v(lfz(U)) - c(xu())
                                                     - c(U).scale(v(lwz(U)).expr)),
        "complete on U-complete": lambda: (lhs(c, c, U), c(lfz(U)) + v(xu()) + v(U).scale(v(lwz(U)).expr)
                                           - c(U).scale(c(lwz(U)).expr)),
    }


def _lie_structure(s: _Suite, instances: int):
    t = r3_contact()
    for idx in range(instances):
        fac = s.factory(t.chart, f"lie-structure #{idx}")
        X = fac.vector()
        Y = fac.vector(zero_slots=(2,))  # w = dx3, so w(Y) = 0
        _lie_structure_instance(s, t, X, Y, f"#{idx}")


def _lie_structure_instance(s: _Suite, t, X, Y, tag):
    for label, build in lie_structure_formulas(t, X, Y).items():
        erratum = label in STRUCTURE_ERRATA
        s.add(f"lie-structure.{label} {tag}", build, informational=erratum,
              note="complete lifts of the L_X F and L_X w terms as stated" if erratum else "")


def _analytic(s: _Suite):
    t = r3_contact()
    B = t.chart
    x3 = var(0, 3)

    def sides(v) -> str:
        return f"base {_flag(v.base_holds)}, lifted {_flag(v.lifted_holds)}"

    def agreeing(run, want):
        def outcome():
            v = run()
            return v.base_holds == want and v.lifted_holds == want, sides(v)
        return outcome

    def rejected_with(run, message):
        def outcome():
            v = run()
            return not v.holds and message in v.failed(), sides(v) + "; " + ", ".join(v.failed())
        return outcome

    def agreement(run):
        def outcome():
            v = run()
            return bool(v.agreement), sides(v)
        return outcome

    d3 = VectorField(B, (0, 0, 1))
    s.verdict("analytic.vertical d3 holds", agreeing(lambda: almost_analytic_vertical(d3, t, 1), True))
    s.verdict("analytic.vertical zero field holds",
              agreeing(lambda: almost_analytic_vertical(VectorField.zero(B), t, 1), True))
    s.verdict("analytic.vertical x3*d1 fails",
              agreeing(lambda: almost_analytic_vertical(VectorField(B, (x3, 0, 0)), t, 1), False))
    s.verdict("analytic.complete -x3*d3 C=1 holds",
              agreeing(lambda: almost_analytic_complete(VectorField(B, (0, 0, neg(x3))), t, 1, 1), True))
    s.verdict("analytic.complete zero field rejected",
              rejected_with(lambda: almost_analytic_complete(VectorField.zero(B), t, 1, 1), "£_X U ≠ C·U"))
    s.verdict("analytic.complete d3 rejected",
              rejected_with(lambda: almost_analytic_complete(d3, t, 1, 1), "£_X U ≠ C·U"))
    for label, X in (("zero field", VectorField.zero(B)), ("d3", d3)):
        s.verdict(f"analytic.complete {label} sides agree",
                  agreement(lambda X=X: almost_analytic_complete(X, t, 1, 1)), informational=True,
                  note="the lifted condition can hold while the base conditions fail")


def builtin_suite(seed: int = 42, samples: int = 100, tol: float = 1e-9, instances: int = 5) -> list[Check]:
    """Every lift, composition, Nijenhuis, structure and Lie-derivative identity."""
    s = _Suite(seed, samples, tol)
    _lift_algebra(s, instances)
    _composition(s, instances)
    _almost_complex(s)
    _nijenhuis(s)
    _contact(s, instances)
    _lie_lifts(s, instances)
    _lie_structure(s, instances)
    _analytic(s)
    return s.checks


def model_suite(model, seed: int = 42, samples: int = 100, tol: float = 1e-9) -> list[Check]:
    """The theorem identities instantiated on the named fields of a definition file.

    Laws that need a scalar, vector or 1-form fall back to the constant 1,
    the zero vector or the zero form when the file declares none.
    """
    s = _Suite(seed, samples, tol)
    B = model.base
    k = max(model.order, 1)
    scalars = model.scalars or {"1": ScalarField(B, ONE_EXPR)}
    vectors = model.vectors or {"0": VectorField.zero(B)}
    oneforms = model.oneforms or {"0": OneForm.zero(B)}
    names = list(scalars)
    for i, fn in enumerate(names):
        for gn in names[i:]:
            _scalar_laws(s, B, f"[{fn},{gn}]", scalars[fn], scalars[gn])
    fn0 = names[0]
    vnames = list(vectors)
    for i, xn in enumerate(vnames):
        for yn in vnames[i:]:
            _vector_laws(s, B, f"[{xn},{yn},{fn0}]", vectors[xn], vectors[yn], scalars[fn0])
            _lie_instance_all(s, B, vectors[xn], vectors[yn], scalars[fn0], f"[{xn},{yn},{fn0}]")
    for an, a in oneforms.items():
        for xn, X in vectors.items():
            _oneform_laws(s, B, f"[{an},{xn},{fn0}]", a, a, X, scalars[fn0])
    enames = list(model.endomorphisms)
    for i, Fn in enumerate(enames):
        F = model.endomorphisms[Fn]
        s.add(f"nijenhuis.complete-lift k=1 [{Fn}]", lambda F=F: (
            nijenhuis(lift_endo_complete(F, 1)), lift_tensor12_complete(nijenhuis(F), 1)))
        s.add(f"endo.square-lift k={k} [{Fn}]", lambda F=F: (
            compose_endo(lift_endo_complete(F, k), lift_endo_complete(F, k)),
            lift_endo_complete(compose_endo(F, F), k)))
        for Gn in enames[i:]:
            for xn, X in vectors.items():
                _composition_instance(s, f"k={k} [{Fn},{Gn},{xn}]", k, F, model.endomorphisms[Gn], X)
    for tn in model.contacts:
        t = model.triple(tn)
        _contact_fixed(s, tn, t)
        for xn, X in vectors.items():
            _contact_actions(s, tn, t, X, f"[{xn}]")
        annihilated = {n: Y for n, Y in vectors.items() if _vanishes(t.omega(Y))}
        for xn, X in vectors.items():
            for yn, Y in annihilated.items():
                _lie_structure_instance(s, t, X, Y, f"[{tn},{xn},{yn}]")
    return s.checks


def _lie_instance_all(s: _Suite, B, X, Y, f, tag):
    for r in (1, 2):
        _lie_instance(s, B, X, Y, f, r, f"r={r} {tag}")


def _vanishes(e: Expr) -> bool:
    return is_zero(e)
