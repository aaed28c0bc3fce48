"""Command-line entry point: ``liftcalc check | lift | nijenhuis | suite``.

Exit codes: 0 every check passed, 1 at least one check failed, 2 the
definition file could not be read or validated, 3 internal engine error.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .calculus import (
    StructureError,
    almost_analytic_complete,
    almost_analytic_vertical,
    build_extended_structure,
    check_almost_contact,
    is_almost_complex,
    is_integrable,
    nijenhuis,
)
from .canonical import simplify
from .definition import CheckSpec, DefinitionError, ModelSet, parse_definition
from .expr import to_text
from .geometry import Endo11, OneForm, ScalarField, Tensor12, VectorField, compose_endo
from .lifts import LiftSpec, lift_endo_complete, lift_field
from .parser import ParseError
from .theorems import builtin_suite, model_suite
from .verify import (
    Check,
    overall,
    report_header,
    run_suite,
    serialize_json,
    serialize_text,
)

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


def _verdict_outcome(run):
    def outcome():
        v = run()
        parts = []
        if v.base_holds is not None:
            parts.append(f"base {'holds' if v.base_holds else 'fails'}, "
                         f"lifted {'holds' if v.lifted_holds else 'fails'}, "
                         f"agreement {'yes' if v.agreement else 'no'}")
        parts += v.failed()
        parts += v.notes
        return v.holds, "; ".join(parts)
    return outcome


def declared_checks(model: ModelSet, seed: int, samples: int, tol: float) -> list[Check]:
    """Turn the ``[check]`` sections of a model into runnable checks."""
    out = []
    k = model.order
    for spec in model.checks:
        out.append(_declared(model, spec, k, seed, samples, tol))
    return out


def _declared(model: ModelSet, spec: CheckSpec, k: int, seed: int, samples: int, tol: float) -> Check:
    common = {"seed": seed, "samples": samples, "tolerance": tol}
    a = spec.args
    if spec.kind == "identity":
        return Check(spec.name, lhs=model.field(a[0]), rhs=model.field(a[1]), **common)
    if spec.kind == "almost_complex":
        return Check(spec.name, outcome=_verdict_outcome(lambda: is_almost_complex(model.endomorphisms[a[0]])),
                     **common)
    if spec.kind == "nijenhuis_zero":
        return Check(spec.name, outcome=_verdict_outcome(lambda: is_integrable(model.endomorphisms[a[0]])), **common)
    if spec.kind == "almost_contact":
        return Check(spec.name, outcome=_verdict_outcome(lambda: check_almost_contact(model.triple(a[0]))), **common)
    if spec.kind == "extended_structure":
        def build():
            J = build_extended_structure(model.triple(a[0]), k)
            return compose_endo(J, J), -Endo11.identity(J.chart)
        return Check(spec.name, build=build, note=f"square of the extended structure, k={k}", **common)
    if spec.kind == "analytic_vertical":
        return Check(spec.name, outcome=_verdict_outcome(
            lambda: almost_analytic_vertical(model.vectors[a[1]], model.triple(a[0]), k)), **common)
    if spec.kind == "analytic_complete":
        return Check(spec.name, outcome=_verdict_outcome(
            lambda: almost_analytic_complete(model.vectors[a[1]], model.triple(a[0]), k, spec.C)), **common)
    raise DefinitionError(f"unknown check kind {spec.kind!r}")


def _emit(reports, header, fmt: str) -> int:
    text = serialize_json(reports, header) if fmt == "json" else serialize_text(reports, header)
    sys.stdout.write(text)
    if any(r.internal_error for r in reports):
        return EXIT_INTERNAL
    return EXIT_PASS if overall(reports) else EXIT_FAIL


def cmd_check(args) -> int:
    model = parse_definition(args.file)
    checks = declared_checks(model, args.seed, args.samples, args.tol)
    suite = "checks"
    if args.builtin_suite:
        checks += model_suite(model, args.seed, args.samples, args.tol)
        suite = "checks+builtin"
    reports = run_suite(checks, fd_guard=not args.no_fd_guard, seed=args.seed)
    return _emit(reports, report_header(args.seed, args.tol, args.samples, suite), args.format)


def cmd_suite(args) -> int:
    checks = builtin_suite(args.seed, args.samples, args.tol, args.instances)
    reports = run_suite(checks, fd_guard=not args.no_fd_guard, seed=args.seed)
    return _emit(reports, report_header(args.seed, args.tol, args.samples, "builtin-identities"), args.format)


def _show(e) -> str:
    return to_text(simplify(e))


def format_field(obj) -> list[str]:
    chart = obj.chart
    lines = []
    if isinstance(obj, ScalarField):
        return [_show(obj.expr)]
    if isinstance(obj, (VectorField, OneForm)):
        prefix = "d" if isinstance(obj, VectorField) else "dx"
        for i, e in enumerate(obj.components):
            if not e.is_zero():
                s = _show(e)
                if s != "0":
                    lines.append(f"{prefix}{chart.label(i)}: {s}")
    elif isinstance(obj, Endo11):
        for j in range(chart.dim):
            for i in range(chart.dim):
                e = obj.matrix[i][j]
                if not e.is_zero():
                    s = _show(e)
                    if s != "0":
                        lines.append(f"d{chart.label(j)} -> d{chart.label(i)}: {s}")
    elif isinstance(obj, Tensor12):
        for j in range(chart.dim):
            for l in range(j + 1, chart.dim):
                for i in range(chart.dim):
                    e = obj.components[i][j][l]
                    if not e.is_zero():
                        s = _show(e)
                        if s != "0":
                            lines.append(f"N(d{chart.label(j)}, d{chart.label(l)}) d{chart.label(i)}: {s}")
    return lines or ["(all components zero)"]


def cmd_lift(args) -> int:
    model = parse_definition(args.file)
    try:
        obj = model.field(args.object)
    except KeyError:
        raise DefinitionError(f"no field named {args.object!r}") from None
    try:
        spec = LiftSpec(args.complete, args.vertical)
        lifted = lift_field(obj, spec)
    except ValueError as exc:
        raise DefinitionError(str(exc)) from None
    print(f"{obj.kind} {args.object} lifted by {spec} onto order {lifted.chart.order} "
          f"(dim {lifted.chart.dim})")
    for line in format_field(lifted):
        print(f"  {line}")
    return EXIT_PASS


def cmd_nijenhuis(args) -> int:
    model = parse_definition(args.file)
    if args.tensor not in model.endomorphisms:
        raise DefinitionError(f"no endomorphism named {args.tensor!r}")
    F = model.endomorphisms[args.tensor]
    if args.complete:
        F = lift_endo_complete(F, args.complete)
    N = nijenhuis(F)
    label = args.tensor + (f"^(c^{args.complete})" if args.complete else "")
    print(f"Nijenhuis tensor of {label} (dim {N.chart.dim}), pairs j < l:")
    for line in format_field(N):
        print(f"  {line}")
    verdict = is_integrable(F)
    print(f"integrable: {'yes' if verdict.holds else 'no'}")
    return EXIT_PASS if verdict.holds else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="liftcalc", description="Lifts of tensor fields to extended manifolds.")
    p.add_argument("--version", action="version", version=f"liftcalc {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def run_options(sp):
        sp.add_argument("--samples", type=int, default=100, help="numeric sample points per check")
        sp.add_argument("--tol", type=float, default=1e-9, help="absolute numeric tolerance")
        sp.add_argument("--seed", type=int, default=42)
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--no-fd-guard", action="store_true", help="skip finite-difference validation")

    c = sub.add_parser("check", help="run the checks declared in a definition file")
    c.add_argument("file")
    run_options(c)
    c.add_argument("--builtin-suite", action="store_true", help="also run the theorem suite on the file's fields")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("suite", help="run the built-in theorem suite on random polynomial fields")
    run_options(s)
    s.add_argument("--instances", type=int, default=5, help="random instances per identity")
    s.set_defaults(func=cmd_suite)

    lf = sub.add_parser("lift", help="print the components of a lifted field")
    lf.add_argument("file")
    lf.add_argument("--object", required=True)
    lf.add_argument("--complete", type=int, default=0)
    lf.add_argument("--vertical", type=int, default=0)
    lf.set_defaults(func=cmd_lift)

    n = sub.add_parser("nijenhuis", help="print the Nijenhuis tensor of an endomorphism")
    n.add_argument("file")
    n.add_argument("--tensor", required=True)
    n.add_argument("--complete", type=int, default=0, help="complete-lift order applied first")
    n.set_defaults(func=cmd_nijenhuis)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "samples", 1) < 1 or getattr(args, "tol", 1.0) <= 0:
        print("error: --samples must be >= 1 and --tol > 0", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (DefinitionError, ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except StructureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except Exception as exc:  # noqa: BLE001 - anything else is an engine bug
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
