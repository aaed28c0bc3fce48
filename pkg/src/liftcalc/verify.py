"""Identity checking: symbolic zero proofs first, seeded numeric sampling as
cross-check and fallback, finite differences guarding the differentiator.
"""

from __future__ import annotations

import hashlib
import json
import time
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import __version__
from .canonical import normalize
from .expr import (
    Expr,
    VarRef,
    as_expr,
    denominators,
    differentiate,
    evaluate,
    record_derivatives,
    to_text,
)
from .geometry import Endo11, OneForm, ScalarField, Tensor12, VectorField

PROVEN = "proven-zero"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"

SAMPLE_BOX = 2.0
DENOMINATOR_GUARD = 1e-6
MAX_REDRAWS = 100
FD_STEP = 1e-5
DEFAULT_TOL = 1e-9
FD_TOL = 1e-6


class DegenerateSampling(RuntimeError):
    pass


class InternalEngineError(RuntimeError):
    """A symbolic proof disagreed with numeric evaluation."""


@dataclass(frozen=True)
class SymbolicStatus:
    status: str
    witness: str | None = None

    @property
    def proven(self) -> bool:
        return self.status == PROVEN

    def __str__(self):
        return self.status if self.witness is None else f"{self.status}({self.witness})"


@dataclass(frozen=True)
class NumericStatus:
    max_err: float
    passed: bool
    samples: int
    witness: dict | None = None


def prove_zero(e: Expr) -> SymbolicStatus:
    form = normalize(as_expr(e))
    if form.is_zero():
        return SymbolicStatus(PROVEN)
    if form.residual:
        return SymbolicStatus(INCONCLUSIVE, form.leading_monomial_text())
    return SymbolicStatus(REFUTED, form.leading_monomial_text())


def flatten(obj) -> tuple[Expr, ...]:
    """Components of a field, an expression, or a (nested) tuple of those."""
    if isinstance(obj, (ScalarField, VectorField, OneForm, Endo11, Tensor12)):
        return obj.flat()
    if isinstance(obj, (tuple, list)):
        return tuple(e for part in obj for e in flatten(part))
    return (as_expr(obj),)


def _kind(obj):
    if isinstance(obj, (tuple, list)):
        return tuple(_kind(p) for p in obj)
    if isinstance(obj, (ScalarField, VectorField, OneForm, Endo11, Tensor12)):
        return (obj.kind, obj.chart)
    return "expr"


def component_labels(obj, prefix: str = "") -> list[str]:
    if isinstance(obj, (tuple, list)):
        return [lab for i, p in enumerate(obj) for lab in component_labels(p, f"{prefix}{i}.")]
    if isinstance(obj, (VectorField, OneForm)):
        return [f"{prefix}{obj.chart.label(i)}" for i in range(obj.chart.dim)]
    if isinstance(obj, Endo11):
        d = obj.chart.dim
        return [f"{prefix}({obj.chart.label(i)},{obj.chart.label(j)})" for i in range(d) for j in range(d)]
    if isinstance(obj, Tensor12):
        d = obj.chart.dim
        lab = obj.chart.label
        return [f"{prefix}({lab(i)};{lab(j)},{lab(l)})" for i in range(d) for j in range(d) for l in range(d)]
    return [prefix.rstrip(".") or "value"]


def prove_components(lhs, rhs) -> SymbolicStatus:
    """Prove ``lhs - rhs`` vanishes componentwise.

    Refutation wins over inconclusiveness; the witness names the component.
    """
    a, b = flatten(lhs), flatten(rhs)
    if len(a) != len(b):
        raise ValueError(f"component count mismatch: {len(a)} vs {len(b)}")
    labels = component_labels(lhs)
    inconclusive = None
    for lab, x, y in zip(labels, a, b):
        if x == y:
            continue
        st = prove_zero(x - y)
        if st.status == REFUTED:
            return SymbolicStatus(REFUTED, f"{lab}: {st.witness}")
        if st.status == INCONCLUSIVE and inconclusive is None:
            inconclusive = SymbolicStatus(INCONCLUSIVE, f"{lab}: {st.witness}")
    return inconclusive or SymbolicStatus(PROVEN)


# -- numeric ----------------------------------------------------------------

def derive_seed(seed: int, name: str) -> int:
    digest = hashlib.sha256(f"{seed}:{name}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def _draw(rng: np.random.Generator, variables: Sequence[VarRef], n: int) -> dict:
    return {
        v: rng.uniform(-SAMPLE_BOX, SAMPLE_BOX, n) + 1j * rng.uniform(-SAMPLE_BOX, SAMPLE_BOX, n)
        for v in variables
    }


def sample_points(exprs: Iterable[Expr], n: int, seed: int) -> dict:
    """Seeded complex sample points avoiding small denominators.

    Returns ``{VarRef: ndarray of shape (n,)}``.
    """
    exprs = list(exprs)
    variables = sorted(set().union(*(e.free for e in exprs))) if exprs else []
    dens = denominators(exprs)
    rng = np.random.default_rng(seed)
    point = _draw(rng, variables, n)
    if not dens:
        return point
    for _ in range(MAX_REDRAWS + 1):
        bad = np.zeros(n, dtype=bool)
        memo: dict = {}
        with np.errstate(all="ignore"):
            for d in dens:
                val = evaluate(d, point, memo)
                bad |= ~(np.abs(np.broadcast_to(val, (n,))) >= DENOMINATOR_GUARD)
        if not bad.any():
            return point
        fresh = _draw(rng, variables, int(bad.sum()))
        for v in variables:
            point[v] = point[v].copy()
            point[v][bad] = fresh[v]
    raise DegenerateSampling("degenerate sampling region")


def _values(e: Expr, point: dict, memo: dict, n: int) -> np.ndarray:
    with np.errstate(all="ignore"):
        return np.broadcast_to(np.asarray(evaluate(e, point, memo), dtype=complex), (n,))


def sample_check(lhs, rhs, n: int = 100, tol: float = DEFAULT_TOL, seed: int = 42) -> NumericStatus:
    """Max absolute componentwise ``|lhs - rhs|`` over ``n`` seeded points."""
    if n < 1:
        raise ValueError("samples must be >= 1")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    a, b = flatten(lhs), flatten(rhs)
    if len(a) != len(b):
        raise ValueError(f"component count mismatch: {len(a)} vs {len(b)}")
    pairs = [(x, y) for x, y in zip(a, b) if x != y]
    if not pairs:
        return NumericStatus(0.0, True, n)
    point = sample_points([e for p in pairs for e in p], n, seed)
    memo: dict = {}
    worst, witness = 0.0, None
    for x, y in pairs:
        err = np.abs(_values(x, point, memo, n) - _values(y, point, memo, n))
        if np.isnan(err).any():
            idx = int(np.argmax(np.isnan(err)))
            return NumericStatus(float("nan"), False, n, _witness(point, idx))
        idx = int(np.argmax(err))
        if err[idx] > worst:
            worst, witness = float(err[idx]), idx
    return NumericStatus(worst, worst <= tol, n, None if witness is None or worst <= tol else _witness(point, witness))


def _witness(point: dict, idx: int) -> dict:
    return {str(v): complex(vals[idx]) for v, vals in sorted(point.items())}


def fd_check(e: Expr, v: VarRef, n: int = 50, tol: float = FD_TOL, seed: int = 42) -> NumericStatus:
    """Compare ``differentiate(e, v)`` with central differences along the real part of ``v``.

    Error is relative to ``|derivative|`` when that exceeds 1, absolute otherwise.
    """
    e = as_expr(e)
    d = differentiate(e, v)
    if v not in e.free:
        return NumericStatus(0.0, d.is_zero(), n)
    point = sample_points([e, d], n, seed)
    plus, minus = dict(point), dict(point)
    plus[v] = point[v] + FD_STEP
    minus[v] = point[v] - FD_STEP
    fd = (_values(e, plus, {}, n) - _values(e, minus, {}, n)) / (2 * FD_STEP)
    exact = _values(d, point, {}, n)
    rel = np.abs(fd - exact) / np.maximum(np.abs(exact), 1.0)
    if np.isnan(rel).any():
        return NumericStatus(float("nan"), False, n)
    worst = float(rel.max())
    return NumericStatus(worst, worst <= tol, n)


# -- checks and reports -----------------------------------------------------

@dataclass
class Check:
    """One identity ``lhs == rhs``.

    ``build`` may supply ``(lhs, rhs)`` lazily so construction failures are
    captured in the report.  ``informational`` checks are reported but do
    not count toward the suite verdict.  ``outcome`` replaces the identity
    with a precomputed verdict ``(holds, detail)``.
    """

    name: str
    lhs: Any = None
    rhs: Any = None
    mode: str = "both"
    samples: int = 100
    tolerance: float = DEFAULT_TOL
    seed: int = 42
    build: Callable[[], tuple[Any, Any]] | None = None
    informational: bool = False
    outcome: Callable[[], tuple[bool, str]] | None = None
    note: str = ""

    def __post_init__(self):
        if self.mode not in ("symbolic", "numeric", "both"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.mode != "symbolic" and self.samples < 1:
            raise ValueError("samples must be >= 1 for numeric checks")


@dataclass
class CheckReport:
    name: str
    symbolic: str
    numeric_max_err: float | None
    passed: bool
    note: str = ""
    informational: bool = False
    internal_error: bool = False
    elapsed: float = field(default=0.0, compare=False)

    def to_json(self) -> dict:
        err = self.numeric_max_err
        if err is not None:
            err = float(f"{err:.6e}") if np.isfinite(err) else str(err)
        return {"name": self.name, "symbolic": self.symbolic, "numeric_max_err": err,
                "pass": self.passed, "note": self.note}


def run_check(check: Check, name: str | None = None) -> CheckReport:
    name = name or check.name
    start = time.perf_counter()
    note = [check.note] if check.note else []
    try:
        if check.outcome is not None:
            ok, detail = check.outcome()
            report = CheckReport(name, "verdict", None, bool(ok), "; ".join(note + ([detail] if detail else [])),
                                 check.informational)
            return _finish(report, check, start)
        lhs, rhs = check.build() if check.build is not None else (check.lhs, check.rhs)
        if _kind(lhs) != _kind(rhs):
            raise ValueError("lhs and rhs differ in kind or chart")
        sym = None
        if check.mode in ("symbolic", "both"):
            sym = prove_components(lhs, rhs)
        num = None
        if check.mode in ("numeric", "both"):
            num = sample_check(lhs, rhs, check.samples, check.tolerance, derive_seed(check.seed, name))
        if sym is not None and sym.proven and num is not None and not num.passed:
            raise InternalEngineError(f"symbolic proof contradicted by sampling (max err {num.max_err:.3e})")
        if sym is None:
            passed = num.passed
            symbolic = "skipped"
        elif sym.status == PROVEN:
            passed = True
            symbolic = PROVEN
        elif sym.status == INCONCLUSIVE:
            passed = num is not None and num.passed
            symbolic = INCONCLUSIVE
            note.append("numeric fallback" if passed else f"residual {sym.witness}")
        else:
            passed = False
            symbolic = REFUTED
            note.append(f"witness {sym.witness}")
        if num is not None and not num.passed and num.witness:
            note.append("at " + ", ".join(f"{k}={_cfmt(v)}" for k, v in num.witness.items()))
        report = CheckReport(name, symbolic, None if num is None else num.max_err, passed,
                             "; ".join(note), check.informational)
    except InternalEngineError as exc:
        report = CheckReport(name, "error", None, False, "; ".join(note + [f"internal error: {exc}"]),
                             check.informational, internal_error=True)
    except Exception as exc:  # noqa: BLE001 - captured per check, never aborts the suite
        report = CheckReport(name, "error", None, False, "; ".join(note + [f"{type(exc).__name__}: {exc}"]),
                             check.informational)
    return _finish(report, check, start)


def _finish(report: CheckReport, check: Check, start: float) -> CheckReport:
    if check.informational:
        report.note = "informational residual" + (f"; {report.note}" if report.note else "")
    report.elapsed = time.perf_counter() - start
    return report


def _cfmt(z: complex) -> str:
    return f"{z.real:.6g}{z.imag:+.6g}i"


def _unique_names(checks: Sequence[Check]) -> list[str]:
    counts: dict[str, int] = {}
    for c in checks:
        counts[c.name] = counts.get(c.name, 0) + 1
    seen: dict[str, int] = {}
    names = []
    for c in checks:
        if counts[c.name] == 1:
            names.append(c.name)
        else:
            i = seen.get(c.name, 0)
            seen[c.name] = i + 1
            names.append(f"{c.name}#{i}")
    return names


def run_suite(checks: Sequence[Check], fd_guard: bool = False, fd_samples: int = 50,
              fd_tol: float = FD_TOL, seed: int = 42) -> list[CheckReport]:
    """Run every check and return reports sorted by name.

    With ``fd_guard`` every derivative taken while running the checks is
    re-validated by :func:`fd_check` and summarized in a ``fd-guard`` report.
    """
    names = _unique_names(checks)
    with record_derivatives() as seen:
        reports = [run_check(c, n) for c, n in zip(checks, names)]
    if fd_guard:
        reports.append(fd_guard_report(list(seen), fd_samples, fd_tol, seed))
    return sorted(reports, key=lambda r: r.name)


def fd_guard_report(pairs: Sequence[tuple[Expr, VarRef]], n: int = 50, tol: float = FD_TOL,
                    seed: int = 42, name: str = "fd-guard") -> CheckReport:
    start = time.perf_counter()
    worst, failed, error = 0.0, [], None
    try:
        for e, v in pairs:
            st = fd_check(e, v, n, tol, derive_seed(seed, f"fd:{v}"))
            if not st.passed:
                failed.append(f"d/d{v} of {_short(e)}")
            if st.max_err == st.max_err:  # skip nan
                worst = max(worst, st.max_err)
            else:
                worst = float("nan")
    except Exception as exc:  # noqa: BLE001 - reported, not raised
        error = f"{type(exc).__name__}: {exc}"
    note = f"{len(pairs)} derivatives"
    if failed:
        note += f"; {len(failed)} failed, first: {failed[0]}"
    if error:
        note += f"; {error}"
    return CheckReport(name, "skipped", worst, not failed and error is None, note,
                       elapsed=time.perf_counter() - start)


def _short(e: Expr, limit: int = 60) -> str:
    t = to_text(e)
    return t if len(t) <= limit else t[: limit - 3] + "..."


def overall(reports: Iterable[CheckReport]) -> bool:
    return all(r.passed for r in reports if not r.informational)


def report_header(seed: int, tolerance: float, samples: int, suite: str = "checks") -> dict:
    return {"engine_version": __version__, "seed": seed, "tolerance": tolerance, "samples": samples,
            "sampling_box": [-SAMPLE_BOX, SAMPLE_BOX], "denominator_guard": DENOMINATOR_GUARD, "suite": suite}


def serialize_json(reports: Sequence[CheckReport], header: dict) -> str:
    """One JSON object per line: header, each check, summary.  Keys sorted."""
    lines = [json.dumps({"header": header}, sort_keys=True)]
    lines += [json.dumps(r.to_json(), sort_keys=True) for r in reports]
    summary = {"checks": len(reports), "failed": sum(1 for r in reports if not r.passed and not r.informational),
               "informational": sum(1 for r in reports if r.informational), "overall": overall(reports)}
    lines.append(json.dumps({"summary": summary}, sort_keys=True))
    return "\n".join(lines) + "\n"


def serialize_text(reports: Sequence[CheckReport], header: dict) -> str:
    box = f"[-{SAMPLE_BOX:g},{SAMPLE_BOX:g}]"
    out = [(f"liftcalc {header['engine_version']}  suite={header['suite']}  seed={header['seed']}  "
            f"tol={header['tolerance']:g}  samples={header['samples']}  "
            f"box={box}+{box}i  guard={DENOMINATOR_GUARD:g}")]
    width = max((len(r.name) for r in reports), default=4)
    for r in reports:
        tag = "INFO" if r.informational else ("PASS" if r.passed else "FAIL")
        err = "-" if r.numeric_max_err is None else f"{r.numeric_max_err:.2e}"
        line = f"{tag:4}  {r.name:<{width}}  {r.symbolic:<12}  max_err={err}"
        if r.note:
            line += f"  # {r.note}"
        out.append(line)
    out.append(f"overall: {'PASS' if overall(reports) else 'FAIL'}")
    return "\n".join(out) + "\n"
