"""Sectioned definition files: charts, named fields, contact triples and checks.

A file is a sequence of ``[kind name]`` sections holding ``key = value``
lines.  Values are bare tokens, JSON string lists, or quoted strings;
``#`` starts a comment outside quotes.  Endomorphism rows follow matrix
convention: row ``i`` lists the ``d/dx_i`` components of the images of
``d/dx_1 .. d/dx_n``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .calculus import AlmostContactTriple
from .canonical import normalize
from .expr import Expr, as_expr, to_text
from .gaussian import GaussianRational
from .geometry import Endo11, ExtendedChart, OneForm, ScalarField, VectorField
from .parser import ParseError, parse_expression

CHECK_KINDS = {
    # kind: expected argument categories
    "identity": ("field", "field"),
    "almost_complex": ("endomorphism",),
    "nijenhuis_zero": ("endomorphism",),
    "almost_contact": ("contact",),
    "extended_structure": ("contact",),
    "analytic_vertical": ("contact", "vector"),
    "analytic_complete": ("contact", "vector"),
}

_FIELD_SECTIONS = ("scalar", "vector", "oneform", "endomorphism")


class DefinitionError(ValueError):
    """Format or validation failure; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None, section: str | None = None):
        self.message = message
        self.line = line
        self.section = section
        where = []
        if line is not None:
            where.append(f"line {line}")
        if section:
            where.append(f"[{section}]")
        super().__init__(f"{' '.join(where)}: {message}" if where else message)


@dataclass(frozen=True)
class ContactSpec:
    F: str
    U: str
    omega: str


@dataclass(frozen=True)
class CheckSpec:
    name: str
    kind: str
    args: tuple[str, ...]
    C: GaussianRational | None = None


@dataclass
class ModelSet:
    chart: ExtendedChart
    scalars: dict[str, ScalarField] = field(default_factory=dict)
    vectors: dict[str, VectorField] = field(default_factory=dict)
    oneforms: dict[str, OneForm] = field(default_factory=dict)
    endomorphisms: dict[str, Endo11] = field(default_factory=dict)
    contacts: dict[str, ContactSpec] = field(default_factory=dict)
    checks: list[CheckSpec] = field(default_factory=list)

    @property
    def base(self) -> ExtendedChart:
        return self.chart.base()

    @property
    def order(self) -> int:
        return self.chart.order

    def field(self, name: str):
        for table in (self.scalars, self.vectors, self.oneforms, self.endomorphisms):
            if name in table:
                return table[name]
        raise KeyError(name)

    def triple(self, name: str) -> AlmostContactTriple:
        c = self.contacts[name]
        return AlmostContactTriple(self.endomorphisms[c.F], self.vectors[c.U], self.oneforms[c.omega])

    def category(self, name: str) -> str | None:
        for cat, table in (("scalar", self.scalars), ("vector", self.vectors), ("oneform", self.oneforms),
                           ("endomorphism", self.endomorphisms), ("contact", self.contacts)):
            if name in table:
                return cat
        return None


# -- lexical layer -----------------------------------------------------------

@dataclass
class _Section:
    kind: str
    name: str | None
    line: int
    entries: dict[str, tuple[str, int]] = field(default_factory=dict)

    @property
    def label(self) -> str:
        return f"{self.kind} {self.name}" if self.name else self.kind


def _strip_comment(line: str) -> str:
    quoted = False
    for i, ch in enumerate(line):
        if ch == '"':
            quoted = not quoted
        elif ch == "#" and not quoted:
            return line[:i]
    return line


_HEADER = re.compile(r"^\[\s*([A-Za-z_]+)(?:\s+([A-Za-z_][A-Za-z0-9_]*))?\s*\]$")
_PAIR = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*=\s*")
_NEXT_PAIR = re.compile(r"\s+(?=[A-Za-z_][A-Za-z0-9_]*\s*=)")


def _split_pairs(text: str, lineno: int, section: str) -> list[tuple[str, str]]:
    """``a = 1   b = 2`` style lines; quoted or bracketed values keep their spaces."""
    pairs = []
    pos = 0
    while pos < len(text):
        m = _PAIR.match(text, pos)
        if not m:
            raise DefinitionError(f"expected 'key = value', got {text[pos:].strip()!r}", lineno, section)
        key = m.group(1)
        pos = m.end()
        if pos >= len(text):
            raise DefinitionError(f"missing value for {key!r}", lineno, section)
        if text[pos] in "[\"":
            end = _closing(text, pos, lineno, section)
        else:
            nxt = _NEXT_PAIR.search(text, pos)
            end = nxt.start() if nxt else len(text)
        pairs.append((key, text[pos:end].strip()))
        pos = end
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return pairs


def _closing(text: str, start: int, lineno: int, section: str) -> int:
    depth, quoted = 0, False
    for i in range(start, len(text)):
        ch = text[i]
        if ch == '"':
            quoted = not quoted
            if not quoted and depth == 0:
                return i + 1
        elif not quoted and ch == "[":
            depth += 1
        elif not quoted and ch == "]":
            depth -= 1
            if depth == 0:
                return i + 1
    raise DefinitionError("unterminated value", lineno, section)


def _sections(text: str) -> list[_Section]:
    sections: list[_Section] = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line.startswith("["):
            m = _HEADER.match(line)
            if not m:
                raise DefinitionError(f"malformed section header {line!r}", lineno)
            current = _Section(m.group(1), m.group(2), lineno)
            sections.append(current)
            continue
        if current is None:
            raise DefinitionError("key/value line outside any section", lineno)
        for key, value in _split_pairs(line, lineno, current.label):
            if key in current.entries:
                raise DefinitionError(f"duplicate key {key!r}", lineno, current.label)
            current.entries[key] = (value, lineno)
    return sections


# -- value decoding --------------------------------------------------------

def _string_list(value: str, lineno: int, where: str) -> list[str]:
    try:
        items = json.loads(value)
    except json.JSONDecodeError:
        raise DefinitionError(f"expected a list of quoted strings, got {value!r}", lineno, where) from None
    if not isinstance(items, list) or not all(isinstance(s, str) for s in items):
        raise DefinitionError("expected a list of quoted strings", lineno, where)
    return items


def _scalar_text(value: str, lineno: int, where: str) -> str:
    if value.startswith('"'):
        try:
            v = json.loads(value)
        except json.JSONDecodeError:
            raise DefinitionError(f"bad quoted value {value!r}", lineno, where) from None
        if not isinstance(v, str):
            raise DefinitionError("expected a quoted string", lineno, where)
        return v
    return value


def _int(value: str, key: str, lineno: int, where: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise DefinitionError(f"{key} must be an integer, got {value!r}", lineno, where) from None


def _expr(text: str, lineno: int, where: str, what: str) -> Expr:
    try:
        return parse_expression(text)
    except ParseError as exc:
        raise DefinitionError(f"{what}: {exc.message} at column {exc.column}", lineno, where) from None


def _constant(text: str, lineno: int, where: str) -> GaussianRational:
    e = _expr(text, lineno, where, "C")
    if e.free:
        raise DefinitionError("C must be a constant", lineno, where)
    form = normalize(e)
    if not form.is_polynomial() or not form.num.is_constant():
        raise DefinitionError("C must be a constant", lineno, where)
    return form.num.terms.get((), GaussianRational(0))


# -- model assembly ----------------------------------------------------------

def _require(sec: _Section, keys: tuple[str, ...], optional: tuple[str, ...] = ()) -> None:
    for key in keys:
        if key not in sec.entries:
            raise DefinitionError(f"missing key {key!r}", sec.line, sec.label)
    for key, (_, lineno) in sec.entries.items():
        if key not in keys and key not in optional:
            raise DefinitionError(f"unknown key {key!r}", lineno, sec.label)


def _base_check(chart: ExtendedChart, e: Expr, lineno: int, where: str, what: str) -> None:
    for v in sorted(e.free):
        if v.index > chart.base_dim:
            raise DefinitionError(f"{what} uses {v} but dim = {chart.base_dim}", lineno, where)
        if v.level > 0:
            raise DefinitionError(f"{what} uses {v}; fields are declared on the base chart (level 0)", lineno, where)


def parse_definition_text(text: str) -> ModelSet:
    sections = _sections(text)
    manifolds = [s for s in sections if s.kind == "manifold"]
    if not manifolds:
        raise DefinitionError("missing [manifold] section")
    if len(manifolds) > 1:
        raise DefinitionError("duplicate [manifold] section", manifolds[1].line)
    msec = manifolds[0]
    _require(msec, ("dim",), ("order", "complex_pairs"))
    dim_v, dim_line = msec.entries["dim"]
    dim = _int(dim_v, "dim", dim_line, "manifold")
    if dim < 1:
        raise DefinitionError("dim must be >= 1", dim_line, "manifold")
    order_v, order_line = msec.entries.get("order", ("0", msec.line))
    order = _int(order_v, "order", order_line, "manifold")
    if order < 0:
        raise DefinitionError("order must be ≥ 0", order_line, "manifold")
    pairs = None
    if "complex_pairs" in msec.entries:
        pv, pline = msec.entries["complex_pairs"]
        pairs = _int(pv, "complex_pairs", pline, "manifold")
        if pairs < 1 or 2 * pairs != dim:
            raise DefinitionError(f"complex_pairs = {pairs} requires dim = {2 * pairs}", pline, "manifold")
    model = ModelSet(ExtendedChart(dim, order, pairs))
    base = model.base
    names_seen: dict[tuple[str, str], str] = {}

    for sec in sections:
        if sec.kind == "manifold":
            continue
        if sec.kind not in _FIELD_SECTIONS + ("contact", "check"):
            raise DefinitionError(f"unknown section kind {sec.kind!r}", sec.line)
        if not sec.name:
            raise DefinitionError(f"section [{sec.kind}] needs a name", sec.line)
        table_key = "check" if sec.kind == "check" else "object"
        if (table_key, sec.name) in names_seen:
            raise DefinitionError(f"duplicate name {sec.name!r}", sec.line, sec.label)
        names_seen[(table_key, sec.name)] = sec.kind
        where = sec.label
        if sec.kind == "scalar":
            _require(sec, ("expr",))
            value, lineno = sec.entries["expr"]
            e = _expr(_scalar_text(value, lineno, where), lineno, where, f"scalar {sec.name}.expr")
            _base_check(base, e, lineno, where, f"scalar {sec.name}")
            model.scalars[sec.name] = ScalarField(base, e)
        elif sec.kind in ("vector", "oneform"):
            _require(sec, ("components",))
            value, lineno = sec.entries["components"]
            items = _string_list(value, lineno, where)
            if len(items) != dim:
                raise DefinitionError(f"{sec.kind} {sec.name}.components has {len(items)} entries, chart needs {dim}",
                                      lineno, where)
            comps = []
            for a, s in enumerate(items, start=1):
                e = _expr(s, lineno, where, f"{sec.kind} {sec.name}.components[{a}]")
                _base_check(base, e, lineno, where, f"{sec.kind} {sec.name}")
                comps.append(e)
            cls = VectorField if sec.kind == "vector" else OneForm
            (model.vectors if sec.kind == "vector" else model.oneforms)[sec.name] = cls(base, tuple(comps))
        elif sec.kind == "endomorphism":
            _require(sec, ("matrix",))
            value, lineno = sec.entries["matrix"]
            rows = _string_list(value, lineno, where)
            if len(rows) != dim:
                raise DefinitionError(f"endomorphism {sec.name}.matrix has {len(rows)} rows, chart needs {dim}",
                                      lineno, where)
            matrix = []
            for i, row in enumerate(rows, start=1):
                cells = [c.strip() for c in row.split(",")]
                if len(cells) != dim:
                    raise DefinitionError(f"endomorphism {sec.name}.matrix row {i} has {len(cells)} entries, "
                                          f"chart needs {dim}", lineno, where)
                exprs = []
                for j, cell in enumerate(cells, start=1):
                    e = _expr(cell, lineno, where, f"endomorphism {sec.name}.matrix[{i}][{j}]")
                    _base_check(base, e, lineno, where, f"endomorphism {sec.name}")
                    exprs.append(e)
                matrix.append(tuple(exprs))
            model.endomorphisms[sec.name] = Endo11(base, tuple(matrix))

    # references resolve only after every field section is read
    for sec in sections:
        if sec.kind == "contact":
            _require(sec, ("F", "U", "omega"))
            refs = {}
            for key, table, cat in (("F", model.endomorphisms, "endomorphism"), ("U", model.vectors, "vector"),
                                    ("omega", model.oneforms, "oneform")):
                ref, lineno = sec.entries[key]
                if ref not in table:
                    raise DefinitionError(f"unresolved reference {ref} in contact {sec.name}"
                                          f" (expected {cat})", lineno, sec.label)
                refs[key] = ref
            model.contacts[sec.name] = ContactSpec(**refs)
    for sec in sections:
        if sec.kind == "check":
            model.checks.append(_check_spec(model, sec))
    return model


def _check_spec(model: ModelSet, sec: _Section) -> CheckSpec:
    _require(sec, ("kind", "args"), ("C",))
    kind, kline = sec.entries["kind"]
    if kind not in CHECK_KINDS:
        raise DefinitionError(f"unknown check kind {kind!r}; expected one of {', '.join(sorted(CHECK_KINDS))}",
                              kline, sec.label)
    raw, aline = sec.entries["args"]
    args = tuple(a for a in re.split(r"[\s,]+", _scalar_text(raw, aline, sec.label)) if a)
    wanted = CHECK_KINDS[kind]
    if len(args) != len(wanted):
        raise DefinitionError(f"check {sec.name} of kind {kind} takes {len(wanted)} argument(s), got {len(args)}",
                              aline, sec.label)
    for arg, cat in zip(args, wanted):
        have = model.category(arg)
        if have is None:
            raise DefinitionError(f"unresolved reference {arg} in check {sec.name}", aline, sec.label)
        if cat == "field" and have == "contact" or cat != "field" and have != cat:
            raise DefinitionError(f"check {sec.name}: {arg} is a {have}, expected {cat}", aline, sec.label)
    if kind == "identity" and model.category(args[0]) != model.category(args[1]):
        raise DefinitionError(f"check {sec.name}: {args[0]} and {args[1]} are different kinds", aline, sec.label)
    C = None
    if kind == "analytic_complete":
        if "C" not in sec.entries:
            raise DefinitionError("missing key 'C'", sec.line, sec.label)
        cv, cline = sec.entries["C"]
        C = _constant(_scalar_text(cv, cline, sec.label), cline, sec.label)
        if C.is_zero():
            raise DefinitionError("C must be non-zero", cline, sec.label)
    elif "C" in sec.entries:
        raise DefinitionError("key 'C' only applies to analytic_complete", sec.entries["C"][1], sec.label)
    return CheckSpec(sec.name, kind, args, C)


def parse_definition(path) -> ModelSet:
    """Read and validate a definition file.  I/O errors propagate as ``OSError``."""
    return parse_definition_text(Path(path).read_text(encoding="utf-8"))


# -- serialization -----------------------------------------------------------

def _q(items) -> str:
    return json.dumps(list(items), ensure_ascii=False)


def serialize(model: ModelSet) -> str:
    """Canonical text form; parsing it yields an equal model."""
    c = model.chart
    out = ["[manifold]", f"dim = {c.base_dim}", f"order = {c.order}"]
    if c.complex_pairs is not None:
        out.append(f"complex_pairs = {c.complex_pairs}")
    for name, f in model.scalars.items():
        out += ["", f"[scalar {name}]", f"expr = {json.dumps(to_text(f.expr), ensure_ascii=False)}"]
    for name, X in model.vectors.items():
        out += ["", f"[vector {name}]", f"components = {_q(to_text(e) for e in X.components)}"]
    for name, w in model.oneforms.items():
        out += ["", f"[oneform {name}]", f"components = {_q(to_text(e) for e in w.components)}"]
    for name, F in model.endomorphisms.items():
        rows = (", ".join(to_text(e) for e in row) for row in F.matrix)
        out += ["", f"[endomorphism {name}]", f"matrix = {_q(rows)}"]
    for name, t in model.contacts.items():
        out += ["", f"[contact {name}]", f"F = {t.F}   U = {t.U}   omega = {t.omega}"]
    for chk in model.checks:
        out += ["", f"[check {chk.name}]", f"kind = {chk.kind}", f"args = {', '.join(chk.args)}"]
        if chk.C is not None:
            out.append(f"C = {json.dumps(to_text(as_expr(chk.C)))}")
    return "\n".join(out) + "\n"

