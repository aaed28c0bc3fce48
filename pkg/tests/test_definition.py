from pathlib import Path

import pytest

from liftcalc.calculus import check_almost_contact
from liftcalc.definition import (
    DefinitionError,
    parse_definition,
    parse_definition_text,
    serialize,
)
from liftcalc.geometry import VectorField, apply_endo

ROOT = Path(__file__).resolve().parent.parent
R3 = ROOT / "models" / "r3_contact.def"
DATA = Path(__file__).resolve().parent / "data"

HEAD = "[manifold]\ndim = 3\norder = 1\n"


def test_r3_example_file():
    m = parse_definition(R3)
    assert m.chart.base_dim == 3 and m.order == 1
    assert (len(m.endomorphisms), len(m.vectors), len(m.oneforms), len(m.contacts), len(m.checks)) == (1, 1, 1, 1, 2)
    assert check_almost_contact(m.triple("T1")).holds


def test_matrix_rows_are_components_of_frame_images():
    m = parse_definition(R3)
    F, B = m.endomorphisms["F"], m.base
    assert apply_endo(F, VectorField.basis(B, 0, 1)) == VectorField.basis(B, 0, 2)


def test_negative_order():
    with pytest.raises(DefinitionError, match="order must be ≥ 0"):
        parse_definition_text("[manifold]\ndim = 3\norder = -1\n")


def test_unresolved_reference():
    text = HEAD + "[check c1]\nkind = nijenhuis_zero\nargs = Q\n"
    with pytest.raises(DefinitionError, match="unresolved reference Q in check c1"):
        parse_definition_text(text)


def test_component_count_is_checked():
    with pytest.raises(DefinitionError, match="chart needs 3"):
        parse_definition(DATA / "malformed.def")


@pytest.mark.parametrize("body, fragment", [
    ("", "missing [manifold] section"),
    (HEAD + "[vector U]\ncomponents = [\"x1@1\", \"0\", \"0\"]\n", "U"),
    (HEAD + "[vector U]\ncomponents = [\"x1 +\", \"0\", \"0\"]\n", "syntax error"),
    (HEAD + "[widget W]\n", "unknown section kind"),
    (HEAD + "[vector U]\ncomponents = [\"0\",\"0\",\"1\"]\n[oneform U]\ncomponents = [\"0\",\"0\",\"1\"]\n",
     "duplicate name"),
    (HEAD + "[check c]\nkind = levitate\nargs = F\n", "unknown check kind"),
])
def test_definition_errors(body, fragment):
    with pytest.raises(DefinitionError, match=fragment.replace("[", r"\[")):
        parse_definition_text(body)


def test_errors_carry_line_numbers():
    with pytest.raises(DefinitionError) as err:
        parse_definition_text(HEAD + "\n[vector U]\ncomponents = [\"0\", \"1\"]\n")
    assert err.value.line == 6


def test_analytic_complete_needs_nonzero_constant():
    base = R3.read_text()
    with pytest.raises(DefinitionError, match="missing key 'C'"):
        parse_definition_text(base + "\n[check c3]\nkind = analytic_complete\nargs = T1, U\n")
    with pytest.raises(DefinitionError, match="non-zero"):
        parse_definition_text(base + "\n[check c3]\nkind = analytic_complete\nargs = T1, U\nC = 0\n")


@pytest.mark.parametrize("path", [R3, DATA / "all_pass.def", DATA / "one_fail.def"])
def test_serialize_round_trip(path):
    m = parse_definition(path)
    text = serialize(m)
    again = parse_definition_text(text)
    assert again == m
    assert serialize(again) == text
