from pathlib import Path

from liftcalc.definition import parse_definition
from liftcalc.geometry import ExtendedChart
from liftcalc.theorems import (
    STRUCTURE_ERRATA,
    FieldFactory,
    builtin_suite,
    lie_structure_formulas,
    model_suite,
    r3_contact,
)
from liftcalc.verify import overall, run_suite

R3 = Path(__file__).resolve().parent.parent / "models" / "r3_contact.def"


def test_field_factory_is_seeded_and_bounded():
    a = FieldFactory(ExtendedChart(2), 5).endo()
    b = FieldFactory(ExtendedChart(2), 5).endo()
    assert a == b
    for e in a.flat():
        assert e.max_level() <= 0


def test_small_builtin_suite_passes_with_informational_probes():
    reports = run_suite(builtin_suite(instances=1, samples=20))
    assert overall(reports)
    info = {r.name for r in reports if r.informational}
    assert "extended.square k=2 probe r3" in info
    assert all(r.note.startswith("informational residual") for r in reports if r.informational)


def test_structure_formulas_include_a_corrected_twin():
    t = r3_contact()
    fac = FieldFactory(t.chart, 1)
    formulas = lie_structure_formulas(t, fac.vector(), fac.vector(zero_slots=(2,)))
    assert len(formulas) == 9
    for name in STRUCTURE_ERRATA:
        assert f"{name} corrected" in formulas


def test_model_suite_on_the_example_file():
    reports = run_suite(model_suite(parse_definition(R3), samples=20))
    assert reports and overall(reports)
