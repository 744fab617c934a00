from adfbn.correspondence import check
from adfbn.formula import parse_formula as P
from adfbn.model import BooleanNetwork

from generators import network_family


def test_every_check_passes_on_corpus(data_dir):
    for f in sorted(data_dir.iterdir()):
        from adfbn.textio import load

        report = check(load(f))
        assert report.passed, (f.name, report.lines())


def test_taut_discrepancy_is_a_note(taut):
    report = check(taut)
    assert report.passed
    assert any("differ from trap spaces" in n for n in report.notes)
    assert report.result("trap-space-admissible").detail == "6 on both sides"


def test_random_family_passes():
    for M in network_family(61, 60):
        report = check(M)
        assert report.passed, report.lines()


def test_sync_escape_is_reported():
    M = BooleanNetwork.from_functions({"x": P("y"), "y": P("x")})
    report = check(M)
    assert report.passed
    assert any(n.startswith("sync attractors outside") for n in report.notes)


def test_non_sign_definite_skips_existence():
    M = BooleanNetwork.from_functions({"a": P("a"), "b": P("b"), "c": P("(a & !b) | (!a & b)")})
    report = check(M)
    assert report.passed
    assert "existence-criteria" not in {r.name for r in report.results}
    assert report.as_dict()["passed"] is True
