import json
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

import dgsing.verify.pipeline as pipeline
from dgsing.engine import FreeDgModule, Window
from dgsing.verify import (
    CHECK_NAMES,
    SCHEMA_VERSION,
    PolynomialSyntaxError,
    ScenarioError,
    builtin_names,
    builtin_scenario,
    emit_report,
    format_polynomial,
    parse_polynomial,
    parse_scenario,
    report_to_dict,
    run_pipeline,
    tables_from_dict,
)
from dgsing.verify.cli import main
from dgsing.verify.oracles import oracle_quotient_dims, sym_quotient_dim

SMALL_WINDOW = "h:-3..2,w:-3..3,d:0..4"


# -- polynomials ----------------------------------------------------------------

def test_parse_polynomial():
    assert parse_polynomial("x1^3 + x2^3 + x3^3", 3) == {(3, 0, 0): 1, (0, 3, 0): 1, (0, 0, 3): 1}
    assert parse_polynomial("2*x1*x2 - (x1 - x2)^2", 2) == {(2, 0): -1, (0, 2): -1, (1, 1): 4}
    assert parse_polynomial("x1 - x1", 1) == {}


@pytest.mark.parametrize("text, column", [("x1 +", 5), ("x1 ** 2", 5), ("x4", 1), ("(x1", 1), ("", 1)])
def test_polynomial_syntax_errors(text, column):
    with pytest.raises(PolynomialSyntaxError) as err:
        parse_polynomial(text, 3)
    assert err.value.column == column


@given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-5, 5).filter(bool), max_size=5))
def test_format_parse_round_trip(poly):
    assert parse_polynomial(format_polynomial(poly), 2) == poly if poly else format_polynomial(poly) == "0"


# -- scenarios ------------------------------------------------------------------

def test_point_scenario():
    sc = parse_scenario('{"id": "point", "n": 1, "r": 1, "s": ["x1"], "regular": true}')
    assert sc.id == "point" and sc.section.degrees == (1,)
    assert sc.checks == CHECK_NAMES


def test_fermat_degree_accepted():
    sc = parse_scenario('{"n": 3, "r": 1, "s": ["x1^3+x2^3+x3^3"]}')
    assert sc.section.degrees == (3,)


@pytest.mark.parametrize("doc", [
    '{"n": 2, "r": 1, "s": ["x1+x2^2"]}',
    '{"n": 2, "r": 2, "s": ["x1"]}',
    '{"n": 2, "r": 1, "s": ["x1"], "checks": []}',
    '{"n": 2, "r": 1, "s": ["x1"], "checks": ["C11"]}',
    '{"n": 2, "r": 1, "s": ["x1"], "colour": 3}',
    '{"n": 2, "r": 1, "s": ["x1"], "window": "h:0..-1,w:0..0,d:0..0"}',
    '{"n": 2, "r": 1, "s": ["x1"], "field": "fp:4"}',
    '{"n": 2, "r": 1, "s": ["x1 +"]}',
    '{"r": 1, "s": ["x1"]}',
])
def test_invalid_scenarios(doc):
    with pytest.raises(ScenarioError):
        parse_scenario(doc)


def test_json_syntax_error_has_position():
    with pytest.raises(ScenarioError, match="line 2, column"):
        parse_scenario('{"n": 1,\n "r" 1}')


def test_builtin_scenarios():
    assert builtin_names() == ["axes", "ci", "fermat", "nonregular", "point"]
    assert not builtin_scenario("nonregular").section.regular_claimed


def test_window_override_keeps_missing_axes():
    sc = builtin_scenario("point")
    w = Window.parse("w:-2..2", base=sc.window)
    assert w == Window((-6, 4), (-2, 2), (0, 10))


# -- oracles --------------------------------------------------------------------

def test_oracle_point_quotient():
    sd = builtin_scenario("point").section
    _, quot = oracle_quotient_dims(sd, Window((0, 0), (0, 0), (0, 3)))
    assert [quot[(0, 0, d)] for d in range(4)] == [1, 0, 0, 0]


def test_oracle_axes_sym():
    sd = builtin_scenario("axes").section
    assert [sym_quotient_dim(sd, 1, d) for d in range(4)] == [1, 2, 2, 2]


def test_oracle_without_section():
    sd = parse_scenario('{"n": 2, "r": 0, "s": []}').section
    _, quot = oracle_quotient_dims(sd, Window((0, 0), (0, 0), (0, 3)))
    assert [quot[(0, 0, d)] for d in range(4)] == [1, 2, 3, 4]


# -- reports --------------------------------------------------------------------

@pytest.fixture(scope="module")
def point_report():
    sc = builtin_scenario("point").with_overrides(window=Window.parse(SMALL_WINDOW), checks=["C2", "C4", "C9"])
    return run_pipeline(sc)


def test_report_serialization_is_stable(point_report):
    assert emit_report(point_report) == emit_report(point_report)


def test_report_json_round_trip(point_report):
    doc = json.loads(emit_report(point_report))
    assert doc["schema_version"] == SCHEMA_VERSION
    assert doc["scenario_id"] == "point"
    assert [c["name"] for c in doc["checks"]] == ["C2", "C4", "C9"]
    assert all(c["runtime_ms"] is None for c in doc["checks"])
    tables = tables_from_dict(doc)
    assert tables == point_report.dimension_tables()
    for recs in doc["tables"].values():
        keys = [(r["h"], r["w"], r["d"]) for r in recs]
        assert keys == sorted(keys)
    assert report_to_dict(point_report) == doc


def test_timings_are_opt_in():
    sc = builtin_scenario("point").with_overrides(window=Window.parse(SMALL_WINDOW), checks=["C4"])
    rep = run_pipeline(sc, timings=True)
    assert rep.checks[0].runtime_ms is not None


def _broken_F(real):
    """F with the sign of every t-insertion flipped."""
    def broken(M, A, cut, name=None):
        F = real(M, A, cut, name=name)
        t = A.index["t"]
        diff = {i: {j: (-a if any(m[t] for m in a.terms) else a) for j, a in row.items()}
                for i, row in F.diff.items()}
        return FreeDgModule(A, F.generators, diff, name=F.name, valid_weights=F.valid_weights)
    return broken


def test_text_report_lists_every_failing_tridegree(monkeypatch):
    monkeypatch.setattr(pipeline, "koszul_F", _broken_F(pipeline.koszul_F))
    sc = builtin_scenario("ci").with_overrides(window=Window.parse(SMALL_WINDOW), checks=["C1"])
    rep = run_pipeline(sc)
    (c1,) = rep.checks
    assert c1.verdict == "fail" and c1.failures
    text = emit_report(rep, "text").decode()
    for f in c1.failures:
        tri = "(" + ",".join(str(x) for x in f["tridegree"]) + ")"
        assert f"{f['object']} at {tri}: {f['detail']}" in text


# -- command line ---------------------------------------------------------------

def test_cli_pass(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["verify", "--scenario", "point", "--window", SMALL_WINDOW, "--checks", "C1,C4",
                 "--report", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert [c["verdict"] for c in doc["checks"]] == ["pass", "pass"]


def test_cli_text_format(capsys):
    code = main(["verify", "--scenario", "point", "--window", SMALL_WINDOW, "--checks", "C4", "--format", "text"])
    assert code == 0
    assert "C4     pass" in capsys.readouterr().out


def test_cli_fail_exit_code(tmp_path, capsys):
    path = tmp_path / "claims_regular.json"
    path.write_text('{"id": "wrong", "n": 2, "r": 2, "s": ["x1", "x1"], "regular": true}')
    assert main(["verify", "--scenario", str(path), "--window", SMALL_WINDOW, "--checks", "C4"]) == 1


def test_cli_inconclusive_exit_code(tmp_path, capsys):
    path = tmp_path / "tiny_cap.json"
    path.write_text('{"n": 2, "r": 1, "s": ["x1*x2"], "caps": {"basis": 2}}')
    assert main(["verify", "--scenario", str(path), "--window", SMALL_WINDOW, "--checks", "C2"]) == 2


@pytest.mark.parametrize("args", [
    ["--scenario", "no_such_scenario"],
    ["--scenario", "point", "--checks", ""],
    ["--scenario", "point", "--checks", "C0"],
    ["--scenario", "point", "--field", "fp:10"],
    ["--scenario", "point", "--window", "h:1..0"],
    ["--scenario", "point", "--parallel", "0"],
])
def test_cli_input_errors(args, capsys):
    assert main(["verify", *args]) == 3
    assert "input error" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dgsing", "verify", "--scenario", "point", "--window", SMALL_WINDOW,
                           "--checks", "C4"], capture_output=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["scenario_id"] == "point"


def test_empty_safe_interior_never_passes():
    sc = builtin_scenario("point").with_overrides(window=Window.parse("h:0..1,w:-2..2,d:0..3"))
    rep = run_pipeline(sc)
    assert all(c.verdict != "pass" for c in rep.checks if c.name != "C1")
