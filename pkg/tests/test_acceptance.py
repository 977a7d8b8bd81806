"""End-to-end acceptance: every criterion on every reference scenario, on the default window.

Each check runs on a fresh workspace so its time bound covers building the
objects it needs. Comparisons are exact dimension equalities.
"""

import time

import pytest
from sympy import randprime

from conftest import record
from dgsing.engine import Window, cohomology
from dgsing.exact import PrimeField
from dgsing.koszul import SectionData, build_base_ring, QuotientBasis
from dgsing.verify import builtin_scenario, emit_report, run_pipeline
from dgsing.verify.oracles import quotient_ring_dim, sym_quotient_dim
from dgsing.verify.pipeline import CHECKS, Workspace, koszul_window

SCENARIOS = ["point", "axes", "fermat", "ci", "nonregular"]
BOUNDS = {"C1": 5, "C2": 10, "C3": 10, "C4": 5, "C5": 30, "C6": 10, "C7": 10, "C8": 15, "C9": 5, "C10": 60}


@pytest.mark.parametrize("scenario", SCENARIOS)
@pytest.mark.parametrize("criterion", list(BOUNDS))
def test_criterion(criterion, scenario):
    ws = Workspace(builtin_scenario(scenario))
    start = time.perf_counter()
    res = CHECKS[criterion](ws)
    elapsed = time.perf_counter() - start
    ok = res.verdict == "pass" and elapsed < BOUNDS[criterion]
    record(criterion, scenario, ok, f"{res.verdict} {elapsed:.1f}s/{BOUNDS[criterion]}s")
    assert res.verdict == "pass", res.failures[:5]
    assert elapsed < BOUNDS[criterion]


@pytest.mark.parametrize("scenario", SCENARIOS)
def test_determinism(scenario):
    sc = builtin_scenario(scenario)
    serial = emit_report(run_pipeline(sc, parallel=1))
    threaded = emit_report(run_pipeline(sc, parallel=4))
    ok = serial == threaded
    record("determinism", scenario, ok, f"{len(serial)} bytes")
    assert ok


@pytest.mark.parametrize("scenario", SCENARIOS)
def test_field_cross_check(scenario):
    p = randprime(2**20, 2**31)
    sc = builtin_scenario(scenario)
    rational = run_pipeline(sc).dimension_tables()
    modular = run_pipeline(sc.with_overrides(field=PrimeField(p))).dimension_tables()
    ok = rational == modular
    record("field-check", scenario, ok, f"p={p}")
    assert ok, sorted(set(rational) ^ set(modular))


# -- the examples attached to the criteria -----------------------------------------

def test_point_all_checks_pass():
    rep = run_pipeline(builtin_scenario("point"))
    assert [c.verdict for c in rep.checks] == ["pass"] * 10


def test_nonregular_koszul_and_localization():
    rep = run_pipeline(builtin_scenario("nonregular").with_overrides(checks=["C4", "C8"]))
    assert rep.verdict("C4") == "pass" and rep.verdict("C8") == "pass"
    assert "not a resolution" in rep.checks[0].notes[0]
    loc = rep.dimension_tables()["A[t^-1]"]
    koszul = rep.dimension_tables()["H(K)[t,t^-1]"]
    assert loc == {t: v for t, v in koszul.items() if t in loc}
    assert any(v for (h, _, _), v in loc.items() if h == -1)


def fermat():
    return builtin_scenario("fermat").section


def test_fermat_quotient_dims_frozen():
    want = [1, 3, 6, 9, 12, 15, 18, 21]
    assert [quotient_ring_dim(fermat(), v) for v in range(8)] == want
    R = build_base_ring(fermat())
    assert [len(QuotientBasis(fermat(), R, v)) for v in range(8)] == want


@pytest.mark.xfail(strict=True, reason="the cubic quotient grows by 3 per degree from degree 3 on")
def test_fermat_quotient_dims_as_listed():
    assert [quotient_ring_dim(fermat(), v) for v in range(6)] == [1, 3, 6, 9, 9, 9]


def test_axes_and_point_oracles_frozen():
    axes = builtin_scenario("axes").section
    assert [sym_quotient_dim(axes, 1, d) for d in range(4)] == [1, 2, 2, 2]
    point = builtin_scenario("point").section
    assert [quotient_ring_dim(point, d) for d in range(3)] == [1, 0, 0]


@pytest.mark.parametrize("scenario", ["point", "ci"])
def test_koszul_cohomology_is_the_ground_field(scenario):
    ws = Workspace(builtin_scenario(scenario))
    assert cohomology(ws.K, koszul_window(ws)).nonzero() == {(0, 0, 0): 1}


@pytest.mark.xfail(strict=True, reason="H^0(K) is R/(s), which is infinite dimensional for a hypersurface in n >= 2")
@pytest.mark.parametrize("scenario", ["fermat", "axes"])
def test_koszul_cohomology_is_the_ground_field_for_hypersurfaces(scenario):
    ws = Workspace(builtin_scenario(scenario))
    assert cohomology(ws.K, koszul_window(ws)).nonzero() == {(0, 0, 0): 1}
