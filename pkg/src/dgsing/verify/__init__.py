"""Scenario files, brute-force oracles, the verification pipeline and its reports."""

from .oracles import oracle_quotient_dims, quotient_ring_dim, ring_dim, sym_quotient_dim
from .pipeline import CHECKS, CheckResult, Report, run_pipeline
from .polynomial import PolynomialSyntaxError, format_polynomial, parse_polynomial
from .report import SCHEMA_VERSION, emit_report, report_to_dict, tables_from_dict
from .scenario import (
    CHECK_NAMES,
    Scenario,
    ScenarioError,
    builtin_names,
    builtin_scenario,
    load_scenario,
    parse_scenario,
)
