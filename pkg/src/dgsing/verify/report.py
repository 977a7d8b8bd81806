"""Serializing reports as JSON or as a plain text table."""

from __future__ import annotations

import json

from ..engine.windowed import CohomologyTable

SCHEMA_VERSION = 1


def _records(table):
    dims = table.dims if isinstance(table, CohomologyTable) else table
    return [{"h": t[0], "w": t[1], "d": t[2], "dim": v} for t, v in sorted(dims.items())]


def report_to_dict(rep) -> dict:
    checks = []
    for c in rep.checks:
        entry = {"name": c.name, "verdict": c.verdict}
        if c.witness is not None:
            entry["witness"] = c.witness
            entry["failures"] = c.failures
        if c.notes:
            entry["notes"] = list(c.notes)
        entry["runtime_ms"] = c.runtime_ms
        checks.append(entry)
    return {
        "schema_version": SCHEMA_VERSION,
        "engine_version": rep.engine_version,
        "scenario_id": rep.scenario_id,
        "window": str(rep.window) if rep.window is not None else None,
        "field": rep.field_name,
        "checks": checks,
        "tables": {name: _records(rep.tables[name]) for name in sorted(rep.tables)},
    }


def tables_from_dict(doc: dict) -> dict:
    """``name -> {(h, w, d): dim}`` from a parsed JSON report."""
    return {name: {(r["h"], r["w"], r["d"]): r["dim"] for r in recs} for name, recs in doc["tables"].items()}


def _fmt_tri(tri):
    return "-" if tri is None else "(" + ",".join(str(x) for x in tri) + ")"


def render_text(rep) -> str:
    doc = report_to_dict(rep)
    lines = [f"scenario {doc['scenario_id']}  window {doc['window']}  field {doc['field']}  "
             f"engine {doc['engine_version']}", ""]
    lines.append(f"{'check':<6} {'verdict':<13} {'runtime_ms':>10}")
    for c in doc["checks"]:
        ms = "" if c["runtime_ms"] is None else f"{c['runtime_ms']:.1f}"
        lines.append(f"{c['name']:<6} {c['verdict']:<13} {ms:>10}")
        for f in c.get("failures", []):
            lines.append(f"       {f['object']} at {_fmt_tri(f['tridegree'])}: {f['detail']}")
        for note in c.get("notes", []):
            lines.append(f"       note: {note}")
    for name, recs in doc["tables"].items():
        nonzero = [r for r in recs if r["dim"]]
        lines += ["", f"table {name}  ({len(recs)} entries, {len(nonzero)} nonzero)", f"{'h':>4} {'w':>4} {'d':>4} {'dim':>6}"]
        for r in nonzero:
            lines.append(f"{r['h']:>4} {r['w']:>4} {r['d']:>4} {r['dim']:>6}")
    return "\n".join(lines) + "\n"


def emit_report(rep, fmt="json") -> bytes:
    if fmt == "json":
        return (json.dumps(report_to_dict(rep), indent=1) + "\n").encode()
    if fmt in ("text", "text-table"):
        return render_text(rep).encode()
    raise ValueError(f"unknown report format {fmt!r}")
