"""Collects acceptance outcomes and prints one line per criterion at the end of the run."""

ACCEPTANCE = {}  # criterion -> list of (scenario, ok, detail)


def record(criterion, scenario, ok, detail=""):
    ACCEPTANCE.setdefault(criterion, []).append((scenario, ok, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE, key=_order):
        rows = ACCEPTANCE[criterion]
        ok = all(r[1] for r in rows)
        detail = "; ".join(f"{s} {'ok' if good else 'FAIL'} {d}".rstrip() for s, good, d in rows)
        terminalreporter.write_line(f"{criterion:<12} {'PASS' if ok else 'FAIL'}  {detail}")


def _order(name):
    if name.startswith("C") and name[1:].isdigit():
        return (0, int(name[1:]))
    return (1, name)
