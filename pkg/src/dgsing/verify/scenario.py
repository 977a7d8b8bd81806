"""Scenario files: a JSON document describing a section, a window and the checks to run.

Example::

    {
      "id": "axes",
      "n": 2, "x_weights": [1, 1], "r": 1,
      "s": ["x1*x2"],
      "regular": true,
      "window": {"h": [-6, 4], "w": [-8, 8], "d": [0, 10]},
      "checks": ["C1", "C2"],
      "caps": {"basis": 200000},
      "field": "rational"
    }

Only ``n``, ``r`` and ``s`` are required. ``window`` may also be written as
``"h:-6..4,w:-8..8,d:0..10"``. ``degrees`` gives ``e_i`` for sections that are
identically zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from dataclasses import field as dc_field
from pathlib import Path

from ..engine.modules import BASIS_CAP
from ..engine.windowed import DEFAULT_WINDOW, Window
from ..exact.algebra import PresentationError
from ..exact.fields import QQ, field_from_spec
from ..koszul.section import SectionData
from .polynomial import PolynomialSyntaxError, parse_polynomial

CHECK_NAMES = tuple(f"C{k}" for k in range(1, 11))
KNOWN_KEYS = {"id", "n", "x_weights", "r", "s", "degrees", "regular", "window", "checks", "caps", "field"}


class ScenarioError(ValueError):
    """Invalid scenario input."""


@dataclass(frozen=True)
class Caps:
    basis: int = BASIS_CAP


@dataclass(frozen=True)
class Scenario:
    id: str
    section: SectionData
    window: Window = DEFAULT_WINDOW
    field: object = QQ
    checks: tuple = CHECK_NAMES
    caps: Caps = dc_field(default_factory=Caps)
    source: dict = dc_field(default_factory=dict, compare=False, repr=False)

    def with_overrides(self, window=None, field=None, checks=None):
        out = self
        if window is not None:
            out = replace(out, window=window)
        if field is not None:
            out = replace(out, field=field)
        if checks is not None:
            out = replace(out, checks=parse_checks(checks))
        return out


def parse_checks(items) -> tuple:
    if isinstance(items, str):
        items = [c for c in items.split(",") if c.strip()]
    names = []
    for c in items:
        c = str(c).strip().upper()
        if c not in CHECK_NAMES:
            raise ScenarioError(f"unknown check {c!r}; expected one of {', '.join(CHECK_NAMES)}")
        if c not in names:
            names.append(c)
    if not names:
        raise ScenarioError("the check list is empty")
    return tuple(sorted(names, key=CHECK_NAMES.index))


def parse_window(spec) -> Window:
    try:
        if isinstance(spec, str):
            return Window.parse(spec)
        if isinstance(spec, dict):
            return Window(tuple(spec["h"]), tuple(spec["w"]), tuple(spec["d"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"bad window {spec!r}: {exc}") from exc
    raise ScenarioError(f"bad window {spec!r}")


def _require_int(doc, key):
    val = doc.get(key)
    if not isinstance(val, int) or isinstance(val, bool):
        raise ScenarioError(f"field {key!r} must be an integer")
    return val


def scenario_from_dict(doc: dict, default_id="scenario") -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("a scenario must be a JSON object")
    unknown = set(doc) - KNOWN_KEYS
    if unknown:
        raise ScenarioError(f"unknown field(s): {', '.join(sorted(unknown))}")
    for key in ("n", "r", "s"):
        if key not in doc:
            raise ScenarioError(f"missing required field {key!r}")
    n = _require_int(doc, "n")
    r = _require_int(doc, "r")
    polys_src = doc["s"]
    if not isinstance(polys_src, list) or len(polys_src) != r:
        raise ScenarioError(f"'s' must list exactly r = {r} polynomials")
    polys = []
    for k, text in enumerate(polys_src):
        try:
            polys.append(parse_polynomial(str(text), n))
        except PolynomialSyntaxError as exc:
            raise ScenarioError(f"s[{k}]: {exc}") from exc
    weights = tuple(doc.get("x_weights") or (1,) * n)
    try:
        sd = SectionData(n, weights, tuple(polys), bool(doc.get("regular", True)), tuple(doc.get("degrees", ())),
                         labels=tuple(str(p) for p in polys_src))
    except PresentationError as exc:
        raise ScenarioError(str(exc)) from exc
    window = parse_window(doc["window"]) if "window" in doc else DEFAULT_WINDOW
    try:
        fld = field_from_spec(str(doc.get("field", "rational")))
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc
    checks = parse_checks(doc["checks"]) if "checks" in doc else CHECK_NAMES
    caps_doc = doc.get("caps") or {}
    if not isinstance(caps_doc, dict) or set(caps_doc) - {"basis"}:
        raise ScenarioError("caps may only contain 'basis'")
    caps = Caps(**caps_doc)
    return Scenario(str(doc.get("id", default_id)), sd, window, fld, checks, caps, source=doc)


def parse_scenario(text: str, default_id="scenario") -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return scenario_from_dict(doc, default_id)


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc
    return parse_scenario(text, default_id=path.stem)


BUILTIN_DIR = Path(__file__).parent / "scenarios"


def builtin_scenario(name: str) -> Scenario:
    return load_scenario(BUILTIN_DIR / f"{name}.json")


def builtin_names():
    return sorted(p.stem for p in BUILTIN_DIR.glob("*.json"))
