"""Reading scenario and joint-law JSON documents.

Scenario document::

    {"outcomes":   [{"id": "y1", "label": "..."}, ...],        # worst first
     "treatments": [{"id": "a1", "label": "...", "marginal": {"y1": "1/6", ...}}, ...],
     "utilities":  [{"id": "mu1", "values": {"y1": "1", ...}}, ...],
     "standard_of_care": "a1",                                  # optional
     "comparisons": [{"new": "a2", "ref": "a1", "w": "1"}]}     # optional

Joint document::

    {"treatments": ["a1", "a2", "a3"],
     "cells": [{"outcomes": ["y4", "y5", "y6"], "p": "1/6"}, ...]}

Rationals are strings matching ``[sign]int[/posint]``; plain JSON integers
are also accepted.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

from .core import (
    Finding,
    Scenario,
    make_marginal,
    make_outcome_space,
    make_utility,
    parse_rational,
    validate_scenario,
)
from .errors import HarmError, InvalidScenario, ParseError
from .joint import MultiwayJoint, make_multiway_joint

BUNDLED = ("tb.json", "tb_joint.json")


@dataclass(frozen=True)
class Comparison:
    new: str
    ref: str
    w: Fraction = Fraction(1)


@dataclass
class ScenarioDocument:
    scenario: Scenario | None
    comparisons: list[Comparison] = field(default_factory=list)
    findings: list[Finding] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.scenario is not None and not self.findings


def resolve_path(name: str | Path) -> Path:
    """An existing file path, else a bundled data file of that name."""
    path = Path(name)
    if path.exists() or str(name) not in BUNDLED:
        return path
    return Path(str(resources.files("cfharm") / "data" / str(name)))


def read_json(path: str | Path) -> Any:
    path = resolve_path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", str(path)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{path} line {exc.lineno} column {exc.colno}") from None


def _require(obj: Any, key: str, kind, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"missing key {key!r}", where)
    value = obj[key]
    if not isinstance(value, kind):
        names = kind.__name__ if isinstance(kind, type) else " or ".join(k.__name__ for k in kind)
        raise ParseError(f"{key!r} must be a {names}", where)
    return value


def _str_map(raw: Any, where: str) -> dict[str, Any]:
    if not isinstance(raw, dict):
        raise ParseError("expected an object of outcome id -> rational", where)
    for label, value in raw.items():
        parse_rational(value, where=f"{where}.{label}")
    return raw


def parse_scenario(doc: Any) -> ScenarioDocument:
    """Turn a decoded JSON document into a scenario, collecting problems as findings.

    Structural problems (missing keys, malformed rationals) raise
    :class:`ParseError`; semantic ones become findings.
    """
    outcomes = _require(doc, "outcomes", list, "document")
    ids, labels = [], []
    for i, o in enumerate(outcomes):
        where = f"outcomes[{i}]"
        ids.append(_require(o, "id", str, where))
        labels.append(o.get("label", ids[-1]) if isinstance(o, dict) else ids[-1])
    findings: list[Finding] = []
    try:
        space = make_outcome_space(ids, labels)
    except HarmError as exc:
        return ScenarioDocument(None, [], [Finding(type(exc).__name__, "outcomes", str(exc))])

    treatments, tlabels = {}, {}
    for i, t in enumerate(_require(doc, "treatments", list, "document")):
        where = f"treatments[{i}]"
        tid = _require(t, "id", str, where)
        mass = _str_map(_require(t, "marginal", dict, where), f"{where}.marginal")
        if tid in treatments:
            findings.append(Finding("DuplicateTreatment", where, f"treatment id {tid!r} repeated"))
            continue
        try:
            treatments[tid] = make_marginal(space, mass)
            tlabels[tid] = t.get("label", tid)
        except HarmError as exc:
            findings.append(Finding(type(exc).__name__, f"treatment {tid}", str(exc)))

    utilities = {}
    for i, u in enumerate(doc.get("utilities", [])):
        where = f"utilities[{i}]"
        uid = _require(u, "id", str, where)
        values = _str_map(_require(u, "values", dict, where), f"{where}.values")
        if uid in utilities:
            findings.append(Finding("DuplicateUtility", where, f"utility id {uid!r} repeated"))
            continue
        try:
            utilities[uid] = make_utility(space, values)
        except HarmError as exc:
            findings.append(Finding(type(exc).__name__, f"utility {uid}", str(exc)))

    soc = doc.get("standard_of_care")
    if soc is not None and not isinstance(soc, str):
        raise ParseError("standard_of_care must be a string", "document")

    comparisons = []
    for i, c in enumerate(doc.get("comparisons", [])):
        where = f"comparisons[{i}]"
        new, ref = _require(c, "new", str, where), _require(c, "ref", str, where)
        w = parse_rational(c.get("w", "1"), where=f"{where}.w")
        for tid in (new, ref):
            if tid not in treatments:
                findings.append(Finding("UnknownTreatment", where, f"{tid!r} is not a treatment"))
        if w < 0:
            findings.append(Finding("NegativeWeight", where, f"w = {w}"))
        comparisons.append(Comparison(new, ref, w))

    scenario = Scenario(space, treatments, utilities, soc, tlabels)
    findings.extend(validate_scenario(scenario))
    return ScenarioDocument(scenario, comparisons, findings)


def read_scenario(path: str | Path) -> ScenarioDocument:
    return parse_scenario(read_json(path))


def load_scenario(path: str | Path) -> ScenarioDocument:
    """Like :func:`read_scenario` but raises :class:`InvalidScenario` on any finding."""
    doc = read_scenario(path)
    if not doc.valid:
        raise InvalidScenario(doc.findings)
    return doc


def parse_joint(doc: Any, scenario: Scenario) -> MultiwayJoint:
    treatments = _require(doc, "treatments", list, "joint")
    cells = []
    for i, cell in enumerate(_require(doc, "cells", list, "joint")):
        where = f"cells[{i}]"
        outcomes = _require(cell, "outcomes", list, where)
        p = parse_rational(_require(cell, "p", (str, int), where), where=f"{where}.p")
        cells.append((tuple(outcomes), p))
    return make_multiway_joint(scenario, cells, treatments)


def load_joint(path: str | Path, scenario: Scenario) -> MultiwayJoint:
    return parse_joint(read_json(path), scenario)
