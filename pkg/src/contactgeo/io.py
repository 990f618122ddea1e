"""JSON input documents for the CLI.

Structure block keys:
  manifold:  { "dimension": int, "coordinates": [str], "domain": {coord: [lo, hi]},
               "metric": [[expr-string]] }
  structure: { "phi": [[expr]], "xi": [expr], "eta": [expr] }  for ACM input
             { "j": [[expr]] }                                  for AH input
  submersion documents: { "total": <acm block>, "base": <ah block>,
                          "projection": [expr] }
"""

from __future__ import annotations

import json

from .errors import ExprSyntaxError, InputFormatError
from .manifold import ChartManifold, CovectorField, EndoField, VectorField
from .structures import AcmStructure, AhStructure
from .submersion import SubmersionSpec


def _require(cond, message):
    if not cond:
        raise InputFormatError(message)


def _load_chart(block, where: str) -> ChartManifold:
    _require(isinstance(block, dict), f"{where}: manifold block must be an object")
    for key in ("dimension", "coordinates", "metric"):
        _require(key in block, f"{where}: manifold block missing '{key}'")
    coords = block["coordinates"]
    dim = block["dimension"]
    _require(
        isinstance(coords, list) and len(coords) == dim,
        f"{where}: 'coordinates' must list exactly {dim} names",
    )
    metric = block["metric"]
    _require(
        isinstance(metric, list)
        and len(metric) == dim
        and all(isinstance(row, list) and len(row) == dim for row in metric),
        f"{where}: 'metric' must be a {dim}x{dim} array of expression strings",
    )
    domain = block.get("domain", {})
    _require(isinstance(domain, dict), f"{where}: 'domain' must map coordinates to [lo, hi]")
    try:
        return ChartManifold(coords, metric, domain={k: tuple(v) for k, v in domain.items()})
    except (ExprSyntaxError, ValueError) as exc:
        raise InputFormatError(f"{where}: {exc}") from exc


def _load_acm(doc, where: str) -> AcmStructure:
    _require("manifold" in doc and "structure" in doc, f"{where}: needs 'manifold' and 'structure'")
    chart = _load_chart(doc["manifold"], where)
    s = doc["structure"]
    for key in ("phi", "xi", "eta"):
        _require(key in s, f"{where}: structure block missing '{key}'")
    try:
        return AcmStructure(
            chart,
            EndoField(chart, s["phi"]),
            VectorField(chart, s["xi"]),
            CovectorField(chart, s["eta"]),
        )
    except (ExprSyntaxError, ValueError) as exc:
        raise InputFormatError(f"{where}: {exc}") from exc


def _load_ah(doc, where: str) -> AhStructure:
    _require("manifold" in doc and "structure" in doc, f"{where}: needs 'manifold' and 'structure'")
    chart = _load_chart(doc["manifold"], where)
    s = doc["structure"]
    _require("j" in s, f"{where}: almost Hermitian structure block missing 'j'")
    try:
        return AhStructure(chart, EndoField(chart, s["j"]))
    except (ExprSyntaxError, ValueError) as exc:
        raise InputFormatError(f"{where}: {exc}") from exc


def load_document(text: str):
    """Parse a JSON input into an AcmStructure, AhStructure or SubmersionSpec."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"invalid JSON: {exc}") from exc
    _require(isinstance(doc, dict), "top-level JSON value must be an object")
    if "total" in doc:
        for key in ("base", "projection"):
            _require(key in doc, f"submersion document missing '{key}'")
        total = _load_acm(doc["total"], "total")
        base = _load_ah(doc["base"], "base")
        try:
            return SubmersionSpec(total, base, doc["projection"])
        except (ExprSyntaxError, ValueError) as exc:
            raise InputFormatError(str(exc)) from exc
    _require("structure" in doc, "document must carry 'structure' (or 'total' for submersions)")
    if "j" in doc["structure"]:
        return _load_ah(doc, "input")
    return _load_acm(doc, "input")
