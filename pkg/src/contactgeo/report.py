"""Deterministic report documents: JSON (stable key order, machine precision)
and markdown tables.  Two runs with the same input and configuration produce
byte-identical JSON."""

from __future__ import annotations

import hashlib
import json

from . import __version__ as _version


def input_hash(descriptor) -> str:
    """Stable digest of the resolved input (catalog name or file bytes)."""
    if isinstance(descriptor, bytes):
        payload = descriptor
    else:
        payload = json.dumps(descriptor, sort_keys=True).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()[:16]


def build_document(command: str, input_label: str, digest: str, cfg, results,
                   structure_checks=None) -> dict:
    doc = {
        "tool": "contactgeo",
        "version": _version,
        "command": command,
        "input": input_label,
        "input_hash": digest,
        "seed": cfg.seed,
        "points": cfg.points,
        "vectors": cfg.vectors,
        "tolerance": cfg.tol,
    }
    if structure_checks is not None:
        doc["structure_checks"] = structure_checks
    doc["results"] = [r.to_dict() for r in results]
    return doc


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=True) + "\n"


def _fmt_res(value) -> str:
    try:
        v = float(value)
    except (TypeError, ValueError):
        return "-"
    if v != v:  # nan for not-applicable rows
        return "-"
    return f"{v:.3e}"


def to_markdown(doc: dict) -> str:
    lines = [
        f"# contactgeo {doc['command']} report",
        "",
        f"- input: `{doc['input']}` (hash `{doc['input_hash']}`)",
        f"- seed {doc['seed']}, {doc['points']} points x {doc['vectors']} vector tuples, "
        f"tolerance {doc['tolerance']:g}",
        "",
    ]
    if doc["command"] == "classify":
        lines += ["| class | verdict | max residual | notes |", "| --- | --- | --- | --- |"]
        for r in doc["results"]:
            notes = ", ".join(f"{k}={v:.6g}" for k, v in r.get("extra", {}).items())
            lines.append(
                f"| {r['class_id']} | {r['verdict']} | {_fmt_res(r['max_residual'])} | {notes} |"
            )
    else:
        lines += [
            "| identity | reference | verdict | max residual |",
            "| --- | --- | --- | --- |",
        ]
        for r in doc["results"]:
            ref = r.get("reference", "")
            res = _fmt_res(r.get("max_residual"))
            if r["verdict"] == "not_applicable":
                res = r.get("reason", "-")
            lines.append(f"| {r['identity']} | {ref} | {r['verdict']} | {res} |")
    lines.append("")
    return "\n".join(lines)
