"""Interchange documents: JSON-style text with round-trip-safe floats, plus CSV.

Floats are written with 17 significant digits so that parsing recovers the
exact double; document emission is deterministic (fixed field order, fixed
formatting), making outputs byte-identical for identical inputs.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .errors import SchemaViolationError
from .types import (Grid, OperatorSpec, PerturbationSeq, Potential,
                    RobinAngles, SpectralDatum, SpectrumTable)

__all__ = [
    "serialize",
    "deserialize",
    "operator_to_document",
    "operator_from_document",
    "spectrum_to_document",
    "spectrum_from_document",
    "coeffs_to_document",
    "coeffs_from_document",
    "dumps",
    "loads",
    "potential_to_csv",
    "spectrum_to_csv",
]


# --- low-level text emission -------------------------------------------------

def _fmt_float(x: float) -> str:
    if not np.isfinite(x):
        raise ValueError("documents may only contain finite numbers")
    return format(float(x), ".17g")


def _emit(value: Any, indent: int) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        body = ",\n".join(f'{pad}  {json.dumps(k)}: {_emit(v, indent + 1)}'
                          for k, v in value.items())
        return "{\n" + body + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if len(value) == 0:
            return "[]"
        body = ",\n".join(f"{pad}  {_emit(v, indent + 1)}" for v in value)
        return "[\n" + body + "\n" + pad + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _fmt_float(value)
    if isinstance(value, str):
        return json.dumps(value)
    if value is None:
        return "null"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(document) -> str:
    """Render a document tree to deterministic text."""
    return _emit(document, 0) + "\n"


def loads(text: str):
    """Parse document text back into plain dict/list values."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolationError("<document>", f"not parseable: {exc}") from None


# --- field access helpers ----------------------------------------------------

def _get(doc: dict, field: str, kind, where: str = ""):
    name = where + field
    if not isinstance(doc, dict):
        raise SchemaViolationError(name, "expected a record")
    if field not in doc:
        raise SchemaViolationError(name, "missing")
    value = doc[field]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SchemaViolationError(name, f"expected a number, got {value!r}")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise SchemaViolationError(name, f"expected an integer, got {value!r}")
        return value
    if not isinstance(value, kind):
        raise SchemaViolationError(name, f"expected {kind.__name__}, got {value!r}")
    return value


def _float_list(doc: dict, field: str) -> list[float]:
    raw = _get(doc, field, list)
    out = []
    for i, v in enumerate(raw):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise SchemaViolationError(f"{field}[{i}]", f"expected a number, got {v!r}")
        out.append(float(v))
    return out


# --- operator ------------------------------------------------------------

def operator_to_document(op: OperatorSpec) -> dict:
    return {
        "grid_nodes": op.grid.node_count,
        "potential": list(op.potential.values),
        "alpha": op.alpha,
        "beta": op.beta,
    }


def operator_from_document(doc) -> OperatorSpec:
    m = _get(doc, "grid_nodes", int)
    if m < 16:
        raise SchemaViolationError("grid_nodes", f"must be >= 16, got {m}")
    values = _float_list(doc, "potential")
    if len(values) != m + 1:
        raise SchemaViolationError(
            "potential", f"expected {m + 1} samples for grid_nodes={m}, got {len(values)}")
    alpha = _get(doc, "alpha", float)
    beta = _get(doc, "beta", float)
    for name, value in (("alpha", alpha), ("beta", beta)):
        if not 0.0 < value < np.pi:
            raise SchemaViolationError(name, f"must lie strictly inside (0, pi), got {value}")
    try:
        return OperatorSpec(Potential(Grid.make(m), np.array(values)),
                            RobinAngles(alpha, beta))
    except ValueError as exc:
        raise SchemaViolationError("<operator>", str(exc)) from None


# --- spectrum ------------------------------------------------------------

def spectrum_to_document(table: SpectrumTable) -> list:
    records = []
    for d in table:
        rec = {"n": d.n, "mu": d.mu, "a": d.a}
        if d.b is not None:
            rec["b"] = d.b
        rec["phi_end"] = d.phi_end
        rec["kappa"] = d.kappa
        records.append(rec)
    return records


def spectrum_from_document(doc) -> SpectrumTable:
    if not isinstance(doc, list):
        raise SchemaViolationError("<spectrum>", "expected an array of records")
    data = []
    for i, rec in enumerate(doc):
        where = f"[{i}]."
        b = None
        if isinstance(rec, dict) and "b" in rec:
            b = _get(rec, "b", float, where)
        try:
            data.append(SpectralDatum(
                n=_get(rec, "n", int, where),
                mu=_get(rec, "mu", float, where),
                a=_get(rec, "a", float, where),
                b=b,
                phi_end=_get(rec, "phi_end", float, where),
                kappa=_get(rec, "kappa", float, where),
            ))
        except ValueError as exc:
            raise SchemaViolationError(f"[{i}]", str(exc)) from None
    try:
        return SpectrumTable(tuple(data))
    except ValueError as exc:
        raise SchemaViolationError("<spectrum>", str(exc)) from None


# --- perturbation coefficients ---------------------------------------------

def coeffs_to_document(seq: PerturbationSeq) -> list:
    return [{"n": int(n), "c": float(seq.coeffs[n])} for n in seq.support]


def coeffs_from_document(doc) -> PerturbationSeq:
    if not isinstance(doc, list):
        raise SchemaViolationError("<coefficients>", "expected an array of records")
    pairs = []
    for i, rec in enumerate(doc):
        where = f"[{i}]."
        n = _get(rec, "n", int, where)
        if n < 0:
            raise SchemaViolationError(f"{where}n", "index must be nonnegative")
        pairs.append((n, _get(rec, "c", float, where)))
    seen = set()
    for n, _ in pairs:
        if n in seen:
            raise SchemaViolationError("n", f"duplicate coefficient index {n}")
        seen.add(n)
    return PerturbationSeq.from_pairs(pairs)


# --- dispatching entry points ------------------------------------------------

def serialize(obj) -> str:
    """Serialize an operator, spectrum table, or coefficient sequence."""
    if isinstance(obj, OperatorSpec):
        return dumps(operator_to_document(obj))
    if isinstance(obj, SpectrumTable):
        return dumps(spectrum_to_document(obj))
    if isinstance(obj, PerturbationSeq):
        return dumps(coeffs_to_document(obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def deserialize(text: str):
    """Inverse of serialize; the document kind is detected from its shape."""
    doc = loads(text)
    if isinstance(doc, dict):
        return operator_from_document(doc)
    if isinstance(doc, list):
        if doc and isinstance(doc[0], dict) and "c" in doc[0]:
            return coeffs_from_document(doc)
        return spectrum_from_document(doc)
    raise SchemaViolationError("<document>", "unrecognized document shape")


# --- CSV exports ------------------------------------------------------------

def potential_to_csv(potential: Potential) -> str:
    lines = ["x,q"]
    for x, q in zip(potential.grid.nodes, potential.values):
        lines.append(f"{_fmt_float(x)},{_fmt_float(q)}")
    return "\n".join(lines) + "\n"


def spectrum_to_csv(table: SpectrumTable) -> str:
    lines = ["n,mu,a,b,kappa"]
    for d in table:
        b = _fmt_float(d.b) if d.b is not None else ""
        lines.append(f"{d.n},{_fmt_float(d.mu)},{_fmt_float(d.a)},{b},{_fmt_float(d.kappa)}")
    return "\n".join(lines) + "\n"
