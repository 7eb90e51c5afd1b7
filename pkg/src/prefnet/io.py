"""Snapshot and data file formats.

All snapshots are JSON documents with a ``format`` tag. Floats are written
with ``repr`` precision (17 significant digits); infinities as the strings
``"inf"`` / ``"-inf"``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .fuzzy import FuzzyModel
from .mlp import Edge, Network, Unit
from .prefcore import MultiPrefModel, PreferenceRelation
from .som import CategoryData, SomMap


class FormatError(ValueError):
    pass


def _num_out(v: float):
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _num_in(v) -> float:
    if isinstance(v, str):
        if v in ("inf", "+inf", "-inf"):
            return float(v)
        raise FormatError(f"not a number: {v!r}")
    return float(v)


def _dump(doc) -> str:
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def _load(text: str, fmt: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("format") != fmt:
        raise FormatError(f"not a {fmt} document")
    return doc


# --- SOM -----------------------------------------------------------------

SOM_FORMAT = "prefnet-som"


def dump_som(som: SomMap) -> str:
    return _dump({
        "format": SOM_FORMAT,
        "rows": som.rows,
        "cols": som.cols,
        "input_dim": som.input_dim,
        "weights": [[float(v) for v in w] for w in som.weights],
    })


def load_som(text: str) -> SomMap:
    doc = _load(text, SOM_FORMAT)
    try:
        weights = np.array(doc["weights"], dtype=float)
        som = SomMap(int(doc["rows"]), int(doc["cols"]), weights.reshape(-1, int(doc["input_dim"])))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed SOM snapshot: {exc}") from None
    return som


# --- networks ------------------------------------------------------------

NETWORK_FORMAT = "prefnet-network"


def dump_network(net: Network) -> str:
    inputs = set(net.inputs)
    return _dump({
        "format": NETWORK_FORMAT,
        "inputs": list(net.inputs),
        "units": [
            {"name": u.name, "activation": "identity" if u.name in inputs else u.activation, "bias": u.bias}
            for u in net.units
        ],
        "edges": [{"from": e.source, "to": e.target, "weight": e.weight} for e in net.edges],
    })


def load_network(text: str) -> Network:
    doc = _load(text, NETWORK_FORMAT)
    try:
        units = [Unit(str(u["name"]), str(u.get("activation", "sigmoid")), float(u.get("bias", 0.0)))
                 for u in doc["units"]]
        edges = [Edge(str(e["from"]), str(e["to"]), float(e["weight"])) for e in doc["edges"]]
        inputs = [str(n) for n in doc["inputs"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed network snapshot: {exc}") from None
    return Network(tuple(units), tuple(edges), tuple(inputs))


# --- explicit models -----------------------------------------------------

MODEL_FORMAT = "prefnet-model"


def dump_model(model: Optional[MultiPrefModel] = None, fuzzy: Optional[FuzzyModel] = None) -> str:
    base = model if model is not None else fuzzy
    if base is None:
        raise ValueError("nothing to serialize")
    doc = {"format": MODEL_FORMAT, "domain": []}
    labels = getattr(base, "labels", {}) or {}
    for x in base.domain:
        entry = {"id": x}
        if x in labels:
            entry["label"] = labels[x] if isinstance(labels[x], str) else list(labels[x])
        doc["domain"].append(entry)
    if model is not None:
        doc["concepts"] = {k: [x for x in model.domain if x in ext] for k, ext in model.extensions.items()}
        doc["preferences"] = {
            k: {x: _num_out(p.scores[x]) for x in model.domain} for k, p in model.prefs.items()
        }
        if model.roles:
            doc["roles"] = {k: sorted([list(p) for p in rel]) for k, rel in model.roles.items()}
    if fuzzy is not None:
        doc["fuzzy"] = {k: {x: m[x] for x in fuzzy.domain} for k, m in fuzzy.membership.items()}
    return _dump(doc)


def load_model(text: str, epsilon: float = 1e-9) -> tuple[Optional[MultiPrefModel], Optional[FuzzyModel]]:
    """Returns the two-valued part and the fuzzy part (either may be None)."""
    doc = _load(text, MODEL_FORMAT)
    try:
        domain = [str(e["id"]) if isinstance(e, dict) else str(e) for e in doc["domain"]]
        labels = {str(e["id"]): e["label"] for e in doc["domain"] if isinstance(e, dict) and "label" in e}
        model = fuzzy = None
        if "concepts" in doc:
            prefs = {
                k: PreferenceRelation({str(x): _num_in(s) for x, s in scores.items()}, epsilon)
                for k, scores in doc.get("preferences", {}).items()
            }
            roles = {k: [tuple(map(str, p)) for p in rel] for k, rel in doc.get("roles", {}).items()}
            model = MultiPrefModel(domain, {k: set(map(str, v)) for k, v in doc["concepts"].items()},
                                   prefs, roles, labels)
        if "fuzzy" in doc:
            fuzzy = FuzzyModel(domain, {k: {str(x): float(d) for x, d in m.items()} for k, m in doc["fuzzy"].items()})
    except (KeyError, TypeError, AttributeError) as exc:
        raise FormatError(f"malformed model snapshot: {exc}") from None
    if model is None and fuzzy is None:
        raise FormatError("model snapshot has neither 'concepts' nor 'fuzzy' section")
    return model, fuzzy


# --- CSV -----------------------------------------------------------------


def _rows(text: str) -> list[list[str]]:
    return [row for row in csv.reader(io.StringIO(text)) if row and any(c.strip() for c in row)]


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def read_labeled_csv(text: str, label_column: str = "label") -> CategoryData:
    """Header row required; one column holds the category label, the rest are coordinates."""
    rows = _rows(text)
    if not rows:
        raise FormatError("empty data file")
    header = [h.strip() for h in rows[0]]
    if label_column not in header:
        raise FormatError(f"missing label column {label_column!r} in header {header}")
    li = header.index(label_column)
    cats: dict[str, list] = {}
    for n, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise FormatError(f"line {n}: expected {len(header)} fields, got {len(row)}")
        try:
            vec = [float(v) for i, v in enumerate(row) if i != li]
        except ValueError as exc:
            raise FormatError(f"line {n}: {exc}") from None
        cats.setdefault(row[li].strip(), []).append(vec)
    if not cats:
        raise FormatError("data file has no stimuli")
    return CategoryData(cats)


def read_stimuli_csv(text: str, columns: Optional[Sequence[str]] = None) -> list[list[float]]:
    """Unlabeled vectors; an optional header selects/reorders columns by ``columns``."""
    rows = _rows(text)
    if not rows:
        return []
    order = None
    if not all(_is_number(c) for c in rows[0]):
        header = [h.strip() for h in rows[0]]
        rows = rows[1:]
        if columns is not None:
            missing = [c for c in columns if c not in header]
            if missing:
                raise FormatError(f"stimuli header lacks columns {missing}")
            order = [header.index(c) for c in columns]
    out = []
    for n, row in enumerate(rows, start=1):
        try:
            vec = [float(v) for v in row]
        except ValueError as exc:
            raise FormatError(f"stimulus row {n}: {exc}") from None
        out.append([vec[i] for i in order] if order else vec)
    return out


def write_stimuli_csv(stimuli, header: Optional[Sequence[str]] = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(header)
    for x in stimuli:
        w.writerow([repr(float(v)) for v in x])
    return buf.getvalue()


def write_labeled_csv(data: CategoryData, label_column: str = "label") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"x{i}" for i in range(data.dim)] + [label_column])
    for name, xs in data.items():
        for x in xs:
            w.writerow([repr(float(v)) for v in x] + [name])
    return buf.getvalue()


def read_text(path) -> str:
    return Path(path).read_text(encoding="utf-8")
