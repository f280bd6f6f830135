"""JSON schema for cascades, inputs and perturbations.

A cascade is ``{"n": 4, "alpha": [...], "beta": [...], "leak": 1, "feedback": 0}``
and an input is ``{"kind": "peak", "r0": 5, "lambda": 2}``.  Both can be
given inline or as a path to a file holding the same document.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

from .errors import ConfigError, InvalidInput
from .model import Cascade, DecayingExp, Impulse, Peak, Rect, Sampled, Sinc
from .stability import PerturbationSpec


def read_document(text_or_path):
    """Parse an inline JSON string, or the JSON file it names."""
    text = str(text_or_path).strip()
    if not text.startswith(("{", "[")):
        try:
            text = Path(text).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read {text_or_path}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from None


def _need(doc, key, where):
    if key not in doc:
        raise ConfigError(f"{where}: missing field {key!r}")
    return doc[key]


def cascade_from_dict(doc) -> Cascade:
    if not isinstance(doc, dict):
        raise ConfigError("cascade config must be a JSON object")
    alpha = _need(doc, "alpha", "cascade")
    beta = _need(doc, "beta", "cascade")
    n = doc.get("n", len(alpha) if isinstance(alpha, list) else None)
    if not isinstance(alpha, list) or not isinstance(beta, list):
        raise ConfigError("cascade: alpha and beta must be lists")
    return Cascade(n=n, alpha=tuple(alpha), beta=tuple(beta),
                   leak=doc.get("leak", 1.0), feedback=doc.get("feedback", 0.0))


def cascade_to_dict(c: Cascade) -> dict:
    return {"n": c.n, "alpha": list(c.alpha), "beta": list(c.beta),
            "leak": c.leak, "feedback": c.feedback}


def dump_cascade(c: Cascade) -> str:
    # repr-based float output round-trips bit-exactly
    return json.dumps(cascade_to_dict(c))


def load_cascade(text_or_path) -> Cascade:
    return cascade_from_dict(read_document(text_or_path))


_INPUTS = {
    "impulse": (Impulse, ()),
    "exp": (DecayingExp, ("r0", "lambda")),
    "peak": (Peak, ("r0", "lambda")),
    "rect": (Rect, ("r0", "t0")),
    "sinc": (Sinc, ("eps",)),
    "sampled": (Sampled, ("times", "values")),
}


def input_from_dict(doc):
    if not isinstance(doc, dict):
        raise InvalidInput("input spec must be a JSON object")
    kind = doc.get("kind")
    if kind not in _INPUTS:
        raise InvalidInput(f"unknown input kind {kind!r}; expected one of {sorted(_INPUTS)}")
    cls, keys = _INPUTS[kind]
    return cls(*(_need(doc, k, f"{kind} input") for k in keys))


def input_to_dict(r) -> dict:
    cls_keys = _INPUTS[r.kind][1]
    attrs = {"lambda": "lam"}
    out = {"kind": r.kind}
    for k in cls_keys:
        v = getattr(r, attrs.get(k, k))
        out[k] = list(v) if isinstance(v, tuple) else v
    return out


def load_input(text_or_path):
    return input_from_dict(read_document(text_or_path))


def load_perturbation(text_or_path) -> PerturbationSpec:
    doc = read_document(text_or_path)
    entries = doc.get("entries") if isinstance(doc, dict) else doc
    if not isinstance(entries, list):
        raise ConfigError("perturbation file must hold a list of [row, col, value] entries")
    try:
        return PerturbationSpec(tuple(tuple(e) for e in entries))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad perturbation entry: {exc}") from None


def fmt(x):
    """Round a number to 9 significant digits for reports."""
    if x is None or isinstance(x, (bool, int)):
        return x
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.9g}")
