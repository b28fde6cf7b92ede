"""Family spec documents and command-line shorthands.

A family spec is a JSON object, either a finite table::

    {"omega": ["a", "b", "c"], "C": [0, 0, 0], "F": [0, 1, 1]}

or a built-in::

    {"builtin": "binomial", "n": 4}
    {"builtin": "negative_binomial", "r": 2}
    {"builtin": "model", "c": -0.5}
    {"builtin": "poisson"}  /  {"builtin": "categorical2"}
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from . import forms
from .errors import ParameterError, SpecError
from .expfam import FiniteExpFam
from .reduce import binomial, categorical2, model, negative_binomial, poisson

BUILTINS = {
    "binomial": ("n", binomial),
    "negative_binomial": ("r", negative_binomial),
    "model": ("c", model),
    "poisson": (None, poisson),
    "categorical2": (None, categorical2),
}


def _numbers(doc, key):
    value = doc.get(key)
    if not isinstance(value, list) or not value:
        raise SpecError("expected a non-empty list of numbers", f"field '{key}'")
    out = []
    for i, v in enumerate(value):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise SpecError(f"entry {i} is not a finite number: {v!r}", f"field '{key}'")
        out.append(float(v))
    return out


def build_builtin(name: str, param=None):
    if name not in BUILTINS:
        raise SpecError(f"unknown builtin {name!r}; expected one of {sorted(BUILTINS)}",
                        "field 'builtin'")
    key, ctor = BUILTINS[name]
    try:
        if key is None:
            if param is not None:
                raise ParameterError(f"{name} takes no parameter")
            return ctor()
        if param is None:
            raise ParameterError(f"{name} needs parameter '{key}'")
        return ctor(param)
    except ParameterError as exc:
        raise SpecError(str(exc), f"field '{key or 'builtin'}'") from exc


def family_from_document(doc):
    if not isinstance(doc, dict):
        raise SpecError("top level must be a JSON object")
    if "builtin" in doc:
        name = doc["builtin"]
        key = BUILTINS.get(name, (None,))[0]
        param = doc.get(key) if key else None
        if param is not None and (isinstance(param, bool) or not isinstance(param, (int, float))):
            raise SpecError(f"expected a number, got {param!r}", f"field '{key}'")
        return build_builtin(name, param)
    for key in ("omega", "C", "F"):
        if key not in doc:
            raise SpecError("missing required field", f"field '{key}'")
    omega = doc["omega"]
    if not isinstance(omega, list) or not all(isinstance(s, (str, int)) for s in omega):
        raise SpecError("expected a list of atom labels", "field 'omega'")
    C, F = _numbers(doc, "C"), _numbers(doc, "F")
    try:
        return FiniteExpFam.from_tables(C, F, [str(s) for s in omega])
    except ParameterError as exc:
        raise SpecError(str(exc), "family") from exc


def parse_family(text: str, source: str = "<string>"):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(exc.msg, f"{source}: line {exc.lineno}, column {exc.colno}") from exc
    try:
        return family_from_document(doc)
    except SpecError as exc:
        raise SpecError(str(exc), source) from exc


def load_family(path) -> object:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SpecError(f"cannot read file: {exc.strerror}", str(path)) from exc
    return parse_family(text, str(path))


def family_document(fam: FiniteExpFam) -> dict:
    return {"omega": list(fam.space.labels), "C": fam.C.tolist(), "F": fam.F.tolist()}


def parse_builtin_flag(text: str):
    """``NAME[:PARAM]`` as accepted by ``--builtin``."""
    name, _, raw = text.partition(":")
    param = None
    if raw:
        try:
            param = float(raw)
        except ValueError as exc:
            raise SpecError(f"parameter {raw!r} is not a number", f"--builtin {text}") from exc
        if name in ("binomial", "negative_binomial"):
            if not param.is_integer():
                raise SpecError(f"parameter {raw!r} must be an integer", f"--builtin {text}")
            param = int(param)
    return build_builtin(name, param)


_METRIC_DEFAULTS = {
    "exp": dict(a=1.0, b=0.0),
    "const": dict(b=0.0),
    "cos_sq": dict(a=1.0, b=0.0, lam=1.0),
    "sinh_sq": dict(a=1.0, b=0.0, lam=1.0, eps=1),
    "inv_sq": dict(b=1.0, lam=1.0),
    "cosh_sq": dict(a=1.0, b=0.0, lam=-1.0),
}


def parse_metric_flag(text: str) -> forms.CanonicalForm:
    """``FORM[:key=value,...]``, e.g. ``cosh_sq:a=0.25,lam=-0.5``."""
    name, _, raw = text.partition(":")
    name = name.lower()
    if name not in _METRIC_DEFAULTS:
        raise SpecError(f"unknown metric form {name!r}; expected one of "
                        f"{sorted(_METRIC_DEFAULTS)}", f"--metric {text}")
    params = dict(_METRIC_DEFAULTS[name])
    for item in filter(None, raw.split(",")):
        key, eq, value = item.partition("=")
        if not eq or key not in params:
            raise SpecError(f"unexpected parameter {item!r}", f"--metric {text}")
        try:
            params[key] = float(value)
        except ValueError as exc:
            raise SpecError(f"{key}={value!r} is not a number", f"--metric {text}") from exc
    lam = params.pop("lam", 0.0)
    eps = int(params.pop("eps", 0))
    try:
        return forms.CanonicalForm(name.upper(), lam, params.get("a", 0.0), params["b"], eps)
    except ParameterError as exc:
        raise SpecError(str(exc), f"--metric {text}") from exc
