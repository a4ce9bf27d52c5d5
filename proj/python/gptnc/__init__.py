"""Simplex-embeddability and noncontextuality toolkit for prepare-measure GPTs.

Every function takes and returns plain Python data (dicts, lists, rational
strings like "1/2"); the core works in exact rationals.
"""

import json

from . import _core
from ._core import GptncError

__all__ = [
    "GptncError",
    "bilinear_search",
    "catalog",
    "catalog_names",
    "decide",
    "error_kind",
    "min_d_lower_bound",
    "quasiprob",
    "quotient",
    "robustness_radius",
    "validate",
    "verdict",
    "verify_certificate",
]


def _gpt(gpt):
    # Accept a catalog name, a JSON string or a decoded dict.
    if isinstance(gpt, str) and not gpt.lstrip().startswith("{"):
        return json.dumps(catalog(gpt)["gpt"])
    return gpt if isinstance(gpt, str) else json.dumps(gpt)


def _opt(x):
    return None if x is None else (x if isinstance(x, str) else json.dumps(x))


def error_kind(exc):
    """Stable error name (e.g. "UnknownName") of a GptncError."""
    return exc.args[0]


def catalog_names():
    return list(_core.catalog_names())


def catalog(name, **params):
    return json.loads(_core.catalog(name, {k: str(v) for k, v in params.items()}))


def validate(gpt):
    return json.loads(_core.validate(_gpt(gpt)))


def decide(gpt, minimize=True):
    return json.loads(_core.decide(_gpt(gpt), minimize))


def verify_certificate(gpt, farkas):
    return _core.verify_certificate(_gpt(gpt), json.dumps(farkas))


def min_d_lower_bound(gpt):
    return _core.min_d_lower_bound(_gpt(gpt))


def bilinear_search(gpt, d, restarts=100, seed=0):
    """Model with exactly d ontic states, or None. None proves nothing."""
    out = _core.bilinear_search(_gpt(gpt), d, restarts, seed)
    return None if out is None else json.loads(out)


def quotient(csv, relations=None, tol=0.0):
    return json.loads(_core.quotient(csv, _opt(relations), tol))


def robustness_radius(gpt, precision=1e-3):
    return json.loads(_core.robustness_radius(_gpt(gpt), precision))


def verdict(csv, epsilon="0", relations=None, tol=0.0):
    return json.loads(_core.verdict(csv, str(epsilon), _opt(relations), tol))


def quasiprob(gpt, pairs=None, model=None):
    return json.loads(_core.quasiprob(_gpt(gpt), _opt(pairs), _opt(model)))
