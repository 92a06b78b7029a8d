"""Deterministic text rendering for exports.

Floats are rendered with 17 significant digits, which round-trips binary64
exactly and is byte-stable across runs.
"""

from __future__ import annotations

import json
import math

import numpy as np


def fmt17(x) -> str:
    v = float(x)
    if not math.isfinite(v):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    return format(v, ".17g")


def render_json(obj, compact: bool = False, _indent: int = 0) -> str:
    """Render JSON with fmt17 floats.  Supports dict/list/str/bool/None/numbers."""
    if obj is None or obj is True or obj is False or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt17(obj)
    if isinstance(obj, np.ndarray):
        return render_json(obj.tolist(), compact, _indent)
    if isinstance(obj, (list, tuple)):
        items = [render_json(v, compact, _indent) for v in obj]
        return "[" + ", ".join(items) + "]"
    if isinstance(obj, dict):
        if compact:
            inner = ", ".join(
                f"{json.dumps(str(k))}: {render_json(v, True)}" for k, v in obj.items()
            )
            return "{" + inner + "}"
        pad = " " * _indent
        inner = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {render_json(v, False, _indent + 2)}'
            for k, v in obj.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")
