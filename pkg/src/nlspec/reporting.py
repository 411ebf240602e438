"""Deterministic report rendering: JSON with 17-significant-digit floats, CSV."""

from __future__ import annotations

import math
from typing import IO, Sequence


def _render_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(float(x), ".17g")


def _escape(s: str) -> str:
    out = []
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    return "".join(out)


def render_json(obj, indent: int = 0) -> str:
    """Hand-rolled JSON writer so float formatting is under our control."""
    pad = "  " * indent
    pad1 = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _render_float(obj)
    if isinstance(obj, str):
        return f'"{_escape(obj)}"'
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad1}"{_escape(str(k))}": {render_json(v, indent + 1)}'
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        simple = all(isinstance(v, (int, float, bool, str, type(None))) for v in obj)
        if simple and len(obj) <= 8:
            return "[" + ", ".join(render_json(v) for v in obj) + "]"
        items = [f"{pad1}{render_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    # numpy scalars and arrays
    try:
        import numpy as np
        if isinstance(obj, np.ndarray):
            return render_json(obj.tolist(), indent)
        if isinstance(obj, (np.floating,)):
            return _render_float(float(obj))
        if isinstance(obj, (np.integer,)):
            return str(int(obj))
        if isinstance(obj, (np.bool_,)):
            return "true" if obj else "false"
        if isinstance(obj, complex):
            return render_json({"re": obj.real, "im": obj.imag}, indent)
    except ImportError:
        pass
    raise TypeError(f"cannot serialize {type(obj)!r}")


def write_json(path, obj) -> None:
    with open(path, "w") as fh:
        fh.write(render_json(obj))
        fh.write("\n")


def write_eigenvalue_csv(path, eigenvalues: Sequence[float]) -> None:
    with open(path, "w") as fh:
        fh.write("index,value\n")
        for i, ev in enumerate(eigenvalues):
            fh.write(f"{i},{float(ev):.17g}\n")


def write_trajectory_csv(path, records: Sequence[dict]) -> None:
    with open(path, "w") as fh:
        fh.write("t,mass,l2norm\n")
        for rec in records:
            fh.write(f"{rec['t']:.17g},{rec['mass']:.17g},{rec['l2norm']:.17g}\n")
