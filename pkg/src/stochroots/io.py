"""Matrix files and deterministic JSON output."""

from __future__ import annotations

import ast
import enum
import json
import math
import operator
from pathlib import Path

import numpy as np


class MatrixFileError(ValueError):
    pass


def read_matrix(path) -> tuple[np.ndarray, float | None]:
    """
    Load ``{"n": int, "rows": [[...]], "tol": float?}`` from ``.json`` files,
    or comma-separated rows from anything else.  Returns ``(matrix, tol)``.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise MatrixFileError(str(exc)) from exc
    tol = None
    if path.suffix.lower() == ".json":
        try:
            doc = json.loads(text)
            rows = doc["rows"]
            n = int(doc.get("n", len(rows)))
            tol = doc.get("tol")
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise MatrixFileError(f"{path}: {exc}") from exc
    else:
        rows = [[cell for cell in line.split(",")] for line in text.splitlines() if line.strip()]
        n = len(rows)
    try:
        M = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise MatrixFileError(f"{path}: non-numeric or ragged rows") from exc
    if M.ndim != 2 or M.shape != (n, n) or n == 0:
        raise MatrixFileError(f"{path}: expected a {n}x{n} matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise MatrixFileError(f"{path}: non-finite entries")
    if tol is not None:
        tol = float(tol)
    return M, tol


def _plain(obj):
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return float(z.real) if z.imag == 0 else [float(z.real), float(z.imag)]
    if isinstance(obj, np.ndarray):
        return [_plain(x) for x in obj.tolist()] if obj.ndim else _plain(obj.item())
    if isinstance(obj, (frozenset, set)):
        return sorted(obj)
    return obj


def format_real(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null" if math.isnan(x) else json.dumps(str(x))
    x = x + 0.0
    return format(x, ".17g") if x != int(x) or abs(x) >= 1e17 else str(int(x)) + ".0"


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with sorted keys and reals at 17 significant digits, byte-stable."""
    obj = _plain(obj)
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_real(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = sorted((str(k), v) for k, v in obj.items())
        body = ",\n".join(f"{pad}{json.dumps(k)}: {dumps(v, indent, _level + 1)}" for k, v in items)
        return "{\n" + body + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(_plain(v), (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        body = ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj)
        return "[\n" + body + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub,
           ast.Mult: operator.mul, ast.Div: operator.truediv}
_NAMES = {"pi": math.pi, "e": math.e}


def parse_number(text: str) -> float:
    """Evaluate a real like ``0.5``, ``-pi``, ``2*pi/3`` or ``log(2)``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in ("log", "sqrt") and len(node.args) == 1):
            return getattr(math, node.func.id)(ev(node.args[0]))
        raise ValueError(f"unsupported expression {text!r}")

    try:
        value = ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ZeroDivisionError) as exc:
        raise ValueError(f"bad number {text!r}") from exc
    if not math.isfinite(value):
        raise ValueError(f"non-finite value {text!r}")
    return value


def parse_range(text: str) -> np.ndarray:
    """``a:b:n`` -> ``n`` evenly spaced points from ``a`` to ``b`` inclusive."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"range must look like a:b:n, got {text!r}")
    lo, hi = parse_number(parts[0]), parse_number(parts[1])
    try:
        n = int(parts[2])
    except ValueError as exc:
        raise ValueError(f"bad point count in {text!r}") from exc
    if n < 1 or hi < lo:
        raise ValueError(f"empty or reversed range {text!r}")
    return np.linspace(lo, hi, n)
