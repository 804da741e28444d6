"""JSON persistence for matrices, instances and reports."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .algebra import IntMatrix


class DataError(ValueError):
    """Unreadable or malformed input file."""


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def load_json(path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def save_json(obj: Any, path) -> None:
    Path(path).write_text(dumps(obj))


def matrix_from_obj(obj: Any) -> IntMatrix:
    """Accepts a bare list of rows, ``{"X": rows}``, ``{"entries": rows}`` or a group descriptor."""
    if isinstance(obj, dict):
        rows = obj.get("X", obj.get("entries"))
        if rows is None and isinstance(obj.get("group"), dict):
            rows = obj["group"].get("X")
    else:
        rows = obj
    if not isinstance(rows, list) or not rows:
        raise DataError("no matrix rows found")
    try:
        m = IntMatrix.from_rows([[int(x) for x in r] for r in rows])
    except (TypeError, ValueError) as exc:
        raise DataError(f"bad matrix: {exc}") from None
    if isinstance(obj, dict) and "n" in obj and int(obj["n"]) != m.n:
        raise DataError(f"declared n={obj['n']} but matrix is {m.n}x{m.n}")
    return m


def load_matrix(path) -> IntMatrix:
    return matrix_from_obj(load_json(path))
