"""Text and JSON encodings for 4x4 matrices and homogeneous 4-vectors.

Text matrices are four lines of four whitespace-separated numbers; text vectors
are four numbers on one line. JSON uses ``{"m": [[...], ...]}`` and
``{"v": [...]}``; bare nested lists are accepted on input. Numbers are written
with 17 significant digits so doubles survive a round trip.
"""

from __future__ import annotations

import json
import sys
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray


class FormatError(ValueError):
    pass


def fmt_float(x: float) -> str:
    return "%.17g" % float(x)


def read_source(path: str) -> str:
    """Contents of ``path``, or of stdin when ``path`` is ``-``."""
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from exc


def _numbers(text: str) -> list[float]:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        for tok in line.replace(",", " ").split():
            try:
                out.append(float(tok))
            except ValueError as exc:
                raise FormatError(f"not a number: {tok!r}") from exc
    return out


def _finite(a: NDArray) -> NDArray:
    if not np.all(np.isfinite(a)):
        raise FormatError("input contains non-finite numbers")
    return a


def parse_matrix(text: str) -> NDArray:
    s = text.strip()
    if not s:
        raise FormatError("empty matrix input")
    if s[0] in "{[":
        try:
            obj: Any = json.loads(s)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc.msg}") from exc
        if isinstance(obj, dict):
            if "m" not in obj:
                raise FormatError('JSON matrix must have key "m"')
            obj = obj["m"]
        try:
            M = np.array(obj, dtype=float)
        except (TypeError, ValueError) as exc:
            raise FormatError("JSON matrix entries must be numbers") from exc
        if M.shape != (4, 4):
            raise FormatError(f"expected a 4x4 matrix, got shape {M.shape}")
        return _finite(M)
    rows = [r for r in (line.split("#", 1)[0].strip() for line in s.splitlines()) if r]
    if len(rows) != 4:
        raise FormatError(f"expected 4 matrix rows, got {len(rows)}")
    nums = [_numbers(r) for r in rows]
    if any(len(r) != 4 for r in nums):
        raise FormatError("each matrix row needs exactly 4 numbers")
    return _finite(np.array(nums, dtype=float))


def parse_vector(text: str, n: int = 4) -> NDArray:
    s = text.strip()
    if not s:
        raise FormatError("empty vector input")
    if s[0] in "{[":
        try:
            obj: Any = json.loads(s)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc.msg}") from exc
        if isinstance(obj, dict):
            if "v" not in obj:
                raise FormatError('JSON vector must have key "v"')
            obj = obj["v"]
        try:
            v = np.array(obj, dtype=float)
        except (TypeError, ValueError) as exc:
            raise FormatError("JSON vector entries must be numbers") from exc
    else:
        v = np.array(_numbers(s), dtype=float)
    if v.shape != (n,):
        raise FormatError(f"expected {n} numbers, got {v.size}")
    return _finite(v)


def format_matrix(M: ArrayLike, fmt: str = "text") -> str:
    M = np.asarray(M, dtype=float)
    if fmt == "json":
        return json.dumps({"m": [[float(x) for x in row] for row in M]})
    return "\n".join(" ".join(fmt_float(x) for x in row) for row in M)


def format_vector(v: ArrayLike, fmt: str = "text") -> str:
    v = np.asarray(v, dtype=float)
    if fmt == "json":
        return json.dumps({"v": [float(x) for x in v]})
    return " ".join(fmt_float(x) for x in v)
