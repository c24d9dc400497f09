"""Shared helpers: angle reduction and byte-stable text output.

Every file the package writes goes through the formatters here so that
repeated runs produce identical bytes: floats at 17 significant digits
(round-trip exact for float64), LF newlines, sorted JSON keys, no
timestamps.
"""

from __future__ import annotations

import json
import math
from typing import Iterable, Sequence

TWO_PI = 2.0 * math.pi


def wrap_angle(theta: float) -> float:
    """Reduce an angle to the half-open interval (-pi, pi]."""
    r = math.remainder(float(theta), TWO_PI)
    if r <= -math.pi:
        r += TWO_PI
    return r


def wrap_half_angle(theta: float) -> float:
    """Reduce to (-pi/2, pi/2]; used for mod-pi phase representatives."""
    r = math.remainder(float(theta), math.pi)
    if r <= -math.pi / 2:
        r += math.pi
    return r


def format_float(value: float) -> str:
    x = float(value)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def csv_text(header: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_float(v) for v in row))
    return "\n".join(lines) + "\n"


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def json_text(payload: object) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
