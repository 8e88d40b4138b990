"""Parsing, configuration files, writers and the run report."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Optional

import numpy as np

from .core import Point
from .errors import InvalidInput

SIG = 17


def fmt(x: float) -> str:
    return f"{float(x):.{SIG}g}"


def parse_point(text: str) -> Point:
    """``x,y,z`` or homogeneous ``1,x,y,z``."""
    try:
        vals = [float(v) for v in str(text).replace(" ", "").split(",") if v != ""]
    except ValueError as exc:
        raise InvalidInput(f"cannot parse point {text!r}") from exc
    if len(vals) == 4:
        if vals[0] != 1.0:
            raise InvalidInput(f"homogeneous point must start with 1: {text!r}")
        vals = vals[1:]
    if len(vals) != 3 or not all(math.isfinite(v) for v in vals):
        raise InvalidInput(f"expected three finite coordinates, got {text!r}")
    return Point(*vals)


def parse_box(text: str):
    """``x0,y0,z0,x1,y1,z1`` into two corner triples."""
    try:
        vals = [float(v) for v in str(text).split(",")]
    except ValueError as exc:
        raise InvalidInput(f"cannot parse box {text!r}") from exc
    if len(vals) != 6 or not all(math.isfinite(v) for v in vals):
        raise InvalidInput("box needs six finite numbers")
    lo, hi = np.array(vals[:3]), np.array(vals[3:])
    if np.any(hi <= lo):
        raise InvalidInput("box corners out of order")
    return lo, hi


def load_config(path) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment, keys use flag names."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInput(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.lstrip("-").replace("-", "_")] = value
    return out


# --------------------------------------------------------------------------
# writers
# --------------------------------------------------------------------------

def write_obj(path, vertices, faces) -> None:
    lines = [f"v {fmt(v[0])} {fmt(v[1])} {fmt(v[2])}" for v in np.asarray(vertices)]
    lines += [f"f {f[0] + 1} {f[1] + 1} {f[2] + 1}" for f in np.asarray(faces, dtype=np.int64)]
    Path(path).write_text("\n".join(lines) + "\n")


def write_csv(path, header: Iterable[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(header))
        for row in rows:
            w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])


def jsonable(obj: Any) -> Any:
    """Plain JSON types; non-finite floats become ``None``."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj))


# --------------------------------------------------------------------------
# report
# --------------------------------------------------------------------------

@dataclass
class Check:
    name: str
    anchor: str
    measured: float
    tolerance: float
    passed: bool

    def as_dict(self):
        return {"name": self.name, "anchor": self.anchor, "measured": self.measured,
                "tolerance": self.tolerance, "passed": self.passed}


@dataclass
class Report:
    """Outcome of one command.

    Every check carries its tolerance and an ``anchor`` naming the quantity
    it tests.  Timing stays out of the serialized form so that repeated runs
    produce identical files.
    """
    command: str
    args: dict
    results: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    error: Optional[dict] = None
    elapsed: float = 0.0

    def check(self, name: str, anchor: str, measured: float, tolerance: float,
              passed: Optional[bool] = None) -> Check:
        measured = float(measured)
        if passed is None:
            passed = math.isfinite(measured) and measured <= tolerance
        c = Check(name, anchor, measured, float(tolerance), bool(passed))
        self.checks.append(c)
        return c

    @property
    def ok(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {"command": self.command, "args": self.args, "results": self.results,
                "checks": [c.as_dict() for c in self.checks], "warnings": list(self.warnings),
                "error": self.error, "ok": self.ok}
