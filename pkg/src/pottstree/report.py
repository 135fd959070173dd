"""Run reports: plain JSON documents and two-column profile tables.

Floats are written with ``repr`` (shortest round-trip form), so a report read
back with :func:`load_report` reproduces every real bit for bit.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np


@dataclass
class RunReport:
    command: str
    params: dict
    settings: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    counts: list[dict] = field(default_factory=list)
    checks: list[dict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def add_count(self, name: str, found: int, predicted: int | None):
        match = None if predicted is None else found == predicted
        self.counts.append({"name": name, "found": found, "predicted": predicted, "match": match})

    def add_check(self, name: str, passed: bool, **detail):
        self.checks.append({"name": name, "passed": bool(passed), **detail})

    @property
    def all_counts_match(self) -> bool:
        return all(c["match"] is not False for c in self.counts) and all(c["passed"] for c in self.checks)

    def to_dict(self) -> dict:
        return jsonable({
            "command": self.command,
            "params": self.params,
            "settings": self.settings,
            "results": self.results,
            "counts": self.counts,
            "checks": self.checks,
            "all_counts_match": self.all_counts_match,
            "warnings": self.warnings,
        })

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=True)


def jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, float) and math.isinf(obj):
        return "inf" if obj > 0 else "-inf"
    return obj


def load_report(text: str) -> dict:
    return json.loads(text)


def write_profile(path: str | Path, header: dict, xs, hs) -> None:
    lines = [f"# {key} = {json.dumps(jsonable(val))}" for key, val in header.items()]
    lines.append("# columns: x h(x)")
    lines.extend(f"{float(x)!r} {float(h)!r}" for x, h in zip(xs, hs))
    Path(path).write_text("\n".join(lines) + "\n")


def read_profile(path: str | Path) -> tuple[dict, np.ndarray]:
    header, rows = {}, []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            body = line[1:].strip()
            if " = " in body:
                key, val = body.split(" = ", 1)
                header[key] = json.loads(val)
            continue
        if line.strip():
            rows.append([float(v) for v in line.split()])
    return header, np.array(rows)


def write_table(path: str | Path, header: dict, columns: list[str], rows: list[list]) -> None:
    lines = [f"# {key} = {json.dumps(jsonable(val))}" for key, val in header.items()]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(repr(v) if isinstance(v, float) else str(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_table(path: str | Path) -> tuple[dict, list[str], list[list[str]]]:
    header, cols, rows = {}, [], []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            key, val = line[1:].strip().split(" = ", 1)
            header[key] = json.loads(val)
        elif not cols:
            cols = line.split(",")
        elif line.strip():
            rows.append(line.split(","))
    return header, cols, rows
