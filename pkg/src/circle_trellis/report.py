"""Input and report documents (JSON) keyed by decimal subset labels."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Any

from .geometry import Circle, GeometryError, ToleranceConfig
from .trellis import AreaTable

ENV_PREFIX = "CIRCLE_TRELLIS_"
_TOL_FIELDS = ("geom_eps", "area_rel_tol", "tie_tol")


class ParseError(ValueError):
    """Malformed or invalid input document."""


def _finite(value: Any, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{what} must be a number, got {value!r}")
    v = float(value)
    if not math.isfinite(v):
        raise ParseError(f"{what} must be finite, got {value!r}")
    return v


def tolerance_from(overrides: dict | None = None, environ=None) -> ToleranceConfig:
    """Defaults, then ``CIRCLE_TRELLIS_<FIELD>`` environment variables, then
    explicit overrides."""
    environ = os.environ if environ is None else environ
    values: dict[str, float] = {}
    for name in _TOL_FIELDS:
        raw = environ.get(ENV_PREFIX + name.upper())
        if raw is not None:
            try:
                values[name] = float(raw)
            except ValueError:
                raise ParseError(f"environment {ENV_PREFIX + name.upper()} is not a number")
    for name, raw in (overrides or {}).items():
        if name not in _TOL_FIELDS:
            raise ParseError(f"unknown tolerance field {name!r}")
        values[name] = _finite(raw, f"tolerance {name}")
    for name, v in values.items():
        if not v > 0:
            raise ParseError(f"tolerance {name} must be positive")
    return ToleranceConfig(**values)


@dataclass
class CircleSetDocument:
    circles: list[Circle]
    tolerance: dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_json(cls, text: str) -> "CircleSetDocument":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
        if isinstance(data, list):
            data = {"circles": data}
        if not isinstance(data, dict) or not isinstance(data.get("circles"), list):
            raise ParseError("expected an object with a 'circles' list")
        if not data["circles"]:
            raise ParseError("circle list is empty")
        circles = []
        seen = set()
        for k, rec in enumerate(data["circles"]):
            if not isinstance(rec, dict):
                raise ParseError(f"circle #{k} is not an object")
            missing = {"id", "x", "y", "r"} - set(rec)
            if missing:
                raise ParseError(f"circle #{k} lacks {sorted(missing)}")
            cid = rec["id"]
            if isinstance(cid, bool) or not isinstance(cid, int) or cid < 1:
                raise ParseError(f"circle #{k}: id must be a positive integer")
            if cid in seen:
                raise ParseError(f"duplicate circle id {cid}")
            seen.add(cid)
            x = _finite(rec["x"], f"circle {cid} x")
            y = _finite(rec["y"], f"circle {cid} y")
            r = _finite(rec["r"], f"circle {cid} r")
            if not r > 0:
                raise ParseError(f"circle {cid}: radius must be positive, got {r}")
            try:
                circles.append(Circle(cid, x, y, r))
            except GeometryError as exc:
                raise ParseError(str(exc)) from exc
        tol = data.get("tolerance") or {}
        if not isinstance(tol, dict):
            raise ParseError("'tolerance' must be an object")
        tolerance_from(tol, environ={})  # validate only
        return cls(circles, dict(tol))

    def to_json(self) -> str:
        body = {"circles": [{"id": c.id, "x": c.cx, "y": c.cy, "r": c.r} for c in self.circles]}
        if self.tolerance:
            body["tolerance"] = self.tolerance
        return json.dumps(body, indent=2)


@dataclass
class AreaReportDocument:
    """Areas keyed by decimal label (first circle of the list = most
    significant bit)."""

    n_circles: int
    circle_ids: list[int]
    nonexclusive: dict[int, float]
    exclusive: dict[int, float]
    union: float
    metadata: dict[str, Any] = field(default_factory=dict)
    mc_check: dict[str, Any] | None = None

    @classmethod
    def from_table(cls, table: AreaTable, exclusive_only: bool = False,
                   metadata: dict | None = None) -> "AreaReportDocument":
        tol = table.tol
        meta = {"tolerance": {"geom_eps": tol.eps(table.circles),
                              "area_rel_tol": tol.area_rel_tol,
                              "tie_tol": tol.tie_tol},
                "label_convention": "first listed circle is the most significant bit",
                "ambiguous_four_circle_subsets": {str(k): v for k, v in
                                                  sorted(table.ambiguous.items())}}
        meta.update(metadata or {})
        return cls(table.n_circles, [c.id for c in table.circles],
                   {} if exclusive_only else dict(sorted(table.nonexclusive.items())),
                   dict(sorted(table.exclusive.items())), table.union_area, meta)

    def to_dict(self) -> dict:
        out = {"n_circles": self.n_circles,
               "circle_ids": list(self.circle_ids),
               "nonexclusive": {str(k): v for k, v in self.nonexclusive.items()},
               "exclusive": {str(k): v for k, v in self.exclusive.items()},
               "union": self.union,
               "metadata": self.metadata}
        if self.mc_check is not None:
            out["mc_check"] = self.mc_check
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    @classmethod
    def from_json(cls, text: str) -> "AreaReportDocument":
        try:
            d = json.loads(text)
            return cls(int(d["n_circles"]), [int(i) for i in d["circle_ids"]],
                       {int(k): float(v) for k, v in d["nonexclusive"].items()},
                       {int(k): float(v) for k, v in d["exclusive"].items()},
                       float(d["union"]), d.get("metadata", {}), d.get("mc_check"))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"invalid area report: {exc}") from exc

    def check(self, rel_tol: float = 1e-9) -> list[str]:
        """Report invariants: exclusive keys are non-exclusive keys, and the
        union matches inclusion-exclusion of the non-exclusive areas."""
        problems = []
        if self.nonexclusive:
            stray = sorted(set(self.exclusive) - set(self.nonexclusive))
            if stray:
                problems.append(f"exclusive labels missing from nonexclusive: {stray}")
            incl = sum(v if bin(k).count("1") % 2 else -v for k, v in self.nonexclusive.items())
            if abs(incl - self.union) > rel_tol * max(1.0, abs(self.union)) * 1e3:
                problems.append(f"union {self.union} differs from inclusion-exclusion {incl}")
        return problems
