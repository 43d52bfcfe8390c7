"""Exact planar primitives for circles.

Only intersections of one, two or three circles are computed geometrically
here; larger subsets are handled algebraically by :mod:`circle_trellis.trellis`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi
DEFAULT_EPS_SCALE = 1e-9


class GeometryError(ValueError):
    """Raised for degenerate or malformed geometric input."""


@dataclass(frozen=True)
class Circle:
    """A disk with a 1-based integer id, center ``(cx, cy)`` and radius ``r``."""

    id: int
    cx: float
    cy: float
    r: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.cx, self.cy, self.r)):
            raise GeometryError(f"circle {self.id}: non-finite value")
        if self.r <= 0:
            raise GeometryError(f"circle {self.id}: radius must be positive, got {self.r}")
        if self.id < 1:
            raise GeometryError(f"circle id must be a positive integer, got {self.id}")

    @property
    def area(self) -> float:
        return math.pi * self.r * self.r

    def contains(self, p: "Point", eps: float = 0.0) -> bool:
        return math.hypot(p.x - self.cx, p.y - self.cy) <= self.r + eps

    def scaled(self, radius: float) -> "Circle":
        return Circle(self.id, self.cx, self.cy, radius)


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError("point coordinates must be finite")


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical slack used throughout the engine.

    ``geom_eps`` is an absolute length; when left as ``None`` it resolves to
    ``1e-9`` times the largest radius of the circles under consideration.
    ``area_rel_tol`` and ``tie_tol`` are relative.
    """

    geom_eps: float | None = None
    area_rel_tol: float = 1e-9
    tie_tol: float = 1e-9

    def __post_init__(self):
        if self.geom_eps is not None and not self.geom_eps > 0:
            raise ValueError("geom_eps must be strictly positive")
        if not self.area_rel_tol > 0 or not self.tie_tol > 0:
            raise ValueError("area_rel_tol and tie_tol must be strictly positive")

    def eps(self, circles: Iterable[Circle]) -> float:
        if self.geom_eps is not None:
            return self.geom_eps
        return DEFAULT_EPS_SCALE * max(c.r for c in circles)

    def resolved(self, circles: Sequence[Circle]) -> "ToleranceConfig":
        """Freeze ``geom_eps`` for a whole circle set."""
        return ToleranceConfig(self.eps(circles), self.area_rel_tol, self.tie_tol)


DEFAULT_TOLERANCE = ToleranceConfig()


@dataclass(frozen=True)
class Arc:
    """Boundary arc of an :class:`ArcPolygon`, traversed counter-clockwise
    around ``circle`` unless ``ccw`` is false."""

    circle: Circle
    ccw: bool = True


@dataclass(frozen=True)
class ArcPolygon:
    """Convex region bounded by circular arcs.

    Edge ``i`` runs from ``vertices[i]`` to ``vertices[i + 1]`` (cyclically)
    along ``arcs[i]``.
    """

    vertices: tuple[Point, ...]
    arcs: tuple[Arc, ...]

    def __post_init__(self):
        if len(self.vertices) >= 2 and len(self.arcs) != len(self.vertices):
            raise GeometryError("an arc polygon needs exactly one arc per edge")


def _dist(ax, ay, bx, by) -> float:
    return math.hypot(bx - ax, by - ay)


def center_distance(a: Circle, b: Circle) -> float:
    return _dist(a.cx, a.cy, b.cx, b.cy)


def distance_matrix(circles: Sequence[Circle]) -> np.ndarray:
    """Symmetric matrix of center-to-center distances."""
    if len(circles) < 1:
        raise ValueError("need at least one circle")
    xy = np.array([(c.cx, c.cy) for c in circles], dtype=float)
    diff = xy[:, None, :] - xy[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


def _check_not_duplicate(a: Circle, b: Circle, eps: float) -> float:
    d = center_distance(a, b)
    if d <= eps and abs(a.r - b.r) <= eps:
        raise GeometryError(f"degenerate duplicate circle: {a.id} and {b.id}")
    return d


def circumference_intersections(a: Circle, b: Circle,
                                tol: ToleranceConfig | None = None) -> list[Point]:
    """Points common to both circumferences (0, 1 or 2 of them).

    Tangency within ``geom_eps`` yields the single contact point.
    """
    if a.id == b.id:
        raise GeometryError("circumference_intersections needs two distinct circles")
    eps = (tol or DEFAULT_TOLERANCE).eps((a, b))
    d = _check_not_duplicate(a, b, eps)
    if d <= eps:
        return []  # concentric
    ux, uy = (b.cx - a.cx) / d, (b.cy - a.cy) / d
    rsum, rdiff = a.r + b.r, abs(a.r - b.r)
    if abs(d - rsum) <= eps:
        return [Point(a.cx + a.r * ux, a.cy + a.r * uy)]
    if abs(d - rdiff) <= eps:
        s = 1.0 if a.r > b.r else -1.0
        return [Point(a.cx + s * a.r * ux, a.cy + s * a.r * uy)]
    if d > rsum or d < rdiff:
        return []
    along = (d * d + a.r * a.r - b.r * b.r) / (2.0 * d)
    h = math.sqrt(max(a.r * a.r - along * along, 0.0))
    bx, by = a.cx + along * ux, a.cy + along * uy
    return [Point(bx - h * uy, by + h * ux), Point(bx + h * uy, by - h * ux)]


def _lens(ra: float, rb: float, d: float) -> float:
    ca = min(max((d * d + ra * ra - rb * rb) / (2.0 * d * ra), -1.0), 1.0)
    cb = min(max((d * d + rb * rb - ra * ra) / (2.0 * d * rb), -1.0), 1.0)
    k = (-d + ra + rb) * (d + ra - rb) * (d - ra + rb) * (d + ra + rb)
    return ra * ra * math.acos(ca) + rb * rb * math.acos(cb) - 0.5 * math.sqrt(max(k, 0.0))


def lens_area(a: Circle, b: Circle, tol: ToleranceConfig | None = None) -> float:
    """Area of the intersection of two disks."""
    eps = (tol or DEFAULT_TOLERANCE).eps((a, b))
    d = center_distance(a, b)
    if d >= a.r + b.r - eps:
        return 0.0
    if d <= abs(a.r - b.r) + eps:
        return math.pi * min(a.r, b.r) ** 2
    return _lens(a.r, b.r, d)


def _angle(c: Circle, p: Point) -> float:
    return math.atan2(p.y - c.cy, p.x - c.cx) % TWO_PI


def _ccw_sweep(c: Circle, p: Point, q: Point) -> float:
    sweep = (_angle(c, q) - _angle(c, p)) % TWO_PI
    return sweep if sweep > 0 else TWO_PI


def _segment_area(r: float, theta: float) -> float:
    return 0.5 * r * r * (theta - math.sin(theta))


def arc_polygon_area(poly: ArcPolygon, tol: ToleranceConfig | None = None) -> float:
    """Area of an arc polygon: shoelace of the vertices plus one circular
    segment per boundary arc."""
    verts = poly.vertices
    n = len(verts)
    if n < 2:
        return 0.0
    if n >= 3:
        scale = max(a.circle.r for a in poly.arcs)
        eps = (tol or DEFAULT_TOLERANCE).eps(a.circle for a in poly.arcs)
        for i in range(n):
            p, q, s = verts[i], verts[(i + 1) % n], verts[(i + 2) % n]
            cross = (q.x - p.x) * (s.y - q.y) - (q.y - p.y) * (s.x - q.x)
            if cross < -eps * scale:
                raise GeometryError("non-convex vertex ordering")
    area = 0.0
    for i in range(n):
        p, q = verts[i], verts[(i + 1) % n]
        area += 0.5 * (p.x * q.y - q.x * p.y)
        arc = poly.arcs[i]
        if arc.ccw:
            area += _segment_area(arc.circle.r, _ccw_sweep(arc.circle, p, q))
        else:
            area -= _segment_area(arc.circle.r, _ccw_sweep(arc.circle, q, p))
    return area


def _inside_all(p: Point, circles: Sequence[Circle], eps: float) -> bool:
    return all(c.contains(p, eps) for c in circles)


def _on_circles(p: Point, circles: Sequence[Circle], eps: float) -> list[Circle]:
    return [c for c in circles if abs(_dist(p.x, p.y, c.cx, c.cy) - c.r) <= eps]


def _vertices(circles: Sequence[Circle], eps: float, tol: ToleranceConfig) -> list[Point]:
    found: list[Point] = []
    for i, a in enumerate(circles):
        for b in circles[i + 1:]:
            for p in circumference_intersections(a, b, tol):
                if not _inside_all(p, circles, eps):
                    continue
                if any(_dist(p.x, p.y, q.x, q.y) <= eps for q in found):
                    continue
                found.append(p)
    return found


def _contained_disk(circles: Sequence[Circle], eps: float) -> Circle | None:
    small = min(circles, key=lambda c: c.r)
    for c in circles:
        if c is not small and center_distance(small, c) + small.r > c.r + eps:
            return None
    return small


def arc_polygon(circles: Sequence[Circle],
                tol: ToleranceConfig | None = None) -> ArcPolygon | None:
    """Boundary of the common intersection of ``circles`` as an arc polygon.

    Returns ``None`` when the intersection has no boundary vertex (it is then
    empty or a whole disk).
    """
    tol = tol or DEFAULT_TOLERANCE
    eps = tol.eps(circles)
    verts = _vertices(circles, eps, tol)
    if len(verts) < 2:
        return None
    mx = sum(p.x for p in verts) / len(verts)
    my = sum(p.y for p in verts) / len(verts)
    verts.sort(key=lambda p: math.atan2(p.y - my, p.x - mx))
    arcs = []
    n = len(verts)
    for i in range(n):
        p, q = verts[i], verts[(i + 1) % n]
        carriers = [c for c in _on_circles(p, circles, eps) if c in _on_circles(q, circles, eps)]
        best, best_seg = None, math.inf
        for c in carriers:
            sweep = _ccw_sweep(c, p, q)
            mid = _angle(c, p) + 0.5 * sweep
            m = Point(c.cx + c.r * math.cos(mid), c.cy + c.r * math.sin(mid))
            if not _inside_all(m, circles, eps):
                continue
            seg = _segment_area(c.r, sweep)
            if seg < best_seg:
                best, best_seg = c, seg
        if best is None:
            raise GeometryError("could not resolve boundary arc between intersection vertices")
        arcs.append(Arc(best))
    return ArcPolygon(tuple(verts), tuple(arcs))


def triple_area(a: Circle, b: Circle, c: Circle,
                tol: ToleranceConfig | None = None) -> float:
    """Area of the common intersection of three disks (identical disks are
    merged)."""
    tol = tol or DEFAULT_TOLERANCE
    circles = (a, b, c)
    eps = tol.eps(circles)
    distinct: list[Circle] = []
    for x in circles:
        if not any(center_distance(x, y) <= eps and abs(x.r - y.r) <= eps for y in distinct):
            distinct.append(x)
    if len(distinct) == 1:
        return distinct[0].area
    if len(distinct) == 2:
        return lens_area(*distinct, tol)
    verts = _vertices(circles, eps, tol)
    if len(verts) <= 1:
        small = _contained_disk(circles, eps)
        return small.area if small is not None else 0.0
    if len(verts) == 2:
        p, q = verts
        both = [x for x in _on_circles(p, circles, eps) if x in _on_circles(q, circles, eps)]
        lenses = [lens_area(x, y, tol) for i, x in enumerate(both) for y in both[i + 1:]]
        if lenses:
            return min(lenses)
    poly = arc_polygon(circles, tol)
    return arc_polygon_area(poly, tol)


# ---------------------------------------------------------------------------
# Vectorised variants, used when the same small arrangement is evaluated for
# many radius assignments at once.
# ---------------------------------------------------------------------------

def lens_area_batch(x1, y1, r1, x2, y2, r2) -> np.ndarray:
    """Broadcasting two-disk intersection area."""
    x1, y1, r1, x2, y2, r2 = np.broadcast_arrays(*(np.asarray(v, dtype=float)
                                                   for v in (x1, y1, r1, x2, y2, r2)))
    d = np.hypot(x2 - x1, y2 - y1)
    out = np.zeros(d.shape)
    inner = d <= np.abs(r1 - r2)
    out[inner] = np.pi * np.minimum(r1, r2)[inner] ** 2
    mid = ~inner & (d < r1 + r2)
    if np.any(mid):
        d_, a, b = d[mid], r1[mid], r2[mid]
        ca = np.clip((d_ * d_ + a * a - b * b) / (2 * d_ * a), -1, 1)
        cb = np.clip((d_ * d_ + b * b - a * a) / (2 * d_ * b), -1, 1)
        k = (-d_ + a + b) * (d_ + a - b) * (d_ - a + b) * (d_ + a + b)
        out[mid] = a * a * np.arccos(ca) + b * b * np.arccos(cb) - 0.5 * np.sqrt(np.maximum(k, 0))
    return out


def triple_area_batch(cx, cy, r) -> np.ndarray:
    """Common intersection area of three disks for a batch of arrangements.

    ``cx``, ``cy`` and ``r`` broadcast to shape ``(B, 3)``. Each circumference
    is cut at its crossings with the other two; the arcs lying inside both
    other disks are integrated with Green's theorem. Zero radii are allowed.
    """
    cx, cy, r = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (cx, cy, r)))
    if cx.ndim != 2 or cx.shape[1] != 3:
        raise ValueError("triple_area_batch expects arrays of shape (B, 3)")
    total = np.zeros(cx.shape[0])
    for i in range(3):
        others = [j for j in range(3) if j != i]
        xi, yi, ri = cx[:, i], cy[:, i], r[:, i]
        cuts = [np.zeros_like(ri), np.full_like(ri, TWO_PI)]
        for j in others:
            dx, dy = cx[:, j] - xi, cy[:, j] - yi
            d = np.hypot(dx, dy)
            crossing = (d > np.abs(ri - r[:, j])) & (d < ri + r[:, j]) & (ri > 0)
            with np.errstate(divide="ignore", invalid="ignore"):
                w = np.arccos(np.clip((ri * ri + d * d - r[:, j] ** 2) / (2 * ri * d), -1, 1))
            base = np.arctan2(dy, dx)
            cuts.append(np.where(crossing, (base - w) % TWO_PI, 0.0))
            cuts.append(np.where(crossing, (base + w) % TWO_PI, 0.0))
        t = np.sort(np.stack(cuts, axis=1), axis=1)
        t1, t2 = t[:, :-1], t[:, 1:]
        tm = 0.5 * (t1 + t2)
        mx = xi[:, None] + ri[:, None] * np.cos(tm)
        my = yi[:, None] + ri[:, None] * np.sin(tm)
        keep = t2 > t1
        for j in others:
            keep &= np.hypot(mx - cx[:, j, None], my - cy[:, j, None]) <= r[:, j, None]
        rr = ri[:, None]
        green = 0.5 * (rr * rr * (t2 - t1)
                       + rr * (xi[:, None] * (np.sin(t2) - np.sin(t1))
                               - yi[:, None] * (np.cos(t2) - np.cos(t1))))
        total += np.where(keep, green, 0.0).sum(axis=1)
    return np.maximum(total, 0.0)
