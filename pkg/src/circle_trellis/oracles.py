"""Independent area estimators used to check the trellis engine.

Nothing in this module calls into :mod:`circle_trellis.trellis`; all region
classification is done point-wise from centers and radii.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import norm

from .geometry import Circle, DEFAULT_EPS_SCALE


@dataclass(frozen=True)
class SamplePlan:
    p: float
    epsilon: float
    confidence: float
    n_points: int


@dataclass(frozen=True)
class MCEstimate:
    area_mean: float
    stderr: float
    n_points: int
    seed: int | None


@dataclass
class MCTable:
    exclusive: dict[int, MCEstimate]
    union: MCEstimate
    box: tuple[float, float, float, float]
    n_points: int
    seed: int | None

    def estimate(self, mask: int) -> MCEstimate:
        """Exclusive-region estimate; absent masks had no hits."""
        return self.exclusive.get(mask, MCEstimate(0.0, 0.0, self.n_points, self.seed))


@dataclass
class RasterTable:
    """Exclusive areas per subset label from a deterministic grid.

    ``error_bound`` is total circle perimeter times the grid step, a bound on
    the absolute error of any single region.
    """

    exclusive: dict[int, float]
    n_circles: int
    h: float
    method: str
    error_bound: float
    union: float = field(init=False)

    def __post_init__(self):
        self.union = float(sum(self.exclusive.values()))

    def nonexclusive(self, mask: int) -> float:
        return float(sum(v for m, v in self.exclusive.items() if m & mask == mask))


def plan_samples(p: float, epsilon: float, confidence: float) -> SamplePlan:
    """Number of uniform points so that a region covering a fraction ``p`` of
    the sampling box is estimated within relative error ``epsilon`` with
    probability ``confidence`` (normal approximation to the binomial)."""
    if not 0 < p < 1:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if not 0 < confidence < 1:
        raise ValueError(f"confidence must lie in (0, 1), got {confidence}")
    q = norm.isf((1.0 - confidence) / 2.0)
    n = (1.0 - p) / (epsilon ** 2 * p) * q * q
    return SamplePlan(p, epsilon, confidence, int(math.ceil(n - 1e-9)))


def _arrays(circles: Sequence[Circle]):
    cx = np.array([c.cx for c in circles], dtype=float)
    cy = np.array([c.cy for c in circles], dtype=float)
    r = np.array([c.r for c in circles], dtype=float)
    n = len(circles)
    bits = np.array([1 << (n - 1 - t) for t in range(n)], dtype=np.int64)
    return cx, cy, r, bits


def bounding_box(circles: Sequence[Circle], pad: float | None = None):
    cx, cy, r, _ = _arrays(circles)
    if pad is None:
        pad = DEFAULT_EPS_SCALE * r.max()
    return (float((cx - r).min() - pad), float((cy - r).min() - pad),
            float((cx + r).max() + pad), float((cy + r).max() + pad))


def _membership(x, y, cx, cy, r, bits):
    inside = (x[..., None] - cx) ** 2 + (y[..., None] - cy) ** 2 <= r * r
    return (inside * bits).sum(axis=-1)


def mc_area_table(circles: Sequence[Circle], n_points: int, seed: int | None = 0,
                  box: tuple[float, float, float, float] | None = None,
                  chunk: int = 1_000_000) -> MCTable:
    """Monte-Carlo estimate of every exclusive region and of the union."""
    cx, cy, r, bits = _arrays(circles)
    if box is None:
        box = bounding_box(circles)
    x0, y0, x1, y1 = box
    if np.any(cx - r < x0) or np.any(cx + r > x1) or np.any(cy - r < y0) or np.any(cy + r > y1):
        raise ValueError("sampling box does not cover every circle")
    if n_points < 1:
        raise ValueError("n_points must be positive")
    rng = np.random.default_rng(seed)
    counts = np.zeros(1 << len(circles), dtype=np.int64)
    left = n_points
    while left > 0:
        m = min(left, chunk)
        x = rng.uniform(x0, x1, m)
        y = rng.uniform(y0, y1, m)
        counts += np.bincount(_membership(x, y, cx, cy, r, bits), minlength=counts.size)
        left -= m
    box_area = (x1 - x0) * (y1 - y0)

    def est(k):
        p = k / n_points
        return MCEstimate(box_area * p, box_area * math.sqrt(p * (1 - p) / n_points),
                          n_points, seed)

    exclusive = {int(m): est(int(k)) for m, k in enumerate(counts) if m and k}
    return MCTable(exclusive, est(int(counts[1:].sum())), box, n_points, seed)


def raster_area_table(circles: Sequence[Circle], h: float, method: str = "scanline",
                      chunk_cells: int = 4_000_000) -> RasterTable:
    """Deterministic midpoint-rule classification of the plane.

    ``method="pixel"`` classifies the centers of ``h x h`` cells.
    ``method="scanline"`` samples rows ``h`` apart and measures every row
    exactly: the chord of each circle on the row is cut at all chord
    endpoints and each piece is classified by its midpoint.
    """
    if not h > 0:
        raise ValueError("h must be positive")
    cx, cy, r, bits = _arrays(circles)
    n = len(circles)
    x0, y0, x1, y1 = bounding_box(circles, pad=0.0)
    ny = int(math.ceil((y1 - y0) / h))
    ys = y0 + (np.arange(ny) + 0.5) * h
    acc = np.zeros(1 << n)
    if method == "pixel":
        nx = int(math.ceil((x1 - x0) / h))
        xs = x0 + (np.arange(nx) + 0.5) * h
        step = max(1, chunk_cells // max(nx * n, 1))
        for s in range(0, ny, step):
            yy, xx = np.meshgrid(ys[s:s + step], xs, indexing="ij")
            acc += np.bincount(_membership(xx, yy, cx, cy, r, bits).ravel(), minlength=acc.size)
        acc *= h * h
    elif method == "scanline":
        step = max(1, chunk_cells // (2 * n * n))
        for s in range(0, ny, step):
            y = ys[s:s + step, None]
            half = np.sqrt(np.maximum(r * r - (y - cy) ** 2, 0.0))
            lo, hi = cx - half, cx + half
            ends = np.sort(np.concatenate([lo, hi], axis=1), axis=1)
            a, b = ends[:, :-1], ends[:, 1:]
            xm = 0.5 * (a + b)
            inside = (xm[..., None] >= lo[:, None, :]) & (xm[..., None] <= hi[:, None, :]) \
                & (half[:, None, :] > 0)
            masks = (inside * bits).sum(axis=-1)
            acc += np.bincount(masks.ravel(), weights=(b - a).ravel(), minlength=acc.size)
        acc *= h
    else:
        raise ValueError(f"unknown raster method {method!r}")
    exclusive = {int(m): float(v) for m, v in enumerate(acc) if m and v > 0}
    bound = float(2 * np.pi * r.sum() * h)
    return RasterTable(exclusive, n, h, method, bound)


def vertex_existence(circles: Sequence[Circle], rel_eps: float = 1e-12) -> bool:
    """Brute-force test that the common intersection has positive area.

    A non-empty intersection of disks is either one whole disk contained in
    all the others, or has a boundary vertex where two circumferences cross
    inside every remaining disk.
    """
    cx, cy, r, _ = _arrays(circles)
    n = len(circles)
    if n == 1:
        return True
    slack = rel_eps * r.max()
    d = np.hypot(cx[:, None] - cx[None, :], cy[:, None] - cy[None, :])
    s = int(np.argmin(r))
    if np.all(d[s] + r[s] <= r + slack):
        return True
    for i in range(n):
        for j in range(i + 1, n):
            dij = d[i, j]
            if not abs(r[i] - r[j]) + slack < dij < r[i] + r[j] - slack:
                continue
            ux, uy = (cx[j] - cx[i]) / dij, (cy[j] - cy[i]) / dij
            along = (dij * dij + r[i] ** 2 - r[j] ** 2) / (2 * dij)
            hh = math.sqrt(max(r[i] ** 2 - along * along, 0.0))
            for sgn in (1.0, -1.0):
                px = cx[i] + along * ux - sgn * hh * uy
                py = cy[i] + along * uy + sgn * hh * ux
                others = [k for k in range(n) if k != i and k != j]
                if all(math.hypot(px - cx[k], py - cy[k]) < r[k] - slack for k in others):
                    return True
    return False
