"""Uplink outage of a mobile placed uniformly in a hexagonal access-point grid.

Access points sit on a triangular lattice with spacing ``L`` (density
``2 / (sqrt(3) L^2)``), each covering a disk of radius ``R``. A mobile combines
(MRC) the Rayleigh-faded signals of every access point whose disk contains it.
The analysis is confined to the Voronoi hexagon of the central access point.

Region probabilities come from the circle-arrangement areas: a point covered
by ``k`` access points is shared equally among them, which by translation
invariance of the lattice gives the same statistics as clipping the
arrangement to the central hexagon, while keeping every region a plain
circle-arrangement region around the central access point.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field, asdict
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from .geometry import Circle, Point, ToleranceConfig, DEFAULT_TOLERANCE
from .trellis import (
    AreaTable,
    RegionSpec,
    compute_all,
    compute_batch,
    popcount,
)

log = logging.getLogger(__name__)

SQRT3 = math.sqrt(3.0)


def db_to_lin(db: float) -> float:
    return 10.0 ** (db / 10.0)


def dbm_to_watt(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class RadioParams:
    """Link-budget parameters. Defaults are the reference cellular setup.

    The shadowing margin attenuates (``sigma_lin = 10^(-sigma_dB/10)``) and
    the fixed attenuation divides (``A_lin = 10^(A_dB/10)``).
    """

    noise_power_dbm: float = -103.0
    pathloss_exp: float = 3.0
    shadow_margin_db: float = 10.0
    fixed_atten_db: float = 30.0
    snr_radius_db: float = 10.0
    snr_target_db: float = 10.0
    quant_step_frac: float = 1.0 / 50.0

    def __post_init__(self):
        for name in ("noise_power_dbm", "shadow_margin_db", "fixed_atten_db",
                     "snr_radius_db", "snr_target_db"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not self.pathloss_exp > 2:
            raise ValueError("pathloss exponent must exceed 2")
        if not 0 < self.quant_step_frac < 1:
            raise ValueError("quant_step_frac must lie in (0, 1)")

    @classmethod
    def from_dict(cls, data: dict) -> "RadioParams":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown radio parameters: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in data.items()})

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def noise_w(self) -> float:
        return dbm_to_watt(self.noise_power_dbm)

    @property
    def sigma_lin(self) -> float:
        return db_to_lin(-self.shadow_margin_db)

    @property
    def atten_lin(self) -> float:
        return db_to_lin(self.fixed_atten_db)

    @property
    def delta_lin(self) -> float:
        return db_to_lin(self.snr_radius_db)

    @property
    def gamma_lin(self) -> float:
        return db_to_lin(self.snr_target_db)

    def gain(self, tx_power: float) -> float:
        """Mean SNR at unit distance."""
        return tx_power * self.sigma_lin / (self.atten_lin * self.noise_w)

    def coverage_radius(self, tx_power: float) -> float:
        """Distance at which the mean SNR equals the radius threshold."""
        return (self.gain(tx_power) / self.delta_lin) ** (1.0 / self.pathloss_exp)


def lattice_point(i: int, j: int, spacing: float) -> Point:
    return Point(spacing * (i + 0.5 * j), spacing * SQRT3 / 2.0 * j)


def lattice_within(radius: float, spacing: float) -> list[tuple[int, int]]:
    """Lattice coordinates of the points within ``radius`` of the origin,
    origin first, then by distance."""
    k = int(math.ceil(2 * radius / spacing)) + 2
    pts = []
    for i in range(-k, k + 1):
        for j in range(-k, k + 1):
            p = lattice_point(i, j, spacing)
            d = math.hypot(p.x, p.y)
            if d <= radius * (1 + 1e-12):
                pts.append((round(d / spacing, 9), math.atan2(p.y, p.x) % (2 * math.pi), i, j))
    pts.sort()
    return [(i, j) for _, _, i, j in pts]


# lattice symmetries fixing the origin, in lattice coordinates
def _rot60(ij):
    i, j = ij
    return (-j, i + j)


def _mirror(ij):
    i, j = ij
    return (i + j, -j)


def _canonical(cells: Sequence[tuple[int, int]]) -> tuple:
    best = None
    for base in cells:
        shifted = [(i - base[0], j - base[1]) for i, j in cells]
        for flip in (False, True):
            pts = [_mirror(p) for p in shifted] if flip else shifted
            for _ in range(6):
                key = tuple(sorted(pts))
                if best is None or key < best:
                    best = key
                pts = [_rot60(p) for p in pts]
    return best


@dataclass
class CoverageScenario:
    """Access-point layout around the central access point (id 1).

    ``access_points`` holds every lattice point whose disk can reach the
    central disk, and always the central point plus its first ring.
    """

    params: RadioParams
    hex_side: float
    tx_power: float
    coverage_radius: float
    access_points: list[Point]
    lattice: list[tuple[int, int]]
    tol: ToleranceConfig = field(default_factory=lambda: DEFAULT_TOLERANCE)

    @property
    def cell_area(self) -> float:
        return SQRT3 / 2.0 * self.hex_side ** 2

    @property
    def density(self) -> float:
        return 2.0 / (SQRT3 * self.hex_side ** 2)

    @property
    def step(self) -> float:
        return self.coverage_radius * self.params.quant_step_frac

    @property
    def n_steps(self) -> int:
        return int(round(1.0 / self.params.quant_step_frac))

    def circles(self, radius: float | None = None) -> list[Circle]:
        r = self.coverage_radius if radius is None else radius
        return [Circle(k + 1, p.x, p.y, r) for k, p in enumerate(self.access_points)]

    def coefficient(self, distances) -> np.ndarray:
        """Mean SNR contributed by an access point at each distance."""
        d = np.asarray(distances, dtype=float)
        return self.params.gain(self.tx_power) * d ** (-self.params.pathloss_exp)

    @cached_property
    def area_table(self) -> AreaTable:
        # the sparse engine only visits existing subsets, so the dense cap
        # does not apply to lattice layouts
        circles = self.circles()
        return compute_all(circles, self.tol, cap=max(len(circles), 1))


MAX_ACCESS_POINTS = 43


def build_scenario(params: RadioParams, hex_side: float, tx_power: float,
                   tol: ToleranceConfig | None = None,
                   max_access_points: int = MAX_ACCESS_POINTS) -> CoverageScenario:
    """Central access point plus every lattice neighbour whose disk reaches it.

    Raises ``ValueError`` when the layout needs more than
    ``max_access_points`` disks (coverage radius above roughly 1.85 spacings).
    """
    if not hex_side > 0 or not tx_power > 0:
        raise ValueError("hex_side and tx_power must be positive")
    r = params.coverage_radius(tx_power)
    reach = max(2.0 * r, hex_side) * (1 + 1e-9)
    cells = []
    for c in lattice_within(reach, hex_side):
        p = lattice_point(*c, hex_side)
        d = math.hypot(p.x, p.y)
        if d < 2.0 * r or d <= hex_side * (1 + 1e-9):
            cells.append(c)
    if len(cells) > max_access_points:
        raise ValueError(f"coverage radius {r:.4g} m is {r / hex_side:.3g} spacings; the layout "
                         f"needs {len(cells)} access points (limit {max_access_points})")
    aps = [lattice_point(i, j, hex_side) for i, j in cells]
    return CoverageScenario(params, float(hex_side), float(tx_power), r, aps, cells,
                            tol or DEFAULT_TOLERANCE)


# ---------------------------------------------------------------------------
# regions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoverageRegion:
    """One class of exclusive regions with identical distance statistics.

    ``spec`` is ``None`` for the uncovered part of the cell. ``count`` is
    the number of raw arrangement regions merged by symmetry.
    """

    spec: RegionSpec | None
    probability: float
    multiplicity: int
    count: int = 1


def enumerate_regions(scenario: CoverageScenario) -> list[CoverageRegion]:
    """Region classes of the fundamental cell with their probabilities; the
    last entry is the uncovered remainder."""
    table = scenario.area_table
    n = table.n_circles
    center_bit = 1 << (n - 1)
    classes: dict[tuple, list] = {}
    for mask, area in table.exclusive.items():
        if not mask & center_bit:
            continue
        ids = [t for t in range(1, n + 1) if mask & (1 << (n - t))]
        key = _canonical([scenario.lattice[t - 1] for t in ids])
        weight = area / (len(ids) * scenario.cell_area)
        entry = classes.setdefault(key, [ids, 0.0, 0])
        entry[1] += weight
        entry[2] += 1
    all_ids = frozenset(range(1, n + 1))
    out = []
    for ids, prob, count in sorted(classes.values(), key=lambda e: (len(e[0]), e[0])):
        spec = RegionSpec(frozenset(ids), all_ids - frozenset(ids))
        out.append(CoverageRegion(spec, prob, len(ids), count))
    covered = sum(r.probability for r in out)
    uncovered = max(0.0, 1.0 - covered)
    if covered > 1.0 + 1e-9:
        log.warning("region probabilities exceed one by %.3e", covered - 1.0)
    out.append(CoverageRegion(None, uncovered, 0, 1))
    return out


# ---------------------------------------------------------------------------
# distance distributions
# ---------------------------------------------------------------------------

@dataclass
class RegionDistanceModel:
    """Joint CDF of the distances to up to three covering access points.

    ``cdf[i, j, ...]`` is the probability that the distance to ``axes[0]``
    is at most ``grid[i]``, to ``axes[1]`` at most ``grid[j]``, and so on,
    for a point uniform in the region.
    """

    region: RegionSpec
    covering_aps: tuple[int, ...]
    axes: tuple[int, ...]
    grid: np.ndarray
    cdf: np.ndarray
    area: float

    def pmf(self) -> np.ndarray:
        """Probability mass of every grid cell (finite differences)."""
        out = self.cdf
        for ax in range(out.ndim):
            out = np.diff(out, axis=ax)
        return out

    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.grid[1:] + self.grid[:-1])


class _RegionEvaluator:
    """Area of one region for many radius assignments of its inside circles."""

    def __init__(self, region: RegionSpec, scenario: CoverageScenario, axes: Sequence[int]):
        table = scenario.area_table
        inside = sorted(region.inside)
        base = table.mask_of_ids(inside)
        outside = [i for i in sorted(region.outside)
                   if table.area(base | table.mask_of_ids([i])) > 0.0]
        order = list(axes) + [i for i in inside if i not in axes] + outside
        self.n = len(order)
        self.k_in = len(inside)
        self.cx = np.array([scenario.access_points[i - 1].x for i in order])
        self.cy = np.array([scenario.access_points[i - 1].y for i in order])
        self.r0 = scenario.coverage_radius
        self.tol = scenario.tol
        in_mask = ((1 << self.k_in) - 1) << (self.n - self.k_in)
        tops = []
        for size in range(len(outside) + 1):
            for extra in itertools.combinations(range(len(outside)), size):
                m = in_mask
                ids = inside + [outside[q] for q in extra]
                if size and table.area(table.mask_of_ids(ids)) <= 0.0:
                    continue
                for q in extra:
                    m |= 1 << (self.n - 1 - (self.k_in + q))
                tops.append((m, (-1) ** size))
        self.terms = tops
        need = set()
        for m, _ in tops:
            sub = m
            while sub:
                need.add(sub)
                sub = (sub - 1) & m
        self.subsets = need

    def areas(self, axis_radii: np.ndarray) -> np.ndarray:
        axis_radii = np.atleast_2d(axis_radii)
        radii = np.full((axis_radii.shape[0], self.n), self.r0)
        radii[:, :axis_radii.shape[1]] = axis_radii
        vals = compute_batch(self.cx, self.cy, radii, self.subsets, self.tol,
                             keep=[m for m, _ in self.terms])
        total = np.zeros(radii.shape[0])
        for m, sign in self.terms:
            total += sign * vals[m]
        return np.maximum(total, 0.0)


def distance_cdf(region: RegionSpec, scenario: CoverageScenario,
                 step: float | None = None) -> RegionDistanceModel:
    """Joint distance CDF on the ``step`` grid by shrinking the radii of the
    chosen access points from ``R`` down to zero."""
    r0 = scenario.coverage_radius
    if step is None:
        n_steps = scenario.n_steps
    else:
        n_steps = int(round(r0 / step))
    grid = np.linspace(0.0, r0, n_steps + 1)
    covering = tuple(sorted(region.inside))
    axes = covering[:3]
    k = len(axes)
    ev = _RegionEvaluator(region, scenario, axes)
    total = float(ev.areas(np.full((1, k), r0))[0])
    if not total > 0.0:
        raise ValueError("region has zero area")
    floor = 1e-12 * total

    # support of each marginal: below lo the CDF is 0, from hi on it is 1
    lo, hi = [], []
    for ax in range(k):
        rows = np.full((grid.size, k), r0)
        rows[:, ax] = grid
        marg = ev.areas(rows)
        zero = np.flatnonzero(marg <= floor)
        full = np.flatnonzero(marg >= total - floor)
        lo.append(int(zero.max()) if zero.size else 0)
        hi.append(int(full.min()) if full.size else grid.size - 1)
    sub_axes = [grid[lo[a]:hi[a] + 1] for a in range(k)]
    mesh = np.meshgrid(*sub_axes, indexing="ij")
    rows = np.stack([m.ravel() for m in mesh], axis=1)
    joint = (ev.areas(rows) / total).reshape([s.size for s in sub_axes])
    idx = [np.clip(np.arange(grid.size), lo[a], hi[a]) - lo[a] for a in range(k)]
    cdf = joint[np.ix_(*idx)]
    for a in range(k):
        below = [slice(None)] * k
        below[a] = slice(0, lo[a] + 1)
        cdf[tuple(below)] = 0.0
    np.clip(cdf, 0.0, 1.0, out=cdf)
    return RegionDistanceModel(region, covering, axes, grid, cdf, total)


# ---------------------------------------------------------------------------
# SNR tail
# ---------------------------------------------------------------------------

_COND_LIMIT = 1e6


def hypoexponential_tail(coeffs, x: float) -> np.ndarray:
    """``P[sum_i c_i X_i > x]`` for independent unit exponentials ``X_i``.

    ``coeffs`` has shape ``(B, k)``; zero entries are absent terms. Rows with
    well separated coefficients use the distinct-rate closed form; rows
    whose closed-form weights would exceed ``1e6`` in magnitude are evaluated
    as a phase-type distribution with a matrix exponential.
    """
    c = np.atleast_2d(np.asarray(coeffs, dtype=float))
    if np.any(c < 0):
        raise ValueError("coefficients must be non-negative")
    out = np.zeros(c.shape[0])
    active = c > 0
    counts = active.sum(axis=1)
    for k in np.unique(counts):
        if k == 0:
            continue
        rows = np.flatnonzero(counts == k)
        cc = np.sort(np.where(active[rows], c[rows], np.inf), axis=1)[:, :k]
        lam = 1.0 / cc
        if k == 1:
            out[rows] = np.exp(-x * lam[:, 0])
            continue
        diff = lam[:, None, :] - lam[:, :, None]          # lam_j - lam_i
        eye = np.eye(k, dtype=bool)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(eye, 1.0, lam[:, None, :] / np.where(eye, 1.0, diff))
            w = ratio.prod(axis=2)
        ok = np.all(np.isfinite(w), axis=1) & (np.abs(w).max(axis=1) <= _COND_LIMIT)
        out[rows[ok]] = (w[ok] * np.exp(-x * lam[ok])).sum(axis=1)
        bad = np.flatnonzero(~ok)
        if bad.size:
            gen = np.zeros((bad.size, k, k))
            idx = np.arange(k)
            gen[:, idx, idx] = -lam[bad]
            gen[:, idx[:-1], idx[1:]] = lam[bad][:, :-1]
            out[rows[bad]] = expm(gen * x)[:, 0, :].sum(axis=1)
    return np.clip(out, 0.0, 1.0)


def snr_success(distances: Sequence[float], scenario: CoverageScenario,
                gamma_db: float | None = None) -> float:
    """Probability that the combined SNR from access points at
    ``distances`` exceeds the target."""
    d = np.asarray(distances, dtype=float)
    if d.size == 0:
        return 0.0
    if np.any(~(d > 0)) or np.any(~np.isfinite(d)):
        raise ValueError("distances must be positive and finite")
    g = scenario.params.gamma_lin if gamma_db is None else db_to_lin(gamma_db)
    return float(hypoexponential_tail(scenario.coefficient(d)[None, :], g)[0])


# ---------------------------------------------------------------------------
# outage
# ---------------------------------------------------------------------------

@dataclass
class OutageBreakdown:
    xi: float
    uncovered: float
    regions: list[tuple[CoverageRegion, float]]

    @property
    def success(self) -> float:
        return 1.0 - self.xi


def _outage_from_cdf(model: RegionDistanceModel, scenario: CoverageScenario) -> float:
    mass = model.pmf()
    mid = model.midpoints()
    cells = np.nonzero(mass > 0)
    if not cells[0].size:
        return 0.0
    dist = np.stack([mid[c] for c in cells], axis=1)
    p_out = 1.0 - hypoexponential_tail(scenario.coefficient(dist), scenario.params.gamma_lin)
    w = mass[cells]
    return float((w * p_out).sum() / w.sum())


def _points_in_region(region: RegionSpec, scenario: CoverageScenario, n: int):
    """Grid points of the region on an ``n x n`` midpoint grid over the
    bounding box of its inside disks, and the cell area."""
    r0 = scenario.coverage_radius
    inside = [scenario.access_points[i - 1] for i in sorted(region.inside)]
    x0 = max(p.x for p in inside) - r0
    x1 = min(p.x for p in inside) + r0
    y0 = max(p.y for p in inside) - r0
    y1 = min(p.y for p in inside) + r0
    hx, hy = (x1 - x0) / n, (y1 - y0) / n
    xs = x0 + (np.arange(n) + 0.5) * hx
    ys = y0 + (np.arange(n) + 0.5) * hy
    xx, yy = np.meshgrid(xs, ys, indexing="ij")
    xx, yy = xx.ravel(), yy.ravel()
    keep = np.ones(xx.size, dtype=bool)
    for i in region.inside:
        p = scenario.access_points[i - 1]
        keep &= np.hypot(xx - p.x, yy - p.y) <= r0
    for i in region.outside:
        p = scenario.access_points[i - 1]
        keep &= np.hypot(xx - p.x, yy - p.y) > r0
    return xx[keep], yy[keep], hx * hy


def _outage_by_quadrature(region: RegionSpec, scenario: CoverageScenario, n: int = 300) -> float:
    xx, yy, _ = _points_in_region(region, scenario, n)
    if xx.size == 0:
        return 0.0
    ids = sorted(region.inside)
    d = np.stack([np.hypot(xx - scenario.access_points[i - 1].x,
                           yy - scenario.access_points[i - 1].y) for i in ids], axis=1)
    d = np.maximum(d, 1e-12 * scenario.coverage_radius)
    tail = hypoexponential_tail(scenario.coefficient(d), scenario.params.gamma_lin)
    return float(np.mean(1.0 - tail))


def outage_breakdown(scenario: CoverageScenario, step: float | None = None,
                     quad_points: int = 300) -> OutageBreakdown:
    """Outage probability region by region. Regions covered by up to three
    access points use their distance CDF; four or more use a direct spatial
    quadrature of the region."""
    regions = enumerate_regions(scenario)
    xi = 0.0
    parts = []
    uncovered = 0.0
    for reg in regions:
        if reg.spec is None:
            uncovered = reg.probability
            xi += reg.probability
            parts.append((reg, 1.0))
            continue
        if reg.probability <= 0.0:
            continue
        if reg.multiplicity <= 3:
            p = _outage_from_cdf(distance_cdf(reg.spec, scenario, step), scenario)
        else:
            p = _outage_by_quadrature(reg.spec, scenario, quad_points)
        parts.append((reg, p))
        xi += reg.probability * p
    return OutageBreakdown(min(max(xi, 0.0), 1.0), uncovered, parts)


def outage_probability(scenario: CoverageScenario, step: float | None = None) -> float:
    return outage_breakdown(scenario, step).xi


def hexagon_points(hex_side: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Midpoint grid of the central Voronoi cell (``n`` cells across)."""
    half_w = hex_side / 2.0
    half_h = hex_side / SQRT3
    h = 2 * half_w / n
    xs = -half_w + (np.arange(n) + 0.5) * h
    ny = int(math.ceil(2 * half_h / h))
    ys = -half_h + (np.arange(ny) + 0.5) * (2 * half_h / ny)
    xx, yy = np.meshgrid(xs, ys, indexing="ij")
    xx, yy = xx.ravel(), yy.ravel()
    keep = np.ones(xx.size, dtype=bool)
    for ang in (0.0, math.pi / 3, 2 * math.pi / 3):
        keep &= np.abs(xx * math.cos(ang) + yy * math.sin(ang)) <= half_w
    return xx[keep], yy[keep]


def outage_quadrature(params: RadioParams, hex_side: float, tx_power: float,
                      n: int = 400) -> float:
    """Reference outage: average the point-wise outage over a grid of the
    central cell, with every lattice access point within range combined."""
    r0 = params.coverage_radius(tx_power)
    xx, yy = hexagon_points(hex_side, n)
    reach = r0 + hex_side / SQRT3
    k = int(math.ceil(reach / hex_side)) + 2
    aps = []
    for i in range(-k, k + 1):
        for j in range(-k, k + 1):
            x, y = hex_side * (i + 0.5 * j), hex_side * SQRT3 / 2 * j
            if math.hypot(x, y) <= reach:
                aps.append((x, y))
    aps = np.array(aps)
    d = np.hypot(xx[:, None] - aps[None, :, 0], yy[:, None] - aps[None, :, 1])
    g = params.gain(tx_power)
    coeff = np.where(d <= r0, g * np.maximum(d, 1e-12 * r0) ** (-params.pathloss_exp), 0.0)
    coeff = -np.sort(-coeff, axis=1)
    width = max(int((coeff > 0).sum(axis=1).max()), 1)
    tail = hypoexponential_tail(coeff[:, :width], params.gamma_lin)
    return float(np.mean(1.0 - tail))


# ---------------------------------------------------------------------------
# design objective and sweeps
# ---------------------------------------------------------------------------

def objective(scenario: CoverageScenario, mu: float, eta: float,
              xi: float | None = None) -> float:
    """Success probability per unit of combined power and density cost."""
    if mu < 0 or eta < 0:
        raise ValueError("mu and eta must be non-negative")
    denom = mu * scenario.tx_power + eta * scenario.density
    if not denom > 0:
        raise ValueError("objective denominator is zero")
    if xi is None:
        xi = outage_probability(scenario)
    return (1.0 - xi) / denom


@dataclass
class SweepResult:
    tx_powers: np.ndarray
    hex_sides: np.ndarray
    success: np.ndarray        # shape (len(tx_powers), len(hex_sides))
    objective: np.ndarray
    violations: list[str]

    @property
    def argmax(self) -> tuple[int, int]:
        return tuple(int(v) for v in np.unravel_index(np.argmax(self.objective),
                                                      self.objective.shape))

    def rows(self):
        for a, pm in enumerate(self.tx_powers):
            for b, l in enumerate(self.hex_sides):
                yield float(pm), float(l), float(self.success[a, b]), float(self.objective[a, b])


def monotonicity_violations(tx_powers, hex_sides, success, tol: float = 1e-3) -> list[str]:
    """Success must not drop with more power or rise with wider spacing."""
    out = []
    s = np.asarray(success)
    for b, l in enumerate(hex_sides):
        for a in range(1, len(tx_powers)):
            if s[a, b] < s[a - 1, b] - tol:
                out.append(f"success drops from P_M={tx_powers[a - 1]:g} to "
                           f"{tx_powers[a]:g} at L={l:g}")
    for a, pm in enumerate(tx_powers):
        for b in range(1, len(hex_sides)):
            if s[a, b] > s[a, b - 1] + tol:
                out.append(f"success rises from L={hex_sides[b - 1]:g} to "
                           f"{hex_sides[b]:g} at P_M={pm:g}")
    return out


def sweep(params: RadioParams, tx_powers: Sequence[float], hex_sides: Sequence[float],
          mu: float, eta: float, tol: float = 1e-3) -> SweepResult:
    tx_powers = np.asarray(tx_powers, dtype=float)
    hex_sides = np.asarray(hex_sides, dtype=float)
    if tx_powers.size == 0 or hex_sides.size == 0:
        raise ValueError("sweep ranges must be non-empty")
    succ = np.zeros((tx_powers.size, hex_sides.size))
    g = np.zeros_like(succ)
    for a, pm in enumerate(tx_powers):
        for b, l in enumerate(hex_sides):
            sc = build_scenario(params, l, pm)
            xi = outage_probability(sc)
            succ[a, b] = 1.0 - xi
            g[a, b] = objective(sc, mu, eta, xi)
    return SweepResult(tx_powers, hex_sides, succ, g,
                       monotonicity_violations(tx_powers, hex_sides, succ, tol))
