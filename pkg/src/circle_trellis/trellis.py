"""Trellis over circle subsets.

Level ``n`` of the trellis holds every ``n``-subset of the circle set, labelled
by an integer whose most significant bit (of ``N`` bits) stands for the first
circle. Areas of 1-, 2- and 3-circle intersections come from
:mod:`circle_trellis.geometry`; every larger intersection is obtained from
the areas one and two levels below, and exclusive areas are peeled off from
the top level down.
"""

from __future__ import annotations

import itertools
import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .geometry import (
    Circle,
    GeometryError,
    ToleranceConfig,
    DEFAULT_TOLERANCE,
    center_distance,
    circumference_intersections,
    lens_area,
    lens_area_batch,
    triple_area,
    triple_area_batch,
)

log = logging.getLogger(__name__)

MAX_CIRCLES = 30


class TrellisError(RuntimeError):
    """Internal consistency failure of the area recursion."""


class DegeneracyWarning(RuntimeWarning):
    pass


# ---------------------------------------------------------------------------
# labels
# ---------------------------------------------------------------------------

def popcount(mask: int) -> int:
    return bin(mask).count("1")


def circle_bit(t: int, n_circles: int) -> int:
    """Bit of circle ``t`` (1-based) in an ``n_circles``-bit label."""
    return 1 << (n_circles - t)


def mask_from_members(members: Iterable[int], n_circles: int) -> int:
    mask = 0
    for t in members:
        if not 1 <= t <= n_circles:
            raise ValueError(f"circle index {t} outside 1..{n_circles}")
        mask |= circle_bit(t, n_circles)
    return mask


def members_of(mask: int, n_circles: int) -> tuple[int, ...]:
    return tuple(t for t in range(1, n_circles + 1) if mask & circle_bit(t, n_circles))


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low)
        mask ^= low
    return out


@dataclass(frozen=True)
class SubsetLabel:
    """A trellis vertex: the subset of circles whose bits are set in ``mask``."""

    mask: int
    n_circles: int

    def __post_init__(self):
        if not 1 <= self.mask < (1 << self.n_circles):
            raise ValueError(f"label {self.mask} out of range for {self.n_circles} circles")

    @classmethod
    def from_members(cls, members: Iterable[int], n_circles: int) -> "SubsetLabel":
        return cls(mask_from_members(members, n_circles), n_circles)

    @property
    def level(self) -> int:
        return popcount(self.mask)

    @property
    def members(self) -> tuple[int, ...]:
        return members_of(self.mask, self.n_circles)

    @property
    def binary(self) -> str:
        return format(self.mask, f"0{self.n_circles}b")

    def __int__(self) -> int:
        return self.mask


@dataclass(frozen=True)
class RegionSpec:
    """Points inside every circle of ``inside`` and outside every circle of
    ``outside`` (circle ids)."""

    inside: frozenset[int]
    outside: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "inside", frozenset(self.inside))
        object.__setattr__(self, "outside", frozenset(self.outside))
        if not self.inside:
            raise ValueError("a region needs at least one inside circle")
        if self.inside & self.outside:
            raise ValueError("inside and outside circle sets overlap")


# ---------------------------------------------------------------------------
# transition structure
# ---------------------------------------------------------------------------

def _level_labels(n_circles: int, n: int) -> np.ndarray:
    if n == 0:
        return np.zeros(1, dtype=np.int64)
    combos = itertools.combinations(range(n_circles), n)
    return np.fromiter((sum(1 << (n_circles - 1 - i) for i in c) for c in combos),
                       dtype=np.int64, count=math.comb(n_circles, n))


def _index_of(labels: np.ndarray, masks: np.ndarray) -> np.ndarray:
    asc = labels[::-1]
    pos = np.searchsorted(asc, masks)
    return labels.size - 1 - pos


@dataclass(frozen=True)
class TransitionStructure:
    """Adjacency between consecutive trellis levels.

    ``labels[n]`` lists the level-``n`` labels in decreasing order (``labels[0]``
    is the virtual empty vertex). ``children[n]`` has one row per vertex of
    level ``n + 1`` holding the indices of its ``n + 1`` neighbours in level
    ``n``; ``parents[n]`` has one row per vertex of level ``n`` with the indices
    of its ``N - n`` neighbours in level ``n + 1``.
    """

    n_circles: int
    labels: tuple[np.ndarray, ...]
    children: tuple[np.ndarray, ...]
    parents: tuple[np.ndarray, ...]

    def shape(self, n: int) -> tuple[int, int]:
        return self.children[n].shape[0], self.labels[n].size

    def matrix(self, n: int) -> np.ndarray:
        """Dense 0/1 transition matrix between levels ``n`` and ``n + 1``."""
        p, q = self.shape(n)
        m = np.zeros((p, q), dtype=np.int64)
        rows = np.repeat(np.arange(p), self.children[n].shape[1])
        m[rows, self.children[n].ravel()] = 1
        return m


def build_transitions(n_circles: int, cap: int = MAX_CIRCLES) -> TransitionStructure:
    """Index-list form of every transition matrix for ``n_circles`` circles."""
    if not 1 <= n_circles <= cap:
        raise ValueError(f"number of circles must lie in 1..{cap}, got {n_circles}")
    labels = tuple(_level_labels(n_circles, n) for n in range(n_circles + 1))
    bitvals = np.array([1 << k for k in range(n_circles)], dtype=np.int64)
    children, parents = [], []
    for n in range(n_circles):
        upper = labels[n + 1]
        has = (upper[:, None] & bitvals[None, :]) != 0
        kids = (upper[:, None] ^ bitvals[None, :])[has].reshape(upper.size, n + 1)
        children.append(_index_of(labels[n], kids))
        lower = labels[n]
        free = (lower[:, None] & bitvals[None, :]) == 0
        ups = (lower[:, None] | bitvals[None, :])[free].reshape(lower.size, n_circles - n)
        parents.append(_index_of(upper, ups))
    return TransitionStructure(n_circles, labels, tuple(children), tuple(parents))


def label_vector(n_circles: int, n: int,
                 transitions: TransitionStructure | None = None) -> np.ndarray:
    """Decimal labels of level ``n``, generated level by level from the
    transition lists (each label is the sum of its children divided by
    ``n - 1``)."""
    if not 1 <= n <= n_circles:
        raise ValueError(f"level must lie in 1..{n_circles}")
    tr = transitions or build_transitions(n_circles)
    vec = np.array([1 << (n_circles - t) for t in range(1, n_circles + 1)], dtype=np.int64)
    for k in range(2, n + 1):
        sums = vec[tr.children[k - 1]].sum(axis=1)
        vec = sums // (k - 1)
    return vec


def existence_step(e_n: np.ndarray, transitions: TransitionStructure, level: int,
                   circles: Sequence[Circle],
                   tol: ToleranceConfig | None = None) -> np.ndarray:
    """Existence vector of level ``level + 1`` from that of ``level``.

    A vertex survives when all of its children exist. Survivors of levels 2
    and 3 are confirmed geometrically; from level 4 on survival is final.
    """
    tol = (tol or DEFAULT_TOLERANCE).resolved(circles)
    e_n = np.asarray(e_n, dtype=np.int64)
    if level == 0:
        return np.ones(transitions.n_circles, dtype=np.int64)
    out = np.maximum(e_n[transitions.children[level]].sum(axis=1) - level, 0)
    if level + 1 in (2, 3):
        eps = tol.eps(circles)
        n = transitions.n_circles
        for i in np.flatnonzero(out):
            group = [circles[t - 1] for t in members_of(int(transitions.labels[level + 1][i]), n)]
            if level + 1 == 2:
                ok = center_distance(*group) <= group[0].r + group[1].r + eps
            else:
                ok = triple_area(*group, tol) > 0
            out[i] = int(ok)
    return out


# ---------------------------------------------------------------------------
# n >= 4: algebraic derivation
# ---------------------------------------------------------------------------

def _reduced_hat(areas: Mapping[int, float], k_mask: int, top: int) -> float:
    """Hat value of vertex ``k_mask`` in the trellis restricted to ``top``:
    alternating sum over every strict superset of ``k_mask`` that is a
    strict subset of ``top``."""
    free = _bits(top & ~k_mask)
    val = areas.get(k_mask, 0.0)
    for size in range(1, len(free)):
        sign = -1.0 if size % 2 else 1.0
        for extra in itertools.combinations(free, size):
            val = val + sign * areas.get(k_mask | sum(extra), 0.0)
    return val


def _pairs_value(areas: Mapping[int, float], mask: int) -> float:
    bits = _bits(mask)
    best = -math.inf
    for i, t in enumerate(bits):
        at = areas.get(mask ^ t, 0.0)
        for r in bits[i + 1:]:
            v = at + areas.get(mask ^ r, 0.0) - areas.get(mask ^ t ^ r, 0.0)
            if v > best:
                best = v
    return best


def _tie(a: float, c: float, b: float, tie_tol: float) -> bool:
    scale = max(abs(a), abs(c), abs(b), 1e-300)
    return abs(a - c) <= tie_tol * scale and abs(a - b) > tie_tol * scale


def _m3_signature_count(circles: Sequence[Circle], tol: ToleranceConfig) -> int | None:
    """Number of circles containing the three vertices of the triple
    intersection of the other three; ``None`` if the arrangement is
    degenerate (tangencies or coincident intersection points)."""
    eps = tol.eps(circles)
    pts = {}
    for i, j in itertools.combinations(range(4), 2):
        p = circumference_intersections(circles[i], circles[j], tol)
        if len(p) != 2:
            return None
        pts[(i, j)] = p
    flat = [q for p in pts.values() for q in p]
    for u, v in itertools.combinations(flat, 2):
        if math.hypot(u.x - v.x, u.y - v.y) <= eps:
            return None
    count = 0
    for i in range(4):
        j, k, p = [x for x in range(4) if x != i]

        def found(a, b, third):
            return any(circles[i].contains(q, eps) and circles[third].contains(q, eps)
                       for q in pts[(a, b)])

        if found(j, k, p) and found(j, p, k) and found(k, p, j):
            count += 1
    return count


def special_case_n4(circles: Sequence[Circle], areas: Mapping[int, float],
                    tol: ToleranceConfig | None = None) -> float:
    """Quadruple intersection area when the hat extremes are ambiguous.

    ``areas`` maps 4-bit labels (first circle most significant) of every
    subset of the four circles with up to three members to their areas.
    """
    if len(circles) != 4:
        raise ValueError("special_case_n4 needs exactly four circles")
    tol = (tol or DEFAULT_TOLERANCE).resolved(circles)
    top = 0b1111
    singles = [8, 4, 2, 1]
    a = min(_reduced_hat(areas, m, top) for m in singles)
    b = _pairs_value(areas, top)
    c = min(areas.get(top ^ m, 0.0) for m in singles)
    if not _tie(a, c, b, tol.tie_tol):
        return b
    count = _m3_signature_count(circles, tol)
    if count is None:
        warnings.warn("degenerate four-circle arrangement in tie resolution; "
                      "using the pairwise value", DegeneracyWarning, stacklevel=2)
        return b
    return a if count == 1 else b


def _n4_extremes(areas: Mapping[int, float], mask: int, circles: Sequence[Circle]):
    """Minimum single and minimum triple hat values of a 4-subset, plus the
    subset's areas relabelled to 4 bits and its circles in label order."""
    n_circles = len(circles)
    order = sorted(_bits(mask), reverse=True)
    local = {}
    for m in range(1, 15):
        local[m] = areas.get(sum(order[q] for q in range(4) if m & (8 >> q)), 0.0)
    four = [circles[n_circles - b.bit_length()] for b in order]
    a = min(_reduced_hat(local, m, 15) for m in (8, 4, 2, 1))
    c = min(local[15 ^ m] for m in (8, 4, 2, 1))
    return a, c, local, four


def area_from_hats(mask: int, areas: Mapping[int, float], circles: Sequence[Circle],
                   tol: ToleranceConfig | None = None) -> float:
    """Area of the intersection of the ``n >= 4`` circles in ``mask``.

    ``areas`` must hold the area of every strict subset (absent = 0) and
    ``circles`` is the full circle list the labels refer to.
    """
    bits = _bits(mask)
    if len(bits) < 4:
        raise ValueError("area_from_hats applies to subsets of four or more circles")
    if any(areas.get(mask ^ b, 0.0) <= 0.0 and (mask ^ b) not in areas for b in bits):
        raise TrellisError(f"subset {mask} does not exist")
    best = _pairs_value(areas, mask)
    if len(bits) == 4:
        tol = tol or DEFAULT_TOLERANCE
        a, c, local, four = _n4_extremes(areas, mask, circles)
        if _tie(a, c, best, tol.tie_tol):
            log.debug("ambiguous four-circle subset %d, running geometric check", mask)
            best = special_case_n4(four, local, tol)
    return max(best, 0.0)


# ---------------------------------------------------------------------------
# the full computation
# ---------------------------------------------------------------------------

@dataclass
class AreaTable:
    """Non-exclusive and exclusive areas of a circle set.

    ``nonexclusive`` holds every subset found to exist (tangent pairs exist
    with zero area); ``exclusive`` holds the strictly positive exclusive
    areas. Anything absent is zero. ``ambiguous`` maps each 4-subset that
    needed the geometric tie check to the branch it resolved to.
    """

    circles: tuple[Circle, ...]
    tol: ToleranceConfig
    nonexclusive: dict[int, float]
    exclusive: dict[int, float]
    ambiguous: dict[int, str] = field(default_factory=dict)

    @property
    def n_circles(self) -> int:
        return len(self.circles)

    @property
    def union_area(self) -> float:
        return float(sum(self.exclusive.values()))

    @property
    def plane_region_count(self) -> int:
        """Cells of the plane partition by membership label: every nonzero
        exclusive region plus the uncovered exterior."""
        return len(self.exclusive) + 1

    def area(self, mask: int) -> float:
        return self.nonexclusive.get(int(mask), 0.0)

    def exists(self, mask: int) -> bool:
        return int(mask) in self.nonexclusive

    def exclusive_area(self, mask: int) -> float:
        return self.exclusive.get(int(mask), 0.0)

    def position(self, circle_id: int) -> int:
        for t, c in enumerate(self.circles, start=1):
            if c.id == circle_id:
                return t
        raise KeyError(f"unknown circle id {circle_id}")

    def mask_of_ids(self, ids: Iterable[int]) -> int:
        return mask_from_members((self.position(i) for i in ids), self.n_circles)

    # dense per-level views ------------------------------------------------

    def labels(self, n: int) -> np.ndarray:
        return _level_labels(self.n_circles, n)

    def existence_vector(self, n: int) -> np.ndarray:
        return np.array([int(int(m) in self.nonexclusive) for m in self.labels(n)])

    def area_vector(self, n: int) -> np.ndarray:
        return np.array([self.area(m) for m in self.labels(n)])

    def exclusive_vector(self, n: int) -> np.ndarray:
        return np.array([self.exclusive_area(m) for m in self.labels(n)])

    def hat_vector(self, n: int) -> np.ndarray:
        """Alternating sums over the full trellis, stopping one level short of
        the top."""
        top = (1 << self.n_circles) - 1
        if not 1 <= n < self.n_circles:
            raise ValueError("hat vectors exist for levels 1..N-1")
        return np.array([_reduced_hat(self.nonexclusive, int(m), top) for m in self.labels(n)])


def _check_duplicates(circles: Sequence[Circle], eps: float):
    ids = [c.id for c in circles]
    if len(set(ids)) != len(ids):
        raise GeometryError("circle ids must be unique")
    for a, b in itertools.combinations(circles, 2):
        if center_distance(a, b) <= eps and abs(a.r - b.r) <= eps:
            raise GeometryError(f"degenerate duplicate circle: {a.id} and {b.id}")


def _candidates(live: Iterable[int], live_set: set[int]) -> list[int]:
    """Supersets by one circle whose every child is alive."""
    out = []
    for t in live:
        low = t & -t
        b = 1
        while b < low:
            cand = t | b
            if all((cand ^ x) in live_set for x in _bits(cand)):
                out.append(cand)
            b <<= 1
    return out


def compute_all(circles: Sequence[Circle], tol: ToleranceConfig | None = None,
                cap: int = MAX_CIRCLES) -> AreaTable:
    """Every non-exclusive and exclusive intersection area of ``circles``.

    The list order fixes the labelling: ``circles[0]`` is the most
    significant bit.
    """
    circles = tuple(circles)
    n = len(circles)
    if not 1 <= n <= cap:
        raise ValueError(f"number of circles must lie in 1..{cap}, got {n}")
    tol = (tol or DEFAULT_TOLERANCE).resolved(circles)
    eps = tol.eps(circles)
    _check_duplicates(circles, eps)

    def circle(bit):
        return circles[n - bit.bit_length()]

    areas: dict[int, float] = {}
    ambiguous: dict[int, str] = {}
    level = [1 << k for k in range(n - 1, -1, -1)]
    for m in level:
        areas[m] = circle(m).area
    depth = 1
    while level and depth < n:
        depth += 1
        live_set = set(level)
        cands = _candidates(level, live_set)
        nxt = []
        for m in cands:
            group = [circle(b) for b in _bits(m)]
            if depth == 2:
                a, b = group
                if center_distance(a, b) > a.r + b.r + eps:
                    continue
                val = lens_area(a, b, tol)
            elif depth == 3:
                val = triple_area(*group, tol)
                if not val > 0:
                    continue
            else:
                val = area_from_hats(m, areas, circles, tol)
                if depth == 4:
                    a, c, _, _ = _n4_extremes(areas, m, circles)
                    b = _pairs_value(areas, m)
                    if _tie(a, c, b, tol.tie_tol):
                        ambiguous[m] = "a" if val == max(a, 0.0) and a != b else "b"
            areas[m] = val
            nxt.append(m)
        level = sorted(nxt, reverse=True)

    exclusive = _exclusive_areas(areas, n, tol, sum(c.area for c in circles))
    return AreaTable(circles, tol, areas, exclusive, ambiguous)


def _exclusive_areas(areas: Mapping[int, float], n: int, tol: ToleranceConfig,
                     total: float) -> dict[int, float]:
    """Top-down peeling: exclusive(T) = A(T) minus the exclusive areas of all
    strict supersets of T. A subset contained in some other circle (adding
    that circle leaves the area unchanged) is zero outright."""
    floor = tol.area_rel_tol * total
    full = (1 << n) - 1
    order = sorted(areas, key=lambda m: (-popcount(m), -m))
    nonzero: list[tuple[int, float]] = []
    out: dict[int, float] = {}
    for t in order:
        a = areas[t]
        if a <= floor:
            continue
        absorbed = False
        for b in _bits(full & ~t):
            up = areas.get(t | b)
            if up is not None and abs(up - a) <= tol.area_rel_tol * a:
                absorbed = True
                break
        if absorbed:
            continue
        ex = a - sum(v for m, v in nonzero if m & t == t)
        if ex < -floor:
            raise TrellisError(f"negative exclusive area {ex:.3e} for subset {t}")
        if ex > floor:
            nonzero.append((t, ex))
            out[t] = ex
    return out


def exclusive_from_nonexclusive(areas: Mapping[int, float], n: int) -> dict[int, float]:
    """Closed-form alternating sum over supersets, without pruning."""
    out = {}
    for t, a in areas.items():
        val = a
        for m, v in areas.items():
            if m != t and m & t == t:
                val += v if (popcount(m) - popcount(t)) % 2 == 0 else -v
        out[t] = val
    return out


def region_area(spec: RegionSpec, table: AreaTable) -> float:
    """Area inside every ``spec.inside`` circle and outside every
    ``spec.outside`` circle, by inclusion-exclusion over the outside set."""
    inside = table.mask_of_ids(spec.inside)
    outside = [table.mask_of_ids([i]) for i in sorted(spec.outside)]

    def walk(mask, start, sign):
        a = table.area(mask)
        if a == 0.0 and not table.exists(mask):
            return 0.0
        total = sign * a
        for k in range(start, len(outside)):
            total += walk(mask | outside[k], k + 1, -sign)
        return total

    return max(walk(inside, 0, 1.0), 0.0)


# ---------------------------------------------------------------------------
# batched evaluation: one fixed set of centers, many radius assignments
# ---------------------------------------------------------------------------

def compute_batch(cx: Sequence[float], cy: Sequence[float], radii: np.ndarray,
                  subsets: Iterable[int], tol: ToleranceConfig | None = None,
                  keep: Iterable[int] | None = None) -> dict[int, np.ndarray]:
    """Non-exclusive areas of ``subsets`` for each row of ``radii``.

    ``radii`` has shape ``(B, N)``; ``subsets`` must be closed under taking
    non-empty subsets (any subset absent is treated as empty). The recursion
    is the one of :func:`compute_all`, evaluated element-wise. Each subset is
    evaluated once per distinct tuple of its own radii. Only the subsets in
    ``keep`` (default: all) are returned.
    """
    cx = np.asarray(cx, dtype=float)
    cy = np.asarray(cy, dtype=float)
    radii = np.atleast_2d(np.asarray(radii, dtype=float))
    n = cx.size
    tol = tol or DEFAULT_TOLERANCE
    batch = radii.shape[0]
    varies = [bool(np.ptp(radii[:, j]) > 0) for j in range(n)]
    groups: dict[tuple, tuple[np.ndarray, np.ndarray]] = {}

    def col(bit):
        return n - bit.bit_length()

    def key_of(m):
        return tuple(j for j in sorted(col(b) for b in _bits(m)) if varies[j])

    def group(key):
        # representative rows and the map from every row to its representative
        if key not in groups:
            if not key:
                groups[key] = (np.zeros(1, dtype=np.intp), np.zeros(batch, dtype=np.intp))
            else:
                _, rep, inv = np.unique(radii[:, list(key)], axis=0,
                                        return_index=True, return_inverse=True)
                groups[key] = (rep, inv.ravel())
        return groups[key]

    compact: dict[int, np.ndarray] = {}

    def on_rows(m, key):
        """Values of subset ``m`` at the representative rows of ``key``."""
        if m not in compact:
            return np.zeros(group(key)[0].size)
        return compact[m][group(key_of(m))[1][group(key)[0]]]

    for m in sorted(set(subsets), key=lambda v: (popcount(v), -v)):
        bits = _bits(m)
        k = len(bits)
        key = key_of(m)
        rows = group(key)[0]
        r = radii[rows]
        idx = [col(b) for b in sorted(bits, reverse=True)]
        if k == 1:
            compact[m] = np.pi * r[:, idx[0]] ** 2
        elif k == 2:
            i, j = idx
            compact[m] = lens_area_batch(cx[i], cy[i], r[:, i], cx[j], cy[j], r[:, j])
        elif k == 3:
            compact[m] = triple_area_batch(cx[idx][None, :], cy[idx][None, :], r[:, idx])
        else:
            kids = {c: on_rows(c, key) for c in (m ^ b for b in bits)}
            alive = np.ones(rows.size, dtype=bool)
            for v in kids.values():
                alive &= v > 0
            best = np.full(rows.size, -np.inf)
            for p, t in enumerate(bits):
                for q in bits[p + 1:]:
                    v = kids[m ^ t] + kids[m ^ q] - on_rows(m ^ t ^ q, key)
                    best = np.maximum(best, v)
            if k == 4 and np.any(alive):
                order = sorted(bits, reverse=True)
                local = {}
                for lm in range(1, 15):
                    g = sum(order[q] for q in range(4) if lm & (8 >> q))
                    local[lm] = on_rows(g, key)
                a = np.min([_reduced_hat(local, sm, 15) for sm in (8, 4, 2, 1)], axis=0)
                c = np.min([local[15 ^ sm] for sm in (8, 4, 2, 1)], axis=0)
                scale = np.maximum(np.maximum(np.abs(a), np.abs(c)), np.abs(best)) + 1e-300
                tied = alive & (np.abs(a - c) <= tol.tie_tol * scale) \
                    & (np.abs(a - best) > tol.tie_tol * scale)
                for row in np.flatnonzero(tied):
                    four = [Circle(q + 1, float(cx[q]), float(cy[q]), float(r[row, q]))
                            for q in idx]
                    row_areas = {lm: float(v[row]) for lm, v in local.items()}
                    best[row] = special_case_n4(four, row_areas, tol)
            compact[m] = np.where(alive, np.maximum(best, 0.0), 0.0)

    wanted = compact.keys() if keep is None else [m for m in keep if m in compact]
    return {m: compact[m][group(key_of(m))[1]] for m in wanted}
