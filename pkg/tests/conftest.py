import math

import numpy as np
import pytest

from circle_trellis import Circle

SQRT3 = math.sqrt(3.0)

# fourth radius placing the four-circle hat extremes a and c in a tie while
# the intersection is bounded by four arcs of four distinct circles
# (root of a - c found with brentq on the square layout below)
TIE_R4 = 0.7949838523579899


def random_ensemble(rng, n, lo=0.1, hi=0.6):
    return [Circle(i + 1, *rng.uniform(0.0, 1.0, 2), rng.uniform(lo, hi)) for i in range(n)]


def common_point_ensemble(rng, n, spread=0.2, lo=0.3, hi=0.6):
    """Circles that all contain the origin."""
    out = []
    for i in range(n):
        r = rng.uniform(lo, hi)
        rho = rng.uniform(0.0, min(spread, 0.9 * r))
        th = rng.uniform(0.0, 2 * math.pi)
        out.append(Circle(i + 1, rho * math.cos(th), rho * math.sin(th), r))
    return out


def flower(n, offset=0.5, r=1.0):
    """Equal circles centred on a regular polygon around the origin: every
    pair of circumferences crosses and all circles share the origin."""
    return [Circle(k + 1, offset * math.cos(2 * math.pi * k / n),
                   offset * math.sin(2 * math.pi * k / n), r) for k in range(n)]


def contained_triple_config(r4=0.8):
    """Three unit circles on a unit triangle and a fourth circle at the
    centroid holding their common part and lying inside their union."""
    return [Circle(1, 0.0, 0.0, 1.0), Circle(2, 1.0, 0.0, 1.0),
            Circle(3, 0.5, SQRT3 / 2, 1.0), Circle(4, 0.5, SQRT3 / 6, r4)]


def four_arc_tie_config():
    return [Circle(1, 0.0, 0.0, 1.0), Circle(2, 0.4, 0.0, 1.0),
            Circle(3, 0.4, 0.4, 1.0), Circle(4, 0.0, 0.4, TIE_R4)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def record():
    """Store one pass/fail line for an acceptance criterion."""
    def _record(number: int, ok: bool, detail: str):
        _ACCEPTANCE[number] = (bool(ok), detail)
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
