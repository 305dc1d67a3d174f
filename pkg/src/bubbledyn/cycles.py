"""Attracting-cycle detection from critical orbit tails.

An attracting cycle must absorb a critical orbit, so running the two finite
critical values v0 and v1 forward and inspecting the tail of each orbit finds
every attractor the map has.  Detection is purely numerical: burn in, keep a
short ring of tail points, and look for the smallest period at which the tail
repeats to within a relative epsilon.
"""

from __future__ import annotations

import cmath
import enum
from collections import deque
from dataclasses import dataclass

from .family import MapParams, PoleError, _eval_raw, derivative
from .orbits import DEFAULT_CLASSIFY_BUDGET, escape_radius

MAX_PERIOD = 64
DEFAULT_CYCLE_EPS = 1e-10

# tail ring size; must hold at least two full windows of the largest period
_RING = 192

_SUPER_TOL = 1e-8
_INDET_TOL = 1e-6


class CycleKind(str, enum.Enum):
    SUPERATTRACTING = "superattracting"
    ATTRACTING = "attracting"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class CycleInfo:
    """A detected cycle: points in orbit order, starting at the point of
    smallest modulus (ties broken by argument)."""

    points: tuple[complex, ...]
    period: int
    multiplier: complex
    kind: CycleKind


def find_cycle(
    params: MapParams,
    seed: complex,
    budget: int = DEFAULT_CLASSIFY_BUDGET,
    eps: float = DEFAULT_CYCLE_EPS,
) -> CycleInfo | None:
    """Detect the attracting cycle the seed's orbit converges to, if any.

    Returns None when the orbit escapes, fails to settle within the budget,
    or fails verification.  Half the budget is burned before any comparisons;
    the remaining iterates feed a ring buffer scanned for periods 1..64 in
    ascending order, so the reported period is minimal.  Points match when
    |z' - z| < eps*(1 + |z|), and a candidate period must hold across one
    full window at the end of the tail.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if not 0 < eps <= 1e-6:
        raise ValueError("eps must lie in (0, 1e-6]")
    n, lam = params.n, params.lam
    radius = escape_radius(params)

    z = complex(seed)
    if abs(z) >= radius:
        return None
    for _ in range(budget // 2):
        z = _eval_raw(n, lam, z)
        if z is None or abs(z) >= radius:
            return None

    ring: deque[complex] = deque([z], maxlen=_RING)
    for _ in range(budget - budget // 2):
        z = _eval_raw(n, lam, z)
        if z is None or abs(z) >= radius:
            return None
        ring.append(z)

    tail = list(ring)
    m = len(tail)
    for period in range(1, MAX_PERIOD + 1):
        if 2 * period > m:
            break
        start = m - 2 * period
        if all(
            abs(tail[j + period] - tail[j]) < eps * (1 + abs(tail[j]))
            for j in range(start, start + period)
        ):
            return _settle(params, tail[-1], period, radius)
    return None


def _settle(params: MapParams, z: complex, period: int, radius: float) -> CycleInfo | None:
    """Refine a detected cycle, canonicalize it, and verify it closes up."""
    n, lam = params.n, params.lam
    # a few extra periods of iteration sharpen geometric convergence
    for _ in range(8 * period):
        z = _eval_raw(n, lam, z)
        if z is None or abs(z) >= radius:
            return None

    points: list[complex] = []
    for _ in range(period):
        points.append(z)
        z = _eval_raw(n, lam, z)
        if z is None:
            return None
    # consecutive points map to each other by construction; only the closure
    # back to the start needs checking
    if abs(z - points[0]) > 1e-8 * (1 + abs(points[0])):
        return None

    anchor = min(range(period), key=lambda i: (abs(points[i]), cmath.phase(points[i])))
    points = points[anchor:] + points[:anchor]

    multiplier = 1 + 0j
    try:
        for w in points:
            multiplier *= derivative(params, w)
    except PoleError:
        return None

    am = abs(multiplier)
    if am < _SUPER_TOL:
        kind = CycleKind.SUPERATTRACTING
    elif am < 1 - _INDET_TOL:
        kind = CycleKind.ATTRACTING
    else:
        kind = CycleKind.INDETERMINATE
    return CycleInfo(tuple(points), period, multiplier, kind)


def _same_cycle(a: CycleInfo, b: CycleInfo, tol: float = 1e-6) -> bool:
    if a.period != b.period:
        return False
    return all(min(abs(p - q) for q in b.points) <= tol for p in a.points)


def attractor_inventory(params: MapParams, budget: int = DEFAULT_CLASSIFY_BUDGET) -> list[CycleInfo]:
    """Every attracting cycle reachable from a finite critical value.

    Runs find_cycle from v0 and then v1 and drops a duplicate whose point set
    coincides with an earlier entry within 1e-6.  The list is empty when both
    critical orbits escape; it never holds more than two cycles because the
    map has only these two finite critical orbits.
    """
    found: list[CycleInfo] = []
    for seed in (params.v0, params.v1):
        cycle = find_cycle(params, seed, budget)
        if cycle is None:
            continue
        if any(_same_cycle(cycle, other) for other in found):
            continue
        found.append(cycle)
    return found
