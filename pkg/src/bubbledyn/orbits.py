"""Trap disks, escape radii, and the finite-budget orbit engine.

Two certificates drive every verdict in this package.

For degree n >= 3 and any kappa in (0, 1), the closed disk
D(-lam, kappa*|lam|) maps strictly inside itself whenever

    |lam| < (1/(1+kappa)) * (2*kappa / ((1+kappa)*(sqrt(kappa^2+4*kappa)+kappa)))^(1/(n-1)),

so an orbit that ever enters the disk is captured by the attracting fixed
point near -lam.  In the opposite regime |lam| >= threshold (at kappa = 1/5)
the circle |z| = 3*|lam| maps strictly outside itself, which forces the free
critical value v1 = 3*lam to escape.

Independently of lam's size, |f(z)| >= 2*|z| holds for

    |z| >= R = max(4^(1/(n-1)), (2*|lam|)^(1/n), 3*|lam|),

so crossing R certifies escape to infinity.  Orbits are run for a fixed
budget of map applications and stopped at the first certificate that fires.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .family import INFINITY, MapParams, SpherePoint, _eval_raw

DEFAULT_CLASSIFY_BUDGET = 5000
DEFAULT_RENDER_BUDGET = 500

# the classifier always works at kappa = 1/5
TRAP_KAPPA = 0.2


class Outcome(str, enum.Enum):
    ESCAPED = "escaped"
    TRAPPED = "trapped"
    CYCLE_CONVERGED = "cycle_converged"
    BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class Disk:
    """A closed disk in the plane; kappa is recorded when it is a trap disk."""

    center: complex
    radius: float
    kappa: float | None = None

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ValueError("disk radius must be positive")

    def contains(self, z: complex) -> bool:
        return abs(z - self.center) <= self.radius


@dataclass(frozen=True)
class OrbitResult:
    """What happened to one orbit within its budget.

    steps counts map applications up to the deciding test; the seed itself is
    tested at step 0.  final is the point at which the run stopped.  trace
    holds the first few orbit points when a trace was requested.
    """

    outcome: Outcome
    steps: int
    final: SpherePoint
    trace: tuple[SpherePoint, ...] = ()


def trap_threshold(n: int, kappa: float) -> float:
    """Largest |lam| below which D(-lam, kappa*|lam|) is self-trapping.

    Strictly increasing in n for fixed kappa.  Defined for n >= 2, but the
    self-trapping guarantee it encodes is only proved for n >= 3.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 0 < kappa < 1:
        raise ValueError("kappa must lie in (0, 1)")
    inner = 2 * kappa / ((1 + kappa) * (math.sqrt(kappa * kappa + 4 * kappa) + kappa))
    return (1.0 / (1 + kappa)) * inner ** (1.0 / (n - 1))


def trap_disk(params: MapParams, kappa: float = TRAP_KAPPA) -> Disk | None:
    """The trap disk D(-lam, kappa*|lam|), or None when |lam| is too large."""
    if abs(params.lam) < trap_threshold(params.n, kappa):
        return Disk(-params.lam, kappa * abs(params.lam), kappa)
    return None


def escape_radius(params: MapParams) -> float:
    """Radius beyond which one application at least doubles the modulus."""
    al = abs(params.lam)
    return max(4.0 ** (1.0 / (params.n - 1)), (2.0 * al) ** (1.0 / params.n), 3.0 * al)


def iterate_orbit(
    params: MapParams,
    seed: SpherePoint | complex,
    budget: int = DEFAULT_CLASSIFY_BUDGET,
    trap: Disk | None = None,
    trace_len: int = 0,
) -> OrbitResult:
    """Run one orbit until escape, trap entry, or budget exhaustion.

    The seed counts as step 0, so a seed already past the escape radius (or
    already inside the trap disk) is decided without applying the map.  The
    budget bounds the number of map applications.  Same inputs always give
    the same result; there is no randomness anywhere in the engine.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    radius = escape_radius(params)
    point = seed if isinstance(seed, SpherePoint) else SpherePoint.of(seed)
    z = None if point.is_infinity else point.value
    n, lam = params.n, params.lam
    trap_center = trap.center if trap is not None else 0j
    trap_radius = trap.radius if trap is not None else -1.0

    trace: list[SpherePoint] = []
    for k in range(budget + 1):
        if trace_len and len(trace) < trace_len:
            trace.append(INFINITY if z is None else SpherePoint(z))
        if z is None or abs(z) >= radius:
            final = INFINITY if z is None else SpherePoint(z)
            return OrbitResult(Outcome.ESCAPED, k, final, tuple(trace))
        if abs(z - trap_center) <= trap_radius:
            return OrbitResult(Outcome.TRAPPED, k, SpherePoint(z), tuple(trace))
        if k == budget:
            break
        z = _eval_raw(n, lam, z)
    # z is finite here: an infinite or escaped value would have been caught
    # by the step-k test before the loop ran out
    return OrbitResult(Outcome.BUDGET_EXHAUSTED, budget, SpherePoint(z), tuple(trace))
