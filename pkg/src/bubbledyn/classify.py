"""Julia-set topology verdicts from critical orbit behavior.

For n >= 3 the fate of the two finite critical values decides the topology
of the Julia set:

  1. v0 = -lam escapes            -> Cantor set            (case 1)
  2. v1 = 3*lam escapes, v0 not   -> connected             (case 2)
  3a. v0 trapped, v1 attracted to a cycle away from the
      trap disk                   -> connected             (case 3a)
  3b. v0 and v1 both trapped      -> Cantor set of circles
                                     ("Cantor bubbles")    (case 3b)

Case 3 only arises when |lam| is below the kappa = 1/5 trap threshold, where
the attracting fixed point near -lam is guaranteed and v0 starts inside the
trap disk.  Everything outside the tree's reach is reported Unresolved, never
guessed.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import IO, NamedTuple

from .cycles import CycleInfo, find_cycle
from .family import MapParams
from .orbits import (
    DEFAULT_CLASSIFY_BUDGET,
    TRAP_KAPPA,
    Disk,
    Outcome,
    OrbitResult,
    iterate_orbit,
    trap_disk,
    trap_threshold,
)

# a cycle must clear the closed trap disk by this margin to count as a
# second attractor
_CYCLE_CLEARANCE = 1e-6


class Kind(str, enum.Enum):
    CANTOR_SET = "cantor_set"
    CONNECTED = "connected"
    CANTOR_BUBBLES = "cantor_bubbles"
    UNRESOLVED = "unresolved"


class Subcase(str, enum.Enum):
    CASE1 = "case1"
    CASE2 = "case2"
    CASE3A = "case3a"
    CASE3B = "case3b"
    NONE = "none"


@dataclass(frozen=True)
class Evidence:
    """The raw facts a verdict was computed from."""

    trap_active: bool
    threshold: float
    v0_result: OrbitResult
    v1_result: OrbitResult
    cycles: tuple[CycleInfo, ...] = ()
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class Classification:
    kind: Kind
    subcase: Subcase
    evidence: Evidence
    budget_used: int


def _cycle_clears_trap(cycle: CycleInfo, trap: Disk) -> bool:
    return all(abs(p - trap.center) >= trap.radius + _CYCLE_CLEARANCE for p in cycle.points)


def classify(params: MapParams, budget: int = DEFAULT_CLASSIFY_BUDGET) -> Classification:
    """Run the decision tree for one parameter.

    Verdicts are monotone in the budget: once the tree resolves a parameter,
    a larger budget returns the same kind and subcase, because each branch is
    decided by a certificate that can only fire earlier, never differently.
    Budgets below 100 are accepted but leave little room for orbit tails;
    intended use is budget >= 100.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    n = params.n
    warnings: list[str] = []
    if n >= 3:
        threshold = trap_threshold(n, TRAP_KAPPA)
        trap = trap_disk(params, TRAP_KAPPA)
    else:
        # no proved trap certificate exists at degree 2
        threshold = 0.0
        trap = None
        warnings.append(
            "n=2 is experimental: the trap-disk certificate only exists for "
            "n >= 3, so verdicts rest on escape checks alone"
        )
    trap_active = trap is not None

    v0_result = iterate_orbit(params, params.v0, budget, trap)
    v1_result = iterate_orbit(params, params.v1, budget, trap)
    budget_used = max(v0_result.steps, v1_result.steps)
    cycles: tuple[CycleInfo, ...] = ()

    if not trap_active:
        if v0_result.outcome is Outcome.ESCAPED:
            kind, subcase = Kind.CANTOR_SET, Subcase.CASE1
            if n >= 3 and v1_result.outcome is not Outcome.ESCAPED:
                warnings.append(
                    "v0 escaped but v1 did not within the budget; above the "
                    "trap threshold v1 escape is guaranteed, so the budget "
                    "is too small for this parameter"
                )
        elif v1_result.outcome is Outcome.ESCAPED:
            kind, subcase = Kind.CONNECTED, Subcase.CASE2
        else:
            kind, subcase = Kind.UNRESOLVED, Subcase.NONE
            if n >= 3:
                warnings.append(
                    "neither critical value escaped within the budget, yet "
                    "|lam| is at or above the trap threshold where v1 must "
                    "eventually escape; raise the budget"
                )
    else:
        # trap present: v0 = -lam sits at the trap center, so it is trapped
        # at step 0 and only v1 remains to be decided
        if v1_result.outcome is Outcome.ESCAPED:
            kind, subcase = Kind.CONNECTED, Subcase.CASE2
        elif v1_result.outcome is Outcome.TRAPPED:
            kind, subcase = Kind.CANTOR_BUBBLES, Subcase.CASE3B
        else:
            cycle = find_cycle(params, params.v1, budget)
            budget_used = budget
            if cycle is None:
                kind, subcase = Kind.UNRESOLVED, Subcase.NONE
                warnings.append(
                    "v1 neither escaped nor entered the trap disk, and no "
                    "cycle of period <= 64 emerged within the budget"
                )
            elif _cycle_clears_trap(cycle, trap):
                kind, subcase = Kind.CONNECTED, Subcase.CASE3A
                cycles = (cycle,)
            else:
                kind, subcase = Kind.UNRESOLVED, Subcase.NONE
                cycles = (cycle,)
                warnings.append(
                    "the cycle attracting v1 touches the trap disk, so it "
                    "cannot be certified as a second attractor"
                )

    evidence = Evidence(
        trap_active=trap_active,
        threshold=threshold,
        v0_result=v0_result,
        v1_result=v1_result,
        cycles=cycles,
        warnings=tuple(warnings),
    )
    return Classification(kind, subcase, evidence, budget_used)


class GoldenExample(NamedTuple):
    name: str
    n: int
    lam: complex
    kind: Kind
    subcase: Subcase


# the five reference parameters used by `verify-paper` and /api/examples
GOLDEN_EXAMPLES: tuple[GoldenExample, ...] = (
    GoldenExample("lambda = -i", 3, complex(0.0, -1.0), Kind.CANTOR_SET, Subcase.CASE1),
    GoldenExample(
        "lambda = exp(i*pi/3)",
        3,
        complex(math.cos(math.pi / 3), math.sin(math.pi / 3)),
        Kind.CONNECTED,
        Subcase.CASE2,
    ),
    GoldenExample("lambda = sqrt(3)/9", 3, complex(math.sqrt(3) / 9, 0.0), Kind.CONNECTED, Subcase.CASE2),
    GoldenExample("lambda = sqrt(6)/9", 3, complex(math.sqrt(6) / 9, 0.0), Kind.CONNECTED, Subcase.CASE3A),
    GoldenExample("lambda = 4/25", 3, complex(0.16, 0.0), Kind.CANTOR_BUBBLES, Subcase.CASE3B),
)


def worker_count(explicit: int | None = None) -> int:
    """Resolve a thread count: explicit arg, else BUBBLEDYN_THREADS, else auto.

    Zero (or an unparsable value) means auto, which caps at 8 threads.
    """
    if explicit is not None and explicit > 0:
        return explicit
    raw = os.environ.get("BUBBLEDYN_THREADS", "")
    try:
        env = int(raw)
    except ValueError:
        env = 0
    if env > 0:
        return env
    return min(os.cpu_count() or 1, 8)


@dataclass(frozen=True)
class GridCell:
    """One grid cell; result is None for the skipped cell at lam = 0."""

    re: float
    im: float
    result: Classification | None


def classify_grid(
    n: int,
    window: tuple[float, float, float, float],
    resolution: tuple[int, int],
    budget: int = DEFAULT_CLASSIFY_BUDGET,
    workers: int | None = None,
) -> list[GridCell]:
    """Classify a rectangle of the parameter plane at cell centers.

    window is (x_min, y_min, x_max, y_max); cells are returned in row-major
    order starting at the top-left. lam = 0 cannot be classified and yields a
    skipped cell. Work is farmed out to threads but assembled in grid order,
    so the output is deterministic regardless of the worker count.
    """
    x_min, y_min, x_max, y_max = window
    nx, ny = resolution
    if nx < 1 or ny < 1:
        raise ValueError("resolution must be at least 1x1")
    if not (x_max > x_min and y_max > y_min):
        raise ValueError("window must have positive extent")
    dx = (x_max - x_min) / nx
    dy = (y_max - y_min) / ny
    coords = [
        (x_min + (i + 0.5) * dx, y_max - (j + 0.5) * dy)
        for j in range(ny)
        for i in range(nx)
    ]

    def work(xy: tuple[float, float]) -> GridCell:
        x, y = xy
        if complex(x, y) == 0:
            return GridCell(x, y, None)
        return GridCell(x, y, classify(MapParams(n, complex(x, y)), budget))

    with ThreadPoolExecutor(max_workers=worker_count(workers)) as pool:
        return list(pool.map(work, coords))


CSV_HEADER = "re,im,kind,subcase,v0_outcome,v0_steps,v1_outcome,v1_steps,trap_active"


def write_grid_csv(cells: list[GridCell], sink: str | Path | IO[str]) -> None:
    """Write grid results as CSV: UTF-8, LF line endings, %.17g floats.

    Skipped cells keep their coordinates, report kind "skipped", and leave
    the orbit columns empty.
    """
    lines = [CSV_HEADER]
    for cell in cells:
        re_s, im_s = f"{cell.re:.17g}", f"{cell.im:.17g}"
        if cell.result is None:
            lines.append(f"{re_s},{im_s},skipped,none,,,,,false")
            continue
        ev = cell.result.evidence
        lines.append(
            ",".join(
                (
                    re_s,
                    im_s,
                    cell.result.kind.value,
                    cell.result.subcase.value,
                    ev.v0_result.outcome.value,
                    str(ev.v0_result.steps),
                    ev.v1_result.outcome.value,
                    str(ev.v1_result.steps),
                    "true" if ev.trap_active else "false",
                )
            )
        )
    data = "\n".join(lines) + "\n"
    if hasattr(sink, "write"):
        sink.write(data)
    else:
        with open(sink, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(data)
