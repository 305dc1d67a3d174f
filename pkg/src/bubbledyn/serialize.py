"""Plain-dict views of results, shared by the CLI and the HTTP service.

All keys are snake_case; complex numbers become {"re", "im"} pairs and the
point at infinity becomes JSON null, so clients never parse "inf" floats.
"""

from __future__ import annotations

from .classify import Classification
from .cycles import CycleInfo
from .family import MapParams, SpherePoint
from .orbits import OrbitResult


def point_json(point: SpherePoint | complex | None) -> dict | None:
    if point is None:
        return None
    if isinstance(point, SpherePoint):
        if point.is_infinity:
            return None
        point = point.value
    return {"re": point.real, "im": point.imag}


def orbit_json(result: OrbitResult, include_trace: bool = False) -> dict:
    out = {
        "outcome": result.outcome.value,
        "steps": result.steps,
        "final": point_json(result.final),
    }
    if include_trace:
        out["trace"] = [point_json(p) for p in result.trace]
    return out


def orbit_payload(params: MapParams, seed: SpherePoint, result: OrbitResult) -> dict:
    """Full orbit record as served by /api/orbit and printed by the CLI."""
    return {
        "n": params.n,
        "re": params.lam.real,
        "im": params.lam.imag,
        "seed": point_json(seed),
        **orbit_json(result, include_trace=True),
    }


def cycle_json(cycle: CycleInfo) -> dict:
    return {
        "period": cycle.period,
        "points": [point_json(p) for p in cycle.points],
        "multiplier": point_json(cycle.multiplier),
        "kind": cycle.kind.value,
    }


def classification_json(params: MapParams, result: Classification) -> dict:
    ev = result.evidence
    return {
        "n": params.n,
        "re": params.lam.real,
        "im": params.lam.imag,
        "kind": result.kind.value,
        "subcase": result.subcase.value,
        "budget_used": result.budget_used,
        "evidence": {
            "trap_active": ev.trap_active,
            "threshold": ev.threshold,
            "v0_result": orbit_json(ev.v0_result),
            "v1_result": orbit_json(ev.v1_result),
            "cycles": [cycle_json(c) for c in ev.cycles],
            "warnings": list(ev.warnings),
        },
    }
