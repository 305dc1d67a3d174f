"""HTTP facade: classification, orbit, examples, and tile endpoints.

Errors come back as JSON {"error", "detail"}: 400 for well-formed but
invalid parameters (lam = 0, n < 2, budgets out of range), 404 for tile
addresses outside the tile pyramid, 422 when a value cannot be parsed at
all.  Tiles carry strong content-hash ETags and a conditional GET with a
matching If-None-Match returns 304 with no body.
"""

from __future__ import annotations

import hashlib
import math
import threading
from collections import OrderedDict

from fastapi import FastAPI, HTTPException, Query, Request, Response
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel
from starlette.exceptions import HTTPException as StarletteHTTPException

from .classify import GOLDEN_EXAMPLES, classify
from .family import MapParams, SpherePoint
from .orbits import iterate_orbit, trap_disk
from .render import MAX_ZOOM, Plane, TileSpec, encode_png, render_tile
from .serialize import classification_json, orbit_payload

HOST = "127.0.0.1"
PORT = 8642

MIN_CLASSIFY_BUDGET = 100
MAX_CLASSIFY_BUDGET = 200_000
MAX_TILE_BUDGET = 2_000
ORBIT_BUDGET = 5_000
MAX_TRACE_POINTS = 10_000
TILE_CACHE_CAPACITY = 512


class PointModel(BaseModel):
    re: float
    im: float


class OrbitResultModel(BaseModel):
    outcome: str
    steps: int
    final: PointModel | None


class CycleModel(BaseModel):
    period: int
    points: list[PointModel]
    multiplier: PointModel
    kind: str


class EvidenceModel(BaseModel):
    trap_active: bool
    threshold: float
    v0_result: OrbitResultModel
    v1_result: OrbitResultModel
    cycles: list[CycleModel]
    warnings: list[str]


class ClassifyResponse(BaseModel):
    n: int
    re: float
    im: float
    kind: str
    subcase: str
    budget_used: int
    evidence: EvidenceModel


class OrbitResponse(BaseModel):
    n: int
    re: float
    im: float
    seed: PointModel | None
    outcome: str
    steps: int
    final: PointModel | None
    trace: list[PointModel | None]


class ExampleRow(BaseModel):
    name: str
    n: int
    re: float
    im: float
    kind: str
    subcase: str


class TileCache:
    """LRU byte cache for encoded tiles.

    put() keeps whatever bytes arrived first for a key, so concurrent
    renders of the same URL can never swap its content.
    """

    def __init__(self, capacity: int = TILE_CACHE_CAPACITY) -> None:
        self.capacity = capacity
        self._lock = threading.Lock()
        self._entries: "OrderedDict[str, bytes]" = OrderedDict()

    def get(self, key: str) -> bytes | None:
        with self._lock:
            data = self._entries.get(key)
            if data is not None:
                self._entries.move_to_end(key)
            return data

    def put(self, key: str, data: bytes) -> bytes:
        with self._lock:
            existing = self._entries.get(key)
            if existing is not None:
                self._entries.move_to_end(key)
                return existing
            self._entries[key] = data
            while len(self._entries) > self.capacity:
                self._entries.popitem(last=False)
            return data


_ERROR_NAMES = {400: "bad_request", 404: "not_found", 422: "validation_error"}


def _params_or_400(n: int, re_part: float, im_part: float) -> MapParams:
    if not (math.isfinite(re_part) and math.isfinite(im_part)):
        raise HTTPException(status_code=400, detail="re and im must be finite")
    try:
        return MapParams(n, complex(re_part, im_part))
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from None


def create_app() -> FastAPI:
    app = FastAPI(title="bubbledyn", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    cache = TileCache()

    @app.exception_handler(StarletteHTTPException)
    async def _http_error(request: Request, exc: StarletteHTTPException):
        return JSONResponse(
            {"error": _ERROR_NAMES.get(exc.status_code, "error"), "detail": exc.detail},
            status_code=exc.status_code,
            headers=getattr(exc, "headers", None),
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            {"error": "validation_error", "detail": jsonable_encoder(exc.errors())},
            status_code=422,
        )

    @app.get("/api/classify", response_model=ClassifyResponse)
    def api_classify(n: int, re: float, im: float, budget: int = 5000):
        if not MIN_CLASSIFY_BUDGET <= budget <= MAX_CLASSIFY_BUDGET:
            raise HTTPException(
                status_code=400,
                detail=f"budget must lie in [{MIN_CLASSIFY_BUDGET}, {MAX_CLASSIFY_BUDGET}]",
            )
        params = _params_or_400(n, re, im)
        return ClassifyResponse(**classification_json(params, classify(params, budget)))

    @app.get("/api/orbit", response_model=OrbitResponse)
    def api_orbit(
        n: int,
        re: float,
        im: float,
        seed: str = "v0",
        zre: float | None = None,
        zim: float | None = None,
        max_points: int = Query(200, alias="max"),
    ):
        params = _params_or_400(n, re, im)
        if seed == "v0":
            seed_z = params.v0
        elif seed == "v1":
            seed_z = params.v1
        elif seed == "custom":
            if zre is None or zim is None:
                raise HTTPException(status_code=400, detail="seed=custom needs zre and zim")
            if not (math.isfinite(zre) and math.isfinite(zim)):
                raise HTTPException(status_code=400, detail="zre and zim must be finite")
            seed_z = complex(zre, zim)
        else:
            raise HTTPException(status_code=400, detail="seed must be v0, v1, or custom")
        if not 1 <= max_points <= MAX_TRACE_POINTS:
            raise HTTPException(
                status_code=400, detail=f"max must lie in [1, {MAX_TRACE_POINTS}]"
            )
        trap = trap_disk(params) if params.n >= 3 else None
        result = iterate_orbit(params, seed_z, ORBIT_BUDGET, trap, trace_len=max_points)
        return OrbitResponse(**orbit_payload(params, SpherePoint.of(seed_z), result))

    @app.get("/api/examples", response_model=list[ExampleRow])
    def api_examples():
        return [
            ExampleRow(
                name=ex.name,
                n=ex.n,
                re=ex.lam.real,
                im=ex.lam.imag,
                kind=ex.kind.value,
                subcase=ex.subcase.value,
            )
            for ex in GOLDEN_EXAMPLES
        ]

    @app.get("/tiles/{plane}/{n}/{zoom}/{tx}/{ty}.png")
    def tiles(
        plane: str,
        n: int,
        zoom: int,
        tx: int,
        ty: int,
        request: Request,
        re: float | None = None,
        im: float | None = None,
        budget: int = 500,
    ):
        if plane not in (Plane.PARAMETER.value, Plane.DYNAMICAL.value):
            raise HTTPException(status_code=400, detail="plane must be param or julia")
        if n < 2:
            raise HTTPException(status_code=400, detail="n must be >= 2")
        if not 0 <= zoom <= MAX_ZOOM:
            raise HTTPException(status_code=404, detail="zoom outside the tile pyramid")
        tiles_per_side = 1 << zoom
        if not (0 <= tx < tiles_per_side and 0 <= ty < tiles_per_side):
            raise HTTPException(status_code=404, detail="tile coordinates outside range")
        if not 1 <= budget <= MAX_TILE_BUDGET:
            raise HTTPException(
                status_code=400, detail=f"budget must lie in [1, {MAX_TILE_BUDGET}]"
            )
        lam: complex | None = None
        if plane == Plane.DYNAMICAL.value:
            if re is None or im is None:
                raise HTTPException(status_code=400, detail="julia tiles need re and im")
            lam = _params_or_400(n, re, im).lam

        key = f"{plane}/{n}/{zoom}/{tx}/{ty}?re={re!r}&im={im!r}&budget={budget}"
        png = cache.get(key)
        if png is None:
            spec = TileSpec(Plane(plane), n, zoom, tx, ty, lam, budget)
            png = cache.put(key, encode_png(render_tile(spec)))
        etag = '"' + hashlib.sha256(png).hexdigest() + '"'
        if etag in request.headers.get("if-none-match", ""):
            return Response(status_code=304, headers={"ETag": etag})
        return Response(
            png,
            media_type="image/png",
            headers={"ETag": etag, "Cache-Control": "no-cache"},
        )

    return app


app = create_app()
