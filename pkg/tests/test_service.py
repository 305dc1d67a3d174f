"""HTTP interface tests against an in-process app instance."""

import io
import math

import numpy as np
import pytest
from fastapi.testclient import TestClient
from PIL import Image

from bubbledyn.render import DEFAULT_STYLE
from bubbledyn.service import app

client = TestClient(app)

SQRT3_9 = math.sqrt(3) / 9


def test_classify_golden_row():
    r = client.get("/api/classify", params={"n": 3, "re": 0, "im": -1})
    assert r.status_code == 200
    body = r.json()
    assert body["kind"] == "cantor_set"
    assert body["subcase"] == "case1"
    assert body["evidence"]["trap_active"] is False
    assert body["evidence"]["v0_result"]["outcome"] == "escaped"


def test_classify_case3b():
    r = client.get("/api/classify", params={"n": 3, "re": 0.16, "im": 0, "budget": 700})
    assert r.status_code == 200
    body = r.json()
    assert body["kind"] == "cantor_bubbles"
    assert body["subcase"] == "case3b"
    assert body["evidence"]["v1_result"]["steps"] == 2


def test_classify_zero_lambda_is_400():
    r = client.get("/api/classify", params={"n": 3, "re": 0, "im": 0})
    assert r.status_code == 400
    body = r.json()
    assert body["error"] == "bad_request"
    assert "nonzero" in body["detail"]


def test_classify_unparsable_is_422():
    r = client.get("/api/classify", params={"n": 3, "re": "abc", "im": 0})
    assert r.status_code == 422
    assert r.json()["error"] == "validation_error"


def test_classify_bad_degree_and_budget():
    assert client.get("/api/classify", params={"n": 1, "re": 0.1, "im": 0}).status_code == 400
    assert (
        client.get(
            "/api/classify", params={"n": 3, "re": 0.1, "im": 0, "budget": 50}
        ).status_code
        == 400
    )
    assert (
        client.get(
            "/api/classify", params={"n": 3, "re": 0.1, "im": 0, "budget": 300000}
        ).status_code
        == 400
    )


def test_classify_nonfinite_is_400():
    r = client.get("/api/classify", params={"n": 3, "re": "inf", "im": 0})
    assert r.status_code == 400


def test_orbit_v1_pole_example():
    r = client.get(
        "/api/orbit",
        params={"n": 3, "re": SQRT3_9, "im": 0, "seed": "v1", "max": 5},
    )
    assert r.status_code == 200
    body = r.json()
    assert body["outcome"] == "escaped"
    assert body["steps"] == 1
    assert len(body["trace"]) == 2
    assert body["trace"][0]["re"] == pytest.approx(3 * SQRT3_9, abs=1e-15)
    tail = body["trace"][1]
    assert tail is None or abs(tail["re"]) >= 1e12


def test_orbit_trap_examples():
    r0 = client.get("/api/orbit", params={"n": 3, "re": 0.16, "im": 0, "seed": "v0"})
    assert r0.json()["outcome"] == "trapped"
    assert r0.json()["steps"] == 0
    r1 = client.get("/api/orbit", params={"n": 3, "re": 0.16, "im": 0, "seed": "v1"})
    assert r1.json()["outcome"] == "trapped"
    assert r1.json()["steps"] == 2


def test_orbit_custom_seed():
    r = client.get(
        "/api/orbit",
        params={"n": 3, "re": 0.16, "im": 0, "seed": "custom", "zre": 50, "zim": 0},
    )
    assert r.status_code == 200
    assert r.json()["outcome"] == "escaped"
    assert r.json()["steps"] == 0
    assert r.json()["seed"] == {"re": 50.0, "im": 0.0}


def test_orbit_rejects_bad_requests():
    assert (
        client.get("/api/orbit", params={"n": 3, "re": 0.16, "im": 0, "seed": "v2"}).status_code
        == 400
    )
    assert (
        client.get(
            "/api/orbit", params={"n": 3, "re": 0.16, "im": 0, "seed": "custom"}
        ).status_code
        == 400
    )
    assert (
        client.get(
            "/api/orbit", params={"n": 3, "re": 0.16, "im": 0, "max": 0}
        ).status_code
        == 400
    )
    assert (
        client.get(
            "/api/orbit", params={"n": 3, "re": 0.16, "im": 0, "max": 20000}
        ).status_code
        == 400
    )


def test_orbit_trace_cap():
    r = client.get(
        "/api/orbit",
        params={"n": 3, "re": 0.5, "im": 0.8660254037844387, "seed": "v0", "max": 7},
    )
    body = r.json()
    assert body["outcome"] == "budget_exhausted"
    assert len(body["trace"]) == 7


def test_examples_payload_is_stable():
    r = client.get("/api/examples")
    assert r.status_code == 200
    rows = r.json()
    assert len(rows) == 5
    assert [row["kind"] for row in rows] == [
        "cantor_set",
        "connected",
        "connected",
        "connected",
        "cantor_bubbles",
    ]
    assert [row["subcase"] for row in rows] == [
        "case1",
        "case2",
        "case2",
        "case3a",
        "case3b",
    ]
    again = client.get("/api/examples").json()
    assert again == rows


def test_examples_rows_reclassify():
    for row in client.get("/api/examples").json():
        check = client.get(
            "/api/classify", params={"n": row["n"], "re": row["re"], "im": row["im"]}
        ).json()
        assert check["kind"] == row["kind"]
        assert check["subcase"] == row["subcase"]


def test_param_tile_roundtrip_and_etag():
    url = "/tiles/param/3/0/0/0.png"
    r1 = client.get(url, params={"budget": 40})
    assert r1.status_code == 200
    assert r1.headers["content-type"] == "image/png"
    assert "no-cache" in r1.headers.get("cache-control", "")
    img = Image.open(io.BytesIO(r1.content))
    assert img.size == (256, 256)
    assert img.mode == "RGBA"

    r2 = client.get(url, params={"budget": 40})
    assert r2.content == r1.content
    assert r2.headers["etag"] == r1.headers["etag"]

    r3 = client.get(url, params={"budget": 40}, headers={"If-None-Match": r1.headers["etag"]})
    assert r3.status_code == 304
    assert r3.content == b""


def test_julia_tile_carries_attractor_hue():
    r = client.get("/tiles/julia/3/2/1/1.png", params={"re": 0.2722, "im": 0})
    assert r.status_code == 200
    arr = np.asarray(Image.open(io.BytesIO(r.content)))
    hue = np.asarray(DEFAULT_STYLE.attractor_hues[1], np.float64)
    shades = {
        tuple((hue * s).astype(np.uint8).tolist()) for s in DEFAULT_STYLE.shade_lut
    }
    pixels = {tuple(p) for p in arr[..., :3].reshape(-1, 3).tolist()}
    assert pixels & shades


def test_tile_error_codes():
    assert client.get("/tiles/julia/3/0/0/0.png").status_code == 400  # re/im missing
    assert client.get("/tiles/param/3/25/0/0.png").status_code == 404
    assert client.get("/tiles/param/3/1/2/0.png").status_code == 404
    assert client.get("/tiles/moebius/3/0/0/0.png").status_code == 400
    assert client.get("/tiles/param/1/0/0/0.png").status_code == 400
    assert client.get("/tiles/param/3/0/0/0.png", params={"budget": 0}).status_code == 400
    assert client.get("/tiles/param/3/0/0/0.png", params={"budget": 5000}).status_code == 400
    body = client.get("/tiles/param/3/25/0/0.png").json()
    assert body["error"] == "not_found"


def test_tiles_at_max_zoom_boundary():
    r = client.get(
        "/tiles/param/3/24/0/0.png", params={"budget": 5}
    )
    assert r.status_code == 200


def test_cors_header_present():
    r = client.get(
        "/api/classify",
        params={"n": 3, "re": 0.16, "im": 0},
        headers={"Origin": "http://localhost:5173"},
    )
    assert r.headers.get("access-control-allow-origin") == "*"
