"""Tiles, views, palettes, markers, determinism, and image encoding."""

import io
import math

import numpy as np
import pytest
from PIL import Image

from bubbledyn.cycles import CycleKind, attractor_inventory
from bubbledyn.family import MapParams
from bubbledyn.orbits import Outcome, escape_radius, iterate_orbit, trap_threshold
from bubbledyn.render import (
    DEFAULT_STYLE,
    FIELD_CONVERGED,
    FIELD_ESCAPED,
    Plane,
    TileSpec,
    Viewport,
    attractor_color,
    dynamical_field,
    encode_png,
    encode_ppm,
    parameter_field,
    pixel_of,
    render_dynamical_tile,
    render_parameter_tile,
    render_tile,
    render_view,
    tile_filename,
    tile_grid,
    view_grid,
    write_image,
)

EXP_IPI3 = complex(math.cos(math.pi / 3), math.sin(math.pi / 3))
SQRT6_9 = math.sqrt(6) / 9
RAMP_COLORS = {tuple(row) for row in DEFAULT_STYLE.escape_ramp.tolist()}


def test_tile_spec_validation():
    with pytest.raises(ValueError):
        TileSpec(Plane.PARAMETER, 3, -1, 0, 0)
    with pytest.raises(ValueError):
        TileSpec(Plane.PARAMETER, 3, 1, 2, 0)
    with pytest.raises(ValueError):
        TileSpec(Plane.DYNAMICAL, 3, 0, 0, 0)
    with pytest.raises(ValueError):
        TileSpec(Plane.PARAMETER, 3, 0, 0, 0, budget=0)


def test_tile_windows_partition_the_square():
    x0, y0, span = TileSpec(Plane.PARAMETER, 3, 0, 0, 0).window()
    assert (x0, y0, span) == (-2.0, 2.0, 4.0)
    x1, y1, span1 = TileSpec(Plane.PARAMETER, 3, 1, 1, 0).window()
    assert (x1, y1, span1) == (0.0, 2.0, 2.0)
    # doubling the zoom halves the span
    assert TileSpec(Plane.PARAMETER, 3, 5, 3, 7).window()[2] == 4.0 / 32


def test_pixel_grid_geometry():
    grid = tile_grid(TileSpec(Plane.PARAMETER, 3, 0, 0, 0))
    ps = 4.0 / 256
    assert grid.shape == (256, 256)
    assert grid[0, 0] == complex(-2 + 0.5 * ps, 2 - 0.5 * ps)
    assert grid[255, 255] == complex(-2 + 255.5 * ps, 2 - 255.5 * ps)


def test_param_pixel_green_where_v1_is_bounded():
    spec = TileSpec(Plane.PARAMETER, 3, 8, 138, 128, budget=500)
    img = render_parameter_tile(spec)
    r, c = pixel_of(tile_grid(spec), 0.16 + 0j)
    assert tuple(img[r, c, :3]) == DEFAULT_STYLE.green
    assert img[r, c, 3] == 255


def test_param_pixel_yellow_where_only_v0_is_bounded():
    ps = 4.0 / 256
    tx, ty = int((EXP_IPI3.real + 2) // ps), int((2 - EXP_IPI3.imag) // ps)
    spec = TileSpec(Plane.PARAMETER, 3, 8, tx, ty, budget=300)
    img = render_parameter_tile(spec)
    r, c = pixel_of(tile_grid(spec), EXP_IPI3)
    assert tuple(img[r, c, :3]) == DEFAULT_STYLE.yellow
    assert tuple(img[r, c, :3]) != DEFAULT_STYLE.green


def test_param_pixel_escape_shaded_when_both_escape():
    ps = 4.0 / 256
    spec = TileSpec(Plane.PARAMETER, 3, 8, int(2 // ps), int(3 // ps), budget=300)
    img = render_parameter_tile(spec)
    r, c = pixel_of(tile_grid(spec), -1j)
    assert tuple(img[r, c, :3]) in RAMP_COLORS


def test_param_origin_pixel_renders_as_escaped():
    field = parameter_field(np.array([[0j]]), 3, 50, 500)
    assert field.v0_outcome[0, 0] == FIELD_ESCAPED
    assert field.v0_steps[0, 0] == 0
    spec_style = DEFAULT_STYLE
    from bubbledyn.render import _colorize_param

    img = _colorize_param(field, spec_style)
    assert tuple(img[0, 0, :3]) == tuple(spec_style.escape_ramp[0])


def test_dyn_pixel_lands_on_superattracting_hue():
    params = MapParams(3, SQRT6_9)
    spec = TileSpec(Plane.DYNAMICAL, 3, 2, 2, 2, lam=params.lam, budget=500)
    inventory = attractor_inventory(params, 5000)
    super_idx = next(
        i for i, c in enumerate(inventory) if c.kind is CycleKind.SUPERATTRACTING
    )
    grid = tile_grid(spec)
    field = dynamical_field(grid, params, 500, inventory)
    r, c = pixel_of(grid, math.sqrt(6) / 3)
    assert field.outcome[r, c] == FIELD_CONVERGED
    assert field.point_owner[field.hit[r, c]] == super_idx
    img = render_dynamical_tile(spec, attractors=inventory)
    expected = attractor_color(DEFAULT_STYLE, super_idx, int(field.steps[r, c]))
    assert tuple(img[r, c, :3]) == expected


def test_dyn_origin_escapes_for_cantor_parameter():
    spec = TileSpec(Plane.DYNAMICAL, 3, 0, 0, 0, lam=-1j, budget=400)
    grid = tile_grid(spec)
    img = render_dynamical_tile(spec)
    r, c = pixel_of(grid, 0j)
    assert tuple(img[r, c, :3]) in RAMP_COLORS


def test_far_pixels_escape_at_step_zero():
    params = MapParams(3, 0.16)
    R = escape_radius(params)
    grid = np.array([[10 * R + 0j, -10j * R]])
    field = dynamical_field(grid, params, 100, [])
    assert (field.outcome == FIELD_ESCAPED).all()
    assert (field.steps == 0).all()


def test_view_matches_tile_bytes_param():
    spec = TileSpec(Plane.PARAMETER, 3, 1, 0, 0, budget=150)
    tile = render_parameter_tile(spec)
    vp = Viewport(complex(-1.0, 1.0), 1.0, 256, 256)
    for workers in (1, 8):
        view = render_view(vp, "param", 3, budget=150, workers=workers)
        assert encode_png(view) == encode_png(tile)


def test_view_matches_tile_bytes_julia():
    spec = TileSpec(Plane.DYNAMICAL, 3, 1, 1, 0, lam=SQRT6_9, budget=300)
    tile = render_dynamical_tile(spec)
    vp = Viewport(complex(1.0, 1.0), 1.0, 256, 256)
    for workers in (1, 8):
        view = render_view(vp, Plane.DYNAMICAL, 3, SQRT6_9, budget=300, workers=workers)
        assert encode_png(view) == encode_png(tile)


def test_worker_count_cannot_change_bytes():
    vp = Viewport(0.1 + 0.1j, 1.3, 192, 128)
    a = render_view(vp, "julia", 3, 0.3 + 0.4j, budget=200, workers=1)
    b = render_view(vp, "julia", 3, 0.3 + 0.4j, budget=200, workers=8)
    assert encode_png(a) == encode_png(b)
    c = render_view(vp, "param", 3, budget=100, workers=1)
    d = render_view(vp, "param", 3, budget=100, workers=8)
    assert encode_png(c) == encode_png(d)


def test_view_env_thread_override(monkeypatch):
    vp = Viewport(0j, 1.0, 96, 96)
    monkeypatch.setenv("BUBBLEDYN_THREADS", "1")
    a = render_view(vp, "param", 3, budget=80)
    monkeypatch.setenv("BUBBLEDYN_THREADS", "8")
    b = render_view(vp, "param", 3, budget=80)
    assert np.array_equal(a, b)


def test_markers_drawn_on_top():
    lam = SQRT6_9
    vp = Viewport(0j, 2.0, 512, 512)
    img = render_view(vp, "julia", 3, lam, budget=500, markers=True)
    ps = vp.pixel_size
    params = MapParams(3, lam)

    def px(z):
        return int((2 - z.imag) // ps), int((z.real + 2) // ps)

    red, blue = DEFAULT_STYLE.marker_red, DEFAULT_STYLE.marker_blue
    w = params.omega
    c1 = complex(2 * lam) ** (1 / 3)
    # critical points in red; c1 coincides with v1, whose blue dot draws last
    for z in (0j, w * c1, w * w * c1):
        r, c = px(z)
        assert tuple(img[r, c, :3]) == red, z
    for z in (params.v0, params.v1):
        r, c = px(z)
        assert tuple(img[r, c, :3]) == blue, z
    # dots are filled disks of radius 5
    r0, c0 = px(0j)
    assert tuple(img[r0 + 4, c0, :3]) == red
    assert tuple(img[r0 + 6, c0, :3]) != red


def test_sampled_rotation_symmetry_of_hitting_times():
    rng = np.random.default_rng(14142)
    for lam in (-1j, 0.9 + 0.2j):
        p = MapParams(3, lam)
        assert abs(lam) >= trap_threshold(3, 0.2)
        for _ in range(150):
            z = complex(rng.normal(), rng.normal())
            a = iterate_orbit(p, z, 400)
            b = iterate_orbit(p, p.omega * z, 400)
            assert (a.outcome, a.steps) == (b.outcome, b.steps)


def test_sampled_symmetry_with_trap_present():
    rng = np.random.default_rng(14143)
    p = MapParams(3, 0.16)
    from bubbledyn.orbits import trap_disk

    trap = trap_disk(p)
    for _ in range(150):
        z = complex(rng.normal(), rng.normal())
        # keep all rotations of the seed clear of the trap disk boundary
        if abs(abs(z) - 0.16) < 0.08:
            continue
        a = iterate_orbit(p, z, 400, trap)
        b = iterate_orbit(p, p.omega * z, 400, trap)
        assert (a.outcome, a.steps) == (b.outcome, b.steps)


def test_bounded_green_mostly_implies_bounded_yellow():
    # small version of the structural check: green pixels should be
    # v0-bounded too once v1 gets 10x the budget
    vp = Viewport(0j, 1.0, 128, 128)
    field = parameter_field(view_grid(vp), 3, 200, 2000)
    green = field.v1_outcome != FIELD_ESCAPED
    assert green.any()
    stray = green & (field.v0_outcome == FIELD_ESCAPED)
    assert stray.sum() <= 0.005 * green.sum()


def test_png_roundtrip():
    spec = TileSpec(Plane.DYNAMICAL, 3, 2, 1, 1, lam=0.2722 + 0j, budget=120)
    img = render_tile(spec)
    png = encode_png(img)
    decoded = Image.open(io.BytesIO(png))
    assert decoded.size == (256, 256)
    assert decoded.mode == "RGBA"
    back = np.asarray(decoded)
    assert np.array_equal(back, img)


def test_ppm_roundtrip(tmp_path):
    img = np.zeros((2, 3, 4), np.uint8)
    img[..., 3] = 255
    img[0, 0] = (10, 20, 30, 255)
    data = encode_ppm(img)
    assert data.startswith(b"P6\n3 2\n255\n")
    assert data[-18:-15] == bytes((10, 20, 30)) or data[11:14] == bytes((10, 20, 30))
    out = tmp_path / "x.ppm"
    write_image(img, out)
    assert out.read_bytes() == data
    out_png = tmp_path / "x.png"
    write_image(img, out_png)
    assert out_png.read_bytes() == encode_png(img)


def test_tile_filename_scheme():
    spec = TileSpec(Plane.DYNAMICAL, 3, 2, 1, 1, lam=0.25 + 0j)
    assert tile_filename(spec) == "julia_3_0.25_0_2_1_1.png"
    spec2 = TileSpec(Plane.PARAMETER, 4, 0, 0, 0)
    assert tile_filename(spec2) == "param_4_0_0_0_0_0.png"


def test_palette_tables_are_fixed():
    assert DEFAULT_STYLE.escape_ramp.shape == (256, 3)
    assert DEFAULT_STYLE.escape_ramp.dtype == np.uint8
    assert DEFAULT_STYLE.shade_lut.shape == (256,)
    assert len(DEFAULT_STYLE.attractor_hues) >= 4
    assert DEFAULT_STYLE.green == (0, 160, 60)
    assert DEFAULT_STYLE.yellow == (240, 220, 40)
    assert DEFAULT_STYLE.marker_red == (220, 30, 30)
    assert DEFAULT_STYLE.marker_blue == (30, 60, 220)
    # marker colors never collide with the escape ramp
    assert DEFAULT_STYLE.marker_red not in RAMP_COLORS
    assert DEFAULT_STYLE.marker_blue not in RAMP_COLORS
