"""Deterministic rasterization of the parameter and dynamical planes.

Tiles follow the usual slippy-map scheme on the fixed square [-2, 2]^2:
zoom z splits the square into 2^z x 2^z tiles of 256x256 pixels, tile (tx,
ty) counting from the top-left.  Arbitrary rectangular views reuse the same
per-pixel arithmetic, so a view whose window coincides with a tile is
byte-identical to that tile, and rendering is deterministic for any worker
count: every pixel is independent and assembly order is fixed.

Pixel rules, parameter plane: per-pixel lam runs both critical values; green
where v1 stays bounded, yellow where only v0 does, otherwise a smooth
blue-ramp escape shading of v0's orbit.  Dynamical plane: escape shading for
escapers, attractor hue shaded by hitting time for orbits that converge or
fall in the trap disk, black for pixels still undecided at the budget.
"""

from __future__ import annotations

import enum
import math
import struct
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .classify import worker_count
from .cycles import CycleInfo, attractor_inventory
from .family import MapParams, critical_points
from .orbits import DEFAULT_RENDER_BUDGET, TRAP_KAPPA, escape_radius, trap_disk, trap_threshold

TILE_SIZE = 256
BASE_HALF_WIDTH = 2.0
MAX_ZOOM = 24
MARKER_RADIUS = 5

# outcome codes used by the field arrays
FIELD_BUDGET = 0
FIELD_ESCAPED = 1
FIELD_TRAPPED = 2
FIELD_CONVERGED = 3

# rows per work unit when a view is split across threads
_BAND_ROWS = 32

# escape values are clipped into [R, 1e300] before the double log
_SHADE_CLIP = 1e300


class Plane(str, enum.Enum):
    PARAMETER = "param"
    DYNAMICAL = "julia"


def _as_plane(plane: "Plane | str") -> Plane:
    return plane if isinstance(plane, Plane) else Plane(plane)


@dataclass(frozen=True)
class Viewport:
    """A rectangular window: center, half-width, and pixel dimensions.

    The vertical extent follows from the aspect ratio; pixels are square.
    """

    center: complex
    half_width: float
    pixel_width: int
    pixel_height: int

    def __post_init__(self) -> None:
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")
        if self.pixel_width < 1 or self.pixel_height < 1:
            raise ValueError("pixel dimensions must be >= 1")
        object.__setattr__(self, "center", complex(self.center))

    @property
    def pixel_size(self) -> float:
        return 2.0 * self.half_width / self.pixel_width

    @property
    def half_height(self) -> float:
        return self.half_width * self.pixel_height / self.pixel_width


@dataclass(frozen=True)
class TileSpec:
    """Address of one 256x256 tile plus the per-pixel orbit budget.

    For the parameter plane lam is ignored; for the dynamical plane it is
    required.  The stated budget applies to v0 runs; parameter tiles give v1
    ten times as much so bounded-v1 regions are not starved.
    """

    plane: Plane
    n: int
    zoom: int
    tx: int
    ty: int
    lam: complex | None = None
    budget: int = DEFAULT_RENDER_BUDGET

    def __post_init__(self) -> None:
        object.__setattr__(self, "plane", _as_plane(self.plane))
        if self.zoom < 0:
            raise ValueError("zoom must be >= 0")
        tiles = 1 << self.zoom
        if not (0 <= self.tx < tiles and 0 <= self.ty < tiles):
            raise ValueError("tile coordinates outside the tile range for this zoom")
        if self.plane is Plane.DYNAMICAL and self.lam is None:
            raise ValueError("dynamical tiles need lam")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")

    def window(self) -> tuple[float, float, float]:
        """(x_left, y_top, span) of this tile in plane coordinates."""
        span = 2.0 * BASE_HALF_WIDTH / (1 << self.zoom)
        return (-BASE_HALF_WIDTH + self.tx * span, BASE_HALF_WIDTH - self.ty * span, span)


@dataclass(frozen=True)
class RenderStyle:
    """Fixed color tables; the defaults are the only palette tests rely on."""

    green: tuple[int, int, int]
    yellow: tuple[int, int, int]
    escape_ramp: np.ndarray          # (256, 3) uint8
    attractor_hues: tuple[tuple[int, int, int], ...]
    shade_lut: np.ndarray            # (256,) float64 brightness factors
    marker_red: tuple[int, int, int]
    marker_blue: tuple[int, int, int]


def _build_escape_ramp() -> np.ndarray:
    anchors = np.array(
        [
            [4, 8, 40],
            [18, 36, 110],
            [38, 74, 168],
            [80, 130, 210],
            [150, 190, 235],
            [224, 240, 252],
        ],
        dtype=np.float64,
    )
    t = np.linspace(0.0, 1.0, 256)
    pos = t * (len(anchors) - 1)
    left = np.minimum(pos.astype(np.int64), len(anchors) - 2)
    frac = (pos - left)[:, None]
    ramp = anchors[left] * (1.0 - frac) + anchors[left + 1] * frac
    return (ramp + 0.5).astype(np.uint8)


def _build_shade_lut() -> np.ndarray:
    s = np.arange(256, dtype=np.float64)
    return 0.40 + 0.60 * np.exp(-s / 40.0)


DEFAULT_STYLE = RenderStyle(
    green=(0, 160, 60),
    yellow=(240, 220, 40),
    escape_ramp=_build_escape_ramp(),
    attractor_hues=(
        (235, 120, 40),
        (155, 85, 225),
        (45, 180, 190),
        (235, 85, 145),
        (120, 205, 85),
        (250, 205, 95),
    ),
    shade_lut=_build_shade_lut(),
    marker_red=(220, 30, 30),
    marker_blue=(30, 60, 220),
)


def attractor_color(style: RenderStyle, hue_index: int, steps: int) -> tuple[int, int, int]:
    """The exact RGB the renderer writes for one attractor hit; exported so
    tests compare against the real arithmetic instead of re-deriving it."""
    hue = np.asarray(style.attractor_hues[hue_index % len(style.attractor_hues)], np.float64)
    rgb = (hue * style.shade_lut[min(int(steps), 255)]).astype(np.uint8)
    return (int(rgb[0]), int(rgb[1]), int(rgb[2]))


# ---------------------------------------------------------------------------
# pixel grids


def tile_grid(spec: TileSpec) -> np.ndarray:
    x_left, y_top, span = spec.window()
    return _grid(x_left, y_top, span / TILE_SIZE, TILE_SIZE, TILE_SIZE)


def view_grid(viewport: Viewport) -> np.ndarray:
    ps = viewport.pixel_size
    x_min = viewport.center.real - viewport.half_width
    y_max = viewport.center.imag + viewport.half_height
    return _grid(x_min, y_max, ps, viewport.pixel_width, viewport.pixel_height)


def _grid(x_min: float, y_max: float, ps: float, width: int, height: int) -> np.ndarray:
    # one shared formula so tiles and views agree bit-for-bit on shared windows
    xs = x_min + (np.arange(width) + 0.5) * ps
    ys = y_max - (np.arange(height) + 0.5) * ps
    return xs[None, :] + 1j * ys[:, None]


def pixel_of(grid: np.ndarray, z: complex) -> tuple[int, int]:
    """(row, col) of the pixel whose center is nearest to z on a grid."""
    col = int(np.argmin(np.abs(grid[0, :].real - z.real)))
    row = int(np.argmin(np.abs(grid[:, 0].imag - z.imag)))
    return row, col


# ---------------------------------------------------------------------------
# vectorized orbit kernel


def _apply_map_array(z: np.ndarray, lam: np.ndarray, n: int) -> np.ndarray:
    with np.errstate(all="ignore"):
        w = z ** n
        d = w - lam
        small = np.abs(d) < 1e-12 * np.maximum(1.0, np.abs(w))
        out = w + lam * lam / d
        if small.any():
            out = np.where(small, (w * d + lam * lam) / d, out)
    return out


def _orbit_grid(
    seed: np.ndarray,
    lam: np.ndarray,
    n: int,
    budget: int,
    radius: np.ndarray,
    trap_center: np.ndarray,
    trap_radius: np.ndarray,
    attractor_points: np.ndarray | None = None,
    tol: float = 1e-6,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Run every pixel's orbit to its first certificate.

    Mirrors the scalar engine: the seed is tested at step 0, map applications
    happen between tests, and the recorded step is the index of the deciding
    test.  Precedence when several fire at once: escaped, then trapped, then
    attractor proximity.  A negative trap_radius disables trapping for that
    pixel.  Returns (outcome, steps, final, hit) where hit indexes into
    attractor_points for converged pixels and is -1 otherwise.
    """
    seed_b, lam_b, rad_b, tc_b, tr_b = np.broadcast_arrays(
        np.asarray(seed, np.complex128),
        np.asarray(lam, np.complex128),
        np.asarray(radius, np.float64),
        np.asarray(trap_center, np.complex128),
        np.asarray(trap_radius, np.float64),
    )
    shape = seed_b.shape
    z = seed_b.ravel().astype(np.complex128)
    lam_f = lam_b.ravel().astype(np.complex128)
    rad_f = rad_b.ravel().astype(np.float64)
    tc_f = tc_b.ravel().astype(np.complex128)
    tr_f = tr_b.ravel().astype(np.float64)

    total = z.size
    outcome = np.zeros(total, np.uint8)
    steps = np.full(total, budget, np.int32)
    final = z.copy()
    hit = np.full(total, -1, np.int32)
    idx = np.arange(total)
    pts = None
    if attractor_points is not None and len(attractor_points):
        pts = np.asarray(attractor_points, np.complex128)

    for k in range(budget + 1):
        with np.errstate(all="ignore"):
            az = np.abs(z)
            code = np.zeros(z.size, np.uint8)
            if pts is not None:
                dist = np.abs(z[:, None] - pts[None, :])
                nearest = np.argmin(dist, axis=1)
                code[dist[np.arange(z.size), nearest] <= tol] = FIELD_CONVERGED
            code[np.abs(z - tc_f) <= tr_f] = FIELD_TRAPPED
            code[~np.isfinite(az) | (az >= rad_f)] = FIELD_ESCAPED
        done = code != 0
        if done.any():
            g = idx[done]
            outcome[g] = code[done]
            steps[g] = k
            final[g] = z[done]
            if pts is not None:
                conv = code[done] == FIELD_CONVERGED
                hit[g[conv]] = nearest[done][conv]
            keep = ~done
            z, idx = z[keep], idx[keep]
            lam_f, rad_f = lam_f[keep], rad_f[keep]
            tc_f, tr_f = tc_f[keep], tr_f[keep]
        if k == budget or z.size == 0:
            break
        z = _apply_map_array(z, lam_f, n)

    if idx.size:
        final[idx] = z
    return (
        outcome.reshape(shape),
        steps.reshape(shape),
        final.reshape(shape),
        hit.reshape(shape),
    )


def _escape_index(steps: np.ndarray, final: np.ndarray, radius: np.ndarray, n: int) -> np.ndarray:
    """Smooth iteration count nu = steps - log_n(log|z| / log R), mapped to
    a ramp index.  |z| is clipped into [R, 1e300] first and nu floors at 0."""
    with np.errstate(all="ignore"):
        az = np.abs(final)
    az = np.where(np.isfinite(az), az, _SHADE_CLIP)
    az = np.clip(az, radius, _SHADE_CLIP)
    nu = steps - np.log(np.log(az) / np.log(radius)) / math.log(n)
    nu = np.maximum(nu, 0.0)
    t = 1.0 - np.exp(-nu / 24.0)
    return np.minimum((t * 256.0).astype(np.int64), 255)


# ---------------------------------------------------------------------------
# parameter plane


@dataclass(frozen=True)
class ParamField:
    """Raw per-pixel orbit results for a parameter-plane raster."""

    n: int
    v0_budget: int
    v1_budget: int
    v0_outcome: np.ndarray
    v0_steps: np.ndarray
    v0_final: np.ndarray
    v1_outcome: np.ndarray
    v1_steps: np.ndarray
    v1_final: np.ndarray
    radius: np.ndarray


def parameter_field(lam_grid: np.ndarray, n: int, v0_budget: int, v1_budget: int) -> ParamField:
    """Run v0 and v1 orbits for every lam in the grid.

    lam = 0 falls outside the family; those pixels are reported as escaped at
    step 0 so they take the darkest escape shade.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    lam = np.asarray(lam_grid, np.complex128).ravel()
    zero = lam == 0
    safe = np.where(zero, np.complex128(1.0), lam)
    al = np.abs(safe)
    radius = np.maximum(
        4.0 ** (1.0 / (n - 1)), np.maximum((2.0 * al) ** (1.0 / n), 3.0 * al)
    )
    if n >= 3:
        threshold = trap_threshold(n, TRAP_KAPPA)
        trap_r = np.where(al < threshold, TRAP_KAPPA * al, -1.0)
    else:
        trap_r = np.full(al.shape, -1.0)
    trap_c = -safe

    o0, s0, f0, _ = _orbit_grid(-safe, safe, n, v0_budget, radius, trap_c, trap_r)
    o1, s1, f1, _ = _orbit_grid(3.0 * safe, safe, n, v1_budget, radius, trap_c, trap_r)
    for o, s, f in ((o0, s0, f0), (o1, s1, f1)):
        o[zero] = FIELD_ESCAPED
        s[zero] = 0
        f[zero] = radius[zero]
    shape = np.shape(lam_grid)
    return ParamField(
        n,
        v0_budget,
        v1_budget,
        o0.reshape(shape),
        s0.reshape(shape),
        f0.reshape(shape),
        o1.reshape(shape),
        s1.reshape(shape),
        f1.reshape(shape),
        radius.reshape(shape),
    )


def _colorize_param(field: ParamField, style: RenderStyle) -> np.ndarray:
    h, w = field.v0_outcome.shape
    img = np.zeros((h, w, 4), np.uint8)
    img[..., 3] = 255
    v0_bounded = field.v0_outcome != FIELD_ESCAPED
    v1_bounded = field.v1_outcome != FIELD_ESCAPED
    img[v1_bounded, :3] = style.green
    img[~v1_bounded & v0_bounded, :3] = style.yellow
    escaped = ~v1_bounded & ~v0_bounded
    if escaped.any():
        ramp_idx = _escape_index(field.v0_steps, field.v0_final, field.radius, field.n)
        img[escaped, :3] = style.escape_ramp[ramp_idx[escaped]]
    return img


# ---------------------------------------------------------------------------
# dynamical plane


@dataclass(frozen=True)
class DynField:
    """Raw per-pixel orbit results for a dynamical-plane raster."""

    params: MapParams
    budget: int
    outcome: np.ndarray
    steps: np.ndarray
    final: np.ndarray
    hit: np.ndarray
    point_owner: np.ndarray  # attractor index per flattened cycle point
    trap_hue: int
    radius: float


def dynamical_field(
    z_grid: np.ndarray,
    params: MapParams,
    budget: int,
    attractors: list[CycleInfo],
) -> DynField:
    radius = escape_radius(params)
    trap = trap_disk(params) if params.n >= 3 else None
    trap_c = trap.center if trap is not None else 0j
    trap_r = trap.radius if trap is not None else -1.0

    pts: list[complex] = []
    owner: list[int] = []
    for i, cycle in enumerate(attractors):
        for p in cycle.points:
            pts.append(p)
            owner.append(i)
    trap_hue = len(attractors)
    if trap is not None:
        for i, cycle in enumerate(attractors):
            if all(trap.contains(p) for p in cycle.points):
                trap_hue = i
                break

    outcome, steps, final, hit = _orbit_grid(
        np.asarray(z_grid, np.complex128),
        params.lam,
        params.n,
        budget,
        radius,
        trap_c,
        trap_r,
        np.asarray(pts, np.complex128) if pts else None,
    )
    return DynField(
        params,
        budget,
        outcome,
        steps,
        final,
        hit,
        np.asarray(owner, np.int32),
        trap_hue,
        radius,
    )


def _colorize_dyn(field: DynField, style: RenderStyle) -> np.ndarray:
    h, w = field.outcome.shape
    img = np.zeros((h, w, 4), np.uint8)
    img[..., 3] = 255

    escaped = field.outcome == FIELD_ESCAPED
    if escaped.any():
        ramp_idx = _escape_index(field.steps, field.final, field.radius, field.params.n)
        img[escaped, :3] = style.escape_ramp[ramp_idx[escaped]]

    settled = (field.outcome == FIELD_TRAPPED) | (field.outcome == FIELD_CONVERGED)
    if settled.any():
        hue_idx = np.full(field.outcome.shape, field.trap_hue, np.int64)
        conv = field.outcome == FIELD_CONVERGED
        if field.point_owner.size:
            hue_idx[conv] = field.point_owner[field.hit[conv]]
        hues = np.asarray(style.attractor_hues, np.float64)
        shade = style.shade_lut[np.minimum(field.steps[settled], 255)]
        rgb = hues[hue_idx[settled] % len(style.attractor_hues)] * shade[:, None]
        img[settled, :3] = rgb.astype(np.uint8)
    # budget-exhausted pixels stay black
    return img


# ---------------------------------------------------------------------------
# markers


def marker_positions(params: MapParams) -> tuple[list[complex], list[complex]]:
    """(red, blue) marker locations: finite critical preimages {0, c_k} in
    red, the critical values {v0, v1} in blue."""
    red = [complex(p) for p in critical_points(params) if not p.is_infinity]
    blue = [params.v0, params.v1]
    return red, blue


def _draw_dot(img: np.ndarray, row: int, col: int, color: tuple[int, int, int]) -> None:
    h, w = img.shape[:2]
    for dy in range(-MARKER_RADIUS, MARKER_RADIUS + 1):
        r = row + dy
        if not 0 <= r < h:
            continue
        span = int(math.floor(math.sqrt(MARKER_RADIUS * MARKER_RADIUS - dy * dy)))
        c0 = max(col - span, 0)
        c1 = min(col + span, w - 1)
        if c0 <= c1:
            img[r, c0 : c1 + 1, 0] = color[0]
            img[r, c0 : c1 + 1, 1] = color[1]
            img[r, c0 : c1 + 1, 2] = color[2]
            img[r, c0 : c1 + 1, 3] = 255


def draw_markers(
    img: np.ndarray,
    params: MapParams,
    x_min: float,
    y_max: float,
    pixel_size: float,
    style: RenderStyle = DEFAULT_STYLE,
) -> None:
    """Stamp marker dots onto a rendered dynamical-plane image, in place.
    Drawn after everything else so they sit on top."""
    red, blue = marker_positions(params)
    for points, color in ((red, style.marker_red), (blue, style.marker_blue)):
        for z in points:
            col = int(math.floor((z.real - x_min) / pixel_size))
            row = int(math.floor((y_max - z.imag) / pixel_size))
            _draw_dot(img, row, col, color)


# ---------------------------------------------------------------------------
# entry points


def render_parameter_tile(spec: TileSpec, style: RenderStyle = DEFAULT_STYLE) -> np.ndarray:
    if spec.plane is not Plane.PARAMETER:
        raise ValueError("spec is not a parameter-plane tile")
    field = parameter_field(tile_grid(spec), spec.n, spec.budget, 10 * spec.budget)
    return _colorize_param(field, style)


def render_dynamical_tile(
    spec: TileSpec,
    style: RenderStyle = DEFAULT_STYLE,
    attractors: list[CycleInfo] | None = None,
) -> np.ndarray:
    if spec.plane is not Plane.DYNAMICAL:
        raise ValueError("spec is not a dynamical-plane tile")
    params = MapParams(spec.n, spec.lam)
    if attractors is None:
        attractors = attractor_inventory(params, 10 * spec.budget)
    field = dynamical_field(tile_grid(spec), params, spec.budget, attractors)
    return _colorize_dyn(field, style)


def render_tile(spec: TileSpec, style: RenderStyle = DEFAULT_STYLE) -> np.ndarray:
    if spec.plane is Plane.PARAMETER:
        return render_parameter_tile(spec, style)
    return render_dynamical_tile(spec, style)


def render_view(
    viewport: Viewport,
    plane: Plane | str,
    n: int,
    lam: complex | None = None,
    budget: int = DEFAULT_RENDER_BUDGET,
    style: RenderStyle = DEFAULT_STYLE,
    markers: bool = False,
    workers: int | None = None,
) -> np.ndarray:
    """Render an arbitrary rectangular view as RGBA.

    Rows are split into fixed horizontal bands that threads fill
    independently; every pixel only depends on its own coordinates, so the
    result is byte-identical for any worker count.  markers only applies to
    the dynamical plane.
    """
    plane = _as_plane(plane)
    if budget < 1:
        raise ValueError("budget must be >= 1")
    ps = viewport.pixel_size
    x_min = viewport.center.real - viewport.half_width
    y_max = viewport.center.imag + viewport.half_height
    width, height = viewport.pixel_width, viewport.pixel_height
    xs = x_min + (np.arange(width) + 0.5) * ps
    ys = y_max - (np.arange(height) + 0.5) * ps

    params: MapParams | None = None
    attractors: list[CycleInfo] = []
    if plane is Plane.DYNAMICAL:
        if lam is None:
            raise ValueError("dynamical views need lam")
        params = MapParams(n, lam)
        attractors = attractor_inventory(params, 10 * budget)
    elif n < 2:
        raise ValueError("n must be >= 2")

    def band(rows: slice) -> np.ndarray:
        grid = xs[None, :] + 1j * ys[rows][:, None]
        if plane is Plane.PARAMETER:
            return _colorize_param(parameter_field(grid, n, budget, 10 * budget), style)
        return _colorize_dyn(dynamical_field(grid, params, budget, attractors), style)

    bands = [slice(r, min(r + _BAND_ROWS, height)) for r in range(0, height, _BAND_ROWS)]
    if len(bands) == 1:
        img = band(bands[0])
    else:
        with ThreadPoolExecutor(max_workers=worker_count(workers)) as pool:
            img = np.vstack(list(pool.map(band, bands)))
    if markers and plane is Plane.DYNAMICAL:
        draw_markers(img, params, x_min, y_max, ps, style)
    return img


# ---------------------------------------------------------------------------
# encoding


_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


def _png_chunk(tag: bytes, payload: bytes) -> bytes:
    return (
        struct.pack(">I", len(payload))
        + tag
        + payload
        + struct.pack(">I", zlib.crc32(tag + payload) & 0xFFFFFFFF)
    )


def encode_png(rgba: np.ndarray) -> bytes:
    """Minimal 8-bit RGBA PNG: no interlacing, filter 0 on every scanline,
    one zlib stream at level 6.  Deterministic for identical input."""
    if rgba.ndim != 3 or rgba.shape[2] != 4 or rgba.dtype != np.uint8:
        raise ValueError("expected an (h, w, 4) uint8 array")
    h, w = rgba.shape[:2]
    raw = np.zeros((h, 1 + w * 4), np.uint8)
    raw[:, 1:] = rgba.reshape(h, w * 4)
    header = struct.pack(">IIBBBBB", w, h, 8, 6, 0, 0, 0)
    return (
        _PNG_SIGNATURE
        + _png_chunk(b"IHDR", header)
        + _png_chunk(b"IDAT", zlib.compress(raw.tobytes(), 6))
        + _png_chunk(b"IEND", b"")
    )


def encode_ppm(rgba: np.ndarray) -> bytes:
    """Binary PPM (P6) fallback; alpha is dropped."""
    if rgba.ndim != 3 or rgba.shape[2] != 4 or rgba.dtype != np.uint8:
        raise ValueError("expected an (h, w, 4) uint8 array")
    h, w = rgba.shape[:2]
    return f"P6\n{w} {h}\n255\n".encode("ascii") + rgba[:, :, :3].tobytes()


def write_image(rgba: np.ndarray, path: str | Path) -> None:
    path = Path(path)
    data = encode_ppm(rgba) if path.suffix.lower() == ".ppm" else encode_png(rgba)
    path.write_bytes(data)


def tile_filename(spec: TileSpec) -> str:
    lam = spec.lam if spec.lam is not None else 0j
    return (
        f"{spec.plane.value}_{spec.n}_{lam.real:g}_{lam.imag:g}"
        f"_{spec.zoom}_{spec.tx}_{spec.ty}.png"
    )
