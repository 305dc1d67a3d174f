"""Classification and deterministic rendering for z^n + lam^2/(z^n - lam)."""

from .classify import (
    GOLDEN_EXAMPLES,
    Classification,
    Evidence,
    GridCell,
    Kind,
    Subcase,
    classify,
    classify_grid,
    worker_count,
    write_grid_csv,
)
from .cycles import CycleInfo, CycleKind, attractor_inventory, find_cycle
from .family import (
    INFINITY,
    MapParams,
    PoleError,
    SpherePoint,
    critical_points,
    derivative,
    evaluate,
)
from .orbits import (
    DEFAULT_CLASSIFY_BUDGET,
    DEFAULT_RENDER_BUDGET,
    TRAP_KAPPA,
    Disk,
    Outcome,
    OrbitResult,
    escape_radius,
    iterate_orbit,
    trap_disk,
    trap_threshold,
)
from .render import (
    DEFAULT_STYLE,
    Plane,
    RenderStyle,
    TileSpec,
    Viewport,
    encode_png,
    encode_ppm,
    render_dynamical_tile,
    render_parameter_tile,
    render_tile,
    render_view,
    tile_filename,
    write_image,
)

__version__ = "0.1.0"
