"""Command-line front end.

Subcommands: classify (one parameter to JSON), orbit (one orbit to JSON),
render (image file), grid (parameter sweep to CSV), verify-paper (reference
checks with a pass/fail table), serve (run the HTTP service).

Complex values are written a+bi: "0.16", "-0-1i", "1e-3+2.5i".  Exit codes:
0 success, 1 a verification check failed, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .classify import GOLDEN_EXAMPLES, classify, classify_grid, write_grid_csv
from .family import MapParams, SpherePoint, evaluate
from .orbits import iterate_orbit, trap_disk
from .render import Viewport, render_view, write_image
from .serialize import classification_json, orbit_payload

_COMPLEX_FLAGS = {"--lambda", "--z"}


def parse_complex(text: str) -> complex:
    """Parse a+bi notation. Plain reals ("0.16") and bare "i" work too."""
    compact = text.strip().replace(" ", "")
    if not compact:
        raise ValueError("empty complex literal")
    try:
        value = complex(compact.replace("I", "i").replace("i", "j"))
    except ValueError:
        raise ValueError(f"not a complex number: {text!r}") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValueError(f"complex value must be finite: {text!r}")
    return value


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _window_arg(text: str) -> tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("window must be x_min,y_min,x_max,y_max")
    try:
        x0, y0, x1, y1 = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad window: {text!r}") from None
    if not (x1 > x0 and y1 > y0):
        raise argparse.ArgumentTypeError("window must have positive extent")
    return (x0, y0, x1, y1)


def _res_arg(text: str) -> tuple[int, int]:
    # "512" means a square raster, "640x480" sets both axes
    parts = text.lower().split("x")
    try:
        dims = [int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad resolution: {text!r}") from None
    if len(dims) == 1:
        dims = [dims[0], dims[0]]
    if len(dims) != 2 or min(dims) < 1:
        raise argparse.ArgumentTypeError("resolution must be N or WxH with N,W,H >= 1")
    return (dims[0], dims[1])


def _fold_complex_flags(argv: list[str]) -> list[str]:
    # argparse would read the value of "--lambda -0-1i" or "--window -1,-1,1,1"
    # as another option; folding into --flag=value keeps negative literals usable
    validators = dict.fromkeys(_COMPLEX_FLAGS, parse_complex)
    validators["--window"] = _window_arg
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        check = validators.get(tok)
        if check is not None and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            try:
                check(argv[i + 1])
            except (ValueError, argparse.ArgumentTypeError):
                pass
            else:
                out.append(f"{tok}={argv[i + 1]}")
                i += 2
                continue
        out.append(tok)
        i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bubbledyn",
        description="classify and render the maps z^n + lambda^2/(z^n - lambda)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify one parameter and print JSON")
    c.add_argument("--n", type=int, required=True, help="degree parameter, integer >= 2")
    c.add_argument("--lambda", dest="lam", type=_complex_arg, required=True,
                   metavar="A+BI", help="complex parameter, nonzero")
    c.add_argument("--budget", type=int, default=5000, help="orbit budget (default 5000)")
    c.set_defaults(func=_cmd_classify)

    o = sub.add_parser("orbit", help="run one orbit and print JSON with a trace")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--lambda", dest="lam", type=_complex_arg, required=True, metavar="A+BI")
    o.add_argument("--seed", choices=("v0", "v1", "custom"), default="v0")
    o.add_argument("--z", type=_complex_arg, metavar="A+BI", help="seed point for --seed custom")
    o.add_argument("--budget", type=int, default=5000)
    o.add_argument("--trace", type=int, default=200, help="max trace points to keep")
    o.set_defaults(func=_cmd_orbit)

    r = sub.add_parser("render", help="render a view to PNG (or PPM by extension)")
    r.add_argument("--plane", choices=("param", "julia"), required=True)
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--lambda", dest="lam", type=_complex_arg, metavar="A+BI",
                   help="required for --plane julia")
    r.add_argument("--window", type=_window_arg, default=(-2.0, -2.0, 2.0, 2.0),
                   metavar="X0,Y0,X1,Y1", help="view rectangle (default -2,-2,2,2)")
    r.add_argument("--res", type=_res_arg, default=(512, 512), metavar="N|WxH",
                   help="raster resolution, square N or WxH (default 512)")
    r.add_argument("--budget", type=int, default=500)
    r.add_argument("--markers", action="store_true",
                   help="stamp critical points (red) and critical values (blue)")
    r.add_argument("--workers", type=int, default=None,
                   help="render threads (default: BUBBLEDYN_THREADS or auto)")
    r.add_argument("--out", default=None, help="output path (default: derived name)")
    r.set_defaults(func=_cmd_render)

    g = sub.add_parser("grid", help="classify a parameter grid and write CSV")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--window", type=_window_arg, default=(-2.0, -2.0, 2.0, 2.0),
                   metavar="X0,Y0,X1,Y1")
    g.add_argument("--nx", type=int, default=32, help="cells across (default 32)")
    g.add_argument("--ny", type=int, default=None, help="cells down (default: same as --nx)")
    g.add_argument("--budget", type=int, default=5000)
    g.add_argument("--workers", type=int, default=None)
    g.add_argument("--out", default="-", help="CSV path, or - for stdout (default)")
    g.set_defaults(func=_cmd_grid)

    v = sub.add_parser("verify-paper", help="check the golden reference results")
    v.add_argument("--budget", type=int, default=5000)
    v.add_argument("--ratio-tol", type=float, default=5e-3,
                   help="tolerance for the quantitative ratio check")
    v.set_defaults(func=_cmd_verify)

    s = sub.add_parser("serve", help="run the HTTP tile service")
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8642)
    s.set_defaults(func=_cmd_serve)

    return parser


def _cmd_classify(args: argparse.Namespace) -> int:
    params = MapParams(args.n, args.lam)
    result = classify(params, args.budget)
    print(json.dumps(classification_json(params, result), indent=2))
    return 0


def _cmd_orbit(args: argparse.Namespace) -> int:
    params = MapParams(args.n, args.lam)
    if args.seed == "v0":
        seed = params.v0
    elif args.seed == "v1":
        seed = params.v1
    else:
        if args.z is None:
            raise ValueError("--seed custom needs --z")
        seed = args.z
    if args.trace < 1:
        raise ValueError("--trace must be >= 1")
    trap = trap_disk(params) if params.n >= 3 else None
    result = iterate_orbit(params, seed, args.budget, trap, trace_len=args.trace)
    print(json.dumps(orbit_payload(params, SpherePoint.of(seed), result), indent=2))
    return 0


def _cmd_render(args: argparse.Namespace) -> int:
    if args.plane == "julia" and args.lam is None:
        raise ValueError("--plane julia needs --lambda")
    x0, y0, x1, y1 = args.window
    width, height = args.res
    viewport = Viewport(complex((x0 + x1) / 2, (y0 + y1) / 2), (x1 - x0) / 2, width, height)
    img = render_view(
        viewport,
        args.plane,
        args.n,
        args.lam,
        budget=args.budget,
        markers=args.markers,
        workers=args.workers,
    )
    if args.out is not None:
        out = args.out
    elif args.plane == "julia":
        out = f"julia_{args.n}_{args.lam.real:g}_{args.lam.imag:g}.png"
    else:
        out = f"param_{args.n}.png"
    write_image(img, out)
    print(f"wrote {out} ({width}x{height})")
    return 0


def _cmd_grid(args: argparse.Namespace) -> int:
    ny = args.ny if args.ny is not None else args.nx
    cells = classify_grid(args.n, args.window, (args.nx, ny), args.budget, args.workers)
    if args.out == "-":
        write_grid_csv(cells, sys.stdout)
    else:
        write_grid_csv(cells, args.out)
        print(f"wrote {args.out} ({len(cells)} cells)")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    rows: list[tuple[str, str, str, bool]] = []
    for ex in GOLDEN_EXAMPLES:
        got = classify(MapParams(ex.n, ex.lam), args.budget)
        rows.append(
            (
                ex.name,
                f"{ex.kind.value}/{ex.subcase.value}",
                f"{got.kind.value}/{got.subcase.value}",
                got.kind is ex.kind and got.subcase is ex.subcase,
            )
        )

    # quantitative check: at lam = 4/25 the second image of v1 sits at
    # distance exactly lam/8 from the trap center -lam
    params = MapParams(3, complex(0.16, 0.0))
    z = params.v1
    for _ in range(2):
        z = complex(evaluate(params, z))
    ratio = abs(z - params.v0) / abs(params.lam)
    rows.append(
        (
            "|f^2(3 lam) + lam| / |lam| at lam = 4/25",
            f"0.125 +/- {args.ratio_tol:g}",
            f"{ratio:.9f}",
            abs(ratio - 0.125) <= args.ratio_tol,
        )
    )

    name_w = max(len(r[0]) for r in rows)
    exp_w = max(len(r[1]) for r in rows)
    act_w = max(len(r[2]) for r in rows)
    print(f"{'check':<{name_w}}  {'expected':<{exp_w}}  {'actual':<{act_w}}  result")
    for name, expected, actual, ok in rows:
        print(f"{name:<{name_w}}  {expected:<{exp_w}}  {actual:<{act_w}}  {'PASS' if ok else 'FAIL'}")
    passed = sum(1 for r in rows if r[3])
    print(f"{passed}/{len(rows)} checks passed")
    return 0 if passed == len(rows) else 1


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("bubbledyn.service:app", host=args.host, port=args.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(_fold_complex_flags(argv))
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
