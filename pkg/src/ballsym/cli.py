"""Command-line front end.

Subcommands: solve | verify | radial | recover | sweep. Parameters come from
an optional JSON config file with explicit flags taking precedence. Outputs
are deterministic: identical configs produce byte-identical CSV/JSON (and
PNG) files, with the sample seed recorded in every output header.

Exit codes: 0 success, 1 identity violation or failed convergence,
2 config/usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .errors import BallsymError
from .geometry import StarDomain2D
from .identities import (
    CSV_COLUMNS,
    BoundaryLaw,
    verify_identities,
)
from .poisson2d import solve
from .radial import ball_integral_identity, power_law_c_bound, power_source_ball, torsion_ball
from .shape import RecoveryConfig, deficit_landscape, recover
from .tolerances import Tolerances

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_DEFAULTS = {
    "domain": {"a0": 1.0, "cos": [], "sin": []},
    "alpha": 0.0,
    "law": "linear-cr",
    "law_alpha": 1.0,
    "k_basis": 24,
    "quad": 256,
    "seed": 42,
    "tol": 1e-8,
    "c0": None,
    "c1": 0.0,
    "relaxation": 0.5,
    "max_iters": 200,
    "k_geom": 12,
    "renormalize_area": True,
    "modes": [2],
    "amplitudes": [0.0, 0.025, 0.05, 0.1],
    "plots": True,
    "dim": 2,
    "radius": 1.0,
}


# ---------------------------------------------------------------------------
# Deterministic writers
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_csv(path: Path, columns: list[str], rows: list[list], seed: int) -> None:
    """17-significant-digit CSV with LF endings and the seed in the header."""
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(f"# seed={seed}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    return obj


def write_json(path: Path, payload: dict) -> None:
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        json.dump(_json_safe(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# Config resolution
# ---------------------------------------------------------------------------

def _load_json(source: str) -> dict:
    text = source if source.lstrip().startswith("{") else Path(source).read_text()
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    return data


def resolve_config(args: argparse.Namespace) -> dict:
    """defaults < config file < explicit flags."""
    cfg = dict(_DEFAULTS)
    if args.config:
        cfg.update(_load_json(args.config))
    if getattr(args, "domain", None):
        cfg["domain"] = _load_json(args.domain)
    for key in ("alpha", "law", "law_alpha", "k_basis", "quad", "seed",
                "c0", "c1", "relaxation", "max_iters", "dim", "radius"):
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if getattr(args, "tol", None) is not None:
        cfg["tol"] = args.tol
    if getattr(args, "modes", None):
        cfg["modes"] = [int(v) for v in args.modes.split(",")]
    if getattr(args, "amplitudes", None):
        cfg["amplitudes"] = [float(v) for v in args.amplitudes.split(",")]
    if getattr(args, "no_plots", False):
        cfg["plots"] = False
    if getattr(args, "no_renormalize", False):
        cfg["renormalize_area"] = False
    return cfg


def _make_law(cfg: dict) -> BoundaryLaw:
    kind = cfg["law"]
    if kind == "constant-c":
        return BoundaryLaw.constant()
    if kind == "linear-cr":
        return BoundaryLaw.linear()
    if kind == "power-cr":
        return BoundaryLaw.power(float(cfg["law_alpha"]))
    raise ValueError(f"unsupported law for the CLI: {kind!r}")


def _make_domain(cfg: dict) -> StarDomain2D:
    return StarDomain2D.from_dict(cfg["domain"])


def _out_dir(args: argparse.Namespace) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_solve(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    out = _out_dir(args)
    domain = _make_domain(cfg)
    law = _make_law(cfg)
    sol = solve(domain, alpha=float(cfg["alpha"]), k_basis=int(cfg["k_basis"]))

    payload = sol.to_dict()
    payload["seed"] = int(cfg["seed"])
    write_json(out / "solution.json", payload)

    grid = domain.boundary_grid()
    dudn = sol.normal_derivative(grid)
    u_b = np.atleast_1d(sol.eval_u(grid.position))
    rows = [
        [grid.theta[i], grid.position[i, 0], grid.position[i, 1],
         grid.r[i], float(u_b[i]), float(dudn[i]), grid.weight[i]]
        for i in range(len(grid.theta))
    ]
    write_csv(out / "boundary.csv",
              ["theta", "x", "y", "r", "u", "dudn", "weight"],
              rows, seed=int(cfg["seed"]))

    if cfg["plots"]:
        from .plots import plot_solution
        plot_solution(sol, law, out / "solution.png")
    print(f"solve: fit_residual={sol.fit_residual:.6e} -> {out}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    out = _out_dir(args)
    domain = _make_domain(cfg)
    law = _make_law(cfg)
    tol = Tolerances(deficit_tol=float(cfg["tol"]))
    sol = solve(domain, alpha=float(cfg["alpha"]), k_basis=int(cfg["k_basis"]))
    report = verify_identities(
        sol, law, tol=tol, seed=int(cfg["seed"]),
        c0=None if cfg["c0"] is None else float(cfg["c0"]),
        c1=float(cfg["c1"]), n_quad=int(cfg["quad"]),
    )

    payload = report.to_dict()
    payload["domain"] = domain.to_dict()
    write_json(out / "report.json", payload)
    write_csv(out / "report.csv", CSV_COLUMNS, [report.csv_row()],
              seed=int(cfg["seed"]))

    if cfg["plots"]:
        from .plots import plot_report
        plot_report(report, sol, law, out / "report.png")

    status = "PASS" if report.passed else "FAIL"
    print(f"verify: {status} cN={report.cn:.8f} deficit={report.deficit:.6e}"
          f" failures={list(report.failures)} -> {out}")
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_radial(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    dim = int(cfg["dim"])
    radius = float(cfg["radius"])
    alpha = float(cfg["alpha"])

    tb = torsion_ball(dim, radius)
    lhs, rhs = ball_integral_identity(dim, radius)
    lines = [
        f"torsion ball: dim={dim} radius={_fmt(radius)} u0={_fmt(tb.u0)} c={_fmt(tb.c)}",
        f"interior balance: int_u={_fmt(lhs)} c2_int_r2={_fmt(rhs)} "
        f"rel_gap={_fmt(abs(lhs - rhs) / abs(lhs))}",
    ]
    payload: dict = {
        "dim": dim, "radius": radius,
        "torsion": {"u0": tb.u0, "c": tb.c},
        "interior_balance": {"int_u": lhs, "c2_int_r2": rhs},
    }
    if cfg["c0"] is not None:
        ps = power_source_ball(dim, radius, alpha, float(cfg["c0"]))
        lines.append(
            f"power source: alpha={_fmt(ps.alpha)} c0={_fmt(ps.c0)} "
            f"beta={_fmt(ps.beta)} c1={_fmt(ps.c1)} u0={_fmt(ps.u0)}"
        )
        payload["power_source"] = {
            "alpha": ps.alpha, "c0": ps.c0, "beta": ps.beta,
            "c1": ps.c1, "u0": ps.u0,
        }
    if alpha >= 1:
        bound = power_law_c_bound(alpha, dim, 2.0 * radius)
        lines.append(f"admissible c bound (alpha={_fmt(alpha)}): {_fmt(bound)}")
        payload["c_bound"] = bound

    print("\n".join(lines))
    if args.out:
        out = _out_dir(args)
        payload["seed"] = int(cfg["seed"])
        write_json(out / "radial.json", payload)
    return EXIT_OK


def cmd_recover(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    out = _out_dir(args)
    domain = _make_domain(cfg)
    rc = RecoveryConfig(
        law=_make_law(cfg),
        relaxation=float(cfg["relaxation"]),
        max_iters=int(cfg["max_iters"]),
        deficit_tol=float(cfg["tol"]),
        k_basis=int(cfg["k_basis"]),
        renormalize_area=bool(cfg["renormalize_area"]),
        k_geom=int(cfg["k_geom"]),
    )
    trace = recover(domain, rc)

    payload = trace.to_dict()
    payload["seed"] = int(cfg["seed"])
    write_json(out / "trace.json", payload)
    write_csv(out / "trace.csv",
              ["iter", "deficit", "cn", "a0", "fourier_energy"],
              trace.csv_rows(), seed=int(cfg["seed"]))

    if cfg["plots"]:
        from .plots import plot_recovery
        plot_recovery(trace, out / "recover.png")

    print(f"recover: converged={trace.converged} iters={len(trace.iterates) - 1}"
          f" final_fourier_energy={trace.final_fourier_energy:.6e} -> {out}")
    return EXIT_OK if trace.converged else EXIT_VIOLATION


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    out = _out_dir(args)
    base = _make_domain(cfg)
    law = _make_law(cfg)
    results: dict[int, list[tuple[float, float]]] = {}
    rows = []
    for mode in cfg["modes"]:
        pairs = deficit_landscape(base, int(mode), cfg["amplitudes"], law,
                                  k_basis=int(cfg["k_basis"]))
        results[int(mode)] = pairs
        for eps, deficit in pairs:
            rows.append([int(mode), eps, deficit])
    write_csv(out / "sweep.csv", ["mode", "amplitude", "deficit"], rows,
              seed=int(cfg["seed"]))

    if cfg["plots"]:
        from .plots import plot_landscape
        plot_landscape(results, out / "sweep.png")

    print(f"sweep: {len(rows)} rows over modes {sorted(results)} -> {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ballsym",
        description="Overdetermined Poisson boundary problems: solve, verify "
                    "the symmetry identities, and recover the circle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, with_domain: bool = True):
        p.add_argument("--config", help="JSON config file (or inline JSON object)")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, help="sample seed recorded in outputs")
        p.add_argument("--tol", type=float, help="deficit tolerance")
        p.add_argument("--k-basis", dest="k_basis", type=int,
                       help="harmonic basis order of the solver")
        p.add_argument("--quad", type=int, help="interior quadrature points per axis")
        p.add_argument("--alpha", type=float, help="source exponent in -r^alpha")
        p.add_argument("--no-plots", dest="no_plots", action="store_true",
                       help="skip figure rendering")
        if with_domain:
            p.add_argument("--domain", help="domain JSON file (or inline JSON)")
            p.add_argument("--law", choices=("constant-c", "linear-cr", "power-cr"),
                           help="boundary law family")
            p.add_argument("--law-alpha", dest="law_alpha", type=float,
                           help="exponent for the power-cr law")

    p_solve = sub.add_parser("solve", help="solve and write solution JSON + boundary CSV")
    common(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_verify = sub.add_parser("verify", help="run the full identity report")
    common(p_verify)
    p_verify.add_argument("--c0", type=float, help="scaling-condition coefficient")
    p_verify.add_argument("--c1", type=float, help="scaling-condition constant")
    p_verify.set_defaults(func=cmd_verify)

    p_radial = sub.add_parser("radial", help="closed-form ball constants")
    common(p_radial, with_domain=False)
    p_radial.add_argument("--dim", type=int, help="ball dimension")
    p_radial.add_argument("--radius", type=float, help="ball radius")
    p_radial.add_argument("--c0", type=float, help="scaling-condition coefficient")
    p_radial.set_defaults(func=cmd_radial, out="")

    p_recover = sub.add_parser("recover", help="deficit-driven shape recovery")
    common(p_recover)
    p_recover.add_argument("--relaxation", type=float, help="initial relaxation in (0, 1]")
    p_recover.add_argument("--max-iters", dest="max_iters", type=int)
    p_recover.add_argument("--no-renormalize", dest="no_renormalize",
                           action="store_true", help="disable area renormalization")
    p_recover.set_defaults(func=cmd_recover)

    p_sweep = sub.add_parser("sweep", help="deficit landscape over perturbation modes")
    common(p_sweep)
    p_sweep.add_argument("--modes", help="comma-separated Fourier modes, e.g. 2,3")
    p_sweep.add_argument("--amplitudes", help="comma-separated amplitudes")
    p_sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (json.JSONDecodeError, FileNotFoundError, KeyError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (BallsymError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
