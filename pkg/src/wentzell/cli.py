"""Command-line front end: evaluate, export, and cross-compare the engines.

Subcommands:

* ``eval``     one point, one engine, CSV record on stdout
* ``field``    rectangular (t, x) grid to CSV or JSON
* ``compare``  two engines on a shared grid, JSON difference report
* ``figure1``  the pinned showcase configuration (mu=1, nu=-1/2, Gaussian
               bump at 2.5) whose solution dips below zero

Exit codes: 0 success, 2 usage or invalid arguments, 3 numerical failure,
4 I/O failure.  Diagnostics go to stderr, one line each; color is used
only on a terminal and never when NO_COLOR is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import (
    InvalidPointError,
    NoConvergenceError,
    NotSmoothError,
    OutOfDomainError,
    SingularSystemError,
    StabilityError,
)
from .initialdata import parse_datum
from .kernels import Problem
from .montecarlo import estimate_u
from .pde import PdeGrid
from .quadrature import QuadratureSpec
from .solution import eval_field, eval_u_nonsmooth, eval_u_smooth

#: CLI engine names to internal engine names
ENGINE_ALIASES = {
    "closed": "closed_smooth",
    "nonsmooth": "closed_nonsmooth",
    "mc": "monte_carlo",
    "pde": "pde",
    "oracle": "density_oracle",
}

_FIG1 = {"mu": 1.0, "nu": -0.5, "f": "gaussian:center=2.5,width=1",
         "t_grid": [0.02, 3.0, 30], "x_grid": [0.0, 6.0, 41]}


@dataclass
class RunConfig:
    """Canonical run description; every flag has a slot here.

    ``canonical_dict`` materializes all defaults so that parsing its JSON
    form again reproduces it exactly (idempotent canonicalization).
    """

    mu: float = 1.0
    nu: float = 0.0
    f: str = "gaussian:center=2.5,width=1"
    engine: str = "closed"
    t_grid: list = dc_field(default_factory=lambda: [1.0, 1.0, 1])
    x_grid: list = dc_field(default_factory=lambda: [0.0, 6.0, 25])
    abs_tol: float = 1e-9
    rel_tol: float = 1e-9
    mc_n: int = 200_000
    mc_seed: int = 0
    pde_x_max: float | None = None
    pde_nx: int | None = None
    pde_nt: int | None = None
    pde_theta: float = 0.5
    output: str | None = None
    out_format: str = "csv"
    workers: int = 1

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        cfg = cls()
        plain = {"mu": float, "nu": float, "f": str, "engine": str, "workers": int}
        for key, cast in plain.items():
            if key in d and d[key] is not None:
                setattr(cfg, key, cast(d[key]))
        for key in ("t_grid", "x_grid"):
            if key in d and d[key] is not None:
                g = d[key]
                cfg_val = [float(g[0]), float(g[1]), int(g[2])]
                setattr(cfg, key, cfg_val)
        quad = d.get("quadrature") or {}
        cfg.abs_tol = float(quad.get("abs_tol", cfg.abs_tol))
        cfg.rel_tol = float(quad.get("rel_tol", cfg.rel_tol))
        mc = d.get("mc") or {}
        cfg.mc_n = int(mc.get("n", cfg.mc_n))
        cfg.mc_seed = int(mc.get("seed", cfg.mc_seed))
        pde = d.get("pde") or {}
        cfg.pde_x_max = None if pde.get("x_max") is None else float(pde["x_max"])
        cfg.pde_nx = None if pde.get("nx") is None else int(pde["nx"])
        cfg.pde_nt = None if pde.get("nt") is None else int(pde["nt"])
        cfg.pde_theta = float(pde.get("theta", cfg.pde_theta))
        out = d.get("output") or {}
        cfg.output = out.get("path")
        cfg.out_format = out.get("format", cfg.out_format)
        if cfg.engine not in ENGINE_ALIASES:
            raise ValueError(f"unknown engine {cfg.engine!r}")
        if cfg.out_format not in ("csv", "json"):
            raise ValueError(f"unknown output format {cfg.out_format!r}")
        return cfg

    def canonical_dict(self) -> dict:
        return {
            "mu": self.mu, "nu": self.nu, "f": self.f, "engine": self.engine,
            "t_grid": list(self.t_grid), "x_grid": list(self.x_grid),
            "quadrature": {"abs_tol": self.abs_tol, "rel_tol": self.rel_tol},
            "mc": {"n": self.mc_n, "seed": self.mc_seed},
            "pde": {"x_max": self.pde_x_max, "nx": self.pde_nx,
                    "nt": self.pde_nt, "theta": self.pde_theta},
            "output": {"path": self.output, "format": self.out_format},
            "workers": self.workers,
        }

    def canonical_json(self) -> str:
        return json.dumps(self.canonical_dict(), sort_keys=True, indent=2)


def _grid_spec(text: str) -> list:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid {text!r} is not start:stop:count")
    start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1 or stop < start:
        raise argparse.ArgumentTypeError(f"grid {text!r} must have stop >= start, count >= 1")
    return [start, stop, count]


def _linspace(grid: list) -> np.ndarray:
    start, stop, count = grid
    return np.linspace(start, stop, int(count))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wentzell",
        description="Half-line heat equation with a dynamic boundary condition: "
                    "closed-form, Monte Carlo, and finite-difference engines.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with a RunConfig; flags override it")
    common.add_argument("--mu", type=float, help="drift coefficient")
    common.add_argument("--nu", type=float, help="boundary coefficient")
    common.add_argument("--f", help="initial datum, e.g. gaussian:center=2.5,width=1 "
                                    "| expdecay:rate=1 | table:path.csv")
    common.add_argument("--engine", choices=sorted(ENGINE_ALIASES),
                        help="evaluation engine (default closed)")
    common.add_argument("--abs-tol", type=float, help="quadrature absolute tolerance")
    common.add_argument("--rel-tol", type=float, help="quadrature relative tolerance")
    common.add_argument("--n", type=int, help="Monte Carlo sample count")
    common.add_argument("--seed", type=int, help="Monte Carlo seed")
    common.add_argument("--x-max", type=float, help="PDE truncation point")
    common.add_argument("--nx", type=int, help="PDE spatial cells")
    common.add_argument("--nt", type=int, help="PDE time steps")
    common.add_argument("--theta", type=float, help="PDE time blend in [0,1], 0.5 default")
    common.add_argument("--workers", type=int, help="worker threads for field evaluation")

    p_eval = sub.add_parser("eval", parents=[common], help="evaluate u at one point")
    p_eval.add_argument("--t", type=float, required=True)
    p_eval.add_argument("--x", type=float, required=True)

    p_field = sub.add_parser("field", parents=[common], help="evaluate u on a grid")
    p_field.add_argument("--t-grid", type=_grid_spec, help="start:stop:count")
    p_field.add_argument("--x-grid", type=_grid_spec, help="start:stop:count")
    p_field.add_argument("-o", "--output", help="destination file (default stdout)")
    p_field.add_argument("--format", choices=["csv", "json"], help="output format")

    p_cmp = sub.add_parser("compare", parents=[common],
                           help="evaluate two engines on one grid and report differences")
    p_cmp.add_argument("--engine-b", choices=sorted(ENGINE_ALIASES), required=True,
                       help="second engine (--engine is the first)")
    p_cmp.add_argument("--t-grid", type=_grid_spec, help="start:stop:count")
    p_cmp.add_argument("--x-grid", type=_grid_spec, help="start:stop:count")
    p_cmp.add_argument("-o", "--output", help="destination file (default stdout)")

    p_fig = sub.add_parser("figure1", parents=[common],
                           help="showcase field: positive bump turning negative")
    p_fig.add_argument("--t-grid", type=_grid_spec, help="start:stop:count")
    p_fig.add_argument("--x-grid", type=_grid_spec, help="start:stop:count")
    p_fig.add_argument("-o", "--output", help="destination file (default stdout)")
    p_fig.add_argument("--format", choices=["csv", "json"], help="output format")
    return parser


def _load_config(args) -> RunConfig:
    data = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ValueError("config root must be a JSON object")
    cfg = RunConfig.from_dict(data)
    overrides = {
        "mu": "mu", "nu": "nu", "f": "f", "engine": "engine",
        "abs_tol": "abs_tol", "rel_tol": "rel_tol",
        "n": "mc_n", "seed": "mc_seed",
        "x_max": "pde_x_max", "nx": "pde_nx", "nt": "pde_nt", "theta": "pde_theta",
        "workers": "workers", "t_grid": "t_grid", "x_grid": "x_grid",
        "output": "output", "format": "out_format",
    }
    for arg_name, cfg_name in overrides.items():
        val = getattr(args, arg_name, None)
        if val is not None:
            setattr(cfg, cfg_name, val)
    return cfg


def _quad_spec(cfg: RunConfig) -> QuadratureSpec:
    return QuadratureSpec(abs_tol=cfg.abs_tol, rel_tol=cfg.rel_tol)


def _pde_grid(cfg: RunConfig, problem, datum, t_end: float) -> PdeGrid | None:
    if cfg.pde_x_max is None and cfg.pde_nx is None and cfg.pde_nt is None:
        return None  # let the field evaluator build its default grid
    from .pde import suggested_x_max

    x_max = cfg.pde_x_max if cfg.pde_x_max is not None else suggested_x_max(problem, datum, t_end)
    nx = cfg.pde_nx if cfg.pde_nx is not None else max(16, int(round(100.0 * x_max)))
    nt = cfg.pde_nt if cfg.pde_nt is not None else max(100, int(round(1000.0 * t_end)))
    return PdeGrid(x_max=x_max, nx=nx, t_end=t_end, nt=nt, theta=cfg.pde_theta)


def _compute_field(cfg: RunConfig, engine_cli: str, t_grid, x_grid):
    problem = Problem(mu=cfg.mu, nu=cfg.nu)
    datum = parse_datum(cfg.f)
    engine = ENGINE_ALIASES[engine_cli]
    return eval_field(problem, datum, t_grid, x_grid, engine, _quad_spec(cfg),
                      mc_samples=cfg.mc_n, mc_seed=cfg.mc_seed,
                      pde_grid=_pde_grid(cfg, problem, datum, float(t_grid[-1])),
                      workers=cfg.workers)


def _fmt(v: float) -> str:
    return "%.17g" % v


def _field_csv(fld) -> str:
    with_err = fld.std_errors is not None
    lines = ["t,x,u,stderr" if with_err else "t,x,u"]
    for i, t in enumerate(fld.t_grid):
        for j, x in enumerate(fld.x_grid):
            row = [_fmt(t), _fmt(x), _fmt(fld.values[i, j])]
            if with_err:
                row.append(_fmt(fld.std_errors[i, j]))
            lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _field_json(fld, cfg: RunConfig) -> str:
    doc = {
        "engine": fld.engine, "mu": cfg.mu, "nu": cfg.nu, "f": cfg.f,
        "t_grid": [float(v) for v in fld.t_grid],
        "x_grid": [float(v) for v in fld.x_grid],
        "values": [[float(v) for v in row] for row in fld.values],
        "std_errors": None if fld.std_errors is None else
                      [[float(v) for v in row] for row in fld.std_errors],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _write_out(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_eval(args) -> int:
    cfg = _load_config(args)
    problem = Problem(mu=cfg.mu, nu=cfg.nu)
    datum = parse_datum(cfg.f)
    t, x = float(args.t), float(args.x)
    engine = ENGINE_ALIASES[cfg.engine]
    err = None
    if engine == "monte_carlo":
        est = estimate_u(problem, datum, t, x, cfg.mc_n, seed=cfg.mc_seed,
                         workers=cfg.workers)
        value, err = est.mean, est.std_error
    elif engine == "closed_smooth":
        value = eval_u_smooth(problem, datum, t, x, _quad_spec(cfg))
    elif engine == "closed_nonsmooth":
        value = eval_u_nonsmooth(problem, datum, t, x, _quad_spec(cfg))
    else:
        fld = _compute_field(cfg, cfg.engine, [t], [x])
        value = float(fld.values[0, 0])
    if err is None:
        sys.stdout.write("t,x,u\n%s,%s,%s\n" % (_fmt(t), _fmt(x), _fmt(value)))
    else:
        sys.stdout.write("t,x,u,stderr\n%s,%s,%s,%s\n"
                         % (_fmt(t), _fmt(x), _fmt(value), _fmt(err)))
    return 0


def cmd_field(args) -> int:
    cfg = _load_config(args)
    if cfg.engine not in ENGINE_ALIASES:
        raise ValueError(f"unknown engine {cfg.engine!r}")
    fld = _compute_field(cfg, cfg.engine, _linspace(cfg.t_grid), _linspace(cfg.x_grid))
    text = _field_csv(fld) if cfg.out_format == "csv" else _field_json(fld, cfg)
    _write_out(text, cfg.output)
    return 0


def cmd_compare(args) -> int:
    cfg = _load_config(args)
    t_grid, x_grid = _linspace(cfg.t_grid), _linspace(cfg.x_grid)
    report = {"engines": [cfg.engine, args.engine_b], "timings": {}}
    fields = []
    for name in (cfg.engine, args.engine_b):
        start = time.perf_counter()
        fld = _compute_field(cfg, name, t_grid, x_grid)
        report["timings"][name] = time.perf_counter() - start
        fields.append(fld)
    a, b = fields
    diff = np.abs(a.values - b.values)
    i, j = np.unravel_index(np.argmax(diff), diff.shape)
    report["max_abs_diff"] = float(diff[i, j])
    report["argmax"] = {"t": float(t_grid[i]), "x": float(x_grid[j])}
    # pointwise z-score wherever a Monte Carlo standard error is available
    scale = np.zeros_like(diff)
    for fld in fields:
        if fld.std_errors is not None:
            scale = np.sqrt(scale ** 2 + fld.std_errors ** 2)
    if np.any(scale > 0.0):
        z = np.where(scale > 0.0, diff / np.where(scale > 0.0, scale, 1.0), np.inf)
        report["z_score"] = float(np.max(z))
        report["z_ok"] = bool(report["z_score"] <= 3.0)
    else:
        report["z_score"] = None
    _write_out(json.dumps(report, sort_keys=True, indent=2) + "\n",
               getattr(args, "output", None) or cfg.output)
    return 0


def cmd_figure1(args) -> int:
    # pinned showcase configuration; explicit flags may still refine it
    for key, val in _FIG1.items():
        if getattr(args, key, None) is None:
            setattr(args, key, val)
    return cmd_field(args)


def _supports_color(stream) -> bool:
    if os.environ.get("NO_COLOR"):
        return False
    return hasattr(stream, "isatty") and stream.isatty()


def _diagnose(kind: str, exc: BaseException) -> None:
    prefix = "error"
    if _supports_color(sys.stderr):
        prefix = "\x1b[31merror\x1b[0m"
    sys.stderr.write(f"{prefix}: {kind}: {exc}\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"eval": cmd_eval, "field": cmd_field,
                "compare": cmd_compare, "figure1": cmd_figure1}
    try:
        return handlers[args.command](args)
    # numerical failures first: StabilityError is a ValueError subclass
    except (NoConvergenceError, StabilityError, SingularSystemError,
            FloatingPointError, ArithmeticError) as exc:
        _diagnose("numerical failure", exc)
        return 3
    except (InvalidPointError, OutOfDomainError, NotSmoothError,
            ValueError, KeyError, json.JSONDecodeError) as exc:
        _diagnose("invalid arguments", exc)
        return 2
    except OSError as exc:
        _diagnose("i/o failure", exc)
        return 4


if __name__ == "__main__":
    sys.exit(main())
