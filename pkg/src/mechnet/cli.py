"""Command-line entry point: ``mechnet <command> [options]``."""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

import numpy as np

from . import __version__, analysis, gaussian
from .config import RunConfig, apply_settings, parse_config
from .errors import ConfigError, MechnetError
from .output import write_output
from .resources import ThreeModeParams, TwoModeParams

log = logging.getLogger("mechnet")


def _settings(cfg: RunConfig):
    return cfg.site(), cfg.spectral(), cfg.resource_phase_rad


def cmd_two_mode(args, cfg):
    site, spectral, phase = _settings(cfg)
    p = TwoModeParams(args.s, args.d, args.g, args.lam)
    rec = analysis.distribution_point(p, site, spectral, phase=phase)
    row = {"s": p.s, "d": p.d, "g": p.g, "lambda": p.lam, "eps_in": rec.input_entanglement,
           "ln_out": rec.output_entanglement, "nu_min": rec.min_pt_symplectic, "physical": rec.physical}
    return [row], {}


def _a_grid(args):
    if args.a is not None:
        return [args.a]
    return np.linspace(args.a_min, args.a_max, args.steps)


def cmd_three_mode(args, cfg):
    site, spectral, phase = _settings(cfg)
    rows = []
    for a in _a_grid(args):
        out = analysis.three_mode_point(float(a), site, spectral, phase)
        pair, split = out["one_vs_one"][0], out["one_vs_two"][0]
        rows.append({
            "a": float(a),
            "eps_pair_in": pair.input_entanglement, "ln_pair_out": pair.output_entanglement,
            "eps_split_in": split.input_entanglement, "ln_split_out": split.output_entanglement,
            "nu_split": split.min_pt_symplectic, "verdict": out["classification"].verdict,
        })
    return rows, {}


def cmd_boundary(args, cfg):
    if args.steps < 1:
        raise ConfigError("--steps must be at least 1")
    site, spectral, phase = _settings(cfg)
    grid = np.linspace(0.0, args.eps_max, args.steps)
    rows = [{"epsilon_in": e, "ln_out": ln} for e, ln in analysis.boundary_curve(grid, site, spectral, phase)]
    summary = {}
    if args.threshold:
        summary["epsilon_threshold"] = analysis.input_threshold(site, spectral, phase)
    return rows, summary


def cmd_scan_purity(args, cfg):
    site, spectral, phase = _settings(cfg)
    s_grid = np.linspace(args.s_min, args.s_max, args.s_steps)
    g_grid = np.linspace(args.g_min, args.g_max, args.g_steps)
    surface = analysis.purity_region_scan(s_grid, g_grid, site, spectral, phase)
    rows = [{"g": g, "s": s, "nu_min": surface[i, j]}
            for i, g in enumerate(g_grid) for j, s in enumerate(s_grid) if not np.isnan(surface[i, j])]
    summary = {"g_death": analysis.purity_death_point(site, spectral, phase, (args.g_min, args.g_bracket))}
    return rows, summary


def cmd_sweep_temperature(args, cfg):
    site, spectral, phase = _settings(cfg)
    grid = np.geomspace(args.t_min, args.t_max, args.steps)
    rows = [{"temperature_k": t, "ln_max": ln, "s_opt": s, "nu_min": nu}
            for t, ln, s, nu in analysis.temperature_sweep(grid, site, spectral, phase)]
    summary = {"t_death_k": analysis.thermal_death_point(site, spectral, phase)}
    return rows, summary


def cmd_optimize_s(args, cfg):
    site, spectral, phase = _settings(cfg)
    s_star, nu = analysis.optimal_s(site, spectral, (args.s_lo, args.s_hi), phase)
    row = {"s_star": s_star, "nu_min": nu, "ln_out": gaussian.log_negativity_from_nu(nu),
           "dnu_ds": analysis.nu_derivative(s_star, site, spectral, phase)}
    return [row], {"s_star": s_star, "nu_min": nu}


def cmd_sample(args, cfg):
    site, spectral, phase = _settings(cfg)
    boundary = analysis.BoundaryReference(site, spectral, phase) if args.check_boundary else None
    records, summary = analysis.random_distribution_experiment(
        args.n, cfg.seed, args.s_max, site, spectral, args.symmetric_fraction, phase, boundary)
    rows = [{"s": r.resource["s"], "d": r.resource["d"], "g": r.resource["g"],
             "lambda": r.resource["lambda"], "eps_in": r.input_entanglement,
             "ln_out": r.output_entanglement, "physical": r.physical} for r in records]
    return rows, summary


def cmd_classify(args, cfg):
    site, spectral, phase = _settings(cfg)
    if args.a is not None:
        params = ThreeModeParams(args.a, args.a, args.a)
    elif None not in (args.a1, args.a2, args.a3):
        params = ThreeModeParams(args.a1, args.a2, args.a3)
    else:
        raise ConfigError("classify needs --a or all of --a1, --a2, --a3")
    result = analysis.three_mode_point(params, site, spectral, phase)["classification"]
    row = {"a1": params.a1, "a2": params.a2, "a3": params.a3}
    for i in range(3):
        row[f"nu_{i + 1}"] = result.min_pt_symplectic[i]
    for i in range(3):
        row[f"npt_{i + 1}"] = result.npt_flags[i]
    row["verdict"] = result.verdict
    return [row], {"verdict": result.verdict}


COMMANDS = {
    "two-mode": (cmd_two_mode, "output entanglement for one two-mode resource"),
    "three-mode": (cmd_three_mode, "pairwise and one-vs-two entanglement over symmetric three-mode resources"),
    "boundary": (cmd_boundary, "TMSV boundary curve of output vs input entanglement"),
    "scan-purity": (cmd_scan_purity, "nu~_- surface over (g, s) and the purity death point"),
    "sweep-temperature": (cmd_sweep_temperature, "best output entanglement against bath temperature"),
    "optimize-s": (cmd_optimize_s, "optimal TMSV squeezing"),
    "sample": (cmd_sample, "random mixed two-mode resources"),
    "classify": (cmd_classify, "tripartite inseparability of a three-mode output"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override one configuration key (repeatable)")
    common.add_argument("-o", "--output", help="output path ('-' for stdout)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--precision", type=int, help="significant digits for floats")
    common.add_argument("--seed", type=int)
    common.add_argument("--method", choices=("quadrature", "lyapunov"))
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="mechnet", description="Entanglement distribution to optomechanical networks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    p = {name: sub.add_parser(name, parents=[common], help=text) for name, (_, text) in COMMANDS.items()}

    p["two-mode"].add_argument("--s", type=float, default=2.501)
    p["two-mode"].add_argument("--d", type=float, default=0.0)
    p["two-mode"].add_argument("--g", type=float, default=1.0)
    p["two-mode"].add_argument("--lam", type=float, default=1.0)

    p["three-mode"].add_argument("--a", type=float)
    p["three-mode"].add_argument("--a-min", type=float, default=1.01)
    p["three-mode"].add_argument("--a-max", type=float, default=6.0)
    p["three-mode"].add_argument("--steps", type=int, default=60)

    p["boundary"].add_argument("--eps-max", type=float, default=3.5)
    p["boundary"].add_argument("--steps", type=int, default=100)
    p["boundary"].add_argument("--threshold", action="store_true", help="also locate the input threshold")

    p["scan-purity"].add_argument("--s-min", type=float, default=1.0)
    p["scan-purity"].add_argument("--s-max", type=float, default=8.0)
    p["scan-purity"].add_argument("--s-steps", type=int, default=36)
    p["scan-purity"].add_argument("--g-min", type=float, default=1.0)
    p["scan-purity"].add_argument("--g-max", type=float, default=6.0)
    p["scan-purity"].add_argument("--g-steps", type=int, default=26)
    p["scan-purity"].add_argument("--g-bracket", type=float, default=12.0,
                                  help="upper end of the bracket for the death-point search")

    p["sweep-temperature"].add_argument("--t-min", type=float, default=1e-6)
    p["sweep-temperature"].add_argument("--t-max", type=float, default=5e-2)
    p["sweep-temperature"].add_argument("--steps", type=int, default=25)

    p["optimize-s"].add_argument("--s-lo", type=float, default=1.2)
    p["optimize-s"].add_argument("--s-hi", type=float, default=6.0)

    p["sample"].add_argument("--n", type=int, default=1000)
    p["sample"].add_argument("--s-max", type=float, default=5.0)
    p["sample"].add_argument("--symmetric-fraction", type=float, default=0.0)
    p["sample"].add_argument("--check-boundary", action="store_true",
                             help="count records above the TMSV boundary")

    p["classify"].add_argument("--a", type=float)
    p["classify"].add_argument("--a1", type=float)
    p["classify"].add_argument("--a2", type=float)
    p["classify"].add_argument("--a3", type=float)
    return parser


def load_config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            cfg = parse_config(fh.read())
    pairs = []
    for i, item in enumerate(args.set, start=1):
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        pairs.append((i, key.strip(), value.strip()))
    for key in ("output", "format", "precision", "seed", "method"):
        value = getattr(args, key)
        if value is not None:
            pairs.append((key, key, str(value)))
    return apply_settings(cfg, pairs, source="override")


def run_command(name: str, args, cfg: RunConfig) -> tuple[list[dict], dict]:
    if name not in COMMANDS:
        raise ConfigError(f"unknown command {name!r}")
    return COMMANDS[name][0](args, cfg)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args)
        rows, summary = run_command(args.command, args, cfg)
        meta = {"command": args.command, "seed": cfg.seed, "version": __version__, "summary": summary}
        settings = {k: v for k, v in cfg.as_dict().items() if k != "output"}
        write_output(rows, cfg.output, cfg.format, cfg.precision, settings, meta)
    except OSError as exc:
        print(f"mechnet: I/O error: {exc}", file=sys.stderr)
        return 5
    except MechnetError as exc:
        print(f"mechnet: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"mechnet: invalid argument: {exc}", file=sys.stderr)
        return 2
    stream = sys.stderr if cfg.output in (None, "-") else sys.stdout
    for key, value in summary.items():
        print(f"{key} = {value:.9g}" if isinstance(value, float) else f"{key} = {value}", file=stream)
    return 0


if __name__ == "__main__":
    sys.exit(main())
