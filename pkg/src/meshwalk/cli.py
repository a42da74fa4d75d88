"""Command-line front end.

Subcommands: ``simulate`` (one walk, joint/marginal/metrics/heatmap),
``ensemble`` (disorder-averaged variances vs. step count), ``calibrate``
(phase-shifter table) and ``phasemap`` (generate, inspect or extend maps).

Exit codes: 0 success, 2 configuration error, 3 numerical error, 4 I/O error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .calibration import calibration_table
from .config import ExperimentConfig, load_config
from .disorder import DisorderSpec, extend_phase_map
from .ensemble import EnsembleSummary, run_ensemble, write_ensemble_csv
from .errors import ConfigError, DomainError, NumericalError, ResourceError
from .io import (read_matrix_csv, read_phase_map, write_marginal_csv, write_matrix_csv,
                 write_metrics, write_phase_map, write_ppm)
from .lattice import check_phase_kind, evolve_amplitudes
from .metrics import (marginal, mean_position_variance, mean_R, position_variance,
                      relative_distance_distribution, scaling_fit, similarity, variance_R)
from .two_particle import JointDistribution, joint_from_columns

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4


def _out_dir(args: argparse.Namespace) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = load_config(args.config)
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ConfigError(f"--seed must be an unsigned 64-bit integer, got {args.seed}")
        cfg = cfg.with_seed(args.seed)
    return cfg


def _figures(args: argparse.Namespace, cfg: ExperimentConfig) -> bool:
    return cfg.outputs.figures and not args.no_figures


def simulate(cfg: ExperimentConfig, out: Path, figures: bool = True) -> dict[str, object]:
    """Run one walk and write the requested artifacts into ``out``."""
    walk = cfg.require_walk()
    phase_map = cfg.phase_map()
    a, b = walk.input_a, walk.input_b
    amps = evolve_amplitudes(walk, phase_map, [a, b])
    joint = joint_from_columns(amps[:, 0], amps[:, 1], a, b, cfg.symmetry)
    joint.check()
    single = marginal(joint)
    p_r = relative_distance_distribution(joint)

    metrics: dict[str, object] = {
        "n_steps": walk.n_steps,
        "mode_count": walk.mode_count,
        "input_a": a,
        "input_b": b,
        "splitting_ratio": walk.splitting_ratio,
        "disorder_kind": phase_map.kind,
        "seed": cfg.seed,
        "amplitude": float(cfg.amplitude),
        "symmetry": cfg.symmetry.tag,
        "exchange_phase": cfg.symmetry.phase,
        "total_probability": float(joint.matrix.sum()),
        "var_xm": mean_position_variance(joint),
        "var_r": variance_R(joint),
        "mean_r": mean_R(joint),
        "var_single": position_variance(single),
    }
    if cfg.outputs.reference is not None:
        metrics["similarity"] = _reference_similarity(cfg.outputs.reference, joint, single)
    for r, value in enumerate(p_r):
        metrics[f"p_r_{r}"] = float(value)

    write_phase_map(out / "phase_map.csv", phase_map)
    if cfg.outputs.joint:
        write_matrix_csv(out / "joint.csv", joint.matrix)
    if cfg.outputs.marginal:
        write_marginal_csv(out / "marginal.csv", single)
    if cfg.outputs.metrics:
        write_metrics(out / "metrics.txt", metrics)
    if cfg.outputs.heatmap:
        write_ppm(out / "heatmap.ppm", joint.matrix, scale=cfg.outputs.heatmap_scale)
    if figures:
        from .plotting import plot_joint, plot_marginal
        title = f"{walk.n_steps}-step {phase_map.kind}, {cfg.symmetry.label}"
        plot_joint(joint.matrix, out / "joint.png", title)
        plot_marginal(single, out / "marginal.png", title)
    return metrics


def _reference_similarity(path: Path, joint: JointDistribution, single: np.ndarray) -> float:
    ref = read_matrix_csv(path)
    try:
        if ref.shape == joint.matrix.shape:
            return similarity(ref, joint.matrix)
        if ref.size == single.size:
            return similarity(ref.ravel(), single)
    except DomainError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    raise ConfigError(
        f"{path}: reference shape {ref.shape} matches neither the joint {joint.matrix.shape} "
        f"nor the marginal ({single.size},) distribution"
    )


def ensemble(cfg: ExperimentConfig, out: Path, workers: int = 1, figures: bool = True) -> EnsembleSummary:
    steps = cfg.ensemble_steps
    if steps is None:
        steps = (cfg.require_walk().n_steps,)
    mode_count = None
    splitting = 0.5
    if cfg.walk is not None:
        splitting = cfg.walk.splitting_ratio
        if cfg.walk.mode_count >= 2 * max(steps) + 2:
            mode_count = cfg.walk.mode_count
    try:
        summary = run_ensemble(
            cfg.disorder_kind, steps, cfg.ensemble_size, seed=cfg.seed, amplitude=cfg.amplitude,
            symmetry=cfg.symmetry, mode_count=mode_count, splitting_ratio=splitting, workers=workers,
        )
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    write_ensemble_csv(out / "ensemble.csv", summary)
    header = "n," + ",".join(f"p{m}" for m in range(summary.mode_count))
    write_matrix_csv(out / "ensemble_marginal.csv",
                     np.column_stack([np.asarray(summary.steps, float), summary.mean_marginal]),
                     header=header)
    info: dict[str, object] = {
        "disorder_kind": summary.kind,
        "amplitude": summary.amplitude,
        "symmetry": summary.symmetry.tag,
        "exchange_phase": summary.symmetry.phase,
        "ensemble_size": summary.ensemble_size,
        "seed_first": summary.seeds[0],
        "seed_last": summary.seeds[-1],
        "mode_count": summary.mode_count,
        "steps": list(summary.steps),
    }
    points = [(n, v) for n, v in zip(summary.steps, summary.mean_var_xm) if v > 0]
    if len(points) >= 4:
        fit = scaling_fit(points)
        info["var_xm_exponent"] = fit.exponent
        info["var_xm_fit_r_squared"] = fit.r_squared
    write_metrics(out / "ensemble_metrics.txt", info)
    if figures:
        from .plotting import plot_ensemble
        plot_ensemble(summary, out / "ensemble.png")
    return summary


def calibrate(cfg: ExperimentConfig, out: Path, figures: bool = True) -> np.ndarray:
    geom = cfg.geometry
    d_values = np.linspace(0.0, geom.d_max, cfg.calibration_points)
    table = calibration_table(geom, d_values, n_eff=cfg.n_eff)
    with open(out / "calibration.csv", "w", newline="\n") as fh:
        fh.write("d,delta_l_um,phi_rad\n")
        for row in table:
            fh.write(",".join("%.17g" % v for v in row) + "\n")
    if figures:
        from .plotting import plot_calibration
        plot_calibration(table, out / "calibration.png")
    return table


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _config(args)
    out = _out_dir(args)
    metrics = simulate(cfg, out, figures=_figures(args, cfg))
    print(f"var_xm = {metrics['var_xm']:.6g}  var_r = {metrics['var_r']:.6g}  -> {out}")
    return EXIT_OK


def _cmd_ensemble(args: argparse.Namespace) -> int:
    cfg = _config(args)
    out = _out_dir(args)
    summary = ensemble(cfg, out, workers=args.threads, figures=_figures(args, cfg))
    for n, v, e in zip(summary.steps, summary.mean_var_xm, summary.se_var_xm):
        print(f"n = {n:4d}  <Var(x_M)> = {v:.6g} +/- {e:.2g}")
    return EXIT_OK


def _cmd_calibrate(args: argparse.Namespace) -> int:
    cfg = _config(args)
    out = _out_dir(args)
    table = calibrate(cfg, out, figures=_figures(args, cfg))
    print(f"d_max = {table[-1, 0]:.4g}: dl = {table[-1, 1]:.6g} um, phi = {table[-1, 2]:.6g} rad -> {out}")
    return EXIT_OK


def _cmd_phasemap(args: argparse.Namespace) -> int:
    if args.action == "inspect":
        if not args.path:
            raise ConfigError("phasemap inspect needs a CSV path")
        pm = read_phase_map(args.path)
        print(f"kind = {pm.kind}")
        print(f"shape = {pm.mode_count} modes x {pm.n_steps} steps")
        print(f"range = [{pm.phases.min():.6g}, {pm.phases.max():.6g}]")
        verdicts = []
        for kind in ("ordered", "static", "dynamic"):
            try:
                check_phase_kind(pm.phases, kind)
                verdicts.append(kind)
            except DomainError:
                pass
        print(f"consistent_with = {', '.join(verdicts) or 'fluctuating/custom'}")
        return EXIT_OK

    cfg = _config(args)
    out = _out_dir(args)
    if args.action == "generate":
        pm = cfg.phase_map()
    else:
        if not args.path or args.steps is None:
            raise ConfigError("phasemap extend needs a CSV path and --steps")
        base = read_phase_map(args.path)
        modes = args.modes if args.modes is not None else 2 * args.steps + 2
        try:
            spec = DisorderSpec(base.kind, cfg.seed, args.steps, modes, cfg.amplitude)
            pm = extend_phase_map(base, args.steps, modes, spec)
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
    write_phase_map(out / "phase_map.csv", pm)
    print(f"{pm.kind} phase map {pm.mode_count} x {pm.n_steps} -> {out / 'phase_map.csv'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="INI experiment configuration")
    common.add_argument("--out-dir", default=".", help="output directory (created if missing)")
    common.add_argument("--seed", type=int, help="override [disorder] seed")
    common.add_argument("--threads", type=int, default=1, help="ensemble workers, 0 = all CPUs")
    common.add_argument("--no-figures", action="store_true", help="skip matplotlib PNG figures")

    parser = argparse.ArgumentParser(prog="meshwalk", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common], help="single walk").set_defaults(func=_cmd_simulate)
    sub.add_parser("ensemble", parents=[common], help="disorder ensemble").set_defaults(func=_cmd_ensemble)
    sub.add_parser("calibrate", parents=[common], help="phase-shifter table").set_defaults(func=_cmd_calibrate)
    pm = sub.add_parser("phasemap", parents=[common], help="generate, inspect or extend phase maps")
    pm.add_argument("action", choices=("generate", "inspect", "extend"))
    pm.add_argument("path", nargs="?", help="phase-map CSV (inspect, extend)")
    pm.add_argument("--steps", type=int, help="target step count (extend)")
    pm.add_argument("--modes", type=int, help="target mode count (extend), default 2*steps+2")
    pm.set_defaults(func=_cmd_phasemap)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, ResourceError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except DomainError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
