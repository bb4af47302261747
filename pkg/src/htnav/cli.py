"""Command-line entry point: train, eval, compare, surface.

Every command writes into one run directory (default root from the
HTNAV_OUT environment variable, else ./runs) containing a manifest that
lists every file the command produced.  Outputs are byte-identical
across reruns with the same inputs; the manifest is the only file that
carries a timestamp.
"""

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from .checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from .config import (
    ConfigError,
    TrainConfig,
    apply_overrides,
    config_to_dict,
    load_config,
    with_family,
)
from .env import observation_dim
from .evaluation import EVAL_MODES, evaluate, write_eval_rows_csv, write_eval_summary_json
from .rewards import reward_surface, write_surface_csv
from .training import (
    TrainingAbort,
    run_comparison,
    train,
    write_comparison_csv,
    write_curves_csv,
    write_diagnostics_csv,
)
from .world import SCENARIOS, GenerationError

VERSION = "0.1.0"

log = logging.getLogger("htnav")

MANIFEST_FORMAT = "htnav-manifest-v1"


def _parse_seeds(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"--seeds expects comma-separated integers, got {text!r}") from exc


def _parse_set_pairs(pairs) -> dict:
    overrides = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise ConfigError(f"--set expects key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        overrides[key.strip()] = value.strip()
    return overrides


def _build_config(args) -> TrainConfig:
    """Defaults, then config file, then flag overrides, in rising precedence."""
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        cfg = load_config(path)
    else:
        cfg = TrainConfig()
    overrides = {}
    if getattr(args, "scenario", None):
        overrides["scenario"] = args.scenario
    if getattr(args, "family", None):
        overrides["family"] = args.family
    if getattr(args, "episodes", None) is not None:
        overrides["episodes"] = args.episodes
    if getattr(args, "seeds", None):
        overrides["seeds"] = _parse_seeds(args.seeds)
    overrides.update(_parse_set_pairs(getattr(args, "set", None)))
    if overrides:
        cfg = apply_overrides(cfg, overrides)
    return cfg


def _run_dir(args, default_name: str) -> Path:
    if getattr(args, "out", None):
        out = Path(args.out)
    else:
        root = Path(os.environ.get("HTNAV_OUT", "runs"))
        out = root / default_name
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out_dir: Path, command: str, cfg: TrainConfig | None, files) -> None:
    manifest = {
        "format": MANIFEST_FORMAT,
        "command": command,
        "version": VERSION,
        "created_unix": time.time(),
        "config": config_to_dict(cfg) if cfg is not None else None,
        "seeds": list(cfg.seeds) if cfg is not None else None,
        "files": sorted(files),
    }
    with open(out_dir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_train(args) -> int:
    cfg = _build_config(args)
    out = _run_dir(args, f"train-{cfg.scenario}-{cfg.family}")
    log.info("training family=%s scenario=%s seeds=%s episodes=%d",
             cfg.family, cfg.scenario, list(cfg.seeds), cfg.episodes)
    record = train(cfg)
    files = ["curve.csv", "diagnostics.csv"]
    write_curves_csv(record, out / "curve.csv")
    write_diagnostics_csv(record, out / "diagnostics.csv")
    for run in record.seed_runs:
        name = f"checkpoint_seed{run.seed}.json"
        save_checkpoint(out / name, run.params, run.opt_state)
        files.append(name)
        if len(run):
            tail = run.returns[-20:]
            log.info("seed %d: mean return over final %d episodes = %.3f",
                     run.seed, len(tail), float(np.mean(tail)))
    _write_manifest(out, "train", cfg, files)
    log.info("wrote %s", out)
    return 0


def cmd_eval(args) -> int:
    params, _ = load_checkpoint(args.checkpoint)
    cfg = _build_config(args)
    expected = observation_dim(cfg.scenario, cfg.env.n_scan_rays)
    if params.spec.input_dim != expected:
        raise CheckpointError(
            f"checkpoint expects {params.spec.input_dim} input features but "
            f"scenario {cfg.scenario!r} provides {expected}"
        )
    if params.family != cfg.family:
        raise CheckpointError(
            f"checkpoint family {params.family!r} does not match config family {cfg.family!r}"
        )
    report = evaluate(params, cfg, args.n, mode=args.mode, seed=args.eval_seed)
    out = _run_dir(args, f"eval-{cfg.scenario}-{cfg.family}")
    write_eval_rows_csv(report, out / "eval_rows.csv")
    write_eval_summary_json(report, out / "eval_summary.json")
    _write_manifest(out, "eval", cfg, ["eval_rows.csv", "eval_summary.json"])
    log.info("success_rate: %.1f%%", report.success_rate)
    log.info("avg_traj_length (successful): %s", report.avg_traj_length)
    log.info("elevation_cost (all episodes): %s", report.elevation_cost)
    log.info("wrote %s", out)
    return 0


def cmd_compare(args) -> int:
    cfg = _build_config(args)
    out = _run_dir(args, f"compare-{cfg.scenario}")
    result = run_comparison(with_family(cfg, "cauchy"), with_family(cfg, "gaussian"))
    files = ["comparison.csv"]
    write_comparison_csv(result, out / "comparison.csv")
    for record in (result.cauchy, result.gaussian):
        write_curves_csv(record, out / f"curve_{record.family}.csv")
        write_diagnostics_csv(record, out / f"diagnostics_{record.family}.csv")
        files += [f"curve_{record.family}.csv", f"diagnostics_{record.family}.csv"]
        for run in record.seed_runs:
            name = f"checkpoint_{record.family}_seed{run.seed}.json"
            save_checkpoint(out / name, run.params, run.opt_state)
            files.append(name)
    _write_manifest(out, "compare", cfg, files)
    if cfg.episodes:
        window = min(20, cfg.episodes)
        cm = float(result.cauchy.mean_curve()[-window:].mean())
        gm = float(result.gaussian.mean_curve()[-window:].mean())
        log.info("final-%d-episode mean return: cauchy %.3f, gaussian %.3f", window, cm, gm)
    log.info("wrote %s", out)
    return 0


def cmd_surface(args) -> int:
    cfg = _build_config(args) if args.config or args.set else TrainConfig()
    d_axis, other_axis, values = reward_surface(
        args.axes,
        cfg.rewards,
        n_d=args.n_d,
        n_other=args.n_other,
        d_max=args.d_max,
        initial_distance=args.initial_distance,
        d_collision=cfg.env.d_collision,
        scan_max=cfg.env.scan_max_range,
    )
    out = _run_dir(args, f"surface-{args.axes}")
    label = "alpha" if args.axes == "dist_angle" else "min_scan"
    write_surface_csv(out / "surface.csv", d_axis, other_axis, values, label)
    _write_manifest(out, "surface", None, ["surface.csv"])
    log.info("wrote %s", out / "surface.csv")
    return 0


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file (defaults apply if omitted)")
    p.add_argument("--scenario", choices=SCENARIOS)
    p.add_argument("--family", choices=("cauchy", "gaussian"))
    p.add_argument("--episodes", type=int)
    p.add_argument("--seeds", help="comma-separated seed list, e.g. 0,1,2")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override any config key, dotted for nested (rewards.beta_g=50)")
    p.add_argument("--out", help="output directory (default: $HTNAV_OUT/<run-name>)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="htnav",
        description="Heavy-tailed policy-gradient navigation: train, evaluate, compare, plot data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train one policy family over the configured seeds")
    _add_config_flags(p_train)
    p_train.set_defaults(func=cmd_train)

    p_eval = sub.add_parser("eval", help="evaluate a checkpoint")
    p_eval.add_argument("checkpoint", help="checkpoint JSON written by train/compare")
    _add_config_flags(p_eval)
    p_eval.add_argument("-n", type=int, default=50, help="number of evaluation episodes")
    p_eval.add_argument("--mode", choices=EVAL_MODES, default="deterministic")
    p_eval.add_argument("--eval-seed", type=int, default=0,
                        help="seed for the evaluation world/action streams")
    p_eval.set_defaults(func=cmd_eval)

    p_cmp = sub.add_parser("compare", help="train both families on shared seeds and worlds")
    _add_config_flags(p_cmp)
    p_cmp.set_defaults(func=cmd_compare)

    p_surf = sub.add_parser("surface", help="export a reward surface grid as CSV")
    _add_config_flags(p_surf)
    p_surf.add_argument("--axes", choices=("dist_angle", "dist_scan"), default="dist_angle")
    p_surf.add_argument("--n-d", type=int, default=200, help="grid points along the distance axis")
    p_surf.add_argument("--n-other", type=int, default=200, help="grid points along the other axis")
    p_surf.add_argument("--d-max", type=float, default=40.0)
    p_surf.add_argument("--initial-distance", type=float, default=None,
                        help="episode start distance anchoring the halfway bump")
    p_surf.set_defaults(func=cmd_surface)
    return parser


def main(argv=None) -> int:
    if not logging.getLogger().handlers:
        logging.basicConfig(level=logging.INFO, format="%(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, CheckpointError) as exc:
        log.error("error: %s", exc)
        return 2
    except FileNotFoundError as exc:
        log.error("error: file not found: %s", exc.filename or exc)
        return 2
    except (TrainingAbort, GenerationError) as exc:
        log.error("error: %s", exc)
        return 1
    except ValueError as exc:
        log.error("error: %s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
