#!/usr/bin/env python3
"""Uneven-terrain comparison: train both families, then evaluate elevation cost.

Trains on procedurally generated hilly worlds, evaluates each trained seed
deterministically on held-out worlds, and prints the per-family table of
success rate, trajectory length, and elevation cost.
"""

import argparse
import math
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from htnav.checkpoint import save_checkpoint
from htnav.config import TrainConfig, with_family
from htnav.env import EnvConfig
from htnav.evaluation import evaluate
from htnav.training import run_comparison, write_curves_csv
from htnav.world import WorldGenConfig


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--episodes", type=int, default=400)
    parser.add_argument("--eval-episodes", type=int, default=50)
    parser.add_argument("--eta", type=float, default=0.05)
    parser.add_argument("--out", default="runs/elevation")
    args = parser.parse_args()

    # faster robot and a looser spawn-misalignment floor keep desk-scale
    # training long enough to see terrain interaction within the budget
    cfg = TrainConfig(
        scenario="uneven_terrain",
        episodes=args.episodes,
        eta=args.eta,
        env=EnvConfig(v_max=2.0),
        worldgen=WorldGenConfig(min_start_misalignment=math.pi / 4),
    )
    result = run_comparison(cfg, with_family(cfg, "gaussian"))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    print(f"episodes={cfg.episodes} eta={cfg.eta} seeds={list(cfg.seeds)}")
    print(f"{'family':>8} {'success%':>9} {'steps(all)':>11} {'elev cost':>10}")
    for record in (result.cauchy, result.gaussian):
        write_curves_csv(record, out / f"curve_{record.family}.csv")
        rates, lengths, costs = [], [], []
        for run in record.seed_runs:
            save_checkpoint(
                out / f"checkpoint_{record.family}_seed{run.seed}.json", run.params, run.opt_state
            )
            report = evaluate(
                run.params, cfg, args.eval_episodes, mode="deterministic", seed=run.seed
            )
            rates.append(report.success_rate)
            lengths.append(report.avg_traj_length_all)
            costs.append(report.elevation_cost)
        print(
            f"{record.family:>8} {np.mean(rates):9.1f} {np.mean(lengths):11.1f} "
            f"{np.mean(costs):10.4f}"
        )
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
