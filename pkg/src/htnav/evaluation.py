"""Post-training evaluation: success rate, trajectory length, elevation cost."""

import csv
import json
import math
from dataclasses import dataclass

import numpy as np

from .config import TrainConfig
from .env import NavEnv
from .policy import PolicyParameters, forward_mean, project_action, sample_action
from .training import EVAL_SALT
from .world import generate_world

EVAL_MODES = ("deterministic", "stochastic")


def elevation_cost(z_trace) -> float:
    """Euclidean norm of the successive z differences along one trajectory."""
    z = np.asarray(z_trace, dtype=float)
    if z.ndim != 1 or z.shape[0] < 1:
        raise ValueError("z_trace must be a non-empty 1-d sequence")
    if z.shape[0] == 1:
        return 0.0
    return float(np.linalg.norm(np.diff(z)))


@dataclass(frozen=True)
class EpisodeResult:
    episode: int
    cause: str
    steps: int
    episode_return: float
    elevation: float
    final_distance: float

    @property
    def success(self) -> bool:
        return self.cause == "goal"


@dataclass
class EvalReport:
    """Aggregate metrics over a batch of evaluation episodes.

    ``avg_traj_length`` averages successful episodes only (failures never
    reach the goal, so their step counts measure something else); the
    ``_all`` variant includes every episode.  ``elevation_cost`` averages
    all episodes, with a successful-only variant alongside.
    """

    episodes: int
    mode: str
    success_rate: float
    avg_traj_length: float
    avg_traj_length_all: float
    elevation_cost: float
    elevation_cost_successful: float
    rows: list[EpisodeResult]

    def __post_init__(self):
        if not 0.0 <= self.success_rate <= 100.0:
            raise ValueError(f"success_rate must be in [0, 100], got {self.success_rate}")


def _episode(world, params: PolicyParameters, cfg: TrainConfig, mode: str, rng, index: int) -> EpisodeResult:
    env = NavEnv(world, cfg.env, cfg.rewards, max_steps=cfg.max_steps)
    obs = env.reset()
    zs = [env.pose.z]
    total = 0.0
    steps = 0
    cause = "timeout"
    for _ in range(cfg.max_steps):
        x = obs.features(cfg.scenario)
        if mode == "deterministic":
            action = project_action(forward_mean(params, x), cfg.delta)
        else:
            action = sample_action(params, x, rng, cfg.delta).projected
        out = env.step(action)
        total += out.reward_components.total
        zs.append(env.pose.z)
        steps += 1
        obs = out.observation
        if out.done:
            cause = out.cause
            break
    return EpisodeResult(
        episode=index,
        cause=cause,
        steps=steps,
        episode_return=total,
        elevation=elevation_cost(zs),
        final_distance=obs.d_goal,
    )


def evaluate(
    params: PolicyParameters,
    cfg: TrainConfig,
    n_episodes: int,
    mode: str = "deterministic",
    seed: int = 0,
) -> EvalReport:
    """Run n_episodes on worlds drawn from the evaluation stream of ``seed``.

    Deterministic mode executes the projected location parameter mu(s);
    stochastic mode samples exactly as during training.
    """
    if n_episodes < 1:
        raise ValueError(f"n_episodes must be >= 1, got {n_episodes}")
    if mode not in EVAL_MODES:
        raise ValueError(f"mode must be one of {EVAL_MODES}, got {mode!r}")
    rows = []
    for i in range(n_episodes):
        world = generate_world(
            cfg.scenario, np.random.SeedSequence((seed, EVAL_SALT, i)), cfg.worldgen
        )
        rng = np.random.default_rng(np.random.SeedSequence((seed, EVAL_SALT, i, 1)))
        rows.append(_episode(world, params, cfg, mode, rng, i))
    successes = [r for r in rows if r.success]
    n_success = len(successes)
    success_rate = 100.0 * n_success / n_episodes
    avg_len = float(np.mean([r.steps for r in successes])) if successes else math.nan
    avg_len_all = float(np.mean([r.steps for r in rows]))
    elev_all = float(np.mean([r.elevation for r in rows]))
    elev_success = float(np.mean([r.elevation for r in successes])) if successes else math.nan
    return EvalReport(
        episodes=n_episodes,
        mode=mode,
        success_rate=success_rate,
        avg_traj_length=avg_len,
        avg_traj_length_all=avg_len_all,
        elevation_cost=elev_all,
        elevation_cost_successful=elev_success,
        rows=rows,
    )


def write_eval_rows_csv(report: EvalReport, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["episode", "cause", "steps", "return", "elevation_cost", "final_distance"])
        for r in report.rows:
            writer.writerow(
                [
                    r.episode,
                    r.cause,
                    r.steps,
                    repr(float(r.episode_return)),
                    repr(float(r.elevation)),
                    repr(float(r.final_distance)),
                ]
            )


def write_eval_summary_json(report: EvalReport, path) -> None:
    """Machine-readable summary: success %, average steps, elevation cost.

    Metrics that are undefined because no episode succeeded serialize as
    null rather than NaN so the file stays standard JSON.
    """

    def _num(v):
        return float(v) if math.isfinite(v) else None

    summary = {
        "episodes": report.episodes,
        "mode": report.mode,
        "success_rate": report.success_rate,
        "avg_traj_length_successful": _num(report.avg_traj_length),
        "avg_traj_length_all": report.avg_traj_length_all,
        "elevation_cost_all": report.elevation_cost,
        "elevation_cost_successful": _num(report.elevation_cost_successful),
    }
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
