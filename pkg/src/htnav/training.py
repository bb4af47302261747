"""Training loop: rollout, estimate, clip, ascend, over seeds and families.

One iteration consumes exactly one episode.  All randomness flows
through named substreams of the run seed, so a run is bit-reproducible
and the two policy families see identical per-episode worlds when
trained on the same seed.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .config import ConfigError, TrainConfig, config_to_dict
from .env import NavEnv, observation_dim
from .estimator import estimate, sample_horizon
from .net import ApproximatorSpec
from .optimizer import OptimizerState, ascent_step
from .policy import PolicyParameters, init_policy, sample_action
from .trajectory import Trajectory
from .world import World, generate_world, world_hash

# substream salts: worlds must not depend on the family or the episode
# outcomes, so each purpose gets its own SeedSequence branch
WORLD_SALT = 11
INIT_SALT = 13
ACTION_SALT = 19
EVAL_SALT = 23

PLATEAU_WINDOW = 30


class TrainingAbort(RuntimeError):
    """A gradient went non-finite; the run stops rather than limping on."""


def policy_spec(cfg: TrainConfig) -> ApproximatorSpec:
    return ApproximatorSpec(
        input_dim=observation_dim(cfg.scenario, cfg.env.n_scan_rays),
        hidden_layers=cfg.hidden_layers,
        output_dim=2,
    )


def world_for_episode(cfg: TrainConfig, seed: int, episode: int) -> World:
    index = 0 if cfg.fixed_world else episode
    ss = np.random.SeedSequence((seed, WORLD_SALT, index))
    return generate_world(cfg.scenario, ss, cfg.worldgen)


def episode_rng(seed: int, episode: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, ACTION_SALT, episode)))


def initial_params(cfg: TrainConfig, seed: int) -> PolicyParameters:
    rng = np.random.default_rng(np.random.SeedSequence((seed, INIT_SALT)))
    return init_policy(policy_spec(cfg), cfg.sigma, cfg.family, rng)


def rollout(
    world: World,
    params: PolicyParameters,
    cfg: TrainConfig,
    rng: np.random.Generator,
) -> Trajectory:
    """Collect one episode: sample the horizon, then act until done or budget."""
    env = NavEnv(world, cfg.env, cfg.rewards, max_steps=cfg.max_steps)
    obs = env.reset()
    horizon = sample_horizon(cfg.gamma, rng)
    budget = min(horizon + 1, cfg.max_steps)
    feats, raws, projs, logds = [], [], [], []
    rewards, comps, poses, causes = [], [], [], []
    for _ in range(budget):
        x = obs.features(cfg.scenario)
        s = sample_action(params, x, rng, cfg.delta)
        out = env.step(s.projected)
        feats.append(x)
        raws.append(s.raw)
        projs.append(s.projected)
        logds.append(s.log_density)
        rc = out.reward_components
        rewards.append(rc.total)
        comps.append([rc.heading, rc.dist, rc.obs, rc.stable, rc.total])
        p = env.pose
        poses.append([p.x, p.y, p.psi, p.z, p.roll, p.pitch])
        causes.append(out.cause)
        obs = out.observation
        if out.done:
            break
    return Trajectory(
        features=np.asarray(feats),
        raw_actions=np.asarray(raws),
        projected_actions=np.asarray(projs),
        rewards=np.asarray(rewards),
        components=np.asarray(comps),
        poses=np.asarray(poses),
        causes=causes,
        log_densities=np.asarray(logds),
        horizon_sampled=horizon,
        initial_distance=env.reward_state.initial_distance,
    )


@dataclass
class SeedRun:
    """Everything one (seed, family) run produced."""

    seed: int
    family: str
    returns: np.ndarray
    steps: np.ndarray
    causes: list[str]
    grad_raw_inf: np.ndarray
    grad_clipped_inf: np.ndarray
    horizon_sampled: np.ndarray
    horizon_used: np.ndarray
    max_abs_action: np.ndarray
    world_hashes: list[str]
    params: PolicyParameters
    opt_state: OptimizerState

    def __len__(self) -> int:
        return int(self.returns.shape[0])


@dataclass
class RunRecord:
    scenario: str
    family: str
    episodes: int
    seed_runs: list[SeedRun]

    @property
    def seeds(self) -> tuple:
        return tuple(run.seed for run in self.seed_runs)

    def returns_matrix(self) -> np.ndarray:
        """(n_seeds, episodes) stack; requires equal-length runs."""
        lengths = {len(run) for run in self.seed_runs}
        if len(lengths) != 1:
            raise ValueError(f"seed runs have unequal lengths {sorted(lengths)}")
        return np.stack([run.returns for run in self.seed_runs])

    def mean_curve(self) -> np.ndarray:
        return self.returns_matrix().mean(axis=0)

    def std_curve(self) -> np.ndarray:
        return self.returns_matrix().std(axis=0)


def train_seed(cfg: TrainConfig, seed: int) -> SeedRun:
    """Run one seed start to finish; pure function of (cfg, seed)."""
    params = initial_params(cfg, seed)
    state = OptimizerState.fresh(
        params.spec.num_weights,
        eta=cfg.eta,
        beta1=cfg.beta1,
        beta2=cfg.beta2,
        epsilon=cfg.epsilon,
        bias_correction=cfg.bias_correction,
    )
    returns, steps, causes = [], [], []
    raw_infs, clip_infs = [], []
    h_sampled, h_used, max_acts = [], [], []
    hashes = []
    best = -np.inf
    best_at = 0
    for k in range(cfg.episodes):
        world = world_for_episode(cfg, seed, k)
        traj = rollout(world, params, cfg, episode_rng(seed, k))
        est = estimate(params, traj, cfg.gamma, cfg.phi)
        if not np.all(np.isfinite(est.raw)):
            raise TrainingAbort(
                f"non-finite gradient (seed {seed}, episode {k}); "
                "this indicates a bug, not a tuning problem"
            )
        state, theta = ascent_step(state, params.weights, est.clipped)
        params = params.with_weights(theta)

        returns.append(traj.episode_return)
        steps.append(len(traj))
        causes.append(traj.final_cause)
        raw_infs.append(float(np.abs(est.raw).max()))
        clip_infs.append(float(np.abs(est.clipped).max()))
        h_sampled.append(est.horizon_sampled)
        h_used.append(est.horizon_used)
        max_acts.append(float(np.abs(traj.projected_actions).max()))
        hashes.append(world_hash(world))

        if cfg.plateau_patience is not None:
            window_mean = float(np.mean(returns[-PLATEAU_WINDOW:]))
            if window_mean > best:
                best = window_mean
                best_at = k
            elif k - best_at >= cfg.plateau_patience:
                break
    return SeedRun(
        seed=seed,
        family=cfg.family,
        returns=np.asarray(returns, dtype=float),
        steps=np.asarray(steps, dtype=int),
        causes=causes,
        grad_raw_inf=np.asarray(raw_infs, dtype=float),
        grad_clipped_inf=np.asarray(clip_infs, dtype=float),
        horizon_sampled=np.asarray(h_sampled, dtype=int),
        horizon_used=np.asarray(h_used, dtype=int),
        max_abs_action=np.asarray(max_acts, dtype=float),
        world_hashes=hashes,
        params=params,
        opt_state=state,
    )


def train(cfg: TrainConfig) -> RunRecord:
    runs = [train_seed(cfg, seed) for seed in cfg.seeds]
    return RunRecord(scenario=cfg.scenario, family=cfg.family, episodes=cfg.episodes, seed_runs=runs)


@dataclass
class ComparisonResult:
    cauchy: RunRecord
    gaussian: RunRecord

    def aligned_curves(self) -> np.ndarray:
        """(episodes, 5) table: episode, cauchy mean/std, gaussian mean/std."""
        cm, cs = self.cauchy.mean_curve(), self.cauchy.std_curve()
        gm, gs = self.gaussian.mean_curve(), self.gaussian.std_curve()
        if cm.shape != gm.shape:
            raise ValueError("family curves have different lengths")
        episodes = np.arange(cm.shape[0], dtype=float)
        return np.column_stack([episodes, cm, cs, gm, gs])


def run_comparison(cfg_cauchy: TrainConfig, cfg_gaussian: TrainConfig) -> ComparisonResult:
    """Train both families on identical seeds and worlds."""
    if cfg_cauchy.family != "cauchy" or cfg_gaussian.family != "gaussian":
        raise ConfigError("run_comparison expects a cauchy config and a gaussian config")
    if cfg_cauchy.seeds != cfg_gaussian.seeds:
        raise ConfigError(
            f"seed lists differ: {cfg_cauchy.seeds} vs {cfg_gaussian.seeds}"
        )
    a = config_to_dict(cfg_cauchy)
    b = config_to_dict(cfg_gaussian)
    a.pop("family")
    b.pop("family")
    if a != b:
        raise ConfigError("comparison configs must be identical except for family")
    return ComparisonResult(cauchy=train(cfg_cauchy), gaussian=train(cfg_gaussian))


def write_curves_csv(record: RunRecord, path) -> None:
    """One row per (seed, episode); floats via repr for exact round-trips."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["seed", "episode", "return", "steps", "cause"])
        for run in record.seed_runs:
            for k in range(len(run)):
                writer.writerow(
                    [run.seed, k, repr(float(run.returns[k])), int(run.steps[k]), run.causes[k]]
                )


def write_diagnostics_csv(record: RunRecord, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "seed",
                "iteration",
                "grad_raw_inf",
                "grad_clipped_inf",
                "horizon_sampled",
                "horizon_used",
                "max_abs_action",
            ]
        )
        for run in record.seed_runs:
            for k in range(len(run)):
                writer.writerow(
                    [
                        run.seed,
                        k,
                        repr(float(run.grad_raw_inf[k])),
                        repr(float(run.grad_clipped_inf[k])),
                        int(run.horizon_sampled[k]),
                        int(run.horizon_used[k]),
                        repr(float(run.max_abs_action[k])),
                    ]
                )


def write_comparison_csv(result: ComparisonResult, path) -> None:
    table = result.aligned_curves()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["episode", "cauchy_mean", "cauchy_std", "gaussian_mean", "gaussian_std"])
        for row in table:
            writer.writerow([int(row[0])] + [repr(float(v)) for v in row[1:]])
