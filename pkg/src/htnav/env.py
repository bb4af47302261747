"""Differential-drive navigation environment over procedural worlds.

Unicycle kinematics on a heightmap, an optional 360-degree range scan,
scenario-specific observations, sparse rewards, and termination logic.
Dynamics are purely kinematic and fully deterministic: the only
randomness in a rollout comes from the policy.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import rewards as rw
from .geometry import bounds_walls, scan_ranges, wrap_angle
from .terrain import RobotPose, pose_from_terrain
from .world import World

CAUSES = ("running", "goal", "collision", "flip_over", "timeout")

# feature scaling constants: the policy consumes O(1) inputs
D_GOAL_SCALE = 20.0
TILT_SCALE = math.pi / 2


@dataclass
class EnvConfig:
    v_max: float = 1.0
    omega_max: float = 1.0
    dt: float = 0.1
    goal_radius: float = 1.0
    d_collision: float = 0.5
    flip_threshold: float = math.pi / 3
    n_scan_rays: int = 720
    scan_max_range: float = 10.0

    def __post_init__(self):
        if not (self.v_max > 0 and self.omega_max > 0 and self.dt > 0):
            raise ValueError("v_max, omega_max, dt must be positive")
        if not (self.goal_radius > 0 and self.d_collision > 0):
            raise ValueError("goal_radius and d_collision must be positive")
        if self.n_scan_rays < 1:
            raise ValueError("n_scan_rays must be >= 1")


@dataclass(frozen=True)
class Observation:
    """Physical-unit state snapshot; ``scan`` is populated only when scanned."""

    d_goal: float
    alpha_goal: float
    prev_action: np.ndarray
    roll: float
    pitch: float
    scan: np.ndarray | None = None

    def features(self, scenario: str) -> np.ndarray:
        """Scaled feature vector consumed by the policy (4 / 4+scan / 6 dims)."""
        base = [
            self.d_goal / D_GOAL_SCALE,
            self.alpha_goal / math.pi,
            float(self.prev_action[0]),
            float(self.prev_action[1]),
        ]
        if scenario == "goal_reaching":
            return np.asarray(base)
        if scenario == "obstacle_avoidance":
            if self.scan is None:
                raise ValueError("obstacle_avoidance observations need a scan")
            return np.concatenate([base, self.scan / 10.0])
        if scenario == "uneven_terrain":
            return np.asarray(base + [self.roll / TILT_SCALE, self.pitch / TILT_SCALE])
        raise ValueError(f"unknown scenario {scenario!r}")


class RewardBreakdown(NamedTuple):
    heading: float
    dist: float
    obs: float
    stable: float
    total: float


@dataclass(frozen=True)
class StepOutcome:
    observation: Observation
    reward_components: RewardBreakdown
    done: bool
    cause: str


def observation_dim(scenario: str, n_scan_rays: int = 720) -> int:
    return {"goal_reaching": 4, "obstacle_avoidance": 4 + n_scan_rays, "uneven_terrain": 6}[scenario]


def goal_geometry(x: float, y: float, psi: float, goal) -> tuple[float, float]:
    """Planar distance to the goal and the signed heading offset in (-pi, pi]."""
    dx = goal[0] - x
    dy = goal[1] - y
    d = math.hypot(dx, dy)
    alpha = wrap_angle(math.atan2(dy, dx) - psi)
    return d, alpha


def kinematic_step(
    x: float, y: float, psi: float, action, cfg: EnvConfig
) -> tuple[float, float, float]:
    """Unicycle update: commands are the projected action scaled by the limits."""
    v = float(action[0]) * cfg.v_max
    w = float(action[1]) * cfg.omega_max
    nx = x + v * math.cos(psi) * cfg.dt
    ny = y + v * math.sin(psi) * cfg.dt
    return nx, ny, wrap_angle(psi + w * cfg.dt)


class NavEnv:
    """One rollout's worth of simulation state.

    Owns the pose, the step counter, and the per-episode reward latches.
    The world boundary acts as a wall: positions clamp to the bounds and
    the scanner sees the four boundary segments.
    """

    def __init__(
        self,
        world: World,
        env_cfg: EnvConfig | None = None,
        reward_cfg: rw.RewardConfig | None = None,
        max_steps: int = 300,
    ):
        if max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {max_steps}")
        self.world = world
        self.cfg = env_cfg or EnvConfig()
        self.reward_cfg = reward_cfg or rw.RewardConfig()
        self.max_steps = max_steps
        self.scenario = world.scenario
        self._scan_obstacles = list(world.obstacles) + bounds_walls(world.bounds)
        self.pose: RobotPose | None = None
        self.steps = 0
        self.reward_state: rw.EpisodeRewardState | None = None
        self._prev_action = np.zeros(2)

    def _scan(self, pose: RobotPose) -> np.ndarray:
        return scan_ranges(
            (pose.x, pose.y),
            pose.psi,
            self._scan_obstacles,
            n_rays=self.cfg.n_scan_rays,
            max_range=self.cfg.scan_max_range,
        )

    def _observe(self, pose: RobotPose) -> Observation:
        d, alpha = goal_geometry(pose.x, pose.y, pose.psi, self.world.goal)
        scan = self._scan(pose) if self.scenario == "obstacle_avoidance" else None
        return Observation(
            d_goal=d,
            alpha_goal=alpha,
            prev_action=self._prev_action.copy(),
            roll=pose.roll,
            pitch=pose.pitch,
            scan=scan,
        )

    def reset(self) -> Observation:
        sx, sy, psi = self.world.start_pose
        self.pose = pose_from_terrain(self.world.heightmap, sx, sy, psi)
        self.steps = 0
        self._prev_action = np.zeros(2)
        d0, _ = goal_geometry(sx, sy, psi, self.world.goal)
        self.reward_state = rw.EpisodeRewardState(initial_distance=d0)
        return self._observe(self.pose)

    def step(self, projected_action) -> StepOutcome:
        """Advance one tick with an already-projected action in [-delta, delta]^2."""
        if self.pose is None:
            raise RuntimeError("call reset() before step()")
        action = np.asarray(projected_action, dtype=float)
        x, y, psi = kinematic_step(self.pose.x, self.pose.y, self.pose.psi, action, self.cfg)
        x0, y0, x1, y1 = self.world.bounds
        x = min(max(x, x0), x1)
        y = min(max(y, y0), y1)
        pose = pose_from_terrain(self.world.heightmap, x, y, psi)
        self.pose = pose
        self.steps += 1
        self._prev_action = action.copy()

        obs = self._observe(pose)
        heading = rw.r_heading(obs.alpha_goal, self.reward_cfg)
        dist, self.reward_state = rw.r_dist(
            obs.d_goal, self.reward_state, self.reward_cfg, self.cfg.goal_radius
        )
        obs_pen = 0.0
        if self.scenario == "obstacle_avoidance":
            obs_pen = rw.r_obs(obs.scan, self.cfg.d_collision, self.reward_cfg)
        stable_pen = 0.0
        if self.scenario == "uneven_terrain":
            stable_pen = rw.r_stable(pose.roll, pose.pitch, self.reward_cfg)
        total = rw.total_reward(self.scenario, heading, dist, obs_pen, stable_pen)

        cause = "running"
        if obs.d_goal <= self.cfg.goal_radius:
            cause = "goal"
        elif self.scenario == "obstacle_avoidance" and float(obs.scan.min()) <= self.cfg.d_collision:
            cause = "collision"
        elif self.scenario == "uneven_terrain" and (
            abs(pose.roll) >= self.cfg.flip_threshold or abs(pose.pitch) >= self.cfg.flip_threshold
        ):
            cause = "flip_over"
        elif self.steps >= self.max_steps:
            cause = "timeout"

        return StepOutcome(
            observation=obs,
            reward_components=RewardBreakdown(heading, dist, obs_pen, stable_pen, total),
            done=cause != "running",
            cause=cause,
        )
