"""Procedural worlds for the three navigation scenarios.

A world is fully determined by (scenario, seed, generation knobs):
terrain grid, obstacle primitives, start pose, and goal position.
Scenario 1 places no obstacles on near-flat ground, scenario 2 adds
trees and walls, scenario 3 builds rolling terrain from seeded Gaussian
hills rescaled so the total elevation gain stays within the configured
bound.
"""

import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np

from .geometry import Circle, Obstacle, Wall, point_obstacle_clearance, wrap_angle
from .terrain import Heightmap, terrain_gradient

SCENARIOS = ("goal_reaching", "obstacle_avoidance", "uneven_terrain")

WORLD_FORMAT = "htnav-world-v1"


class GenerationError(RuntimeError):
    """Raised when the placement constraints cannot be satisfied."""


@dataclass
class WorldGenConfig:
    """Knobs for procedural world construction; all defaults are declared, not inferred."""

    bounds: tuple[float, float, float, float] = (0.0, 0.0, 100.0, 100.0)
    separation: tuple[float, float] = (10.0, 40.0)
    obstacle_clearance: float = 2.0
    margin: float = 2.0
    # spawn heading at least this far off the goal bearing; the heading
    # reward cone must be discovered, not handed out at reset
    min_start_misalignment: float = math.pi / 2
    retries: int = 200
    # obstacle field (scenario 2)
    n_trees: tuple[int, int] = (6, 12)
    tree_radius: tuple[float, float] = (0.3, 1.2)
    n_walls: tuple[int, int] = (2, 5)
    wall_length: tuple[float, float] = (3.0, 10.0)
    wall_thickness: tuple[float, float] = (0.2, 0.6)
    # terrain
    cell_size: float = 0.5
    ripple_amplitude: float = 0.15
    n_hills: int = 24
    hill_sigma: tuple[float, float] = (1.2, 7.0)
    hill_amplitude: tuple[float, float] = (0.5, 3.5)
    elevation_gain: tuple[float, float] = (2.5, 4.0)
    max_elevation_gain: float = 4.0
    max_spawn_slope: float = 0.2


@dataclass
class World:
    heightmap: Heightmap
    obstacles: list[Obstacle]
    start_pose: tuple[float, float, float]
    goal: tuple[float, float]
    scenario: str
    bounds: tuple[float, float, float, float] = (0.0, 0.0, 100.0, 100.0)
    seed_label: str = ""

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"scenario must be one of {SCENARIOS}, got {self.scenario!r}")


def _hill_field(xs, ys, centers, sigmas, amps) -> np.ndarray:
    gx, gy = np.meshgrid(xs, ys)
    z = np.zeros_like(gx)
    for (cx, cy), s, a in zip(centers, sigmas, amps):
        z += a * np.exp(-((gx - cx) ** 2 + (gy - cy) ** 2) / (2.0 * s * s))
    return z


def _rescale_gain(z: np.ndarray, target: float) -> np.ndarray:
    gain = float(z.max() - z.min())
    if gain <= 0.0:
        return z
    return z * (target / gain)


def _make_heightmap(scenario: str, cfg: WorldGenConfig, rng: np.random.Generator) -> Heightmap:
    x0, y0, x1, y1 = cfg.bounds
    nx = int(round((x1 - x0) / cfg.cell_size)) + 1
    ny = int(round((y1 - y0) / cfg.cell_size)) + 1
    xs = x0 + np.arange(nx) * cfg.cell_size
    ys = y0 + np.arange(ny) * cfg.cell_size
    if scenario == "uneven_terrain":
        n = cfg.n_hills
        centers = np.column_stack([rng.uniform(x0, x1, n), rng.uniform(y0, y1, n)])
        sigmas = rng.uniform(*cfg.hill_sigma, n)
        amps = rng.uniform(*cfg.hill_amplitude, n)
        z = _hill_field(xs, ys, centers, sigmas, amps)
        target = min(rng.uniform(*cfg.elevation_gain), cfg.max_elevation_gain)
        z = _rescale_gain(z, target)
    else:
        # gentle ripple so flat-ground scenarios still have realistic z traces
        n = 6
        centers = np.column_stack([rng.uniform(x0, x1, n), rng.uniform(y0, y1, n)])
        sigmas = rng.uniform(8.0, 25.0, n)
        amps = rng.uniform(-1.0, 1.0, n)
        z = _hill_field(xs, ys, centers, sigmas, amps)
        z = _rescale_gain(z, cfg.ripple_amplitude)
    return Heightmap(cell_size=cfg.cell_size, elevations=z, origin=(x0, y0))


def _make_obstacles(cfg: WorldGenConfig, rng: np.random.Generator) -> list[Obstacle]:
    x0, y0, x1, y1 = cfg.bounds
    m = cfg.margin
    obstacles: list[Obstacle] = []
    for _ in range(int(rng.integers(cfg.n_trees[0], cfg.n_trees[1] + 1))):
        c = (float(rng.uniform(x0 + m, x1 - m)), float(rng.uniform(y0 + m, y1 - m)))
        obstacles.append(Circle(center=c, radius=float(rng.uniform(*cfg.tree_radius))))
    for _ in range(int(rng.integers(cfg.n_walls[0], cfg.n_walls[1] + 1))):
        ax = float(rng.uniform(x0 + m, x1 - m))
        ay = float(rng.uniform(y0 + m, y1 - m))
        angle = float(rng.uniform(0.0, 2.0 * math.pi))
        length = float(rng.uniform(*cfg.wall_length))
        bx = min(max(ax + length * math.cos(angle), x0 + m), x1 - m)
        by = min(max(ay + length * math.sin(angle), y0 + m), y1 - m)
        if math.dist((ax, ay), (bx, by)) < 0.5:
            continue
        obstacles.append(
            Wall(p1=(ax, ay), p2=(bx, by), thickness=float(rng.uniform(*cfg.wall_thickness)))
        )
    return obstacles


def _clearance_ok(p, obstacles, clearance: float) -> bool:
    return all(point_obstacle_clearance(p, ob) >= clearance for ob in obstacles)


def _spawn_slope_ok(hm: Heightmap, p, limit: float) -> bool:
    gx, gy = terrain_gradient(hm, p[0], p[1])
    return math.hypot(gx, gy) <= limit


def _place_start_goal(
    scenario: str,
    hm: Heightmap,
    obstacles: list[Obstacle],
    cfg: WorldGenConfig,
    rng: np.random.Generator,
) -> tuple[tuple[float, float, float], tuple[float, float]]:
    x0, y0, x1, y1 = cfg.bounds
    m = cfg.margin
    for _ in range(cfg.retries):
        sx = float(rng.uniform(x0 + m, x1 - m))
        sy = float(rng.uniform(y0 + m, y1 - m))
        psi = float(rng.uniform(-math.pi, math.pi))
        r = float(rng.uniform(*cfg.separation))
        ang = float(rng.uniform(0.0, 2.0 * math.pi))
        gx = sx + r * math.cos(ang)
        gy = sy + r * math.sin(ang)
        if not (x0 + m <= gx <= x1 - m and y0 + m <= gy <= y1 - m):
            continue
        if not _clearance_ok((sx, sy), obstacles, cfg.obstacle_clearance):
            continue
        if not _clearance_ok((gx, gy), obstacles, cfg.obstacle_clearance):
            continue
        alpha = wrap_angle(math.atan2(gy - sy, gx - sx) - psi)
        if abs(alpha) < cfg.min_start_misalignment:
            continue
        if scenario == "uneven_terrain":
            if not _spawn_slope_ok(hm, (sx, sy), cfg.max_spawn_slope):
                continue
            if not _spawn_slope_ok(hm, (gx, gy), cfg.max_spawn_slope):
                continue
        return (sx, sy, psi), (gx, gy)
    raise GenerationError(
        f"could not place start/goal after {cfg.retries} attempts ({scenario})"
    )


def generate_world(scenario: str, seed, cfg: WorldGenConfig | None = None) -> World:
    """Deterministic world construction from (scenario, seed, knobs)."""
    if scenario not in SCENARIOS:
        raise ValueError(f"scenario must be one of {SCENARIOS}, got {scenario!r}")
    cfg = cfg or WorldGenConfig()
    rng = np.random.default_rng(seed)
    hm = _make_heightmap(scenario, cfg, rng)
    obstacles = _make_obstacles(cfg, rng) if scenario == "obstacle_avoidance" else []
    start, goal = _place_start_goal(scenario, hm, obstacles, cfg, rng)
    return World(
        heightmap=hm,
        obstacles=obstacles,
        start_pose=start,
        goal=goal,
        scenario=scenario,
        bounds=cfg.bounds,
        seed_label=str(seed),
    )


def world_to_dict(world: World) -> dict:
    obstacles = []
    for ob in world.obstacles:
        if isinstance(ob, Circle):
            obstacles.append({"shape": "circle", "center": list(ob.center), "radius": ob.radius})
        else:
            obstacles.append(
                {
                    "shape": "segment",
                    "p1": list(ob.p1),
                    "p2": list(ob.p2),
                    "thickness": ob.thickness,
                }
            )
    hm = world.heightmap
    return {
        "format": WORLD_FORMAT,
        "scenario": world.scenario,
        "seed": world.seed_label,
        "bounds": list(world.bounds),
        "start_pose": list(world.start_pose),
        "goal": list(world.goal),
        "heightmap": {
            "cell_size": hm.cell_size,
            "origin": list(hm.origin),
            "width": hm.width,
            "height": hm.height,
            "elevations": [float(v) for v in hm.elevations.ravel()],
        },
        "obstacles": obstacles,
    }


def world_from_dict(data: dict) -> World:
    if data.get("format") != WORLD_FORMAT:
        raise ValueError(f"unrecognized world format {data.get('format')!r}")
    hm_data = data["heightmap"]
    grid = np.asarray(hm_data["elevations"], dtype=float).reshape(
        hm_data["height"], hm_data["width"]
    )
    hm = Heightmap(
        cell_size=float(hm_data["cell_size"]),
        elevations=grid,
        origin=tuple(hm_data["origin"]),
    )
    obstacles: list[Obstacle] = []
    for ob in data["obstacles"]:
        if ob["shape"] == "circle":
            obstacles.append(Circle(center=tuple(ob["center"]), radius=float(ob["radius"])))
        elif ob["shape"] == "segment":
            obstacles.append(
                Wall(p1=tuple(ob["p1"]), p2=tuple(ob["p2"]), thickness=float(ob["thickness"]))
            )
        else:
            raise ValueError(f"unknown obstacle shape {ob['shape']!r}")
    return World(
        heightmap=hm,
        obstacles=obstacles,
        start_pose=tuple(data["start_pose"]),
        goal=tuple(data["goal"]),
        scenario=data["scenario"],
        bounds=tuple(data["bounds"]),
        seed_label=str(data.get("seed", "")),
    )


def save_world(path, world: World) -> None:
    with open(path, "w") as fh:
        json.dump(world_to_dict(world), fh)


def load_world(path) -> World:
    with open(path) as fh:
        return world_from_dict(json.load(fh))


def world_hash(world: World) -> str:
    """Content hash of the canonical serialization (world identity check)."""
    payload = json.dumps(world_to_dict(world), sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()


def initial_distance(world: World) -> float:
    sx, sy, _ = world.start_pose
    return math.dist((sx, sy), world.goal)
