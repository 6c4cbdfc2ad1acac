"""Seeded 2D grid-world episodes: perceive, decide, act.

The world advances in simulated seconds through an event-driven loop: follow
the planned path, sense and fuse movable-obstacle observations, and on
blockage pick a strategy (remove or bypass) from the configured policy.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import blockage as blk
from . import bypass as byp
from . import removal as rem
from .decision import NoFeasibleStrategy, assemble_bypass_cost, assemble_removal_cost, decide
from .gridmap import GridPosition, OccupancyGrid, mark_explored, raycast_distance, free_area
from .intervals import CostInterval
from .observation import (MovableObstacle, PoseBelief, RangeBearingMeasurement,
                          RobotPoseBelief, confidence_ellipse, fuse, path_blocked,
                          project_measurement, wrap_angle)
from .planner import EndpointBlocked, PlanRequest, Trajectory, plan_path


class ScenarioError(ValueError):
    """Invalid scenario configuration."""


# ----------------------------------------------------------------------
# configuration


@dataclass
class RobotConfig:
    radius: float = 0.3
    start: tuple[float, float] = (1.0, 1.0)
    start_heading: float = 0.0
    v_lin: float = 0.5
    v_rot: float = 1.0
    sensor_range: float = 5.0
    sensor_fov: float = math.pi / 2.0


@dataclass
class ObstacleSpec:
    label: str
    position: tuple[float, float]
    radius: float
    true_sr: float

    def __post_init__(self):
        if not 0.0 <= self.true_sr <= 1.0:
            raise ScenarioError(f"true_sr of {self.label} out of [0, 1]")


@dataclass
class PopulationConfig:
    mu: float = 0.6
    sigma: float = 0.1
    k: float = 0.5


@dataclass
class RemovalConfig:
    max_attempts: int = 3
    load_overhead: float = 5.0
    unload_overhead: float = 5.0
    search_radius: float = 3.0
    default_t_mo: float = 30.0  # proxy when no estimate is available


@dataclass
class NoiseConfig:
    robot_cov_diag: tuple[float, float, float] = (0.01, 0.01, 0.004)
    meas_cov_diag: tuple[float, float] = (0.01, 0.001)


@dataclass
class BypassModelConfig:
    dataset_seed: int = 7
    n_rows: int = 1500
    noise_sigma: float = 0.05


@dataclass
class ScenarioConfig:
    scenario_id: str
    map_path: str
    robot: RobotConfig
    goal: tuple[float, float]
    obstacles: list[ObstacleSpec]
    population: PopulationConfig = field(default_factory=PopulationConfig)
    removal: RemovalConfig = field(default_factory=RemovalConfig)
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    bypass_model: BypassModelConfig = field(default_factory=BypassModelConfig)
    estimated_sr: float = 0.9
    sr_shared: bool = True
    calibration_trials: int = 10
    confidence: float = 0.95
    timeout: float = 300.0
    seed: int = 0
    blockage_samples: int = 10_000
    sense_interval: float = 1.0

    def __post_init__(self):
        if self.timeout <= 0:
            raise ScenarioError("timeout must be positive")
        if not 0.0 < self.confidence < 1.0:
            raise ScenarioError("confidence must be in (0, 1)")
        if not 0.0 <= self.estimated_sr <= 1.0:
            raise ScenarioError("estimated_sr out of [0, 1]")

    def load_grid(self) -> OccupancyGrid:
        grid = OccupancyGrid.load(self.map_path)
        for spec in self.obstacles:
            x, y = spec.position
            if not grid.is_free(x, y):
                raise ScenarioError(f"obstacle {spec.label} not in a free cell")
        return grid

    @staticmethod
    def from_yaml(path: str | Path) -> "ScenarioConfig":
        path = Path(path)
        try:
            raw = yaml.safe_load(path.read_text())
        except yaml.YAMLError as exc:
            raise ScenarioError(f"malformed config: {exc}") from exc
        if not isinstance(raw, dict):
            raise ScenarioError("config must be a mapping")
        try:
            robot = RobotConfig(**{
                **raw.get("robot", {}),
                "start": tuple(raw.get("robot", {}).get("start", (1.0, 1.0))),
            })
            obstacles = [
                ObstacleSpec(o["label"], tuple(o["position"]), o["radius"], o["true_sr"])
                for o in raw.get("obstacles", [])
            ]
            map_path = str((path.parent / raw["map"]).resolve())
            cfg = ScenarioConfig(
                scenario_id=raw.get("scenario_id", path.stem),
                map_path=map_path,
                robot=robot,
                goal=tuple(raw["goal"]),
                obstacles=obstacles,
                population=PopulationConfig(**raw.get("population", {})),
                removal=RemovalConfig(**raw.get("removal", {})),
                noise=NoiseConfig(
                    robot_cov_diag=tuple(raw.get("noise", {}).get("robot_cov_diag",
                                                                  (0.01, 0.01, 0.004))),
                    meas_cov_diag=tuple(raw.get("noise", {}).get("meas_cov_diag",
                                                                 (0.01, 0.001))),
                ),
                bypass_model=BypassModelConfig(**raw.get("bypass_model", {})),
                estimated_sr=raw.get("estimated_sr", 0.9),
                sr_shared=raw.get("sr_shared", True),
                calibration_trials=raw.get("calibration_trials", 10),
                confidence=raw.get("confidence", 0.95),
                timeout=raw.get("timeout", 300.0),
                seed=raw.get("seed", 0),
                blockage_samples=raw.get("blockage_samples", 10_000),
                sense_interval=raw.get("sense_interval", 1.0),
            )
        except (KeyError, TypeError) as exc:
            raise ScenarioError(f"bad config field: {exc}") from exc
        return cfg


# ----------------------------------------------------------------------
# policies


@dataclass(frozen=True)
class Policy:
    name: str
    use_action_uncertainty: bool = True
    use_blockage_uncertainty: bool = True
    kind: str = "uncertainty"  # "uncertainty" | "bypass" | "removal" | "random"


POLICIES: dict[str, Policy] = {
    "uncertainty": Policy("uncertainty"),
    "uncertainty-no-action": Policy("uncertainty-no-action",
                                    use_action_uncertainty=False),
    "uncertainty-no-blockage": Policy("uncertainty-no-blockage",
                                      use_blockage_uncertainty=False),
    "priority-bypass": Policy("priority-bypass", kind="bypass"),
    "priority-removal": Policy("priority-removal", kind="removal"),
    "random-choice": Policy("random-choice", kind="random"),
}


def get_policy(name: str) -> Policy:
    try:
        return POLICIES[name]
    except KeyError:
        raise ValueError(f"unknown policy {name!r}; known: {sorted(POLICIES)}")


# ----------------------------------------------------------------------
# motion-time model


def motion_time(trajectory: Trajectory, v_lin: float, v_rot: float) -> float:
    """Traversal time: length at v_lin plus accumulated turning at v_rot."""
    length = trajectory.total_length
    h = trajectory.headings
    turn = sum(abs(wrap_angle(b - a)) for a, b in zip(h[:-1], h[1:]))
    return length / v_lin + turn / v_rot


# ----------------------------------------------------------------------
# bypass-model training data


def generate_timing_dataset(grid: OccupancyGrid, robot_radius: float,
                            v_lin: float, v_rot: float, n_rows: int,
                            seed: int, noise_sigma: float = 0.05,
                            n_base_paths: int = 40) -> byp.TimingDataset:
    """Random sub-segments of planned paths, timed by the motion model with
    multiplicative noise."""
    rng = np.random.default_rng(seed)
    from .planner import blocked_mask

    mask = blocked_mask(grid, robot_radius)
    free_iy, free_ix = np.nonzero(~mask)
    if len(free_iy) < 2:
        raise ScenarioError("map has no plannable free space")
    res = grid.resolution

    paths: list[Trajectory] = []
    guard = 0
    while len(paths) < n_base_paths and guard < n_base_paths * 10:
        guard += 1
        i, j = rng.integers(0, len(free_iy), size=2)
        if i == j:
            continue
        start = GridPosition((free_ix[i] + 0.5) * res, (free_iy[i] + 0.5) * res)
        goal = GridPosition((free_ix[j] + 0.5) * res, (free_iy[j] + 0.5) * res)
        try:
            traj = plan_path(grid, PlanRequest(start, goal), robot_radius)
        except ValueError:
            continue
        if traj is not None and traj.total_length >= 2.0:
            paths.append(traj)
    if not paths:
        raise ScenarioError("could not generate any training paths")

    feats, durs = [], []
    while len(durs) < n_rows:
        traj = paths[int(rng.integers(0, len(paths)))]
        n = len(traj)
        a, b = sorted(rng.integers(0, n, size=2))
        if b - a < 2:
            continue
        seg = traj.segment(int(a), int(b))
        if seg.total_length < 1.0:
            continue
        f = byp.extract_features(seg)
        t_true = motion_time(seg, v_lin, v_rot)
        t_obs = t_true * max(1.0 + noise_sigma * rng.standard_normal(), 0.1)
        feats.append([f.f_l, f.f_s, f.f_v])
        durs.append(t_obs)
    return byp.TimingDataset(np.array(feats), np.array(durs))


_MODEL_CACHE: dict[tuple, byp.GlrModel] = {}


def bypass_model_for(grid: OccupancyGrid, robot: RobotConfig,
                     cfg: BypassModelConfig) -> byp.GlrModel:
    key = (hashlib.sha256(grid.to_text().encode()).hexdigest(),
           robot.radius, robot.v_lin, robot.v_rot,
           cfg.dataset_seed, cfg.n_rows, cfg.noise_sigma)
    if key not in _MODEL_CACHE:
        dataset = generate_timing_dataset(grid, robot.radius, robot.v_lin,
                                          robot.v_rot, cfg.n_rows,
                                          cfg.dataset_seed, cfg.noise_sigma)
        _MODEL_CACHE[key] = byp.fit(dataset)
    return _MODEL_CACHE[key]


# ----------------------------------------------------------------------
# trial record


@dataclass
class TrialRecord:
    scenario_id: str
    seed: int
    policy: str
    outcome: str  # "success" | "timeout" | "no_strategy"
    elapsed: float
    decisions: list[dict] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "scenario_id": self.scenario_id,
            "seed": self.seed,
            "policy": self.policy,
            "outcome": self.outcome,
            "elapsed": self.elapsed,
            "decisions": self.decisions,
            "diagnostics": self.diagnostics,
        }

    def to_json_line(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @staticmethod
    def from_json_line(line: str) -> "TrialRecord":
        d = json.loads(line)
        return TrialRecord(d["scenario_id"], d["seed"], d["policy"], d["outcome"],
                           d["elapsed"], d["decisions"], d["diagnostics"])


# ----------------------------------------------------------------------
# episode


@dataclass
class _WorldMO:
    spec: ObstacleSpec
    x: float
    y: float
    placed: bool = False


class _Episode:
    def __init__(self, config: ScenarioConfig, policy: Policy, seed: int,
                 model: byp.GlrModel):
        self.cfg = config
        self.policy = policy
        self.seed = seed
        self.model = model
        self.rng = np.random.default_rng(seed)
        self.grid = config.load_grid()
        self.mos = {o.label: _WorldMO(o, o.position[0], o.position[1])
                    for o in config.obstacles}
        self.beliefs: dict[str, PoseBelief] = {}
        self.betas: dict[str, rem.BetaBelief] = {}
        self.x, self.y = config.robot.start
        self.heading = config.robot.start_heading
        self.t = 0.0
        self.trace: list[dict] = []
        self.diag = {"n_senses": 0, "n_replans": 0, "n_attempts": 0,
                     "n_decisions": 0, "distance": 0.0}
        self.pop = blk.ObstaclePopulation(config.population.mu,
                                          config.population.sigma,
                                          config.population.k,
                                          free_area(self.grid))
        if not self.grid.is_free(*config.robot.start):
            raise ScenarioError("robot start not in a free cell")
        if not self.grid.is_free(*config.goal):
            raise ScenarioError("goal not in a free cell")

    # -- success-rate beliefs ------------------------------------------

    def _initial_beta(self) -> rem.BetaBelief:
        n = self.cfg.calibration_trials
        s = int(round(self.cfg.estimated_sr * n))
        return rem.BetaBelief.from_trials(s, n - s)

    def beta_for(self, label: str) -> rem.BetaBelief:
        key = "" if self.cfg.sr_shared else label
        if key not in self.betas:
            self.betas[key] = self._initial_beta()
        return self.betas[key]

    def update_beta(self, label: str, success: bool) -> None:
        key = "" if self.cfg.sr_shared else label
        self.betas[key] = rem.update_belief(self.beta_for(label), success)

    # -- perception ----------------------------------------------------

    def known_obstacles(self) -> list[MovableObstacle]:
        return [MovableObstacle(label, self.beliefs[label], self.mos[label].spec.radius)
                for label in sorted(self.beliefs)]

    def ellipses(self, exclude: str | None = None):
        return tuple(
            confidence_ellipse(mo.belief, mo.radius, self.cfg.confidence)
            for mo in self.known_obstacles() if mo.id != exclude
        )

    def sense(self) -> None:
        self.diag["n_senses"] += 1
        mark_explored(self.grid, self.x, self.y, self.heading,
                      self.cfg.robot.sensor_range, self.cfg.robot.sensor_fov)
        robot = RobotPoseBelief(np.array([self.x, self.y, self.heading]),
                                np.diag(self.cfg.noise.robot_cov_diag))
        var_d, var_phi = self.cfg.noise.meas_cov_diag
        for label in sorted(self.mos):
            mo = self.mos[label]
            dx, dy = mo.x - self.x, mo.y - self.y
            dist = math.hypot(dx, dy)
            if dist > self.cfg.robot.sensor_range or dist < 1e-6:
                continue
            bearing = wrap_angle(math.atan2(dy, dx) - self.heading)
            if abs(bearing) > self.cfg.robot.sensor_fov / 2.0:
                continue
            hit = raycast_distance(self.grid, self.x, self.y,
                                   math.atan2(dy, dx), max_range=dist)
            if hit < dist - self.grid.resolution:
                continue  # occluded by a static obstacle
            d_noisy = max(dist + math.sqrt(var_d) * self.rng.standard_normal(), 0.01)
            phi_noisy = bearing + math.sqrt(var_phi) * self.rng.standard_normal()
            meas = RangeBearingMeasurement(d_noisy, phi_noisy,
                                           np.diag([var_d, var_phi]), label)
            obs = project_measurement(robot, meas)
            if label in self.beliefs:
                self.beliefs[label] = fuse(self.beliefs[label], obs)
            else:
                self.beliefs[label] = obs

    # -- planning helpers ----------------------------------------------

    def plan_to(self, x: float, y: float, exclude: str | None = None,
                with_ellipses: bool = True) -> Trajectory | None:
        self.diag["n_replans"] += 1
        ellipses = self.ellipses(exclude) if with_ellipses else ()
        start = GridPosition(self.x, self.y)
        goal = GridPosition(x, y)
        if self.grid.cell_index(start.x, start.y) == self.grid.cell_index(x, y):
            return None
        try:
            return plan_path(self.grid, PlanRequest(start, goal, ellipses),
                             self.cfg.robot.radius)
        except EndpointBlocked:
            return None

    def nav_interval(self, traj: Trajectory | None) -> CostInterval:
        if traj is None:
            return CostInterval.infinite()
        return byp.predict_interval(self.model, byp.extract_features(traj),
                                    self.cfg.confidence)

    def blockage_interval(self, traj: Trajectory | None,
                          proxy_removal: CostInterval) -> CostInterval:
        if traj is None or not self.policy.use_blockage_uncertainty:
            return CostInterval(0.0, 0.0)
        p = blk.trajectory_blockage(self.pop, traj, self.grid,
                                    self.cfg.robot.radius,
                                    self.cfg.blockage_samples, seed=self.seed)
        return blk.blockage_cost(p, proxy_removal)

    # -- movement ------------------------------------------------------

    def follow(self, traj: Trajectory,
               ignore: str | None = None) -> tuple[str, str | None]:
        """Walk the trajectory waypoint by waypoint.

        `ignore` names an obstacle that never counts as blocking (the target
        of a removal approach). Returns ("goal", None), ("blocked",
        obstacle_id) or ("timeout", None).
        """
        v_lin, v_rot = self.cfg.robot.v_lin, self.cfg.robot.v_rot
        since_sense = math.inf  # force a sense right away
        i = 0
        n = len(traj)
        while i < n - 1:
            if since_sense >= self.cfg.sense_interval:
                self.sense()
                since_sense = 0.0
                obstacles = [mo for mo in self.known_obstacles()
                             if mo.id != ignore]
                blocker = path_blocked(traj.segment(i, n - 1), obstacles,
                                       self.cfg.robot.radius, self.cfg.confidence)
                if blocker is not None:
                    return "blocked", blocker
            p0 = traj.positions[i]
            p1 = traj.positions[i + 1]
            step = float(np.linalg.norm(p1 - p0))
            new_heading = float(traj.headings[i])
            turn = abs(wrap_angle(new_heading - self.heading))
            self.t += step / v_lin + turn / v_rot
            self.diag["distance"] += step
            self.x, self.y = float(p1[0]), float(p1[1])
            self.heading = new_heading
            since_sense += step
            i += 1
            if self.t >= self.cfg.timeout:
                return "timeout", None
        return "goal", None

    def wait_out(self) -> None:
        self.t = self.cfg.timeout

    # -- removal execution ---------------------------------------------

    def staging_point(self, label: str) -> tuple[float, float] | None:
        mo = self.mos[label]
        rsum = mo.spec.radius + self.cfg.robot.radius
        dx, dy = self.x - mo.x, self.y - mo.y
        dist = math.hypot(dx, dy)
        if dist < 1e-6:
            return None
        scale = (rsum + 0.05) / dist
        px, py = mo.x + dx * scale, mo.y + dy * scale
        if not self.grid.is_free(px, py):
            return None
        return px, py

    def evaluate_removal(self, label: str, blocked_traj: Trajectory):
        """Stock search + manipulation-time estimate for the blocking MO."""
        mo = self.mos[label]
        belief = self.beliefs[label]
        est = rem.estimate_removal_time(
            self.grid,
            MovableObstacle(label, belief, mo.spec.radius),
            np.array([self.x, self.y]),
            blocked_traj,
            self.cfg.robot.radius,
            self.cfg.robot.v_lin,
            self.cfg.robot.v_rot,
            self.cfg.removal.load_overhead,
            self.cfg.removal.unload_overhead,
            self.cfg.removal.search_radius,
        )
        return est

    def removal_interval(self, label: str, t_mo: float,
                         c_by_scalar: float) -> CostInterval:
        params = rem.RemovalParameters(self.cfg.removal.max_attempts, t_mo,
                                       c_by_scalar)
        if self.policy.use_action_uncertainty:
            return rem.removal_cost_interval(self.beta_for(label), params,
                                             self.cfg.confidence)
        return CostInterval.point(t_mo)

    def execute_removal(self, label: str) -> tuple[str, Trajectory | None]:
        """Approach, attempt loads, and on success carry to the stock cell.

        Returns ("removed", None), ("gave_up", None) or ("timeout", None).
        """
        mo = self.mos[label]
        stage = self.staging_point(label)
        if stage is not None:
            approach = self.plan_to(stage[0], stage[1], exclude=label)
            if approach is not None:
                status, _ = self.follow(approach, ignore=label)
                if status == "timeout":
                    return "timeout", None
        for _ in range(self.cfg.removal.max_attempts):
            self.t += self.cfg.removal.load_overhead
            self.diag["n_attempts"] += 1
            success = bool(self.rng.random() < mo.spec.true_sr)
            self.update_beta(label, success)
            self.trace.append({"event": "attempt", "t": self.t, "obstacle": label,
                               "success": success})
            if not success:
                # A failed load means backing off, repositioning and setting
                # up again, so the whole attempt costs one removal cycle.
                self.t += max(self._last_t_mo - self.cfg.removal.load_overhead,
                              0.0)
            if self.t >= self.cfg.timeout:
                return "timeout", None
            if not success:
                continue
            blocked_traj = self._last_blocked_traj
            est = self.evaluate_removal(label, blocked_traj)
            if est is None:
                # Load succeeded but nowhere to put the obstacle down: give up.
                self.trace.append({"event": "no_stock", "t": self.t,
                                   "obstacle": label})
                return "gave_up", None
            carry_time = (2.0 * est.carry_length / self.cfg.robot.v_lin
                          + math.pi / self.cfg.robot.v_rot
                          + self.cfg.removal.unload_overhead)
            self.t += carry_time
            self.diag["distance"] += 2.0 * est.carry_length
            mo.x, mo.y = est.stock_position.x, est.stock_position.y
            mo.placed = True
            self.beliefs[label] = PoseBelief(
                np.array([mo.x, mo.y]), np.eye(2) * 1e-6,
                self.beliefs[label].observation_count + 1)
            self.trace.append({"event": "placed", "t": self.t, "obstacle": label,
                               "stock": [mo.x, mo.y]})
            if self.t >= self.cfg.timeout:
                return "timeout", None
            return "removed", None
        return "gave_up", None

    # -- decision epoch ------------------------------------------------

    _last_blocked_traj: Trajectory = None  # type: ignore[assignment]
    _last_t_mo: float = 0.0

    def decision_epoch(self, blocker: str, blocked_traj: Trajectory) -> str:
        """Returns the chosen action: "bypass", "remove" or "none"."""
        self.diag["n_decisions"] += 1
        self._last_blocked_traj = blocked_traj
        gx, gy = self.cfg.goal

        detour = self.plan_to(gx, gy)
        nav_by = self.nav_interval(detour)

        est = self.evaluate_removal(blocker, blocked_traj)
        t_mo = est.t_mo if est is not None else self.cfg.removal.default_t_mo
        self._last_t_mo = t_mo
        c_by_scalar = (nav_by.midpoint() if not nav_by.is_infinite
                       else self.cfg.timeout)
        proxy_removal = self.removal_interval(blocker, t_mo, c_by_scalar)

        blocked_by = self.blockage_interval(detour, proxy_removal)
        c_bypass = assemble_bypass_cost(nav_by, blocked_by)

        if est is None:
            c_removal = CostInterval.infinite()
            nav_re_traj = None
        else:
            nav_re_traj = self.plan_to(gx, gy, exclude=blocker)
            nav_re = self.nav_interval(nav_re_traj)
            c_mo = self.removal_interval(blocker, est.t_mo, c_by_scalar)
            blocked_re = self.blockage_interval(nav_re_traj, proxy_removal)
            c_removal = assemble_removal_cost(c_mo, nav_re, blocked_re)

        try:
            dec = decide(c_bypass, c_removal, blocker)
        except NoFeasibleStrategy:
            self.trace.append({"event": "decision", "t": self.t,
                               "blocking_obstacle": blocker,
                               "policy_choice": "none"})
            return "none"

        choice = dec.choice
        if self.policy.kind == "bypass":
            choice = "bypass" if not c_bypass.is_infinite else "none"
        elif self.policy.kind == "removal":
            if est is not None:
                choice = "remove"
            else:
                choice = "bypass" if not c_bypass.is_infinite else "none"
        elif self.policy.kind == "random":
            pick = "remove" if self.rng.random() < 0.5 else "bypass"
            if pick == "remove" and est is None:
                pick = "bypass"
            if pick == "bypass" and c_bypass.is_infinite:
                pick = "remove" if est is not None else "none"
            choice = pick

        entry = dec.to_dict()
        entry.update({"event": "decision", "t": self.t, "policy_choice": choice})
        self.trace.append(entry)
        if choice == "bypass":
            self._pending_traj = detour
        return choice

    _pending_traj: Trajectory | None = None

    # -- main loop -----------------------------------------------------

    def run(self) -> TrialRecord:
        outcome = None
        traj = self.plan_to(*self.cfg.goal)
        guard = 0
        while outcome is None:
            guard += 1
            if guard > 500:
                raise RuntimeError("episode failed to terminate")
            if self.t >= self.cfg.timeout:
                outcome = "timeout"
                break
            if traj is None:
                # No path under current beliefs: treat like a blockage by the
                # nearest known obstacle, or give up if none is known.
                blocker = self._nearest_known_blocker()
                if blocker is None:
                    outcome = "no_strategy"
                    break
                action = self._handle_block(blocker, self._fallback_traj())
            else:
                status, blocker = self.follow(traj)
                if status == "goal":
                    outcome = "success"
                    break
                if status == "timeout":
                    outcome = "timeout"
                    break
                action = self._handle_block(blocker, traj)
            if action == "timeout":
                outcome = "timeout"
            elif action == "none":
                outcome = "no_strategy"
            else:
                traj = self._next_traj(action)

        elapsed = self.cfg.timeout if outcome == "timeout" else self.t
        return TrialRecord(self.cfg.scenario_id, self.seed, self.policy.name,
                           outcome, elapsed, self.trace, self.diag)

    def _fallback_traj(self) -> Trajectory:
        gx, gy = self.cfg.goal
        positions = np.array([[self.x, self.y], [gx, gy]])
        return Trajectory(positions)

    def _nearest_known_blocker(self) -> str | None:
        best, best_d = None, math.inf
        for label in sorted(self.beliefs):
            if self.mos[label].placed:
                continue
            bx, by = self.beliefs[label].mean
            d = math.hypot(bx - self.x, by - self.y)
            if d < best_d:
                best, best_d = label, d
        return best

    def _handle_block(self, blocker: str, blocked_traj: Trajectory) -> str:
        action = self.decision_epoch(blocker, blocked_traj)
        if action == "remove":
            status, _ = self.execute_removal(blocker)
            if status == "timeout":
                return "timeout"
            return "replan"
        if action == "bypass":
            return "bypass"
        if action == "none" and self.policy.kind == "bypass":
            self.wait_out()
            return "timeout"
        return action

    def _next_traj(self, action: str) -> Trajectory | None:
        if action == "bypass":
            traj, self._pending_traj = self._pending_traj, None
            return traj
        if action == "replan":
            return self.plan_to(*self.cfg.goal)
        return None


def run_episode(config: ScenarioConfig, policy: Policy | str,
                seed: int | None = None,
                model: byp.GlrModel | None = None) -> TrialRecord:
    """Execute one seeded episode under the given policy."""
    if isinstance(policy, str):
        policy = get_policy(policy)
    seed = config.seed if seed is None else seed
    grid = config.load_grid()
    if model is None:
        model = bypass_model_for(grid, config.robot, config.bypass_model)
    episode = _Episode(config, policy, seed, model)
    return episode.run()
