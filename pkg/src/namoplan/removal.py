"""Removal-cost modeling: Beta success-rate belief, expected attempt cost,
and a simplified stock-region placement with a motion-time estimate."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import betainc

from .gridmap import FREE, GridPosition, OccupancyGrid
from .intervals import CostInterval
from .observation import MovableObstacle
from .planner import PlanRequest, Trajectory, plan_path


@dataclass(frozen=True)
class BetaBelief:
    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("Beta parameters must be positive")

    @property
    def mean(self) -> float:
        return self.alpha / (self.alpha + self.beta)

    @staticmethod
    def uniform() -> "BetaBelief":
        return BetaBelief(1.0, 1.0)

    @staticmethod
    def from_trials(successes: int, failures: int) -> "BetaBelief":
        """Belief after a calibration run. The recorded counts stand in for
        the pseudo-counts directly; an all-success or all-failure run keeps
        one pseudo-count of the missing outcome so the belief stays proper."""
        return BetaBelief(max(float(successes), 1.0), max(float(failures), 1.0))


def update_belief(belief: BetaBelief, success: bool) -> BetaBelief:
    if success:
        return BetaBelief(belief.alpha + 1.0, belief.beta)
    return BetaBelief(belief.alpha, belief.beta + 1.0)


def beta_ppf(q: float, alpha: float, beta: float, tol: float = 1e-9) -> float:
    """Quantile of Beta(alpha, beta) by bisection on the regularized
    incomplete beta CDF."""
    if not 0.0 <= q <= 1.0:
        raise ValueError("quantile must be in [0, 1]")
    if q == 0.0:
        return 0.0
    if q == 1.0:
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if betainc(alpha, beta, mid) < q:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def success_rate_interval(belief: BetaBelief,
                          confidence: float = 0.95) -> tuple[float, float]:
    """Equal-tailed confidence interval for the success rate."""
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must be in (0, 1)")
    lo = beta_ppf((1.0 - confidence) / 2.0, belief.alpha, belief.beta)
    hi = beta_ppf((1.0 + confidence) / 2.0, belief.alpha, belief.beta)
    return lo, hi


@dataclass
class RemovalParameters:
    max_attempts: int  # give-up cap on consecutive failed loads
    t_mo: float  # single removal execution time, seconds
    c_by: float  # scalar fallback bypass cost after giving up

    def __post_init__(self):
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")
        if self.t_mo <= 0:
            raise ValueError("t_mo must be positive")


def expected_removal_cost(p_a: float, params: RemovalParameters) -> float:
    """Expected cost of the remove-with-retries strategy.

    Sum of i * T_MO over the success-on-attempt-i branch, plus the give-up
    branch (M * T_MO + C_by) after M straight failures.
    """
    if not 0.0 <= p_a <= 1.0:
        raise ValueError("p_a must be in [0, 1]")
    m, t = params.max_attempts, params.t_mo
    q = 1.0 - p_a
    cost = t * sum(i * p_a * q ** (i - 1) for i in range(1, m + 1))
    return cost + (m * t + params.c_by) * q ** m


def removal_cost_interval(belief: BetaBelief, params: RemovalParameters,
                          confidence: float = 0.95) -> CostInterval:
    """Expected-cost interval from the success-rate confidence interval."""
    p_lo, p_hi = success_rate_interval(belief, confidence)
    a = expected_removal_cost(p_lo, params)
    b = expected_removal_cost(p_hi, params)
    # The cost is monotone non-increasing in p_a for C_by >= 0, but order
    # defensively rather than assuming.
    return CostInterval(min(a, b), max(a, b))


@dataclass
class RemovalEstimate:
    t_mo: float
    stock_position: GridPosition
    approach_length: float
    carry_length: float


def estimate_removal_time(
    grid: OccupancyGrid,
    mo: MovableObstacle,
    robot_xy: np.ndarray,
    blocked_path: Trajectory,
    robot_radius: float,
    v_lin: float = 0.5,
    v_rot: float = 1.0,
    load_overhead: float = 5.0,
    unload_overhead: float = 5.0,
    search_radius: float = 3.0,
) -> RemovalEstimate | None:
    """Nearest valid stock cell and the time to move the obstacle there.

    A stock cell must keep the placed obstacle clear of static obstacles by
    its own radius and clear of the blocked path by obstacle + robot radius,
    and must be reachable from the obstacle position. Returns None when no
    such cell exists within the search radius (removal infeasible)."""
    res = grid.resolution
    mx, my = mo.belief.mean
    clearance_path = mo.radius + robot_radius
    path_pts = blocked_path.positions

    candidates: list[tuple[float, int, int]] = []
    r_cells = int(math.ceil(search_radius / res))
    ciy, cix = grid.cell_index(mx, my)
    for iy in range(max(0, ciy - r_cells), min(grid.height_cells, ciy + r_cells + 1)):
        for ix in range(max(0, cix - r_cells), min(grid.width_cells, cix + r_cells + 1)):
            if grid.cells[iy, ix] != FREE:
                continue
            x, y = grid.cell_center(iy, ix)
            dist = math.hypot(x - mx, y - my)
            if dist > search_radius or dist < 2.0 * res:
                continue
            candidates.append((dist, iy, ix))
    candidates.sort()

    from .planner import blocked_mask  # local import avoids cycle at module load

    static_clear = ~blocked_mask(grid, mo.radius)
    for dist, iy, ix in candidates:
        if not static_clear[iy, ix]:
            continue
        x, y = grid.cell_center(iy, ix)
        d_path = np.min(np.linalg.norm(path_pts - np.array([x, y]), axis=1))
        if d_path < clearance_path:
            continue
        try:
            carry = plan_path(grid, PlanRequest(GridPosition(mx, my), GridPosition(x, y)),
                              robot_radius)
        except ValueError:
            continue
        if carry is None:
            continue
        approach_len = float(np.linalg.norm(np.asarray(robot_xy) - np.array([mx, my])))
        carry_len = carry.total_length
        # approach + carry + return, plus load/unload handling time
        travel = (approach_len + 2.0 * carry_len) / v_lin
        turning = math.pi / v_rot  # nominal in-place turns at pick and place
        t_mo = travel + turning + load_overhead + unload_overhead
        return RemovalEstimate(t_mo, GridPosition(x, y), approach_len, carry_len)
    return None


# ----------------------------------------------------------------------
# calibration trial log


def write_calibration_log(path: str | Path,
                          trials: list[tuple[str, bool]]) -> None:
    """Persist (obstacle_class, success) calibration trials as CSV."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["obstacle_class", "success"])
        for cls, ok in trials:
            writer.writerow([cls, int(ok)])


def read_calibration_log(path: str | Path) -> dict[str, BetaBelief]:
    """Beliefs per obstacle class from a calibration CSV; the empty class
    key aggregates all rows (shared-belief mode)."""
    counts: dict[str, list[int]] = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            cls = row["obstacle_class"]
            ok = bool(int(row["success"]))
            for key in (cls, ""):
                s, f = counts.setdefault(key, [0, 0])
                counts[key][0 if ok else 1] += 1
    return {cls: BetaBelief.from_trials(s, f) for cls, (s, f) in counts.items()}
