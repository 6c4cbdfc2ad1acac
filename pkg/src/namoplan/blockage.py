"""Blockage risk from unseen obstacles in unexplored regions.

Piecewise corridor-blockage probability for a known obstacle size,
marginalized over a Gaussian size population by sampling, composed over the
unexplored waypoints of a trajectory, and converted to a cost interval.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .gridmap import GridPosition, OccupancyGrid, QueryInsideObstacle, raycast_width
from .intervals import CostInterval
from .planner import Trajectory

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ObstaclePopulation:
    """Gaussian obstacle-diameter population with an appearance rate over the
    free area."""

    mu: float  # mean diameter, m
    sigma: float  # diameter std, m
    k: float  # appearance parameter
    free_area: float  # m^2

    def __post_init__(self):
        if self.mu <= 0 or self.sigma < 0 or self.k < 0 or self.free_area <= 0:
            raise ValueError("invalid obstacle population parameters")


@dataclass
class WaypointRisk:
    index: int
    x: float
    y: float
    width: float
    p_block_given_here: float
    p_here: float

    @property
    def p_block(self) -> float:
        return self.p_block_given_here * self.p_here


def blockage_given_size(l_mo: float, width: float, r: float) -> float:
    """Probability that an obstacle of diameter l_mo at a uniform lateral
    offset leaves no side gap of 2r in a corridor of the given width.

    Boundary ties go to the lower-probability branch; the result is clamped
    to [0, 1].
    """
    if width <= 0 or r <= 0 or l_mo <= 0:
        raise ValueError("l_mo, width, r must be positive")
    if l_mo >= width:
        return 0.0
    if l_mo >= width - 2.0 * r:
        return 1.0
    if l_mo <= width - 4.0 * r:
        return 0.0
    return min(max(4.0 * r / (width - l_mo) - 1.0, 0.0), 1.0)


def sample_diameters(pop: ObstaclePopulation, n: int,
                     rng: np.random.Generator) -> np.ndarray:
    """Draw obstacle diameters from the population truncated to (0, inf),
    by rejection."""
    if pop.sigma == 0.0:
        return np.full(n, pop.mu)
    out = np.empty(n)
    filled = 0
    while filled < n:
        draw = rng.normal(pop.mu, pop.sigma, size=n - filled)
        draw = draw[draw > 0.0]
        out[filled:filled + len(draw)] = draw
        filled += len(draw)
    return out


def blockage_at_width(pop: ObstaclePopulation, width: float, r: float,
                      n_samples: int = 10_000, seed: int = 0) -> float:
    """Blockage probability at one corridor width, marginalized over the
    size population by seeded sampling."""
    if n_samples < 1000:
        raise ValueError("n_samples must be >= 1000")
    if pop.sigma == 0.0:
        return blockage_given_size(pop.mu, width, r)
    rng = np.random.default_rng(seed)
    sizes = sample_diameters(pop, n_samples, rng)
    return float(np.mean(_blockage_given_size_vec(sizes, width, r)))


def _blockage_given_size_vec(l_mo: np.ndarray, width: float, r: float) -> np.ndarray:
    p = np.zeros_like(l_mo)
    middle = (l_mo > width - 4.0 * r) & (l_mo < width - 2.0 * r)
    p[middle] = np.clip(4.0 * r / (width - l_mo[middle]) - 1.0, 0.0, 1.0)
    p[(l_mo >= width - 2.0 * r) & (l_mo < width)] = 1.0
    return p


def waypoint_presence_probability(pop: ObstaclePopulation, width: float) -> float:
    """Probability that some obstacle sits on the traversal line of width
    `width`: W * K / A, clamped to [0, 1]."""
    raw = width * pop.k / pop.free_area
    if raw > 1.0:
        log.warning("presence probability %.3f clamped to 1 (W=%.2f K=%.2f A=%.2f)",
                    raw, width, pop.k, pop.free_area)
        return 1.0
    return max(raw, 0.0)


def trajectory_blockage_detail(pop: ObstaclePopulation, trajectory: Trajectory,
                               grid: OccupancyGrid, r: float,
                               n_samples: int = 10_000,
                               seed: int = 0) -> list[WaypointRisk]:
    """Per-waypoint risk terms over the unexplored part of a trajectory.

    Waypoints are subsampled at one mean obstacle diameter of arc length:
    consecutive grid waypoints describe the same physical corridor slot, so
    treating each as independent would overstate the risk.
    """
    risks: list[WaypointRisk] = []
    spacing = max(pop.mu, grid.resolution)
    next_at = 0.0
    travelled = 0.0
    prev = trajectory.positions[0]
    for idx in range(len(trajectory)):
        pos = trajectory.positions[idx]
        travelled += float(np.linalg.norm(pos - prev))
        prev = pos
        if travelled < next_at:
            continue
        if grid.is_explored(pos[0], pos[1]):
            continue
        next_at = travelled + spacing
        try:
            width = raycast_width(grid, GridPosition(pos[0], pos[1]),
                                  float(trajectory.headings[idx]))
        except QueryInsideObstacle:
            continue
        p_given = blockage_at_width(pop, width, r, n_samples, seed=seed + idx)
        # In wide-open space no obstacle size in the population can block the
        # traversal line, so skip the presence factor (whose W*K/A form is
        # only meaningful at corridor-scale widths anyway).
        p_here = (waypoint_presence_probability(pop, width)
                  if p_given > 0.0 else 0.0)
        risks.append(WaypointRisk(idx, float(pos[0]), float(pos[1]),
                                  width, p_given, p_here))
    return risks


def trajectory_blockage(pop: ObstaclePopulation, trajectory: Trajectory,
                        grid: OccupancyGrid, r: float,
                        n_samples: int = 10_000, seed: int = 0) -> float:
    """Probability that at least one unseen obstacle blocks the trajectory."""
    risks = trajectory_blockage_detail(pop, trajectory, grid, r, n_samples, seed)
    survive = 1.0
    for wr in risks:
        survive *= 1.0 - wr.p_block
    return min(max(1.0 - survive, 0.0), 1.0)


def blockage_cost(p_block: float, removal_interval: CostInterval) -> CostInterval:
    """Expected blockage cost: the removal interval scaled by the risk."""
    if not 0.0 <= p_block <= 1.0:
        raise ValueError("p_block must be in [0, 1]")
    return removal_interval.scale(p_block)
