"""A* shortest paths on the inflated grid, with temporary ellipse obstacles."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .gridmap import FREE, GridPosition, OccupancyGrid, inflated_blocked_mask


class EndpointBlocked(ValueError):
    """Start or goal lies inside an inflated obstacle (distinct from NoPath)."""


@dataclass(frozen=True)
class Ellipse:
    """Axis-angle ellipse: center, semi-axes (a, b), rotation of the a-axis."""

    cx: float
    cy: float
    a: float
    b: float
    angle: float

    def contains(self, x: float, y: float, margin: float = 0.0) -> bool:
        dx, dy = x - self.cx, y - self.cy
        c, s = math.cos(self.angle), math.sin(self.angle)
        u = c * dx + s * dy
        v = -s * dx + c * dy
        a, b = self.a + margin, self.b + margin
        return (u / a) ** 2 + (v / b) ** 2 <= 1.0

    def inflate(self, margin: float) -> "Ellipse":
        return Ellipse(self.cx, self.cy, self.a + margin, self.b + margin, self.angle)


@dataclass
class Trajectory:
    """Ordered waypoints (x, y, heading). Heading i points at waypoint i+1;
    the last waypoint inherits its predecessor's heading."""

    positions: np.ndarray  # (N, 2)
    headings: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=float)
        if self.positions.ndim != 2 or self.positions.shape[0] < 2:
            raise ValueError("trajectory needs at least 2 waypoints")
        if self.headings is None:
            self.headings = _headings_from_positions(self.positions)
        else:
            self.headings = np.asarray(self.headings, dtype=float)

    def __len__(self) -> int:
        return self.positions.shape[0]

    @property
    def total_length(self) -> float:
        return float(np.sum(np.linalg.norm(np.diff(self.positions, axis=0), axis=1)))

    @property
    def start(self) -> np.ndarray:
        return self.positions[0]

    @property
    def goal(self) -> np.ndarray:
        return self.positions[-1]

    def segment(self, i: int, j: int) -> "Trajectory":
        return Trajectory(self.positions[i:j + 1].copy())


def _headings_from_positions(positions: np.ndarray) -> np.ndarray:
    diffs = np.diff(positions, axis=0)
    head = np.arctan2(diffs[:, 1], diffs[:, 0])
    return np.append(head, head[-1])


def smooth_headings(trajectory: Trajectory) -> Trajectory:
    """Recompute headings from the waypoint geometry; positions untouched."""
    return Trajectory(trajectory.positions.copy())


@dataclass
class PlanRequest:
    start: GridPosition
    goal: GridPosition
    temporary_obstacles: tuple[Ellipse, ...] = ()


# 8-connected moves with costs; order fixed for determinism.
_MOVES = [
    (1, 0, 1.0), (-1, 0, 1.0), (0, 1, 1.0), (0, -1, 1.0),
    (1, 1, math.sqrt(2)), (1, -1, math.sqrt(2)),
    (-1, 1, math.sqrt(2)), (-1, -1, math.sqrt(2)),
]


def _octile(ax: int, ay: int, bx: int, by: int) -> float:
    dx, dy = abs(ax - bx), abs(ay - by)
    return (dx + dy) + (math.sqrt(2) - 2.0) * min(dx, dy)


def blocked_mask(grid: OccupancyGrid, robot_radius: float,
                 ellipses: tuple[Ellipse, ...] = ()) -> np.ndarray:
    """Planning obstacle mask: statics inflated by the robot radius, plus
    temporary ellipses inflated likewise (their MO size is already folded in)."""
    mask = inflated_blocked_mask(grid, robot_radius)
    if ellipses:
        res = grid.resolution
        h, w = mask.shape
        for e in ellipses:
            ei = e.inflate(robot_radius)
            reach = max(ei.a, ei.b)
            ix0 = max(0, int((ei.cx - reach) / res) - 1)
            ix1 = min(w, int((ei.cx + reach) / res) + 2)
            iy0 = max(0, int((ei.cy - reach) / res) - 1)
            iy1 = min(h, int((ei.cy + reach) / res) + 2)
            for iy in range(iy0, iy1):
                cy = (iy + 0.5) * res
                for ix in range(ix0, ix1):
                    if not mask[iy, ix] and ei.contains((ix + 0.5) * res, cy):
                        mask[iy, ix] = True
    return mask


def plan_path(grid: OccupancyGrid, request: PlanRequest,
              robot_radius: float) -> Trajectory | None:
    """8-connected A* over the inflated grid. Returns None when the goal is
    unreachable (callers translate that to an infinite cost).

    A start inside a temporary ellipse (but clear of static inflation) is
    escapable: the robot is standing in the conservative region around an
    obstacle, not in collision, so the shortest route out is carved free.
    """
    mask = blocked_mask(grid, robot_radius, tuple(request.temporary_obstacles))
    if request.temporary_obstacles:
        sy, sx = grid.cell_index(request.start.x, request.start.y)
        h, w = mask.shape
        if 0 <= sy < h and 0 <= sx < w and mask[sy, sx]:
            static = inflated_blocked_mask(grid, robot_radius)
            if not static[sy, sx]:
                _carve_escape(mask, static, sy, sx)
    return _astar_on_mask(grid, mask, request.start, request.goal)


def _carve_escape(mask: np.ndarray, static: np.ndarray, sy: int, sx: int) -> None:
    """Unblock the shortest statics-respecting route from (sy, sx) to the
    nearest cell that is free in `mask`, in place."""
    from collections import deque

    h, w = mask.shape
    prev: dict[tuple[int, int], tuple[int, int]] = {(sy, sx): (sy, sx)}
    queue = deque([(sy, sx)])
    while queue:
        cy, cx = queue.popleft()
        if not mask[cy, cx]:
            while (cy, cx) != (sy, sx):
                mask[cy, cx] = False
                cy, cx = prev[(cy, cx)]
            mask[sy, sx] = False
            return
        for dx, dy, _ in _MOVES:
            ny, nx = cy + dy, cx + dx
            if (0 <= ny < h and 0 <= nx < w and not static[ny, nx]
                    and (ny, nx) not in prev):
                prev[(ny, nx)] = (cy, cx)
                queue.append((ny, nx))


def _astar_on_mask(grid: OccupancyGrid, mask: np.ndarray,
                   start: GridPosition, goal: GridPosition) -> Trajectory | None:
    res = grid.resolution
    sy, sx = grid.cell_index(start.x, start.y)
    gy, gx = grid.cell_index(goal.x, goal.y)
    h, w = mask.shape
    for (iy, ix) in ((sy, sx), (gy, gx)):
        if not (0 <= iy < h and 0 <= ix < w):
            raise EndpointBlocked("endpoint outside map")
        if mask[iy, ix]:
            raise EndpointBlocked("endpoint blocked")
    if (sy, sx) == (gy, gx):
        raise ValueError("start equals goal")

    g = np.full((h, w), np.inf)
    turns = np.full((h, w), np.inf)  # tie-break: cumulative turn count
    parent = np.full((h, w), -1, dtype=np.int32)
    parent_dir = np.full((h, w), -1, dtype=np.int8)
    g[sy, sx] = 0.0
    turns[sy, sx] = 0.0
    counter = 0
    heap = [(_octile(sx, sy, gx, gy), 0.0, counter, sx, sy)]
    closed = np.zeros((h, w), dtype=bool)
    while heap:
        _, _, _, cx, cy = heapq.heappop(heap)
        if closed[cy, cx]:
            continue
        closed[cy, cx] = True
        if (cy, cx) == (gy, gx):
            break
        base_g = g[cy, cx]
        base_t = turns[cy, cx]
        pdir = parent_dir[cy, cx]
        for mi, (dx, dy, cost) in enumerate(_MOVES):
            nx, ny = cx + dx, cy + dy
            if not (0 <= nx < w and 0 <= ny < h) or mask[ny, nx] or closed[ny, nx]:
                continue
            ng = base_g + cost
            nt = base_t + (0.0 if pdir in (-1, mi) else 1.0)
            if ng < g[ny, nx] - 1e-12 or (ng < g[ny, nx] + 1e-12 and nt < turns[ny, nx]):
                g[ny, nx] = ng
                turns[ny, nx] = nt
                parent[ny, nx] = cy * w + cx
                parent_dir[ny, nx] = mi
                counter += 1
                heapq.heappush(heap, (ng + _octile(nx, ny, gx, gy), nt, counter, nx, ny))
    if not closed[gy, gx]:
        return None

    cells = []
    cur = gy * w + gx
    while cur != -1:
        cells.append(divmod(cur, w))
        cur = int(parent[cells[-1][0], cells[-1][1]])
    cells.reverse()
    positions = np.array([[(ix + 0.5) * res, (iy + 0.5) * res] for iy, ix in cells])
    return Trajectory(positions)


def dijkstra_cost(grid: OccupancyGrid, mask: np.ndarray,
                  start: GridPosition, goal: GridPosition) -> float:
    """Plain Dijkstra path cost in cell units; oracle for A* optimality tests."""
    res = grid.resolution
    sy, sx = grid.cell_index(start.x, start.y)
    gy, gx = grid.cell_index(goal.x, goal.y)
    h, w = mask.shape
    dist = np.full((h, w), np.inf)
    dist[sy, sx] = 0.0
    heap = [(0.0, sx, sy)]
    while heap:
        d, cx, cy = heapq.heappop(heap)
        if d > dist[cy, cx]:
            continue
        if (cy, cx) == (gy, gx):
            return d
        for dx, dy, cost in _MOVES:
            nx, ny = cx + dx, cy + dy
            if 0 <= nx < w and 0 <= ny < h and not mask[ny, nx]:
                nd = d + cost
                if nd < dist[ny, nx]:
                    dist[ny, nx] = nd
                    heapq.heappush(heap, (nd, nx, ny))
    return math.inf
