"""Occupancy-grid world model: ray casting, corridor widths, visibility."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import ndimage

FREE = 0
STATIC = 1
MOVABLE_MARK = 2

_CELL_CHARS = {FREE: ".", STATIC: "#", MOVABLE_MARK: "o"}
_CHAR_CELLS = {v: k for k, v in _CELL_CHARS.items()}


class QueryInsideObstacle(ValueError):
    """Raised when a free-space query lands inside an obstacle cell."""


@dataclass
class GridPosition:
    x: float
    y: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)


@dataclass
class OccupancyGrid:
    """Row-major cell grid. cells[iy, ix] covers
    [ix*res, (ix+1)*res) x [iy*res, (iy+1)*res).

    The explored mask only ever grows during a run.
    """

    resolution: float
    cells: np.ndarray
    explored: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.resolution <= 0:
            raise ValueError("resolution must be positive")
        self.cells = np.asarray(self.cells, dtype=np.uint8)
        if self.cells.ndim != 2 or min(self.cells.shape) < 1:
            raise ValueError("cells must be a non-empty 2D array")
        if self.explored is None:
            self.explored = np.zeros_like(self.cells, dtype=bool)
        else:
            self.explored = np.asarray(self.explored, dtype=bool)
            if self.explored.shape != self.cells.shape:
                raise ValueError("explored mask shape mismatch")

    # -- construction -------------------------------------------------

    @staticmethod
    def empty(width_cells: int, height_cells: int, resolution: float) -> "OccupancyGrid":
        return OccupancyGrid(resolution, np.full((height_cells, width_cells), FREE, np.uint8))

    def copy(self) -> "OccupancyGrid":
        return OccupancyGrid(self.resolution, self.cells.copy(), self.explored.copy())

    # -- geometry helpers ---------------------------------------------

    @property
    def width_cells(self) -> int:
        return self.cells.shape[1]

    @property
    def height_cells(self) -> int:
        return self.cells.shape[0]

    @property
    def width_m(self) -> float:
        return self.width_cells * self.resolution

    @property
    def height_m(self) -> float:
        return self.height_cells * self.resolution

    def cell_index(self, x: float, y: float) -> tuple[int, int]:
        return int(y / self.resolution), int(x / self.resolution)

    def cell_center(self, iy: int, ix: int) -> tuple[float, float]:
        return (ix + 0.5) * self.resolution, (iy + 0.5) * self.resolution

    def in_bounds(self, x: float, y: float) -> bool:
        return 0.0 <= x < self.width_m and 0.0 <= y < self.height_m

    def state_at(self, x: float, y: float) -> int:
        # Everything outside the map counts as static, like the border.
        if not self.in_bounds(x, y):
            return STATIC
        iy, ix = self.cell_index(x, y)
        return int(self.cells[iy, ix])

    def is_free(self, x: float, y: float) -> bool:
        return self.state_at(x, y) == FREE

    def is_explored(self, x: float, y: float) -> bool:
        if not self.in_bounds(x, y):
            return True
        iy, ix = self.cell_index(x, y)
        return bool(self.explored[iy, ix])

    # -- file format ---------------------------------------------------

    def to_text(self) -> str:
        header = f"{self.width_cells} {self.height_cells} {self.resolution}\n"
        rows = "".join(
            "".join(_CELL_CHARS[int(c)] for c in row) + "\n" for row in self.cells
        )
        return header + rows

    @staticmethod
    def from_text(text: str) -> "OccupancyGrid":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        try:
            w, h, res = lines[0].split()
            width, height, resolution = int(w), int(h), float(res)
        except (IndexError, ValueError) as exc:
            raise ValueError("malformed map header") from exc
        if len(lines) - 1 != height:
            raise ValueError(f"expected {height} rows, got {len(lines) - 1}")
        cells = np.zeros((height, width), np.uint8)
        for iy, line in enumerate(lines[1:]):
            if len(line) != width:
                raise ValueError(f"row {iy} has {len(line)} cells, expected {width}")
            for ix, ch in enumerate(line):
                if ch not in _CHAR_CELLS:
                    raise ValueError(f"unknown cell character {ch!r}")
                cells[iy, ix] = _CHAR_CELLS[ch]
        return OccupancyGrid(resolution, cells)

    @staticmethod
    def load(path: str | Path) -> "OccupancyGrid":
        return OccupancyGrid.from_text(Path(path).read_text())

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())


# ----------------------------------------------------------------------
# queries


def raycast_distance(grid: OccupancyGrid, x: float, y: float, angle: float,
                     max_range: float | None = None) -> float:
    """Distance from (x, y) to the first static cell or map border along angle."""
    step = grid.resolution * 0.5
    limit = max_range if max_range is not None else grid.width_m + grid.height_m
    dx, dy = math.cos(angle), math.sin(angle)
    d = step
    while d <= limit:
        if grid.state_at(x + d * dx, y + d * dy) == STATIC:
            return d
        d += step
    return limit


def raycast_width(grid: OccupancyGrid, point: GridPosition, heading: float) -> float:
    """Free-space span perpendicular to heading through point.

    Measures the corridor width at a waypoint: distance between the first
    static hit on each side of the traversal line.
    """
    if grid.state_at(point.x, point.y) != FREE:
        raise QueryInsideObstacle("query inside obstacle")
    perp = heading + math.pi / 2.0
    left = raycast_distance(grid, point.x, point.y, perp)
    right = raycast_distance(grid, point.x, point.y, perp + math.pi)
    return max(left + right, grid.resolution)


def free_area(grid: OccupancyGrid) -> float:
    """Total area of free cells in square meters."""
    return float(np.count_nonzero(grid.cells == FREE)) * grid.resolution ** 2


def mark_explored(grid: OccupancyGrid, x: float, y: float, heading: float,
                  sensor_range: float = 5.0, fov: float = math.pi / 2.0) -> None:
    """Grow the explored mask with single-bounce visibility from (x, y).

    Rays are cast over the field of view; cells behind the first static hit
    stay unexplored. Mutates the grid in place.
    """
    if not grid.in_bounds(x, y):
        raise ValueError("robot pose outside map")
    res = grid.resolution
    # Angular step fine enough that adjacent rays at max range are < 1 cell apart.
    n_rays = max(8, int(math.ceil(fov * sensor_range / (0.5 * res))))
    angles = heading + np.linspace(-fov / 2.0, fov / 2.0, n_rays)
    steps = np.arange(0.0, sensor_range + res, 0.5 * res)
    iy0, ix0 = grid.cell_index(x, y)
    grid.explored[iy0, ix0] = True
    h, w = grid.cells.shape
    for ang in angles:
        xs = x + steps * math.cos(ang)
        ys = y + steps * math.sin(ang)
        ixs = (xs / res).astype(int)
        iys = (ys / res).astype(int)
        inside = (ixs >= 0) & (ixs < w) & (iys >= 0) & (iys < h)
        for ix, iy, ok in zip(ixs, iys, inside):
            if not ok:
                break
            grid.explored[iy, ix] = True
            if grid.cells[iy, ix] == STATIC:
                break


def inflated_blocked_mask(grid: OccupancyGrid, radius: float) -> np.ndarray:
    """Boolean mask of cells whose center is within radius of any static cell
    (or the map border). Used as the planning substrate."""
    static = grid.cells == STATIC
    # Pad with a static border so the map edge inflates inward.
    padded = np.pad(static, 1, constant_values=True)
    dist = ndimage.distance_transform_edt(~padded) * grid.resolution
    return dist[1:-1, 1:-1] <= radius
