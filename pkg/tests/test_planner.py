"""A* planning: optimality against Dijkstra, ellipse obstacles, headings."""

import math

import numpy as np
import pytest

from conftest import grid_from_ascii
from namoplan.gridmap import STATIC, GridPosition, OccupancyGrid
from namoplan.planner import (Ellipse, EndpointBlocked, PlanRequest, Trajectory,
                              blocked_mask, dijkstra_cost, plan_path,
                              smooth_headings)

# -- trajectory basics --------------------------------------------------


def test_trajectory_needs_two_waypoints():
    with pytest.raises(ValueError):
        Trajectory(np.array([[1.0, 1.0]]))


def test_total_length_sums_gaps():
    t = Trajectory(np.array([[0.0, 0.0], [3.0, 0.0], [3.0, 4.0]]))
    assert t.total_length == pytest.approx(7.0, rel=1e-9)


def test_headings_point_at_successor():
    t = Trajectory(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]]))
    assert t.headings[0] == pytest.approx(0.0)
    assert t.headings[1] == pytest.approx(math.pi / 2)
    # last waypoint inherits its predecessor's heading
    assert t.headings[2] == pytest.approx(math.pi / 2)


def test_smooth_headings_leaves_positions():
    t = Trajectory(np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 1.0]]))
    s = smooth_headings(t)
    assert np.array_equal(s.positions, t.positions)
    assert s.headings[1] == pytest.approx(math.atan2(1.0, 1.0))


def test_segment_slices_inclusive():
    t = Trajectory(np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]]))
    seg = t.segment(1, 3)
    assert len(seg) == 3
    assert seg.start[0] == pytest.approx(1.0)
    assert seg.goal[0] == pytest.approx(3.0)


# -- straight-line planning ---------------------------------------------


def test_straight_path_eight_meters():
    g = OccupancyGrid.empty(100, 30, 0.1)
    traj = plan_path(g, PlanRequest(GridPosition(1.0, 1.5), GridPosition(9.0, 1.5)),
                     robot_radius=0.3)
    assert traj is not None
    assert traj.total_length == pytest.approx(8.0, abs=2 * g.resolution)
    # straight: every heading equal
    assert np.allclose(traj.headings, traj.headings[0])


def test_start_equals_goal_rejected():
    g = OccupancyGrid.empty(20, 20, 0.1)
    with pytest.raises(ValueError):
        plan_path(g, PlanRequest(GridPosition(1.0, 1.0), GridPosition(1.02, 1.04)),
                  robot_radius=0.1)


def test_endpoint_blocked_distinct_from_no_path():
    g = OccupancyGrid.empty(40, 40, 0.1)
    with pytest.raises(EndpointBlocked):
        plan_path(g, PlanRequest(GridPosition(0.1, 0.1), GridPosition(2.0, 2.0)),
                  robot_radius=0.3)


def test_no_path_when_walled_off():
    g = grid_from_ascii("""
..........
..........
..........
..........
##########
..........
..........
..........
..........
..........
""", resolution=0.5)
    traj = plan_path(g, PlanRequest(GridPosition(1.2, 1.2), GridPosition(1.2, 4.2)),
                     robot_radius=0.2)
    assert traj is None


def test_corridor_covered_by_ellipse_gives_no_path(corridor_grid):
    e = Ellipse(5.0, 2.0, 0.5, 1.2, 0.0)
    traj = plan_path(corridor_grid,
                     PlanRequest(GridPosition(1.0, 2.0), GridPosition(9.0, 2.0),
                                 (e,)),
                     robot_radius=0.3)
    assert traj is None


# -- optimality and safety ----------------------------------------------


def test_astar_matches_dijkstra_on_random_maps():
    rng = np.random.default_rng(4)
    for trial in range(25):
        g = OccupancyGrid.empty(40, 40, 0.1)
        blocks = rng.random((40, 40)) < 0.25
        g.cells[blocks] = STATIC
        mask = blocked_mask(g, 0.05)
        free = np.argwhere(~mask)
        if len(free) < 2:
            continue
        (sy, sx), (gy, gx) = free[rng.integers(0, len(free), 2)]
        if (sy, sx) == (gy, gx):
            continue
        start = GridPosition(*g.cell_center(sy, sx))
        goal = GridPosition(*g.cell_center(gy, gx))
        oracle = dijkstra_cost(g, mask, start, goal)
        traj = plan_path(g, PlanRequest(start, goal), 0.05)
        if traj is None:
            assert math.isinf(oracle)
        else:
            cost = traj.total_length / g.resolution
            assert cost == pytest.approx(oracle, abs=1e-6)


def test_adding_obstacle_never_shortens():
    g = OccupancyGrid.empty(60, 60, 0.1)
    req = PlanRequest(GridPosition(1.0, 3.0), GridPosition(5.0, 3.0))
    base = plan_path(g, req, 0.2)
    e = Ellipse(3.0, 3.0, 0.4, 0.4, 0.0)
    detour = plan_path(g, PlanRequest(req.start, req.goal, (e,)), 0.2)
    assert base is not None and detour is not None
    assert detour.total_length >= base.total_length - 1e-9


def test_waypoints_clear_of_static_cells():
    g = grid_from_ascii("""
....................
....................
.......####.........
.......####.........
....................
....................
""", resolution=0.25)
    traj = plan_path(g, PlanRequest(GridPosition(0.6, 0.8), GridPosition(4.4, 0.8)),
                     robot_radius=0.2)
    assert traj is not None
    statics = np.argwhere(g.cells == STATIC)
    centers = np.array([g.cell_center(iy, ix) for iy, ix in statics])
    for p in traj.positions:
        assert np.min(np.linalg.norm(centers - p, axis=1)) > 0.2


def test_consecutive_waypoints_adjacent():
    g = OccupancyGrid.empty(50, 50, 0.1)
    traj = plan_path(g, PlanRequest(GridPosition(1.0, 1.0), GridPosition(4.0, 3.0)),
                     robot_radius=0.2)
    gaps = np.linalg.norm(np.diff(traj.positions, axis=0), axis=1)
    assert np.all(gaps <= math.sqrt(2) * g.resolution + 1e-9)


# -- escape from a temporary ellipse ------------------------------------


def test_start_inside_ellipse_is_escapable():
    g = OccupancyGrid.empty(60, 60, 0.1)
    e = Ellipse(3.0, 3.0, 1.0, 1.0, 0.0)
    traj = plan_path(g, PlanRequest(GridPosition(3.2, 3.0), GridPosition(5.5, 3.0),
                                    (e,)),
                     robot_radius=0.2)
    assert traj is not None
    assert traj.goal[0] == pytest.approx(5.55, abs=g.resolution)


def test_start_inside_static_inflation_still_blocked():
    g = OccupancyGrid.empty(60, 60, 0.1)
    e = Ellipse(3.0, 0.5, 1.0, 1.0, 0.0)
    # start is inside the border inflation, not just the ellipse
    with pytest.raises(EndpointBlocked):
        plan_path(g, PlanRequest(GridPosition(3.0, 0.15), GridPosition(5.5, 3.0),
                                 (e,)),
                  robot_radius=0.3)
