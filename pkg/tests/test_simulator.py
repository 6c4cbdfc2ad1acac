"""Episode simulation: configs, motion time, sensing, policies, determinism."""

import math

import numpy as np
import pytest

from namoplan import scenario_path
from namoplan.gridmap import STATIC, OccupancyGrid
from namoplan.planner import Trajectory
from namoplan.simulator import (POLICIES, ObstacleSpec, RobotConfig,
                                ScenarioConfig, ScenarioError, TrialRecord,
                                _Episode, get_policy, motion_time, run_episode)

# -- helpers ------------------------------------------------------------


def _write_map(tmp_path, cells=None, width=60, height=40, resolution=0.1):
    grid = (OccupancyGrid(resolution, cells) if cells is not None
            else OccupancyGrid.empty(width, height, resolution))
    path = tmp_path / "test.map"
    grid.save(path)
    return str(path)


def _config(tmp_path, obstacles=(), true_sr=0.9, **overrides):
    cfg = ScenarioConfig(
        scenario_id="unit",
        map_path=_write_map(tmp_path),
        robot=RobotConfig(start=(0.7, 2.0), sensor_range=3.0),
        goal=(5.3, 2.0),
        obstacles=[ObstacleSpec(label, pos, 0.3, true_sr)
                   for label, pos in obstacles],
        **overrides,
    )
    cfg.bypass_model.n_rows = 200  # keep test-model training cheap
    return cfg


# -- configuration ------------------------------------------------------


def test_yaml_round_trip_fields():
    cfg = ScenarioConfig.from_yaml(scenario_path("warehouse_abc.yaml"))
    assert cfg.scenario_id == "warehouse_abc"
    assert cfg.robot.start == (1.0, 9.0)
    assert cfg.goal == (18.0, 9.0)
    assert [o.label for o in cfg.obstacles] == ["A", "B", "C"]
    assert cfg.timeout == 300.0


def test_malformed_yaml_rejected(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("goal: [1, 1\n  map: x")
    with pytest.raises(ScenarioError):
        ScenarioConfig.from_yaml(bad)


def test_missing_required_field_rejected(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("map: nowhere.map\n")
    with pytest.raises(ScenarioError):
        ScenarioConfig.from_yaml(bad)


def test_invariants_validated(tmp_path):
    with pytest.raises(ScenarioError):
        _config(tmp_path, timeout=0.0)
    with pytest.raises(ScenarioError):
        _config(tmp_path, estimated_sr=1.5)
    with pytest.raises(ScenarioError):
        _config(tmp_path, obstacles=[("X", (1.0, 1.0))], true_sr=2.0)


def test_obstacle_must_sit_in_free_cell(tmp_path):
    cells = np.zeros((40, 60), np.uint8)
    cells[20, 30] = STATIC
    cfg = _config(tmp_path, obstacles=[("X", (3.05, 2.05))])
    cfg.map_path = _write_map(tmp_path, cells)
    with pytest.raises(ScenarioError):
        cfg.load_grid()


def test_unknown_policy_rejected():
    with pytest.raises(ValueError):
        get_policy("does-not-exist")
    assert set(POLICIES) == {
        "uncertainty", "uncertainty-no-action", "uncertainty-no-blockage",
        "priority-bypass", "priority-removal", "random-choice"}


# -- motion time --------------------------------------------------------


def test_motion_time_straight():
    t = Trajectory(np.array([[0.0, 0.0], [10.0, 0.0]]))
    assert motion_time(t, 0.5, 1.0) == pytest.approx(20.0)


def test_motion_time_turn():
    t = Trajectory(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]]))
    expected = 2.0 / 0.5 + (math.pi / 2) / 1.0
    assert motion_time(t, 0.5, 1.0) == pytest.approx(expected)


def test_motion_time_l_path_additive():
    t = Trajectory(np.array([[0.0, 0.0], [5.0, 0.0], [5.0, 5.0]]))
    assert motion_time(t, 0.5, 1.0) == pytest.approx(20.0 + math.pi / 2)


# -- sensing ------------------------------------------------------------


def test_sense_occluded_obstacle_not_seen(tmp_path):
    cells = np.zeros((40, 60), np.uint8)
    cells[:, 20] = STATIC  # wall at x in [2.0, 2.1)
    cfg = _config(tmp_path, obstacles=[("X", (2.6, 2.0))])
    cfg.map_path = _write_map(tmp_path, cells)
    ep = _Episode(cfg, get_policy("priority-removal"), seed=0, model=None)
    ep.sense()
    assert "X" not in ep.beliefs


def test_sense_noiseless_is_exact(tmp_path):
    cfg = _config(tmp_path, obstacles=[("X", (2.0, 2.0))])
    cfg.noise.meas_cov_diag = (0.0, 0.0)
    cfg.noise.robot_cov_diag = (0.0, 0.0, 0.0)
    ep = _Episode(cfg, get_policy("priority-removal"), seed=0, model=None)
    ep.sense()
    assert ep.beliefs["X"].mean == pytest.approx([2.0, 2.0], abs=1e-9)


def test_sense_out_of_fov_not_seen(tmp_path):
    cfg = _config(tmp_path, obstacles=[("X", (0.7, 3.5))])  # behind/above
    ep = _Episode(cfg, get_policy("priority-removal"), seed=0, model=None)
    ep.sense()  # robot faces +x with a 90 degree fov
    assert "X" not in ep.beliefs


def test_sense_noise_matches_configured_covariance(tmp_path):
    cfg = _config(tmp_path, obstacles=[("X", (2.5, 2.4))])
    var_d, var_phi = cfg.noise.meas_cov_diag
    ep = _Episode(cfg, get_policy("priority-removal"), seed=0, model=None)
    rx, ry = cfg.robot.start
    samples = []
    for _ in range(10_000):
        ep.beliefs.clear()
        ep.sense()
        mx, my = ep.beliefs["X"].mean
        d = math.hypot(mx - rx, my - ry)
        phi = math.atan2(my - ry, mx - rx) - ep.heading
        samples.append((d, phi))
    cov = np.cov(np.array(samples).T)
    assert cov[0, 0] == pytest.approx(var_d, rel=0.05)
    assert cov[1, 1] == pytest.approx(var_phi, rel=0.05)


# -- episodes -----------------------------------------------------------


def test_empty_map_direct_path(tmp_path):
    cfg = _config(tmp_path)
    record = run_episode(cfg, "uncertainty", seed=0)
    assert record.outcome == "success"
    # no obstacles: elapsed equals the motion time of the planned path
    from namoplan.gridmap import GridPosition
    from namoplan.planner import PlanRequest, plan_path
    traj = plan_path(cfg.load_grid(),
                     PlanRequest(GridPosition(*cfg.robot.start),
                                 GridPosition(*cfg.goal)),
                     cfg.robot.radius)
    expected = motion_time(traj, cfg.robot.v_lin, cfg.robot.v_rot)
    # the first heading alignment from start_heading is also charged
    assert record.elapsed == pytest.approx(expected, abs=1.0)
    assert record.diagnostics["n_attempts"] == 0


def test_certain_load_succeeds_first_try(tmp_path):
    cfg = _config(tmp_path, obstacles=[("X", (3.0, 2.0))], true_sr=1.0)
    record = run_episode(cfg, "priority-removal", seed=3)
    attempts = [e for e in record.decisions if e["event"] == "attempt"]
    assert record.outcome == "success"
    assert len(attempts) == 1 and attempts[0]["success"]
    placed = [e for e in record.decisions if e["event"] == "placed"]
    assert len(placed) == 1


def test_impossible_load_times_out(tmp_path):
    # wall with a single doorway: no bypass exists around the obstacle
    cells = np.zeros((40, 60), np.uint8)
    cells[:, 29:31] = STATIC
    cells[15:26, 29:31] = 0
    cfg = _config(tmp_path, obstacles=[("X", (3.0, 2.0))], true_sr=0.0)
    cfg.map_path = _write_map(tmp_path, cells)
    record = run_episode(cfg, "priority-removal", seed=3)
    attempts = [e for e in record.decisions if e["event"] == "attempt"]
    assert record.outcome == "timeout"
    assert attempts and not any(e["success"] for e in attempts)
    assert record.elapsed == cfg.timeout


def test_attempt_rate_tracks_true_sr(tmp_path):
    cfg = _config(tmp_path, obstacles=[("X", (3.0, 2.0))], true_sr=0.5)
    outcomes = []
    for seed in range(50):
        record = run_episode(cfg, "priority-removal", seed=seed)
        first = next(e for e in record.decisions if e["event"] == "attempt")
        outcomes.append(first["success"])
    rate = np.mean(outcomes)
    assert 0.3 <= rate <= 0.7


def test_successful_removal_clears_the_path(tmp_path):
    cfg = _config(tmp_path, obstacles=[("X", (3.0, 2.0))], true_sr=1.0)
    record = run_episode(cfg, "priority-removal", seed=0)
    assert record.outcome == "success"
    placed = next(e for e in record.decisions if e["event"] == "placed")
    sx, sy = placed["stock"]
    # the obstacle ends away from the straight start-goal corridor
    assert abs(sy - 2.0) >= 0.5 or not (0.7 <= sx <= 5.3)


def test_clock_non_decreasing(tmp_path):
    cfg = _config(tmp_path, obstacles=[("X", (3.0, 2.0))], true_sr=0.5)
    record = run_episode(cfg, "uncertainty", seed=5)
    times = [e["t"] for e in record.decisions]
    assert times == sorted(times)
    if record.outcome == "success":
        assert record.elapsed <= cfg.timeout


def test_random_choice_policy_runs(tmp_path):
    cfg = _config(tmp_path, obstacles=[("X", (3.0, 2.0))], true_sr=0.9)
    choices = set()
    for seed in range(8):
        record = run_episode(cfg, "random-choice", seed=seed)
        assert record.outcome == "success"
        for e in record.decisions:
            if e["event"] == "decision":
                choices.add(e["policy_choice"])
    assert choices >= {"bypass", "remove"}


# -- determinism and records --------------------------------------------


def test_identical_runs_are_byte_identical(room_config):
    a = run_episode(room_config, "uncertainty", seed=4)
    b = run_episode(room_config, "uncertainty", seed=4)
    assert a.to_json_line() == b.to_json_line()


def test_different_seeds_differ(tmp_path):
    cfg = _config(tmp_path, obstacles=[("X", (3.0, 2.0))], true_sr=0.5)
    lines = {run_episode(cfg, "priority-removal", seed=s).to_json_line()
             for s in range(6)}
    assert len(lines) > 1


def test_trial_record_json_round_trip(room_config):
    record = run_episode(room_config, "uncertainty", seed=1)
    clone = TrialRecord.from_json_line(record.to_json_line())
    assert clone.to_json_line() == record.to_json_line()
