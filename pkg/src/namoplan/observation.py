"""Movable-obstacle pose estimation from range-bearing measurements.

Covariance propagation through the measurement geometry, static-state Kalman
fusion of repeated observations, confidence-ellipse extraction, and the
path-blockage test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import chi2

from .planner import Ellipse, Trajectory


class InvalidCovariance(ValueError):
    pass


def _check_psd(cov: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    cov = np.asarray(cov, dtype=float)
    if not np.allclose(cov, cov.T, atol=1e-9):
        raise InvalidCovariance("invalid covariance: not symmetric")
    if np.min(np.linalg.eigvalsh(cov)) < -tol:
        raise InvalidCovariance("invalid covariance: negative eigenvalue")
    return cov


def wrap_angle(a: float) -> float:
    """Wrap to (-pi, pi]."""
    w = math.remainder(a, 2.0 * math.pi)
    return math.pi if w <= -math.pi else w


@dataclass
class RobotPoseBelief:
    mean: np.ndarray  # (x_r, y_r, theta_r)
    cov: np.ndarray  # 3x3

    def __post_init__(self):
        self.mean = np.asarray(self.mean, dtype=float)
        self.cov = _check_psd(self.cov)


@dataclass
class RangeBearingMeasurement:
    d: float
    phi: float
    cov: np.ndarray  # 2x2
    target_id: str = ""

    def __post_init__(self):
        if self.d <= 0:
            raise ValueError("range must be positive")
        self.cov = _check_psd(self.cov)


@dataclass
class PoseBelief:
    mean: np.ndarray  # (x, y)
    cov: np.ndarray  # 2x2
    observation_count: int = 1

    def __post_init__(self):
        self.mean = np.asarray(self.mean, dtype=float)
        self.cov = _check_psd(self.cov)


@dataclass
class MovableObstacle:
    id: str
    belief: PoseBelief
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("MO radius must be positive")


def project_measurement(robot: RobotPoseBelief,
                        meas: RangeBearingMeasurement) -> PoseBelief:
    """Obstacle position belief from a range-bearing measurement.

    Mean: (x_r + d cos(theta_r + phi), y_r + d sin(theta_r + phi)).
    Covariance: first-order propagation through both Jacobians.
    """
    xr, yr, th = robot.mean
    ang = wrap_angle(th + meas.phi)
    c, s = math.cos(ang), math.sin(ang)
    d = meas.d
    mean = np.array([xr + d * c, yr + d * s])
    j_r = np.array([[1.0, 0.0, -d * s],
                    [0.0, 1.0, d * c]])
    j_y = np.array([[c, -d * s],
                    [s, d * c]])
    cov = j_r @ robot.cov @ j_r.T + j_y @ meas.cov @ j_y.T
    cov = 0.5 * (cov + cov.T)
    return PoseBelief(mean, cov, observation_count=1)


def fuse(prior: PoseBelief, obs: PoseBelief) -> PoseBelief:
    """Static-state Kalman update (identity transition and observation)."""
    s = prior.cov + obs.cov
    if np.trace(s) < 1e-12:
        if np.linalg.norm(prior.mean - obs.mean) > 1e-9:
            raise ValueError("inconsistent noiseless observations")
        return PoseBelief(prior.mean.copy(), prior.cov.copy(),
                          prior.observation_count + obs.observation_count)
    gain = prior.cov @ np.linalg.inv(s)
    mean = prior.mean + gain @ (obs.mean - prior.mean)
    cov = (np.eye(2) - gain) @ prior.cov
    cov = 0.5 * (cov + cov.T)
    # Numerical guard: fusion can only tighten the belief.
    cov = np.where(np.eye(2, dtype=bool), np.maximum(cov.diagonal(), 0.0), cov)
    return PoseBelief(mean, cov, prior.observation_count + obs.observation_count)


def confidence_ellipse(belief: PoseBelief, mo_radius: float,
                       confidence: float = 0.95) -> Ellipse:
    """Belief region at the given confidence, grown by the obstacle radius."""
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must be in (0, 1)")
    quantile = chi2.ppf(confidence, df=2)
    vals, vecs = np.linalg.eigh(belief.cov)
    vals = np.maximum(vals, 0.0)
    # eigh returns ascending order; major axis last.
    a = math.sqrt(vals[1] * quantile) + mo_radius
    b = math.sqrt(vals[0] * quantile) + mo_radius
    angle = math.atan2(vecs[1, 1], vecs[0, 1])
    return Ellipse(belief.mean[0], belief.mean[1], a, b, angle)


def path_blocked(trajectory: Trajectory, obstacles: list[MovableObstacle],
                 robot_radius: float, confidence: float = 0.95) -> str | None:
    """First obstacle (by path order) whose confidence ellipse, inflated by
    the robot radius, touches a waypoint. Closed-set convention: grazing
    contact counts as blocked."""
    ellipses = [(mo.id, confidence_ellipse(mo.belief, mo.radius, confidence))
                for mo in obstacles]
    for x, y in trajectory.positions:
        for mo_id, e in ellipses:
            if e.contains(x, y, margin=robot_radius):
                return mo_id
    return None
