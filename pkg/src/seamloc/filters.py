"""Correction back-ends: indoor map-constrained particle filter and outdoor
gyro+magnetometer heading Kalman filter.

The particle filter tracks position only; heading comes from dead reckoning.
Particles whose per-step movement would cross a wall get weight zero, which
is what actually corrects the track indoors. Outdoors there are no obstacles,
so a two-state Kalman filter [heading, gyro_bias] fuses the gyro rate with
magnetometer heading instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import FilterDivergenceError, InvalidParameterError, UnreliableMeasurementError
from .geometry import FloorPlan, Point2, _segments_cross
from .pdr import PdrConfig, Pose, wrap_angle
from .signal import ImuSample


@dataclass(frozen=True)
class Particle:
    position: Point2
    weight: float


@dataclass
class ParticleSet:
    """Weighted particle cloud; carries its own RNG stream for determinism."""

    positions: np.ndarray  # (N, 2)
    weights: np.ndarray  # (N,), sums to 1
    rng_seed: int
    rng: np.random.Generator

    def __len__(self) -> int:
        return len(self.weights)

    def particle(self, i: int) -> Particle:
        return Particle(Point2(*self.positions[i]), float(self.weights[i]))


@dataclass(frozen=True)
class PfConfig:
    particle_count: int = 1000
    step_sigma: float = 0.1
    heading_sigma: float = 0.087  # ~5 degrees
    init_sigma: float = 0.5
    resample_threshold: float = 0.5  # fraction of particle_count

    def __post_init__(self):
        if self.particle_count < 1:
            raise InvalidParameterError("particle_count must be >= 1")
        if min(self.step_sigma, self.heading_sigma, self.init_sigma) < 0:
            raise InvalidParameterError("noise sigmas must be non-negative")
        if not 0 < self.resample_threshold <= 1:
            raise InvalidParameterError("resample_threshold must be in (0, 1]")


def pf_init(pose0: Pose, cfg: PfConfig, seed: int = 0) -> ParticleSet:
    """Fresh particle cloud around pose0: isotropic Gaussian, uniform weights."""
    rng = np.random.default_rng(seed)
    center = np.array([pose0.position.x, pose0.position.y])
    positions = center + rng.normal(0.0, cfg.init_sigma, size=(cfg.particle_count, 2))
    weights = np.full(cfg.particle_count, 1.0 / cfg.particle_count)
    return ParticleSet(positions=positions, weights=weights, rng_seed=seed, rng=rng)


def _systematic_resample(pset: ParticleSet) -> None:
    n = len(pset)
    u0 = pset.rng.uniform(0.0, 1.0 / n)
    points = u0 + np.arange(n) / n
    cumulative = np.cumsum(pset.weights)
    cumulative[-1] = 1.0
    idx = np.searchsorted(cumulative, points)
    pset.positions = pset.positions[idx]
    pset.weights = np.full(n, 1.0 / n)


def pf_step(
    pset: ParticleSet,
    heading: float,
    cfg: PfConfig,
    pdr_cfg: PdrConfig,
    plan: FloorPlan,
) -> tuple[ParticleSet, Point2]:
    """Advance the cloud one step and return (updated set, position estimate).

    Each particle moves step_length + N(0, step_sigma^2) along
    heading + N(0, heading_sigma^2). Movements that cross a wall zero the
    particle's weight; weights renormalize, and systematic resampling fires
    when the effective sample size drops below the configured fraction.

    Raises FilterDivergenceError when every particle crossed a wall; the
    caller re-initializes via pf_init at the last valid estimate.
    """
    n = len(pset)
    lengths = pdr_cfg.step_length + pset.rng.normal(0.0, cfg.step_sigma, n)
    headings = heading + pset.rng.normal(0.0, cfg.heading_sigma, n)
    moved = pset.positions + np.column_stack(
        [lengths * np.cos(headings), lengths * np.sin(headings)]
    )

    weights = pset.weights.copy()
    walls = plan.wall_array()
    if walls.shape[0]:
        weights[_segments_cross(pset.positions, moved, walls)] = 0.0

    total = weights.sum()
    if total <= 0.0:
        raise FilterDivergenceError("every particle crossed a wall")
    weights /= total
    estimate = Point2(float(weights @ moved[:, 0]), float(weights @ moved[:, 1]))

    out = ParticleSet(positions=moved, weights=weights, rng_seed=pset.rng_seed, rng=pset.rng)
    ess = 1.0 / float(np.sum(weights**2))
    if ess < cfg.resample_threshold * n:
        _systematic_resample(out)
    return out, estimate


@dataclass
class HeadingKfState:
    heading: float  # radians, wrapped
    gyro_bias: float  # rad/s
    covariance: np.ndarray  # 2x2 symmetric PSD


@dataclass(frozen=True)
class KfConfig:
    q_heading: float = 1e-3  # rad^2/s
    q_bias: float = 1e-6  # (rad/s)^2/s
    r_mag: float = 0.05  # rad^2
    declination: float = 0.0

    def __post_init__(self):
        if min(self.q_heading, self.q_bias) <= 0 or self.r_mag <= 0:
            raise InvalidParameterError("noise terms must be positive")


def kf_init(heading: float, heading_var: float = 0.25, bias_var: float = 0.0025) -> HeadingKfState:
    """Kalman state at a known heading with default prior uncertainty."""
    return HeadingKfState(
        heading=wrap_angle(heading),
        gyro_bias=0.0,
        covariance=np.diag([heading_var, bias_var]),
    )


def mag_heading(sample: ImuSample, cfg: KfConfig = KfConfig()) -> float:
    """Heading from the horizontal magnetometer components.

    Raises UnreliableMeasurementError when the horizontal field is under
    1 microtesla; the caller skips the Kalman update.
    """
    mx, my, _ = sample.mag
    if math.hypot(mx, my) < 1.0:
        raise UnreliableMeasurementError(f"horizontal field {math.hypot(mx, my):.3g} uT")
    return wrap_angle(math.atan2(-my, mx) + cfg.declination)


def kf_predict(state: HeadingKfState, gyro_yaw_rate: float, dt: float, cfg: KfConfig) -> HeadingKfState:
    """Propagate heading by the bias-corrected gyro rate; grow covariance."""
    if dt <= 0:
        raise InvalidParameterError(f"dt must be positive, got {dt}")
    heading = wrap_angle(state.heading + (gyro_yaw_rate - state.gyro_bias) * dt)
    f = np.array([[1.0, -dt], [0.0, 1.0]])
    q = np.diag([cfg.q_heading * dt, cfg.q_bias * dt])
    cov = f @ state.covariance @ f.T + q
    cov = 0.5 * (cov + cov.T)
    return HeadingKfState(heading=heading, gyro_bias=state.gyro_bias, covariance=cov)


def kf_update(state: HeadingKfState, measured_heading: float, cfg: KfConfig) -> HeadingKfState:
    """Measurement update with H = [1, 0] and wrapped innovation."""
    if not math.isfinite(cfg.r_mag):
        return state  # uninformative measurement
    p = state.covariance
    innovation = wrap_angle(measured_heading - state.heading)
    s = p[0, 0] + cfg.r_mag
    k = p[:, 0] / s
    heading = wrap_angle(state.heading + k[0] * innovation)
    bias = state.gyro_bias + k[1] * innovation
    ikh = np.eye(2) - np.outer(k, [1.0, 0.0])
    cov = ikh @ p @ ikh.T + cfg.r_mag * np.outer(k, k)  # Joseph form, keeps PSD
    cov = 0.5 * (cov + cov.T)
    return HeadingKfState(heading=heading, gyro_bias=bias, covariance=cov)
