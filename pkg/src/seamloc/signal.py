"""Accelerometer stream processing: normalized acceleration, steps, door openings.

The walk signature is carried entirely by the normalized acceleration
(magnitude minus gravity): gait cycles swing past +/-1.5 m/s^2, while door
manipulation shows up as a low-amplitude (+/-0.5 to 1.5 m/s^2) wiggle with
zero crossings and no step activity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, InvariantViolation


@dataclass(frozen=True)
class ImuSample:
    t: float
    accel: tuple[float, float, float]  # m/s^2
    gyro: tuple[float, float, float]  # rad/s
    mag: tuple[float, float, float]  # microtesla


@dataclass
class Trace:
    """Column-oriented IMU stream: t (N,), accel/gyro/mag (N, 3)."""

    t: np.ndarray
    accel: np.ndarray
    gyro: np.ndarray
    mag: np.ndarray

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.accel = np.asarray(self.accel, dtype=float).reshape(-1, 3)
        self.gyro = np.asarray(self.gyro, dtype=float).reshape(-1, 3)
        self.mag = np.asarray(self.mag, dtype=float).reshape(-1, 3)
        n = len(self.t)
        if not (len(self.accel) == len(self.gyro) == len(self.mag) == n):
            raise InvariantViolation("trace-equal-lengths", "sensor columns differ in length")
        if n and not np.all(np.diff(self.t) > 0):
            raise InvariantViolation("trace-monotonic-time", "timestamps not strictly increasing")
        for name, arr in (("t", self.t), ("accel", self.accel), ("gyro", self.gyro), ("mag", self.mag)):
            if not np.all(np.isfinite(arr)):
                raise InvariantViolation("trace-finite", f"non-finite value in {name}")

    def __len__(self) -> int:
        return len(self.t)

    def sample(self, i: int) -> ImuSample:
        return ImuSample(
            t=float(self.t[i]),
            accel=tuple(self.accel[i]),
            gyro=tuple(self.gyro[i]),
            mag=tuple(self.mag[i]),
        )


@dataclass(frozen=True)
class SignalConfig:
    g: float = 9.81
    step_hi: float = 1.5
    step_lo: float = -1.5
    door_hi: float = 0.5
    door_lo: float = -0.5
    step_refractory: float = 0.3
    door_window: float = 1.5
    door_min_zero_crossings: int = 2
    smooth_window: int = 1  # moving-average width in samples; 1 = off

    def __post_init__(self):
        if self.g <= 0:
            raise InvalidParameterError(f"gravity must be positive, got {self.g}")
        if not self.door_hi < self.step_hi:
            raise InvalidParameterError("door_hi must be below step_hi")
        if not self.door_lo > self.step_lo:
            raise InvalidParameterError("door_lo must be above step_lo")
        if self.step_refractory <= 0 or self.door_window <= 0:
            raise InvalidParameterError("time windows must be positive")
        if self.smooth_window < 1:
            raise InvalidParameterError("smooth_window must be >= 1")


@dataclass(frozen=True)
class StepEvent:
    index: int
    t: float  # time of the peak acceleration within the gait cycle
    peak: float


@dataclass(frozen=True)
class DoorOpenEvent:
    t_start: float
    t_end: float
    zero_crossings: int


def normalize_accel(sample: ImuSample, cfg: SignalConfig = SignalConfig()) -> float:
    """Acceleration magnitude minus gravity: sqrt(ax^2 + ay^2 + az^2) - g."""
    ax, ay, az = sample.accel
    return math.sqrt(ax * ax + ay * ay + az * az) - cfg.g


def normalized_series(trace: Trace, cfg: SignalConfig = SignalConfig()) -> tuple[np.ndarray, np.ndarray]:
    """Per-sample normalized acceleration for a whole trace."""
    a = np.linalg.norm(trace.accel, axis=1) - cfg.g
    if cfg.smooth_window > 1 and len(a):
        kernel = np.full(cfg.smooth_window, 1.0 / cfg.smooth_window)
        a = np.convolve(a, kernel, mode="same")
    return trace.t, a


def detect_steps(t: np.ndarray, a: np.ndarray, cfg: SignalConfig = SignalConfig()) -> list[StepEvent]:
    """Step events from a normalized-acceleration series.

    A gait cycle fires once the series rises to step_hi, crosses zero
    downward, and then drops to step_lo. The event is stamped at the cycle's
    peak; a refractory interval suppresses double counting.
    """
    t = np.asarray(t, dtype=float)
    a = np.asarray(a, dtype=float)
    events: list[StepEvent] = []
    armed = False
    saw_zero = False
    peak = 0.0
    peak_t = 0.0
    for i in range(len(a)):
        v = a[i]
        if not armed:
            if v >= cfg.step_hi:
                armed = True
                saw_zero = False
                peak = v
                peak_t = t[i]
            continue
        if v > peak:
            peak = v
            peak_t = t[i]
        if not saw_zero and i > 0 and a[i - 1] > 0.0 >= v:
            saw_zero = True
        if saw_zero and v <= cfg.step_lo:
            if not events or peak_t - events[-1].t >= cfg.step_refractory:
                events.append(StepEvent(index=len(events), t=float(peak_t), peak=float(peak)))
            armed = False
    return events


def _zero_crossing_flags(a: np.ndarray) -> np.ndarray:
    """Sign-change indicator between consecutive samples (length N-1).

    Exact zeros carry the preceding sign, so a series passing through zero
    counts one crossing rather than none.
    """
    n = len(a)
    if n < 2:
        return np.zeros(0, dtype=int)
    sign = np.sign(a)
    idx = np.arange(n)
    last_nonzero = np.maximum.accumulate(np.where(sign != 0, idx, -1))
    filled = np.where(last_nonzero >= 0, sign[np.maximum(last_nonzero, 0)], 0.0)
    return (filled[:-1] * filled[1:] < 0).astype(int)


def detect_door_openings(
    t: np.ndarray,
    a: np.ndarray,
    cfg: SignalConfig = SignalConfig(),
    steps: list[StepEvent] | None = None,
) -> list[DoorOpenEvent]:
    """Door-opening events: low-amplitude wiggle windows free of steps.

    A window of length door_window qualifies when its peak |a| sits in
    [door_hi, step_hi), it contains at least door_min_zero_crossings sign
    changes, and no step event falls inside it. Overlapping qualifying
    windows merge into a single event.
    """
    t = np.asarray(t, dtype=float)
    a = np.asarray(a, dtype=float)
    n = len(a)
    if n < 2:
        return []
    steps = steps or []
    step_times = np.array([s.t for s in steps])

    crossings = _zero_crossing_flags(a)
    crossing_prefix = np.concatenate([[0], np.cumsum(crossings)])

    # Window end index (exclusive) per start index; only full-length windows.
    ends = np.searchsorted(t, t + cfg.door_window, side="right")
    full = t + cfg.door_window <= t[-1]

    abs_a = np.abs(a)
    qualifying: list[int] = []
    for i in range(n):
        if not full[i]:
            break
        j = ends[i]
        window_max = abs_a[i:j].max()
        if not (cfg.door_hi <= window_max < cfg.step_hi):
            continue
        if crossing_prefix[j - 1] - crossing_prefix[i] < cfg.door_min_zero_crossings:
            continue
        if len(step_times):
            k0 = np.searchsorted(step_times, t[i], side="left")
            k1 = np.searchsorted(step_times, t[j - 1], side="right")
            if k1 > k0:
                continue
        qualifying.append(i)

    events: list[DoorOpenEvent] = []
    for i in qualifying:
        t_start, t_end = t[i], t[i] + cfg.door_window
        if events and t_start <= events[-1].t_end:
            merged_start = events[-1].t_start
            i0 = np.searchsorted(t, merged_start, side="left")
            j1 = np.searchsorted(t, t_end, side="right")
            events[-1] = DoorOpenEvent(
                t_start=float(merged_start),
                t_end=float(t_end),
                zero_crossings=int(crossing_prefix[j1 - 1] - crossing_prefix[i0]),
            )
        else:
            j = ends[i]
            events.append(
                DoorOpenEvent(
                    t_start=float(t_start),
                    t_end=float(t_end),
                    zero_crossings=int(crossing_prefix[j - 1] - crossing_prefix[i]),
                )
            )
    return events
