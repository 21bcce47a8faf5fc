import numpy as np
import pytest

from seamloc import (
    ImuSample,
    InvalidParameterError,
    SignalConfig,
    detect_door_openings,
    detect_steps,
    normalize_accel,
)

CFG = SignalConfig()


def make_sample(ax, ay, az):
    return ImuSample(t=0.0, accel=(ax, ay, az), gyro=(0, 0, 0), mag=(22, 0, -43))


def sinusoid(amplitude, period=0.5, duration=5.0, fs=100.0):
    t = np.arange(0.0, duration, 1.0 / fs)
    return t, amplitude * np.sin(2 * np.pi * t / period)


def excursion_count_oracle(a, hi, lo):
    """Independent step oracle: count hi-then-lo threshold excursions."""
    count = 0
    armed = False
    for v in a:
        if not armed and v >= hi:
            armed = True
        elif armed and v <= lo:
            count += 1
            armed = False
    return count


class TestNormalizeAccel:
    def test_at_rest(self):
        assert abs(normalize_accel(make_sample(0, 0, 9.81), CFG)) < 1e-12

    def test_free_fall(self):
        assert abs(normalize_accel(make_sample(0, 0, 0), CFG) + 9.81) < 1e-12

    def test_three_four_five(self):
        assert abs(normalize_accel(make_sample(3, 4, 0), CFG) + 4.81) < 1e-12


class TestDetectSteps:
    def test_ten_cycles_ten_steps(self):
        t, a = sinusoid(2.0)
        events = detect_steps(t, a, CFG)
        assert len(events) == 10
        assert len(events) == excursion_count_oracle(a, CFG.step_hi, CFG.step_lo)

    def test_constant_zero_no_steps(self):
        t = np.arange(0, 3, 0.01)
        assert detect_steps(t, np.zeros_like(t), CFG) == []

    def test_subthreshold_amplitude_no_steps(self):
        t, a = sinusoid(0.7)
        assert detect_steps(t, a, CFG) == []

    def test_empty_input(self):
        assert detect_steps(np.array([]), np.array([]), CFG) == []

    def test_time_shift_invariance(self):
        t, a = sinusoid(2.0)
        assert len(detect_steps(t, a, CFG)) == len(detect_steps(t + 1234.5, a, CFG))

    def test_amplitude_scaling_invariance(self):
        t, a = sinusoid(1.0)
        counts = {len(detect_steps(t, k * a, CFG)) for k in (2.0, 2.5, 3.0, 3.5, 4.0)}
        assert counts == {10}

    def test_refractory_spacing(self):
        # 0.2 s cycles would fire every 0.2 s without the refractory hold-off.
        t, a = sinusoid(2.0, period=0.2, duration=4.0)
        events = detect_steps(t, a, CFG)
        gaps = np.diff([e.t for e in events])
        assert np.all(gaps >= CFG.step_refractory)

    def test_events_ordered_with_peaks(self):
        t, a = sinusoid(2.0)
        events = detect_steps(t, a, CFG)
        assert all(e.index == i for i, e in enumerate(events))
        assert all(abs(e.peak) >= CFG.step_hi for e in events)
        assert np.all(np.diff([e.t for e in events]) > 0)


def walking_pause_walking(pause_amplitude=0.8, pause_period=0.4, fs=100.0):
    """Walking bout, 1.5 s door wiggle, walking bout."""
    dt = 1.0 / fs
    walk_t = np.arange(0, 2.0, dt)
    walk = 2.0 * np.sin(2 * np.pi * walk_t / 0.5)
    pause_t = np.arange(0, 1.5, dt)
    pause = pause_amplitude * np.sin(2 * np.pi * pause_t / pause_period)
    a = np.concatenate([walk, pause, walk])
    t = np.arange(len(a)) * dt
    return t, a, (2.0, 3.5)  # pause interval


def door_window_oracle(t, a, cfg, steps):
    """Manual check of the three window conditions over every placement."""
    step_times = np.array([s.t for s in steps])
    qualifying = []
    for i in range(len(t)):
        if t[i] + cfg.door_window > t[-1]:
            break
        j = int(np.searchsorted(t, t[i] + cfg.door_window, side="right"))
        window = a[i:j]
        peak = np.abs(window).max()
        if not (cfg.door_hi <= peak < cfg.step_hi):
            continue
        crossings = 0
        prev_sign = 0.0
        for v in window:
            s = np.sign(v)
            if s != 0 and prev_sign != 0 and s != prev_sign:
                crossings += 1
            if s != 0:
                prev_sign = s
        if crossings < cfg.door_min_zero_crossings:
            continue
        if np.any((step_times >= t[i]) & (step_times <= t[j - 1])):
            continue
        qualifying.append((t[i], t[i] + cfg.door_window))
    merged = []
    for lo, hi in qualifying:
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return merged


class TestDetectDoorOpenings:
    def test_single_event_covering_pause(self):
        t, a, (pause_lo, pause_hi) = walking_pause_walking()
        steps = detect_steps(t, a, CFG)
        events = detect_door_openings(t, a, CFG, steps)
        assert len(events) == 1
        ev = events[0]
        assert ev.t_start <= pause_lo and ev.t_end >= pause_hi
        assert ev.zero_crossings >= CFG.door_min_zero_crossings
        oracle = door_window_oracle(t, a, CFG, steps)
        assert len(oracle) == 1
        assert abs(oracle[0][0] - ev.t_start) < 1e-9
        assert abs(oracle[0][1] - ev.t_end) < 1e-9

    def test_continuous_walking_no_events(self):
        t = np.arange(0, 10, 0.01)
        a = 2.0 * np.sin(2 * np.pi * t / 0.5)
        steps = detect_steps(t, a, CFG)
        assert detect_door_openings(t, a, CFG, steps) == []

    def test_complete_stillness_no_events(self):
        t = np.arange(0, 10, 0.01)
        assert detect_door_openings(t, np.zeros_like(t), CFG, []) == []

    def test_event_interval_conditions_hold(self):
        t, a, _ = walking_pause_walking()
        steps = detect_steps(t, a, CFG)
        step_times = np.array([s.t for s in steps])
        for ev in detect_door_openings(t, a, CFG, steps):
            inside = (t >= ev.t_start) & (t <= ev.t_end)
            assert np.abs(a[inside]).max() < CFG.step_hi
            assert not np.any((step_times >= ev.t_start) & (step_times <= ev.t_end))

    def test_subband_wiggle_ignored(self):
        # Amplitude below door_hi never qualifies even with zero crossings.
        t = np.arange(0, 10, 0.01)
        a = 0.3 * np.sin(2 * np.pi * t / 0.4)
        assert detect_door_openings(t, a, CFG, []) == []


class TestSmoothing:
    def test_moving_average_preserves_step_count(self):
        from seamloc import NoiseModel, Point2, WalkScript, generate_walk, normalized_series

        trace, truth = generate_walk(
            WalkScript(waypoints=(Point2(0, 0), Point2(7.5, 0))),
            NoiseModel(accel_sigma=0.05, seed=9),
        )
        smoothed_cfg = SignalConfig(smooth_window=5)
        t, a = normalized_series(trace, smoothed_cfg)
        assert len(detect_steps(t, a, smoothed_cfg)) == truth.step_count


class TestSignalConfig:
    def test_band_ordering_enforced(self):
        with pytest.raises(InvalidParameterError):
            SignalConfig(door_hi=2.0)
        with pytest.raises(InvalidParameterError):
            SignalConfig(door_lo=-2.0)

    def test_positive_windows(self):
        with pytest.raises(InvalidParameterError):
            SignalConfig(door_window=0.0)
