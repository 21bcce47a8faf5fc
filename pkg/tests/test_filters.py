import math

import numpy as np
import pytest

from seamloc import (
    FilterDivergenceError,
    FloorPlan,
    HeadingKfState,
    ImuSample,
    KfConfig,
    NoiseModel,
    PdrConfig,
    PfConfig,
    Point2,
    Pose,
    Segment2,
    UnreliableMeasurementError,
    WalkScript,
    detect_steps,
    generate_walk,
    kf_init,
    kf_predict,
    kf_update,
    mag_heading,
    normalized_series,
    pf_init,
    pf_step,
    wrap_angle,
)
from seamloc.geometry import _segments_cross
from seamloc.pdr import heading_series

EMPTY_PLAN = FloorPlan(walls=(), doors=())


class TestPfInit:
    def test_degenerate_sigma_collapses_to_pose(self):
        pset = pf_init(Pose(Point2(3, -2), 0.0), PfConfig(particle_count=100, init_sigma=0.0), seed=1)
        assert np.allclose(pset.positions, [3, -2])

    def test_uniform_weights(self):
        pset = pf_init(Pose(Point2(0, 0), 0.0), PfConfig(particle_count=250), seed=1)
        assert np.allclose(pset.weights, 1.0 / 250)

    def test_seed_determinism(self):
        a = pf_init(Pose(Point2(0, 0), 0.0), PfConfig(), seed=99)
        b = pf_init(Pose(Point2(0, 0), 0.0), PfConfig(), seed=99)
        assert np.array_equal(a.positions, b.positions)
        assert np.array_equal(a.weights, b.weights)


class TestPfStep:
    def test_zero_noise_no_walls_equals_pdr(self):
        cfg = PfConfig(particle_count=64, step_sigma=0.0, heading_sigma=0.0, init_sigma=0.0)
        pdr_cfg = PdrConfig()
        pset = pf_init(Pose(Point2(1, 2), 0.0), cfg, seed=0)
        pset, est = pf_step(pset, math.pi / 2, cfg, pdr_cfg, EMPTY_PLAN)
        assert abs(est.x - 1.0) < 1e-12
        assert abs(est.y - 2.75) < 1e-12

    def test_weights_sum_to_one(self):
        cfg = PfConfig(particle_count=300)
        pdr_cfg = PdrConfig()
        plan = FloorPlan(walls=(Segment2(Point2(-5, 1), Point2(10, 1)),), doors=())
        pset = pf_init(Pose(Point2(0, 0), 0.0), cfg, seed=2)
        for _ in range(10):
            pset, _ = pf_step(pset, 0.1, cfg, pdr_cfg, plan)
            assert abs(pset.weights.sum() - 1.0) < 1e-9

    def test_wall_ahead_diverges(self):
        cfg = PfConfig(particle_count=50, step_sigma=0.0, heading_sigma=0.0, init_sigma=0.0)
        plan = FloorPlan(walls=(Segment2(Point2(0.1, -100), Point2(0.1, 100)),), doors=())
        pset = pf_init(Pose(Point2(0, 0), 0.0), cfg, seed=0)
        with pytest.raises(FilterDivergenceError):
            pf_step(pset, 0.0, cfg, PdrConfig(), plan)

    def test_no_live_particle_crossed_a_wall(self):
        # Tiny resample threshold keeps the index mapping intact for the check.
        cfg = PfConfig(particle_count=400, resample_threshold=1e-9)
        plan = FloorPlan(walls=(Segment2(Point2(-5, 0.8), Point2(40, 0.8)),), doors=())
        pdr_cfg = PdrConfig()
        pset = pf_init(Pose(Point2(0, 0), 0.0), cfg, seed=5)
        for _ in range(8):
            before = pset.positions.copy()
            pset, _ = pf_step(pset, 0.3, cfg, pdr_cfg, plan)
            crossed = _segments_cross(before, pset.positions, plan.wall_array())
            assert not np.any(crossed & (pset.weights > 0))

    def test_pipeline_determinism(self):
        cfg = PfConfig(particle_count=200)
        pdr_cfg = PdrConfig()
        plan = FloorPlan(walls=(Segment2(Point2(-5, 1), Point2(30, 1)),), doors=())
        estimates = []
        for _ in range(2):
            pset = pf_init(Pose(Point2(0, 0), 0.0), cfg, seed=31)
            run = []
            for _ in range(15):
                pset, est = pf_step(pset, 0.05, cfg, pdr_cfg, plan)
                run.append((est.x, est.y))
            estimates.append(run)
        assert estimates[0] == estimates[1]

    def test_corridor_beats_raw_pdr(self):
        # Scaled-down version of the acceptance scenario: 5 seeds.
        corridor = FloorPlan(
            walls=(
                Segment2(Point2(-2, -1), Point2(35, -1)),
                Segment2(Point2(-2, 1), Point2(35, 1)),
            ),
            doors=(),
        )
        script = WalkScript(waypoints=(Point2(0, 0), Point2(30, 0)))
        pf_cfg = PfConfig(init_sigma=0.2)
        pdr_cfg = PdrConfig(initial_pose=Pose(Point2(0, 0), 0.0))
        pf_errs, pdr_errs = [], []
        for seed in range(5):
            noise = NoiseModel(accel_sigma=0.05, gyro_sigma=0.01, gyro_bias=0.015, mag_sigma=0.5, seed=seed)
            trace, truth = generate_walk(script, noise)
            t, a = normalized_series(trace)
            steps = detect_steps(t, a)
            psi = heading_series(trace, pdr_cfg)
            final = truth.final_position

            pose = pdr_cfg.initial_pose
            pset = pf_init(pose, pf_cfg, seed=seed)
            est = pose.position
            for s in steps:
                i = max(int(np.searchsorted(trace.t, s.t, side="right")) - 1, 0)
                h = wrap_angle(psi[i])
                try:
                    pset, est = pf_step(pset, h, pf_cfg, pdr_cfg, corridor)
                except FilterDivergenceError:
                    pset = pf_init(Pose(est, h), pf_cfg, seed=seed + 500)
                    pset, est = pf_step(pset, h, pf_cfg, pdr_cfg, corridor)
                pose = Pose(Point2(pose.position.x + 0.75 * math.cos(h), pose.position.y + 0.75 * math.sin(h)), h)
            pf_errs.append(math.hypot(est.x - final.x, est.y - final.y))
            pdr_errs.append(math.hypot(pose.position.x - final.x, pose.position.y - final.y))
        assert np.mean(pf_errs) < np.mean(pdr_errs)


class TestMagHeading:
    def test_aligned_with_x(self):
        s = ImuSample(0.0, (0, 0, 9.81), (0, 0, 0), (22.0, 0.0, -43.0))
        assert abs(mag_heading(s)) < 1e-12

    def test_negative_y_is_quarter_turn(self):
        s = ImuSample(0.0, (0, 0, 9.81), (0, 0, 0), (0.0, -22.0, -43.0))
        assert abs(mag_heading(s) - math.pi / 2) < 1e-12

    def test_weak_horizontal_field_rejected(self):
        s = ImuSample(0.0, (0, 0, 9.81), (0, 0, 0), (0.0, 0.0, 50.0))
        with pytest.raises(UnreliableMeasurementError):
            mag_heading(s)

    def test_declination_applied(self):
        s = ImuSample(0.0, (0, 0, 9.81), (0, 0, 0), (22.0, 0.0, -43.0))
        assert abs(mag_heading(s, KfConfig(declination=0.2)) - 0.2) < 1e-12


class TestKfPredict:
    def test_zero_rate_zero_bias(self):
        state = kf_init(0.5)
        cfg = KfConfig()
        out = kf_predict(state, 0.0, 0.1, cfg)
        assert out.heading == 0.5
        assert out.covariance[0, 0] > state.covariance[0, 0]

    def test_bias_cancels_rate(self):
        state = HeadingKfState(heading=0.2, gyro_bias=0.1, covariance=np.diag([0.1, 0.01]))
        out = kf_predict(state, 0.1, 1.0, KfConfig())
        assert abs(out.heading - 0.2) < 1e-15

    def test_rejects_nonpositive_dt(self):
        with pytest.raises(Exception):
            kf_predict(kf_init(0.0), 0.0, 0.0, KfConfig())

    def test_covariance_psd_after_many_predicts(self):
        state = kf_init(0.0)
        cfg = KfConfig()
        for _ in range(10_000):
            state = kf_predict(state, 0.01, 0.01, cfg)
        cov = state.covariance
        assert np.allclose(cov, cov.T)
        assert np.linalg.eigvalsh(cov).min() >= -1e-12


class TestKfUpdate:
    def test_infinite_noise_no_change(self):
        state = kf_init(0.3)
        out = kf_update(state, 1.0, KfConfig(r_mag=float("inf")))
        assert out.heading == state.heading
        assert np.array_equal(out.covariance, state.covariance)

    def test_zero_prior_covariance_no_change(self):
        state = HeadingKfState(heading=0.3, gyro_bias=0.02, covariance=np.zeros((2, 2)))
        out = kf_update(state, 1.2, KfConfig())
        assert out.heading == 0.3
        assert out.gyro_bias == 0.02

    def test_heading_variance_never_increases(self):
        rng = np.random.default_rng(0)
        state = kf_init(0.0)
        cfg = KfConfig()
        for _ in range(200):
            state = kf_predict(state, rng.normal(0, 0.1), 0.05, cfg)
            prior = state.covariance[0, 0]
            state = kf_update(state, rng.normal(0, 0.2), cfg)
            assert state.covariance[0, 0] <= prior + 1e-15

    def test_two_pi_measurement_invariance(self):
        state = kf_init(0.4)
        cfg = KfConfig()
        a = kf_update(state, 1.0, cfg)
        b = kf_update(state, 1.0 + 2 * math.pi, cfg)
        assert abs(a.heading - b.heading) < 1e-12
        assert abs(a.gyro_bias - b.gyro_bias) < 1e-12
        assert np.allclose(a.covariance, b.covariance, atol=1e-12)

    def test_bias_estimation_on_straight_walk(self):
        # Scaled-down acceptance scenario: one seed, 60 s.
        script = WalkScript(waypoints=(Point2(0, 0), Point2(90, 0)))
        noise = NoiseModel(accel_sigma=0.05, gyro_sigma=0.01, gyro_bias=0.02, mag_sigma=2.2, seed=3)
        trace, _ = generate_walk(script, noise)
        gz = trace.gyro[:, 2]
        state = kf_init(0.0)
        cfg = KfConfig()
        for i in range(len(trace) - 1):
            dt = float(trace.t[i + 1] - trace.t[i])
            state = kf_predict(state, 0.5 * float(gz[i] + gz[i + 1]), dt, cfg)
            try:
                state = kf_update(state, mag_heading(trace.sample(i + 1), cfg), cfg)
            except UnreliableMeasurementError:
                pass
        assert abs(state.heading) < 0.2
        assert 0.01 <= state.gyro_bias <= 0.03  # within 50% of the injected 0.02
