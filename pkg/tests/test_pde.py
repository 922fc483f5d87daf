import numpy as np
import pytest

from wavespeed.model import ParameterError, coexistence, to_cooperative, validate
from wavespeed.pde import (
    Grid1D,
    SimConfig,
    SimulationError,
    default_config,
    dump_trajectory,
    estimate_speed,
    front_position,
    refine_check,
    simulate,
    step_profile,
)


def coarse_config(L=40.0, dx=0.2, dt=0.05, t_end=60.0):
    return default_config(L=L, dx=dx, dt=dt, t_end=t_end)


class TestGridConfig:
    def test_grid_spacing(self):
        g = Grid1D(10.0, 101)
        assert g.dx == pytest.approx(0.2)
        assert g.xs()[0] == -10.0 and g.xs()[-1] == 10.0

    def test_invalid_grid(self):
        with pytest.raises(ParameterError):
            Grid1D(-1.0, 101)
        with pytest.raises(ParameterError):
            Grid1D(1.0, 2)

    def test_invalid_config(self):
        with pytest.raises(ParameterError):
            SimConfig(grid=Grid1D(10.0, 101), dt=-0.1)
        with pytest.raises(ParameterError):
            SimConfig(grid=Grid1D(10.0, 101), front_level=1.5)


class TestSimulate:
    def test_trivial_equilibrium_constant(self):
        params = validate(2, 1, 2, 3)
        cfg = coarse_config(t_end=5.0)
        n = cfg.grid.n_points
        zeros = np.zeros(n)
        frames = simulate(params, cfg, (zeros.copy(), zeros.copy()))
        _, u, v = frames[-1]
        assert np.max(np.abs(u)) < 1e-12
        assert np.max(np.abs(v)) < 1e-12

    def test_coexistence_equilibrium_constant(self):
        params = validate(2, 1, 2, 3)
        cfg = coarse_config(t_end=5.0)
        ustar, vstar = to_cooperative(*coexistence(params))
        n = cfg.grid.n_points
        frames = simulate(params, cfg, (np.full(n, ustar), np.full(n, vstar)))
        _, u, v = frames[-1]
        assert np.max(np.abs(u - ustar)) < 1e-10
        assert np.max(np.abs(v - vstar)) < 1e-10

    def test_invariant_region(self):
        params = validate(5, 1, 5, 2)
        cfg = coarse_config(t_end=30.0)
        frames = simulate(params, cfg, step_profile(cfg.grid), record_every=20)
        for _, u, v in frames:
            assert u.min() >= -1e-10 and u.max() <= 1.0 + 1e-10
            assert v.min() >= -1e-10 and v.max() <= 1.0 + 1e-10

    def test_comparison_principle(self):
        # Pointwise-ordered initial data stay ordered: 10 random pairs.
        params = validate(2, 1, 3, 2)
        cfg = coarse_config(L=15.0, dx=0.3, dt=0.05, t_end=4.0)
        xs = cfg.grid.xs()
        rng = np.random.default_rng(21)
        for _ in range(10):
            base = 0.5 * (1 + np.tanh(xs / rng.uniform(1.0, 4.0)))
            bump = rng.uniform(0.0, 0.3) * np.exp(
                -((xs - rng.uniform(-5, 5)) ** 2) / rng.uniform(2.0, 8.0)
            )
            lo_u = np.clip(base - bump, 0.0, 1.0)
            hi_u = np.clip(base + bump, 0.0, 1.0)
            lo = (lo_u, lo_u.copy())
            hi = (hi_u, hi_u.copy())
            fl = simulate(params, cfg, lo, record_every=10)
            fh = simulate(params, cfg, hi, record_every=10)
            for (_, ul, vl), (_, uh, vh) in zip(fl, fh):
                assert np.all(ul <= uh + 1e-9)
                assert np.all(vl <= vh + 1e-9)

    def test_init_validation(self):
        params = validate(1, 1, 2, 2)
        cfg = coarse_config()
        n = cfg.grid.n_points
        with pytest.raises(ParameterError):
            simulate(params, cfg, (np.full(n, 1.5), np.zeros(n)))
        with pytest.raises(ParameterError):
            simulate(params, cfg, (np.zeros(n - 1), np.zeros(n - 1)))

    def test_instability_detected(self):
        # A reaction-unstable step size blows the explicit part up.
        params = validate(1, 1, 9, 9)
        cfg = default_config(L=10.0, dx=0.5, dt=1.5, t_end=30.0)
        with pytest.raises(SimulationError):
            simulate(params, cfg, step_profile(cfg.grid))


class TestFrontTracking:
    def test_interpolated_crossing(self):
        xs = np.linspace(-1.0, 1.0, 21)
        u = np.clip(0.5 + 2.5 * xs, 0.0, 1.0)
        assert front_position(xs, u, 0.5) == pytest.approx(0.0, abs=1e-12)
        assert front_position(xs, u, 0.75) == pytest.approx(0.1, abs=1e-12)

    def test_missing_crossing_is_nan(self):
        xs = np.linspace(-1.0, 1.0, 21)
        assert np.isnan(front_position(xs, np.full(21, 0.1), 0.5))
        assert np.isnan(front_position(xs, np.full(21, 0.9), 0.5))


class TestEstimateSpeed:
    def test_negative_speed_at_blocking_point(self):
        # Criterion N2 holds at (7, 1, 1.8, 2); the stronger competitor
        # advances and the measured speed must be negative.
        est = estimate_speed(validate(7, 1, 1.8, 2), coarse_config())
        assert est.converged
        assert est.c_hat < -0.05

    def test_symmetric_point_is_stationary(self):
        est = estimate_speed(validate(1, 1, 2, 2), coarse_config())
        assert est.converged
        assert abs(est.c_hat) <= 0.02

    def test_sign_convention_against_certified_point(self):
        # The one sign calibration everything else hangs on: (11/2, 11/6)
        # in the symmetric plane has certified negative speed.
        est = estimate_speed(
            validate(5.5, 1, 11 / 6, 11 / 6), coarse_config(L=60.0, t_end=90.0)
        )
        assert est.converged
        assert est.c_hat < -0.02

    def test_front_trace_recorded(self):
        est = estimate_speed(validate(7, 1, 1.8, 2), coarse_config(t_end=20.0))
        assert est.front_trace.shape[1] == 2
        assert est.front_trace[0, 0] == 0.0
        assert est.front_trace[-1, 0] == pytest.approx(20.0)

    def test_boundary_proximity_flags_nonconverged(self):
        # Fast front in a short box reaches the 10%-margin zone.
        est = estimate_speed(validate(5, 1, 5, 2), coarse_config(L=10.0, t_end=60.0))
        assert not est.converged


class TestRefineCheck:
    def test_agreement_at_symmetric_point(self):
        est1, est2, agree = refine_check(validate(1, 1, 2, 2), coarse_config(t_end=30.0))
        assert agree
        assert abs(est1.c_hat) <= 0.02 and abs(est2.c_hat) <= 0.02

    def test_agreement_at_moving_front(self):
        est1, est2, agree = refine_check(
            validate(7, 1, 1.8, 2), coarse_config(L=50.0, t_end=50.0)
        )
        assert agree

    @pytest.mark.slow
    def test_domain_truncation_insensitivity(self):
        params = validate(7, 1, 1.8, 2)
        est1 = estimate_speed(params, coarse_config(L=50.0, t_end=60.0))
        est2 = estimate_speed(params, coarse_config(L=100.0, t_end=60.0))
        assert abs(est1.c_hat - est2.c_hat) < 0.01


class TestReflectionIdentity:
    @pytest.mark.slow
    def test_five_sampled_tuples(self):
        # |c(d,r,k1,k2) + sqrt(d r) c(1/d,1/r,k2,k1)| <= 0.03 whenever both
        # estimates converge.
        cfg = default_config(L=100.0, dx=0.1, dt=0.02, t_end=150.0)
        tuples = [
            (2.0, 1.0, 3.0, 2.0),
            (5.0, 1.0, 2.0, 3.0),
            (0.5, 2.0, 4.0, 1.5),
            (1.5, 1.0, 2.5, 2.0),
            (3.0, 0.5, 2.0, 2.5),
        ]
        for d, r, k1, k2 in tuples:
            a = estimate_speed(validate(d, r, k1, k2), cfg)
            b = estimate_speed(validate(1 / d, 1 / r, k2, k1), cfg)
            assert a.converged and b.converged, (d, r, k1, k2)
            assert abs(a.c_hat + np.sqrt(d * r) * b.c_hat) <= 0.03


class TestTrajectoryDump:
    def test_rows_written(self, tmp_path):
        params = validate(1, 1, 2, 2)
        cfg = coarse_config(L=5.0, dx=0.5, t_end=1.0)
        frames = simulate(params, cfg, step_profile(cfg.grid), record_every=10)
        path = tmp_path / "traj.csv"
        dump_trajectory(frames, cfg.grid, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "t,x,u,v"
        assert len(lines) == 1 + len(frames) * cfg.grid.n_points
