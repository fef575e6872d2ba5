"""Tests for the simulation and brute-force oracle module.

The deterministic parts (crossing counting, reproducibility, closed-form
canonical integrals vs direct 2D quadrature) are exact; the stochastic
parts are checked at a few standard errors with fixed seeds.
"""

import math

import numpy as np
import pytest

from levelcross.crossings import mean_rate, variance_count, variance_rate_asymptotic
from levelcross.kernels import make_sdho, make_squared_exponential
from levelcross.montecarlo import (
    SimConfig,
    SimulationConfigError,
    bruteforce_theorem_integrals,
    bruteforce_variance,
    count_crossings,
    estimate_stats,
    lemma_residuals,
    simulate_kernel_paths,
    simulate_sdho_paths,
    theorem_total_closed_form,
    theorem_up_closed_form,
)

SDHO_PARAMS = {"omega0": 1.0, "zeta": 1.0, "theta": 1.0}


def sdho_config(**kw):
    base = dict(system="sdho", params=SDHO_PARAMS, T=30.0, dt=0.02,
                trials=64, seed=7, u=0.5)
    base.update(kw)
    return SimConfig(**base)


class TestConfigValidation:
    def test_coarse_dt_rejected(self):
        with pytest.raises(SimulationConfigError):
            sdho_config(dt=0.2)

    def test_nonpositive_window_rejected(self):
        with pytest.raises(SimulationConfigError):
            sdho_config(T=0.0)
        with pytest.raises(SimulationConfigError):
            sdho_config(dt=-0.01)

    def test_too_few_trials_rejected(self):
        with pytest.raises(SimulationConfigError):
            sdho_config(trials=1)

    def test_unknown_system_rejected(self):
        with pytest.raises(SimulationConfigError):
            SimConfig(system="pendulum", params={}, dt=1e-3)

    def test_kernel_system_needs_kernel(self):
        with pytest.raises(SimulationConfigError):
            SimConfig(system="kernel", kernel=None, dt=1e-3)

    def test_steps_round_trip(self):
        assert sdho_config(T=30.0, dt=0.02).n_steps == 1500


class TestCounting:
    def test_half_open_convention(self):
        path = np.array([0.0, 1.0, 0.5, 1.0, -1.0])
        assert count_crossings(path, 1.0, "up") == 2
        assert count_crossings(path, 1.0, "down") == 2
        assert count_crossings(path, 1.0, "total") == 4

    def test_monotone_path(self):
        path = np.linspace(-1.0, 1.0, 50)
        assert count_crossings(path, 0.0, "up") == 1
        assert count_crossings(path, 0.0, "down") == 0

    def test_sine_wave(self):
        t = np.linspace(0.0, 10.0, 100001)
        path = np.sin(2.0 * math.pi * t)
        # First sample sits exactly on the zero level, so the half-open
        # convention counts 9 completed upcrossings in 10 periods.
        assert count_crossings(path, 0.0, "up") == 9
        assert count_crossings(path, 0.5, "up") == 10
        assert count_crossings(path, 0.5, "total") == 20

    def test_short_path_rejected(self):
        with pytest.raises(ValueError):
            count_crossings(np.array([1.0]), 0.0)


class TestSimulators:
    def test_bit_identical_reruns(self):
        cfg = sdho_config(trials=8, T=5.0)
        a = np.stack(list(simulate_sdho_paths(cfg)))
        b = np.stack(list(simulate_sdho_paths(cfg)))
        assert np.array_equal(a, b)

    def test_trials_independent_of_chunking(self):
        # Trial i uses its own counter-keyed stream, so asking for more
        # trials must not change the earlier ones.
        small = np.stack(list(simulate_sdho_paths(sdho_config(trials=4, T=5.0))))
        large = np.stack(list(simulate_sdho_paths(sdho_config(trials=12, T=5.0))))
        assert np.array_equal(large[:4], small)

    def test_sdho_stationary_variance(self):
        cfg = sdho_config(trials=256, T=20.0)
        x0 = np.array([p[0] for p in simulate_sdho_paths(cfg)])
        # Var x = theta / omega0^2 = 1; SE of the sample variance ~ 0.09.
        assert np.var(x0) == pytest.approx(1.0, abs=0.35)

    def test_kernel_paths_match_autocovariance(self):
        k = make_squared_exponential(1.0, 1.0)
        cfg = SimConfig(system="kernel", kernel=k, T=8.0, dt=0.04,
                        trials=512, seed=3)
        block = np.stack(list(simulate_kernel_paths(k, cfg)))
        lag = 25  # 1.0 time units
        est = float(np.mean(block[:, :-lag] * block[:, lag:]))
        assert est == pytest.approx(k.eval(1.0).r, abs=0.08)


class TestEstimates:
    def test_matches_closed_forms(self):
        cfg = sdho_config(params={"omega0": 1.0, "zeta": 0.5, "theta": 1.0},
                          T=60.0, dt=0.02, trials=600, seed=11, u=0.5)
        est = estimate_stats(cfg)
        st = variance_count(make_sdho(1.0, 0.5, 1.0), 0.5, 60.0, "up")
        z_mean = (est.mean - st.mean) / est.se_mean
        z_var = (est.variance - st.variance) / est.se_variance
        assert abs(z_mean) < 4.0
        assert abs(z_var) < 4.0

    def test_estimate_reproducible(self):
        cfg = sdho_config(trials=64, T=20.0)
        a = estimate_stats(cfg)
        b = estimate_stats(cfg)
        assert (a.mean, a.variance, a.fano) == (b.mean, b.variance, b.fano)
        assert (a.se_mean, a.se_variance, a.se_fano) == (b.se_mean, b.se_variance, b.se_fano)

    def test_finer_step_does_not_count_fewer(self):
        # Discrete sampling can only miss crossings, so halving dt should
        # not reduce the mean count beyond statistical noise.
        coarse = estimate_stats(sdho_config(trials=256, T=30.0, dt=0.05, u=0.0))
        fine = estimate_stats(sdho_config(trials=256, T=30.0, dt=0.01, u=0.0))
        slack = 3.0 * math.hypot(coarse.se_mean, fine.se_mean)
        assert fine.mean >= coarse.mean - slack

    def test_total_counts_both_directions(self):
        up = estimate_stats(sdho_config(trials=64, T=20.0, mode="up"))
        tot = estimate_stats(sdho_config(trials=64, T=20.0, mode="total"))
        assert tot.mean > 1.5 * up.mean


class TestCanonicalIntegrals:
    def test_closed_forms_match_quadrature(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            a = float(rng.uniform(0.1, 10.0))
            b = float(rng.uniform(0.1, 10.0))
            g = float(rng.uniform(-3.0, 3.0))
            up_ref, tot_ref = bruteforce_theorem_integrals(a, b, g)
            assert theorem_up_closed_form(a, b, g) == pytest.approx(up_ref, rel=1e-9)
            assert theorem_total_closed_form(a, b, g) == pytest.approx(tot_ref, rel=1e-9)

    def test_even_in_gamma(self):
        for a, b, g in ((2.0, 3.0, 1.5), (0.3, 8.0, 0.4), (5.0, 0.7, 2.6)):
            assert theorem_up_closed_form(a, b, g) == pytest.approx(
                theorem_up_closed_form(a, b, -g), rel=1e-13
            )
            assert theorem_total_closed_form(a, b, g) == pytest.approx(
                theorem_total_closed_form(a, b, -g), rel=1e-13
            )

    def test_gamma_zero_arctan_corollary(self):
        # At gamma = 0 the upcrossing integral reduces to
        # (sqrt(ab) + (a-b) arctan(sqrt(a/b))) / (2 (ab)^{3/2}).
        for a, b in ((1.0, 1.0), (0.5, 3.0), (7.0, 0.2)):
            expected = (math.sqrt(a * b) + (a - b) * math.atan(math.sqrt(a / b))) / (
                2.0 * (a * b) ** 1.5
            )
            assert theorem_up_closed_form(a, b, 0.0) == pytest.approx(expected, rel=1e-13)
        # Equal widths: the arctan term vanishes and the value is 1/(2 a^2).
        assert theorem_up_closed_form(2.0, 2.0, 0.0) == pytest.approx(0.125, rel=1e-13)

    def test_lemma_identities_hold(self):
        residuals = lemma_residuals(seed=0, draws=50)
        for name, worst in residuals.items():
            assert worst < 1e-9, (name, worst)


class TestBruteforceVariance:
    def test_matches_closed_variance_at_short_horizon(self):
        k = make_sdho(1.0, 1.0, 1.0)
        closed = variance_count(k, 0.5, 2.0, "up").variance
        brute = bruteforce_variance(k, 0.5, 2.0, "up")
        assert brute == pytest.approx(closed, rel=1e-6)


class TestLongHorizonRate:
    def test_variance_rate_approaches_asymptote(self):
        k = make_sdho(1.0, 1.0, 1.0)
        asym = variance_rate_asymptotic(k, 0.5, "up").variance
        finite = variance_count(k, 0.5, 200.0, "up").variance / 200.0
        assert finite == pytest.approx(asym, rel=0.01)

    def test_mean_rate_consistency(self):
        k = make_sdho(1.0, 1.0, 1.0)
        st = variance_count(k, 0.5, 50.0, "up")
        assert st.mean == pytest.approx(50.0 * mean_rate(k, 0.5, "up"), rel=1e-12)
