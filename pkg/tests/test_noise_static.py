import numpy as np
import pytest

from qrevivals.measures import average_entanglement, concurrence, eof_from_concurrence
from qrevivals.noise import (
    StaticNoiseParams,
    ou_dephasing_factors,
    ou_noise_state,
    static_dephasing_factor,
    static_noise_state,
)


def ou_free_variance(sigma, t, tau):
    """Accumulated-phase variance without echo: 2 s^2 tau (t - tau(1 - e^{-t/tau}))."""
    return 2.0 * sigma**2 * tau * (t - tau * (1.0 - np.exp(-t / tau)))


def ou_echo_variance(sigma, tbar, tau):
    """Accumulated-phase variance at 2*tbar with a sign flip at tbar.

    Double integral of the exponential autocorrelation over the echo sign
    pattern: s^2 tau^2 [4x - 6 + 8 e^{-x} - 2 e^{-2x}], x = tbar/tau.
    """
    x = tbar / tau
    u = np.exp(-x)
    return sigma**2 * tau**2 * (4 * x - 6 + 8 * u - 2 * u * u)


class TestStaticNoise:
    def test_gaussian_free_decay(self):
        p = StaticNoiseParams(sigma=1.0)
        for t in np.linspace(0.0, 8.0, 33):
            rho, _ = static_noise_state("2+", p, t)
            assert abs(concurrence(rho) - np.exp(-0.5 * t * t)) < 1e-8

    def test_echo_branch(self):
        p = StaticNoiseParams(sigma=1.0, echo_time=4.0)
        for t in np.linspace(4.01, 8.0, 17):
            rho, _ = static_noise_state("2+", p, t)
            assert abs(concurrence(rho) - np.exp(-0.5 * (t - 8.0) ** 2)) < 1e-8

    def test_full_recovery_at_twice_echo_time(self):
        p = StaticNoiseParams(sigma=1.0, echo_time=4.0)
        rho, _ = static_noise_state("2+", p, 8.0)
        assert abs(eof_from_concurrence(concurrence(rho)) - 1.0) < 1e-6

    def test_average_entanglement_stays_one(self):
        p = StaticNoiseParams(sigma=1.0, echo_time=4.0)
        for t in (0.0, 2.0, 4.0, 6.5, 8.0):
            _, ens = static_noise_state("2+", p, t)
            assert abs(average_entanglement(ens) - 1.0) < 1e-9

    def test_no_echo_concurrence_monotone_nonincreasing(self):
        p = StaticNoiseParams(sigma=1.0)
        cs = [concurrence(static_noise_state("1-", p, t)[0]) for t in np.linspace(0, 6, 61)]
        assert np.all(np.diff(cs) <= 1e-12)

    def test_all_bell_inputs_same_concurrence(self):
        p = StaticNoiseParams(sigma=1.0)
        values = []
        for label in ("1+", "1-", "2+", "2-"):
            rho, _ = static_noise_state(label, p, 1.3)
            values.append(concurrence(rho))
        assert np.max(np.abs(np.diff(values))) < 1e-12

    def test_factor_convergence_error_when_underresolved(self):
        from qrevivals.noise import ConvergenceError

        with pytest.raises(ConvergenceError):
            static_dephasing_factor(StaticNoiseParams(sigma=1.0), 8.0, order=16)

    def test_requires_static_regime(self):
        p = StaticNoiseParams(sigma=1.0, correlation_time=5.0)
        with pytest.raises(ValueError):
            static_noise_state("2+", p, 1.0)


class TestOUNoise:
    def test_free_decay_matches_exact_variance(self):
        sigma, tau = 1.0, 3.0
        p = StaticNoiseParams(sigma=sigma, correlation_time=tau)
        times = np.array([0.5, 1.0, 2.0, 4.0])
        est = ou_dephasing_factors(p, times, 20_000, 11)
        expected = np.exp(-0.5 * ou_free_variance(sigma, times, tau))
        assert np.all(np.abs(np.abs(est.factors) - expected) <= 3.5 * np.maximum(est.se_abs, 1e-12))

    def test_echo_recovery_matches_exact_variance(self):
        sigma, tbar = 1.0, 4.0
        for stau in (10.0, 1000.0):
            tau = stau / sigma
            p = StaticNoiseParams(sigma=sigma, echo_time=tbar, correlation_time=tau)
            est = ou_dephasing_factors(p, [2 * tbar], 20_000, 13)
            expected = np.exp(-0.5 * ou_echo_variance(sigma, tbar, tau))
            assert abs(abs(est.factors[0]) - expected) <= 3.5 * max(est.se_abs[0], 1e-12)

    def test_static_limit_matches_quadrature(self):
        sigma, t = 1.0, 2.0
        p = StaticNoiseParams(sigma=sigma, correlation_time=5000.0)
        est = ou_dephasing_factors(p, [t], 20_000, 17)
        static = abs(static_dephasing_factor(StaticNoiseParams(sigma=sigma), t))
        assert abs(abs(est.factors[0]) - static) <= 3.5 * est.se_abs[0]

    def test_zero_sigma_no_decay(self):
        p = StaticNoiseParams(sigma=0.0, correlation_time=2.0)
        rho = ou_noise_state("2+", p, 3.0, 1000, 5)
        assert abs(concurrence(rho) - 1.0) < 1e-12

    def test_deterministic_for_fixed_seed(self):
        p = StaticNoiseParams(sigma=1.0, echo_time=2.0, correlation_time=7.0)
        a = ou_dephasing_factors(p, [1.0, 3.0], 4096, 99)
        b = ou_dephasing_factors(p, [1.0, 3.0], 4096, 99)
        assert np.array_equal(a.factors, b.factors)
        c = ou_dephasing_factors(p, [1.0, 3.0], 4096, 100)
        assert not np.array_equal(a.factors, c.factors)

    def test_thread_count_invariance(self):
        p = StaticNoiseParams(sigma=1.0, correlation_time=3.0)
        a = ou_dephasing_factors(p, [0.5, 1.5, 2.5], 8192, 7, threads=1)
        b = ou_dephasing_factors(p, [0.5, 1.5, 2.5], 8192, 7, threads=8)
        assert np.array_equal(a.factors, b.factors)
        assert np.array_equal(a.se_abs, b.se_abs)

    def test_time_zero_factor_is_exactly_one(self):
        p = StaticNoiseParams(sigma=1.0, correlation_time=3.0)
        est = ou_dephasing_factors(p, [0.0, 1.0], 2048, 21)
        assert est.factors[0] == 1.0 + 0.0j
        assert est.se_abs[0] == 0.0

    def test_trajectory_floor_enforced(self):
        p = StaticNoiseParams(sigma=1.0, correlation_time=3.0)
        with pytest.raises(ValueError):
            ou_dephasing_factors(p, [1.0], 999, 1)

    def test_requires_finite_correlation_time(self):
        with pytest.raises(ValueError):
            ou_dephasing_factors(StaticNoiseParams(sigma=1.0), [1.0], 2000, 1)

    def test_recovery_improves_with_correlation_time(self):
        sigma, tbar = 1.0, 4.0
        values = []
        for stau in (10.0, 100.0, 1000.0):
            p = StaticNoiseParams(sigma=sigma, echo_time=tbar, correlation_time=stau / sigma)
            est = ou_dephasing_factors(p, [2 * tbar], 10_000, 23)
            values.append(abs(est.factors[0]))
        assert values[0] < values[1] < values[2]
