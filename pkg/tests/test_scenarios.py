import numpy as np
import pytest
from scipy.stats import norm

from conftest import cached_run
from mtshrink.evaluation.runner import compare, estimator_values
from mtshrink.evaluation.scenarios import (
    constrained_rotation,
    gen_sim1,
    gen_sim3,
    gen_sim4,
    gen_sim5,
    log_spaced_eigenvalues,
    rescale_random_eigenvalues,
    sim2_delta,
    sim2_model,
    sim3_model,
    sim4_model,
)
from mtshrink.stat_core import sample_mean


class TestSim1:
    def test_truth_and_sizes(self):
        rng = np.random.default_rng(0)
        X, aux, mu = gen_sim1(30, "ldl", rng)
        assert np.all(mu == 0) and X.n == 30 and all(Y.n == 30 for Y in aux)
        X, aux, _ = gen_sim1(30, "foldl", rng)
        assert X.n == 50 and len(aux) == 4

    def test_target_quality(self):
        from mtshrink.evaluation.scenarios import sim1_model

        for p in (16, 400):
            m = sim1_model(p, "ldl", np.random.default_rng(p))
            assert np.sum(m.aux_means[0] ** 2) == pytest.approx(1 / 25)
            assert np.sum(m.aux_means[3] ** 2) == pytest.approx(0.16 * p)

    def test_aux_means_drawn_around_offsets(self):
        rng = np.random.default_rng(1)
        X, aux, _ = gen_sim1(2000, "foldl", rng)
        assert np.abs(sample_mean(aux[3])).mean() == pytest.approx(0.4, abs=0.02)


class TestSim2:
    def test_bayes_accuracy(self):
        for spike in (False, True):
            m = sim2_model(0.0, spike, np.random.default_rng(2))
            assert m.bayes_accuracy() == pytest.approx(0.8, abs=1e-12)

    def test_delta(self):
        assert sim2_delta(50) * np.sqrt(50) == pytest.approx(2 * norm.ppf(0.8))

    def test_bayes_monte_carlo(self):
        """10^6 draws from the generated model, classified by the Bayes rule."""
        rng = np.random.default_rng(3)
        m = sim2_model(0.0, False, rng)
        w = (m.mu_a - m.mu_b) / m.gamma
        c = -w @ (m.mu_a + m.mu_b) / 2
        hits, N = 0, 0
        for _ in range(10):
            za = m.mu_a[:, None] + np.sqrt(m.gamma)[:, None] * rng.standard_normal((m.p, 50_000))
            zb = m.mu_b[:, None] + np.sqrt(m.gamma)[:, None] * rng.standard_normal((m.p, 50_000))
            hits += np.sum(w @ za + c > 0) + np.sum(w @ zb + c <= 0)
            N += 100_000
        assert hits / N == pytest.approx(0.8, abs=0.002)

    def test_kappa_limit(self):
        m = sim2_model(-8.0, False, np.random.default_rng(4))
        np.testing.assert_allclose(m.aux_a, np.broadcast_to(m.mu_a, m.aux_a.shape), atol=1e-7)

    def test_spike(self):
        m = sim2_model(0.0, True, np.random.default_rng(5))
        k = m.spike_index
        assert m.gamma[k] == pytest.approx(1000.0)
        assert m.mu_a[k] - m.mu_b[k] == 0.0


class TestSim3:
    def test_target_distance(self):
        for p in (16, 100):
            m = sim3_model(p, "ldl")
            assert np.sum((m.aux_covs[0] - m.cov) ** 2) == pytest.approx((np.sqrt(p) / 10 - 10) ** 2)

    def test_foldl_sizes(self):
        X, aux, _ = gen_sim3(20, "foldl", np.random.default_rng(6))
        assert X.n == 50 and all(Y.n == 50 for Y in aux)

    def test_eigen_ratio(self):
        g = log_spaced_eigenvalues(37)
        assert g.max() / g.min() == pytest.approx(100.0)


class TestRotation:
    def test_zero_angle(self):
        assert np.array_equal(constrained_rotation(6, 0.0, np.random.default_rng(0)), np.eye(6))

    def test_orthogonal_and_spectrum(self):
        rng = np.random.default_rng(7)
        g = log_spaced_eigenvalues(10)
        for phi in (5.0, 30.0, 90.0):
            R = constrained_rotation(10, phi, rng)
            np.testing.assert_allclose(R.T @ R, np.eye(10), atol=1e-14)
            np.testing.assert_allclose(np.sort(np.linalg.eigvalsh((R * g) @ R.T)), g, rtol=1e-12)

    def test_quarter_turn(self):
        R = constrained_rotation(2, 90.0, np.random.default_rng(8))
        np.testing.assert_allclose((R * [0.1, 10.0]) @ R.T, np.diag([10.0, 0.1]), atol=1e-15)

    def test_sim4_unrotated(self):
        m = sim4_model(8, 0.0, np.random.default_rng(9))
        assert all(np.array_equal(C, m.cov) for C in m.aux_covs)
        assert m.n_aux == (4, 8, 16, 32)

    def test_gen_sim4(self):
        X, aux, m = gen_sim4(8, 45.0, np.random.default_rng(10))
        assert [Y.n for Y in aux] == [4, 8, 16, 32] and X.n == 8


class TestSim5:
    def test_multipliers(self):
        g = np.ones(50)
        out = rescale_random_eigenvalues(g, np.random.default_rng(11))
        np.testing.assert_allclose(np.sort(out[out != 1]), 1 + np.arange(1, 11) / 10)

    def test_blend_endpoints(self):
        m, _ = gen_sim5(1.0, [0, 5, 10, 90], False, np.random.default_rng(12), n_test_trials=2)
        assert all(np.array_equal(C, m.cov_a) for C in m.aux_a)
        m0, _ = gen_sim5(0.0, [0.0], False, np.random.default_rng(13), n_test_trials=2)
        C = m0.aux_a[0]
        assert np.count_nonzero(C - np.diag(np.diag(C))) == 0  # phi = 0: unrotated diagonal
        assert not np.array_equal(C, m0.cov_a)

    def test_spike_excluded(self):
        m, _ = gen_sim5(0.3, [90.0], True, np.random.default_rng(14), n_test_trials=2)
        k = m.spike_index
        for C in (m.cov_a, m.cov_b, *m.aux_a, *m.aux_b):
            assert C[k, k] == pytest.approx(1000.0)
            assert np.count_nonzero(np.delete(C[k], k)) == 0

    def test_w_range(self):
        with pytest.raises(ValueError):
            gen_sim5(1.5, [0.0], False, np.random.default_rng(0))


# Runner-level behaviour on the desk sweep

SIM1_P = [50, 100, 200, 400]


def _lambda_stats(records, s, estimator):
    lam = {}
    for r in records:
        if r.sweep_index == s and r.estimator == estimator and r.ok:
            lam.setdefault(r.model_index, []).append(r.lam)
    per_model = np.array([np.mean(v, axis=0) for v in lam.values()])
    return per_model.mean(axis=0), per_model.std(axis=0, ddof=1) / np.sqrt(len(per_model))


def test_sim1_ldl_intensity_convergence():
    cfg, rec = cached_run(scenario="sim1_mean_ldl", sweep={"p": SIM1_P}, reps_model=100, reps_noise=5)
    stats = [_lambda_stats(rec, s, "mts") for s in range(len(SIM1_P))]
    for (m0, s0), (m1, s1) in zip(stats, stats[1:]):
        assert np.all(m1[1:] <= m0[1:] + np.hypot(s0[1:], s1[1:]))
    assert abs(stats[-1][0][0] - 0.5) <= 0.1


@pytest.mark.parametrize("scenario,points", [
    ("sim1_mean_ldl", {"p": SIM1_P}),
    ("sim1_mean_foldl", {"p": SIM1_P}),
    ("sim3_cov_ldl", {"p": [25, 50, 100, 200, 400]}),
])
def test_mts_beats_single_target_sts(scenario, points):
    cfg, rec = cached_run(scenario=scenario, sweep=points, reps_model=100, reps_noise=5)
    for s in range(len(cfg.points())):
        for k in range(1, 5):
            d, se = compare(rec, s, "mts", f"sts_{k}")
            assert d >= -3 * se, (cfg.sweep_point(s), k, d, se)


def test_sim3_ldl_intensities_shrink():
    cfg, rec = cached_run(scenario="sim3_cov_ldl", sweep={"p": [25, 50, 100, 200, 400]},
                          reps_model=100, reps_noise=5)
    at50, _ = _lambda_stats(rec, 1, "mts")
    at400, _ = _lambda_stats(rec, 4, "mts")
    assert np.all(at400[1:] < at50[1:])


def test_records_are_well_formed():
    cfg, rec = cached_run(scenario="sim1_mean_ldl", sweep={"p": SIM1_P}, reps_model=100, reps_noise=5)
    assert all(r.ok for r in rec)
    assert all(r.value >= 0 for r in rec)
    assert len(rec) == 4 * 100 * 5 * 7
    assert np.all(np.isfinite(estimator_values(rec, 0, "mts")))


def sim3_population_lambda(p):
    """Population intensities from analytic Gaussian second-moment variances."""
    from scipy.optimize import minimize

    m = sim3_model(p, "ldl")

    def total_var(C, n):
        return (np.trace(C) ** 2 + np.sum(C * C)) / n

    D = np.array([(Ck - m.cov).ravel() for Ck in m.aux_covs])
    A = D @ D.T + total_var(m.cov, p) + np.diag([total_var(Ck, p) for Ck in m.aux_covs])
    b = np.full(4, total_var(m.cov, p))
    res = minimize(lambda x: 0.5 * x @ A @ x - b @ x, np.full(4, 0.1), jac=lambda x: A @ x - b,
                   bounds=[(0, 1)] * 4, constraints=[{"type": "ineq", "fun": lambda x: 1 - x.sum()}],
                   method="SLSQP", options={"ftol": 1e-15})
    return res.x


@pytest.mark.parametrize("s,p", [(1, 50), (4, 400)])
def test_sim3_intensities_match_population(s, p):
    cfg, rec = cached_run(scenario="sim3_cov_ldl", sweep={"p": [25, 50, 100, 200, 400]},
                          reps_model=100, reps_noise=5)
    mean, se = _lambda_stats(rec, s, "mts")
    np.testing.assert_allclose(mean, sim3_population_lambda(p), atol=0.02)
