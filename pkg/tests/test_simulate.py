import math

import pytest

from paretorecords import (
    Comonotone,
    Dirichlet,
    ExperimentConfig,
    ExponentialScaleMixture,
    IidExponential,
    InvalidParameterError,
    MarginalDirichlet,
    Mixture,
    UnsupportedSpecError,
    concomitant_check,
    estimate_maxima,
    estimate_record_prob,
    estimate_record_prob_survival,
    make_rng,
    pn_independent,
    pn_marginal_dirichlet,
    pn_scale_mixture,
    simulate_trajectory,
    sweep,
)
from paretorecords.simulate import trajectory_summary


class TestIndicatorEstimator:
    def test_first_observation_always_record(self):
        est = estimate_record_prob(ExperimentConfig(IidExponential(2), n=1, reps=1000, seed=0))
        assert est.point == 1.0 and est.std_error == 0.0

    def test_antichain_gives_one_exactly(self):
        est = estimate_record_prob(
            ExperimentConfig(Dirichlet((1.0, 1.0, 1.0)), n=7, reps=20_000, seed=1)
        )
        assert est.point == 1.0 and est.std_error == 0.0

    def test_comonotone_is_univariate(self):
        est = estimate_record_prob(ExperimentConfig(Comonotone(5), n=4, reps=200_000, seed=2))
        assert abs(est.point - 0.25) < 4.0 * est.std_error

    def test_iid_matches_exact(self):
        est = estimate_record_prob(ExperimentConfig(IidExponential(2), n=2, reps=200_000, seed=3))
        assert abs(est.point - 0.75) < 4.0 * est.std_error

    def test_mixture_supported(self):
        spec = Mixture(0.5, IidExponential(2), Dirichlet((1.0, 1.0)))
        est = estimate_record_prob(ExperimentConfig(spec, n=3, reps=50_000, seed=4))
        # half the mass is an antichain: p = 0.5 * p_mix_part + 0.5-ish; just bounds
        assert 0.0 < est.point <= 1.0

    def test_deterministic_across_workers(self):
        for spec in (MarginalDirichlet(2, 1.0), ExponentialScaleMixture(3, 0.5)):
            runs = [
                estimate_record_prob(ExperimentConfig(spec, n=5, reps=300_000, seed=9, workers=w))
                for w in (1, 3, 7)
            ]
            assert len({r.point for r in runs}) == 1
            assert len({r.std_error for r in runs}) == 1


class TestSurvivalEstimator:
    def test_matches_exact_marginal_dirichlet(self):
        est = estimate_record_prob_survival(MarginalDirichlet(2, 1.0), 2, 100_000, seed=5)
        assert abs(est.point - 5.0 / 6.0) < 4.0 * est.std_error

    def test_matches_exact_scale_mixture(self):
        est = estimate_record_prob_survival(ExponentialScaleMixture(2, 1.0), 2, 100_000, seed=6)
        assert abs(est.point - 2.0 / 3.0) < 4.0 * est.std_error

    def test_n1_zero_variance(self):
        est = estimate_record_prob_survival(IidExponential(2), 1, 10_000, seed=7)
        assert est.point == 1.0 and est.std_error == 0.0

    def test_variance_reduction(self):
        spec = MarginalDirichlet(2, 1.0)
        reps = 100_000
        indicator = estimate_record_prob(ExperimentConfig(spec, n=5, reps=reps, seed=8))
        smoothed = estimate_record_prob_survival(spec, 5, reps, seed=8)
        assert smoothed.std_error < indicator.std_error

    def test_agreement_between_estimators(self):
        for spec, n in (
            (MarginalDirichlet(2, 5.0), 5),
            (ExponentialScaleMixture(2, 0.5), 10),
            (IidExponential(3), 4),
            (Comonotone(2), 6),
        ):
            a = estimate_record_prob(ExperimentConfig(spec, n=n, reps=100_000, seed=10))
            b = estimate_record_prob_survival(spec, n, 100_000, seed=11)
            joint = math.hypot(a.std_error, b.std_error)
            assert abs(a.point - b.point) < 4.0 * joint

    def test_nonincreasing_in_n_and_above_floor(self):
        # p_n is nonincreasing in n and never drops below 1/n: the estimates
        # must respect both within joint confidence bands.
        for spec in (MarginalDirichlet(2, 1.0), ExponentialScaleMixture(2, 1.0)):
            ns = [2, 5, 10, 20]
            ests = [
                estimate_record_prob(ExperimentConfig(spec, n=n, reps=100_000, seed=23))
                for n in ns
            ]
            for (n1, e1), (n2, e2) in zip(zip(ns, ests), zip(ns[1:], ests[1:])):
                joint = math.hypot(e1.std_error, e2.std_error)
                assert e1.point >= e2.point - 4.0 * joint, (spec, n1, n2)
            for n, e in zip(ns, ests):
                assert e.point >= 1.0 / n - 4.0 * e.std_error, (spec, n)

    def test_unsupported_spec(self):
        with pytest.raises(UnsupportedSpecError):
            estimate_record_prob_survival(Dirichlet((1.0, 1.0)), 2, 100, seed=0)

    def test_deterministic_across_workers(self):
        runs = [
            estimate_record_prob_survival(MarginalDirichlet(2, 2.0), 4, 200_000, seed=12, workers=w)
            for w in (1, 4)
        ]
        assert runs[0].point == runs[1].point
        assert runs[0].std_error == runs[1].std_error


class TestMaximaEstimates:
    def test_iid_d2_mean_maxima_is_harmonic_number(self):
        # E r_n = n * p_n and n * p_{n,2} is exactly the harmonic number H_n.
        n = 100
        result = estimate_maxima(ExperimentConfig(IidExponential(2), n=n, reps=4000, seed=13))
        h_n = sum(1.0 / k for k in range(1, n + 1))
        assert abs(result.maxima.point - h_n) < 4.0 * result.maxima.std_error
        assert result.identity_gap_sigma < 4.0
        assert result.records.point >= result.maxima.point

    def test_univariate_record_count(self):
        n = 200
        result = estimate_maxima(ExperimentConfig(IidExponential(1), n=n, reps=3000, seed=14))
        h_n = sum(1.0 / k for k in range(1, n + 1))
        assert abs(result.records.point - h_n) < 4.0 * result.records.std_error
        assert result.maxima.point == 1.0  # single running maximum survives

    def test_generic_path_d3(self):
        result = estimate_maxima(ExperimentConfig(IidExponential(3), n=50, reps=2000, seed=15))
        expected = 50 * pn_independent(50, 3)
        assert abs(result.maxima.point - expected) < 4.0 * result.maxima.std_error

    def test_deterministic_across_workers(self):
        runs = [
            estimate_maxima(ExperimentConfig(MarginalDirichlet(2, 1.0), n=60, reps=4000, seed=16, workers=w))
            for w in (1, 5)
        ]
        assert runs[0].maxima.point == runs[1].maxima.point
        assert runs[0].records.point == runs[1].records.point
        assert runs[0].pn_hat == runs[1].pn_hat


class TestConcomitant:
    def test_point_mass_at_n1(self):
        result = concomitant_check(IidExponential(2), n=1, reps=1000, seed=17)
        assert result.statistic == 0.0 and result.dof == 0 and result.pvalue == 1.0

    def test_iid_d2_not_rejected(self):
        result = concomitant_check(IidExponential(2), n=20, reps=20_000, seed=18)
        assert result.pvalue >= 1e-3
        assert result.maxima_counts.sum() == 20_000
        assert result.record_counts.sum() == 20_000

    def test_marginal_dirichlet_d3(self):
        result = concomitant_check(MarginalDirichlet(3, 2.0), n=15, reps=20_000, seed=19)
        assert result.pvalue >= 1e-3

    def test_sorted_record_count_equals_maxima_pathwise(self):
        # The concomitant bijection is exact per realization: counting
        # (d-1)-dim records in sorted-by-last-coordinate order must equal the
        # d-dimensional maxima count on the same draws, for any family.
        from paretorecords.simulate import concomitant_records
        from paretorecords import records_bruteforce, sample_observations

        for spec, seed in [
            (MarginalDirichlet(3, 2.0), 30),
            (ExponentialScaleMixture(2, 1.0), 31),
            (IidExponential(4), 32),
        ]:
            block = sample_observations(spec, 40 * 25, make_rng(seed)).reshape(40, 25, spec.dim)
            from_sort = concomitant_records(block)
            for i in range(block.shape[0]):
                _, r_n = records_bruteforce(block[i])
                assert from_sort[i] == r_n

    def test_validation(self):
        with pytest.raises(InvalidParameterError):
            concomitant_check(IidExponential(1), n=5, reps=100, seed=0)
        with pytest.raises(InvalidParameterError):
            concomitant_check(IidExponential(2), n=0, reps=100, seed=0)


class TestSweep:
    def test_exact_only_grid_monotone(self):
        rows = sweep("dir", a_values=[0.1, 1.0, 10.0, 100.0], n=5, d=2)
        vals = [r.exact for r in rows]
        assert all(r.estimate is None for r in rows)
        assert all(x > y for x, y in zip(vals, vals[1:]))
        rows = sweep("pa", a_values=[0.1, 1.0, 10.0, 100.0], n=5, d=2)
        vals = [r.exact for r in rows]
        assert all(x < y for x, y in zip(vals, vals[1:]))

    def test_single_point_matches_exact(self):
        row = sweep("pa", a_values=[1.0], n=2, d=2)[0]
        assert row.exact == pytest.approx(pn_scale_mixture(2, 2, 1.0))
        row = sweep("dir", a_values=[2.0], n=3, d=3)[0]
        assert row.exact == pytest.approx(pn_marginal_dirichlet(3, 3, 2.0))

    def test_with_monte_carlo(self):
        rows = sweep("dir", a_values=[0.5, 5.0], n=4, d=2, reps=50_000, seed=20)
        for r in rows:
            assert r.error is None
            assert abs(r.sigma_gap) < 5.0

    def test_n_grid(self):
        rows = sweep("iid-exp", n_values=[1, 2, 5, 10], d=3)
        vals = [r.exact for r in rows]
        assert vals[0] == 1.0
        assert all(x > y for x, y in zip(vals, vals[1:]))

    def test_failed_row_marked_not_raised(self):
        rows = sweep("dir", a_values=[1.0, -1.0, 2.0], n=3, d=2)
        assert rows[0].error is None and rows[2].error is None
        assert rows[1].error is not None and rows[1].exact is None

    def test_grid_validation(self):
        with pytest.raises(InvalidParameterError):
            sweep("dir", n=3, d=2)
        with pytest.raises(InvalidParameterError):
            sweep("dir", a_values=[1.0], n_values=[2], d=2)
        with pytest.raises(InvalidParameterError):
            sweep("nope", a_values=[1.0], n=2, d=2)


class TestTrajectory:
    def test_summary_fields(self):
        result = simulate_trajectory(MarginalDirichlet(2, 1.0), 50, make_rng(21))
        summary = trajectory_summary(result)
        assert summary.records_total == result.records_total
        assert summary.maxima_count == result.maxima_count
        assert summary.final_is_record == result.outcomes[-1].is_record
        assert len(result.outcomes) == 50

    def test_reproducible(self):
        a = simulate_trajectory(ExponentialScaleMixture(2, 1.0), 30, make_rng(22))
        b = simulate_trajectory(ExponentialScaleMixture(2, 1.0), 30, make_rng(22))
        assert a.outcomes == b.outcomes
