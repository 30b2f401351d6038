import math

import numpy as np
import pytest
import scipy.stats

from devex import (
    DomainError,
    Estimate,
    HypothesisPair,
    InadmissibleThresholds,
    NotBinary,
    SimConfig,
    Thresholds,
    empirical_exponent,
    exact_binary_tail,
    kl_divergence,
    llr_stats,
    make_pmf,
    martingale_trace,
    simulate_test,
    sll_check,
)

from conftest import random_pair

ESTIMATE_NAMES = ("alpha1", "alpha2", "beta1", "beta2", "pe1", "pe2")


def results_equal(a, b):
    if (a.n, a.trials, a.counts) != (b.n, b.trials, b.counts):
        return False
    return all(getattr(a, k) == getattr(b, k) for k in ESTIMATE_NAMES)


class TestSimConfig:
    def test_valid(self, zero_th):
        cfg = SimConfig(n=10, trials=100, seed=1, thresholds=zero_th)
        assert cfg.priors == (0.5, 0.5)

    @pytest.mark.parametrize("kwargs", [
        dict(n=0), dict(n=-3), dict(n=2.0),
        dict(trials=0), dict(trials=2 ** 32),
        dict(seed=-1), dict(seed=2 ** 64), dict(seed=1.5),
        dict(priors=(0.0, 1.0)), dict(priors=(0.6, 0.6)),
        dict(priors=(1.2, -0.2)),
    ])
    def test_rejects(self, zero_th, kwargs):
        base = dict(n=10, trials=100, seed=1, thresholds=zero_th)
        base.update(kwargs)
        with pytest.raises(DomainError):
            SimConfig(**base)


class TestSimulateTest:
    def test_thread_count_does_not_change_results(self, ex1_pair, zero_th):
        cfg = SimConfig(n=20, trials=500, seed=99, thresholds=zero_th)
        runs = [simulate_test(ex1_pair, cfg, threads=t) for t in (1, 2, 4)]
        assert results_equal(runs[0], runs[1])
        assert results_equal(runs[0], runs[2])

    def test_rerun_is_identical(self, ex1_pair, zero_th):
        cfg = SimConfig(n=20, trials=500, seed=99, thresholds=zero_th)
        assert results_equal(simulate_test(ex1_pair, cfg),
                             simulate_test(ex1_pair, cfg))

    def test_narrow_events_are_subsets(self, ex1_pair):
        cfg = SimConfig(n=15, trials=2000, seed=3,
                        thresholds=Thresholds(0.02, -0.02))
        res = simulate_test(ex1_pair, cfg)
        assert res.counts["alpha2"] <= res.counts["alpha1"]
        assert res.counts["beta2"] <= res.counts["beta1"]
        assert res.alpha2.value <= res.alpha1.value
        assert res.beta2.value <= res.beta1.value

    def test_near_identical_pair_is_a_coin_flip(self, zero_th):
        pair = HypothesisPair(make_pmf(["0", "1"], [0.5001, 0.4999]),
                              make_pmf(["0", "1"], [0.4999, 0.5001]))
        cfg = SimConfig(n=1, trials=4000, seed=11, thresholds=zero_th)
        res = simulate_test(pair, cfg)
        assert res.pe1.ci_low <= 0.5 <= res.pe1.ci_high

    def test_zero_count_estimate(self, ex1_pair, zero_th):
        # n large enough that no trial errs at this trial count
        cfg = SimConfig(n=4000, trials=50, seed=2, thresholds=zero_th)
        res = simulate_test(ex1_pair, cfg)
        assert res.counts["alpha1"] == 0
        assert res.alpha1 == Estimate(0.0, 0.0, 3.0 / 50, math.inf)

    def test_prior_mixing(self, ex1_pair, zero_th):
        cfg = SimConfig(n=10, trials=1000, seed=4, thresholds=zero_th,
                        priors=(0.25, 0.75))
        res = simulate_test(ex1_pair, cfg)
        want = 0.25 * res.alpha1.value + 0.75 * res.beta1.value
        assert res.pe1.value == pytest.approx(want, rel=1e-12)

    def test_inadmissible_thresholds(self, ex1_pair):
        cfg = SimConfig(n=10, trials=100, seed=1, thresholds=Thresholds(0.9, 0.0))
        with pytest.raises(InadmissibleThresholds):
            simulate_test(ex1_pair, cfg)

    def test_bad_threads(self, ex1_pair, zero_th):
        cfg = SimConfig(n=10, trials=100, seed=1, thresholds=zero_th)
        with pytest.raises(DomainError):
            simulate_test(ex1_pair, cfg, threads=0)


class TestExactBinaryTail:
    def test_rejects_larger_alphabets(self, zero_th):
        p = make_pmf(["a", "b", "c"], [0.2, 0.3, 0.5])
        q = make_pmf(["a", "b", "c"], [0.5, 0.3, 0.2])
        with pytest.raises(NotBinary):
            exact_binary_tail(HypothesisPair(p, q), 5, zero_th)

    def test_single_sample(self, ex1_pair, zero_th):
        tails = exact_binary_tail(ex1_pair, 1, zero_th)
        assert tails.alpha1 == pytest.approx(0.4, abs=1e-12)
        assert tails.alpha2 == pytest.approx(0.4, abs=1e-12)
        assert tails.beta1 == pytest.approx(0.4, abs=1e-12)
        assert tails.beta2 == pytest.approx(0.4, abs=1e-12)

    def test_two_samples_by_hand(self, ex1_pair, zero_th):
        # L(k) = (2k - 2) ln 1.5 for k successes; L <= 0 at k in {0, 1},
        # so alpha1 = 0.6^2 + 2(0.4)(0.6) = 0.64 with the tie included.
        # The k = 1 score evaluates to -5.6e-17 through the shared dot
        # product, so the tie trial sits below the >= cut and beta1 keeps
        # only k = 2; the simulator scores identical counts identically,
        # which is the agreement the oracle promises.
        tails = exact_binary_tail(ex1_pair, 2, zero_th)
        assert tails.alpha1 == pytest.approx(0.64, abs=1e-12)
        assert tails.beta1 == pytest.approx(0.16, abs=1e-12)

    def test_binomial_cdf_cross_check(self, ex1_pair, zero_th):
        # at n = 100 the alpha1 event is exactly {k <= 50} under Bin(100, .6)
        tails = exact_binary_tail(ex1_pair, 100, zero_th)
        want = float(scipy.stats.binom.cdf(50, 100, 0.6))
        assert tails.alpha1 == pytest.approx(want, rel=1e-10)
        assert tails.alpha1 == pytest.approx(0.027099197757008555, rel=1e-12)

    def test_erasure_window_splits_events(self, ex1_pair):
        th = Thresholds(0.02, -0.02)
        tails = exact_binary_tail(ex1_pair, 25, th)
        assert tails.alpha2 <= tails.alpha1
        assert tails.beta2 <= tails.beta1
        for v in (tails.alpha1, tails.alpha2, tails.beta1, tails.beta2):
            assert 0.0 <= v <= 1.0

    def test_input_validation(self, ex1_pair, zero_th):
        with pytest.raises(DomainError):
            exact_binary_tail(ex1_pair, 0, zero_th)
        with pytest.raises(InadmissibleThresholds):
            exact_binary_tail(ex1_pair, 5, Thresholds(0.9, 0.0))

    def test_random_pairs_monotone_in_n(self, zero_th):
        # exponential decay: larger n gives smaller error probabilities
        rng = np.random.default_rng(12)
        for _ in range(5):
            pair = random_pair(rng, 2)
            a = exact_binary_tail(pair, 10, zero_th)
            b = exact_binary_tail(pair, 40, zero_th)
            assert b.alpha1 <= a.alpha1 + 1e-12
            assert b.beta1 <= a.beta1 + 1e-12


class TestSimulatorMatchesOracle:
    def test_small_instance(self, ex1_pair, zero_th):
        cfg = SimConfig(n=5, trials=20000, seed=123, thresholds=zero_th)
        res = simulate_test(ex1_pair, cfg, threads=2)
        tails = exact_binary_tail(ex1_pair, 5, zero_th)
        for k in ("alpha1", "alpha2", "beta1", "beta2"):
            est = getattr(res, k)
            assert est.ci_low <= getattr(tails, k) <= est.ci_high

    def test_coverage_over_random_instances(self, zero_th):
        # 100 random binary pairs, 4 tail estimates each; the 95% intervals
        # should capture the exact values at close to the nominal rate
        rng = np.random.default_rng(404)
        hits = total = 0
        for _ in range(100):
            while True:
                a = float(rng.uniform(0.05, 0.95))
                b = float(rng.uniform(0.05, 0.95))
                if abs(a - b) > 0.02:
                    break
            pair = HypothesisPair(make_pmf(["0", "1"], [1 - a, a]),
                                  make_pmf(["0", "1"], [1 - b, b]))
            n = int(rng.integers(5, 60))
            cfg = SimConfig(n=n, trials=2000, seed=int(rng.integers(0, 2 ** 32)),
                            thresholds=zero_th)
            res = simulate_test(pair, cfg)
            tails = exact_binary_tail(pair, n, zero_th)
            for k in ("alpha1", "alpha2", "beta1", "beta2"):
                est = getattr(res, k)
                hits += est.ci_low <= getattr(tails, k) <= est.ci_high
                total += 1
        assert total == 400
        assert hits / total >= 0.93


class TestEmpiricalExponent:
    def test_recovers_pure_exponential(self):
        pts = [(n, math.exp(-0.05 * n)) for n in (10, 20, 30, 40)]
        slope, intercept = empirical_exponent(pts)
        assert slope == pytest.approx(0.05, abs=1e-12)
        assert intercept == pytest.approx(0.0, abs=1e-10)

    def test_prefactor_lands_in_intercept(self):
        pts = [(n, 2.0 * math.exp(-0.05 * n)) for n in (20, 40, 60, 80)]
        slope, intercept = empirical_exponent(pts)
        assert slope == pytest.approx(0.05, abs=1e-12)
        assert intercept == pytest.approx(-math.log(2.0), abs=1e-10)

    def test_needs_three_points(self):
        with pytest.raises(DomainError):
            empirical_exponent([(10, 0.5), (20, 0.25)])

    def test_rejects_boundary_estimates(self):
        with pytest.raises(DomainError, match="trials"):
            empirical_exponent([(10, 0.5), (20, 0.0), (30, 0.1)])
        with pytest.raises(DomainError):
            empirical_exponent([(10, 0.5), (20, 1.0), (30, 0.1)])

    def test_needs_two_distinct_n(self):
        with pytest.raises(DomainError):
            empirical_exponent([(10, 0.5), (10, 0.4), (10, 0.3)])


class TestMartingaleTrace:
    def test_start_and_telescoping(self, ex1_pair):
        n = 50
        trace = martingale_trace(ex1_pair, 1, n, seed=21)
        d12 = kl_divergence(ex1_pair.p1, ex1_pair.p2)
        assert trace.values[0] == pytest.approx(n * d12, rel=1e-15)
        assert len(trace.values) == n + 1
        assert len(trace.increments) == n
        for k in range(1, n + 1):
            step = trace.values[k] - trace.values[k - 1]
            assert step == pytest.approx(trace.increments[k - 1], abs=1e-9)

    def test_increments_come_from_the_table(self, ex1_pair):
        stats = llr_stats(ex1_pair, 1)
        table = [inc for _, inc in stats.increments]
        trace = martingale_trace(ex1_pair, 1, 200, seed=21)
        for inc in trace.increments:
            assert min(abs(inc - t) for t in table) <= 1e-12
            assert abs(inc) <= stats.d + 1e-12

    def test_hypothesis_two_mirror(self, ex1_pair):
        n = 50
        trace = martingale_trace(ex1_pair, 2, n, seed=22)
        d21 = kl_divergence(ex1_pair.p2, ex1_pair.p1)
        assert trace.values[0] == pytest.approx(-n * d21, rel=1e-15)
        table = [-inc for _, inc in llr_stats(ex1_pair, 2).increments]
        for inc in trace.increments:
            assert min(abs(inc - t) for t in table) <= 1e-12

    def test_endpoint_is_the_realized_llr(self, ex1_pair):
        # re-derive the symbol draws from the same keyed stream
        from devex.montecarlo import _PURPOSE_TRACE, _trial_rng
        n, seed = 80, 31
        for hyp, probs in ((1, ex1_pair.p1.probs), (2, ex1_pair.p2.probs)):
            trace = martingale_trace(ex1_pair, hyp, n, seed=seed)
            rng = _trial_rng(seed, _PURPOSE_TRACE, hyp, 0)
            symbols = rng.choice(2, size=n, p=np.asarray(probs))
            llr = ex1_pair.llr()
            realized = math.fsum(llr[s] for s in symbols)
            assert trace.values[-1] == pytest.approx(realized, abs=1e-9)

    def test_long_run_mean_is_near_zero(self, ex1_pair):
        # increments are centered; at 1e6 steps the sample mean should sit
        # within 3 sigma / 1000 of zero
        trace = martingale_trace(ex1_pair, 1, 10 ** 6, seed=5)
        sigma = math.sqrt(llr_stats(ex1_pair, 1).sigma_sq)
        mean = math.fsum(trace.increments) / len(trace.increments)
        assert abs(mean) <= 3.0 * sigma / 1000.0

    def test_input_validation(self, ex1_pair):
        with pytest.raises(DomainError):
            martingale_trace(ex1_pair, 5, 10, seed=1)
        with pytest.raises(DomainError):
            martingale_trace(ex1_pair, 1, 0, seed=1)
        with pytest.raises(DomainError):
            martingale_trace(ex1_pair, 1, 10, seed=-1)


class TestSllCheck:
    def test_mean_tracks_divergence(self, ex1_pair):
        d12 = kl_divergence(ex1_pair.p1, ex1_pair.p2)
        d21 = kl_divergence(ex1_pair.p2, ex1_pair.p1)
        r1 = sll_check(ex1_pair, 1, n=400, trials=200, seed=17)
        r2 = sll_check(ex1_pair, 2, n=400, trials=200, seed=17)
        assert abs(r1.mean - d12) <= 4.0 * r1.stderr
        assert abs(r2.mean + d21) <= 4.0 * r2.stderr

    def test_input_validation(self, ex1_pair):
        with pytest.raises(DomainError):
            sll_check(ex1_pair, 1, n=10, trials=1, seed=1)
        with pytest.raises(DomainError):
            sll_check(ex1_pair, 3, n=10, trials=10, seed=1)
        with pytest.raises(DomainError):
            sll_check(ex1_pair, 1, n=0, trials=10, seed=1)
