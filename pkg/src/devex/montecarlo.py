"""Simulation-side validation of the exponent machinery.

i.i.d. sampling under either hypothesis, likelihood-ratio decisions with
erasure thresholds, Wilson confidence intervals, an exact binomial tail
oracle for binary alphabets, empirical exponent fits, and martingale traces.

Determinism contract: every random quantity is derived from a counter-based
Philox stream keyed by (seed, purpose, hypothesis, trial), so results are
bit-identical regardless of how trials are scheduled across workers. Merging
only ever adds integer counts, which is associative and order-free.

Tie handling: the simulator and the exact oracle compute the log-likelihood
ratio from symbol counts through one shared dot-product helper, so a sample
that lands exactly on a threshold classifies identically in both.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, NotBinary
from .exponents import Thresholds, check_admissible
from .probdist import HypothesisPair, kl_divergence

_Z95 = 1.959963984540054

_PURPOSE_SIMULATE = 0
_PURPOSE_TRACE = 1
_PURPOSE_SLLN = 2

_MAX_SEED = 2 ** 64
_MAX_TRIALS = 2 ** 32 - 1


def _trial_rng(seed: int, purpose: int, hypothesis: int, trial: int):
    """Philox generator for one (purpose, hypothesis, trial) work unit."""
    tag = (purpose << 48) | (hypothesis << 32) | trial
    return np.random.Generator(np.random.Philox(key=[seed, tag]))


def _llr_score(counts, llr) -> float:
    """L as a function of symbol counts.

    The single reduction shared by simulate_test and exact_binary_tail so
    float ties against n*lambda classify identically in both.
    """
    return float(np.dot(np.asarray(counts, dtype=np.float64), llr))


def _check_seed(seed: int):
    if not isinstance(seed, int) or not 0 <= seed < _MAX_SEED:
        raise DomainError(f"seed = {seed} must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class SimConfig:
    """Per-run simulation parameters: n samples per trial, trial count,
    master seed, decision thresholds, and hypothesis priors (pi1, pi2).
    """

    n: int
    trials: int
    seed: int
    thresholds: Thresholds
    priors: tuple = (0.5, 0.5)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise DomainError(f"n = {self.n} must be a positive integer")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise DomainError(f"trials = {self.trials} must be a positive integer")
        if self.trials > _MAX_TRIALS:
            raise DomainError(f"trials = {self.trials} exceeds {_MAX_TRIALS}")
        _check_seed(self.seed)
        pi1, pi2 = self.priors
        if not (0.0 < pi1 < 1.0 and 0.0 < pi2 < 1.0):
            raise DomainError(f"priors {self.priors} must lie in (0, 1)")
        if abs(pi1 + pi2 - 1.0) > 1e-12:
            raise DomainError(f"priors {self.priors} must sum to 1")


@dataclass(frozen=True)
class Estimate:
    """Point estimate with a 95% Wilson interval and -ln(p)/n."""

    value: float
    ci_low: float
    ci_high: float
    empirical_exponent: float


@dataclass(frozen=True)
class SimResult:
    n: int
    trials: int
    alpha1: Estimate
    alpha2: Estimate
    beta1: Estimate
    beta2: Estimate
    pe1: Estimate
    pe2: Estimate
    counts: dict = field(compare=False)


@dataclass(frozen=True)
class TailProbabilities:
    """Exact error/erasure probabilities for a binary alphabet."""

    alpha1: float
    alpha2: float
    beta1: float
    beta2: float


@dataclass(frozen=True)
class MartingaleTrace:
    values: tuple
    hypothesis_index: int
    increments: tuple


@dataclass(frozen=True)
class SllResult:
    mean: float
    stderr: float


def _wilson(count: int, total: int):
    """95% Wilson interval; zero (or full) counts fall back to the one-sided
    rule of three, which Wilson handles poorly at these extremes.
    """
    if count == 0:
        return 0.0, 3.0 / total
    if count == total:
        return 1.0 - 3.0 / total, 1.0
    phat = count / total
    z2 = _Z95 * _Z95
    denom = 1.0 + z2 / total
    center = (phat + z2 / (2.0 * total)) / denom
    half = _Z95 * math.sqrt(
        phat * (1.0 - phat) / total + z2 / (4.0 * total * total)
    ) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _estimate(count: int, trials: int, n: int) -> Estimate:
    value = count / trials
    lo, hi = _wilson(count, trials)
    exponent = math.inf if value == 0.0 else -math.log(value) / n
    return Estimate(value=value, ci_low=lo, ci_high=hi,
                    empirical_exponent=exponent)


def _mix_estimates(a: Estimate, b: Estimate, pi1: float, pi2: float,
                   n: int) -> Estimate:
    # a prior mixture of two binomials has no exact Wilson interval; the
    # prior-weighted endpoints contain the mixture whenever each side's
    # interval contains its own value
    value = pi1 * a.value + pi2 * b.value
    lo = pi1 * a.ci_low + pi2 * b.ci_low
    hi = pi1 * a.ci_high + pi2 * b.ci_high
    exponent = math.inf if value == 0.0 else -math.log(value) / n
    return Estimate(value=value, ci_low=lo, ci_high=hi,
                    empirical_exponent=exponent)


def simulate_test(pair: HypothesisPair, config: SimConfig,
                  threads: int = 1) -> SimResult:
    """Monte Carlo estimates of the six error/erasure probabilities.

    Each trial under each hypothesis draws n i.i.d. symbols and compares
    L = sum ln(P1/P2) against n*lambda_upper and n*lambda_lower. Events
    follow the defining probabilities: under hypothesis 1, error-or-erasure
    is {L <= n*lambda_upper} and error is {L <= n*lambda_lower}; mirrored
    with >= under hypothesis 2 (overlapping events at equality are counted
    in both, not partitioned). P_e estimates mix the two hypotheses by the
    priors.
    """
    check_admissible(pair, config.thresholds)
    if not isinstance(threads, int) or threads < 1:
        raise DomainError(f"threads = {threads} must be a positive integer")
    llr = np.array(pair.llr())
    t_upper = config.n * config.thresholds.lambda_upper
    t_lower = config.n * config.thresholds.lambda_lower
    p1 = np.asarray(pair.p1.probs)
    p2 = np.asarray(pair.p2.probs)

    def run_chunk(args):
        hyp, probs, lo, hi = args
        wide = 0  # events against the wide threshold (alpha1 / beta1)
        narrow = 0
        for trial in range(lo, hi):
            rng = _trial_rng(config.seed, _PURPOSE_SIMULATE, hyp, trial)
            score = _llr_score(rng.multinomial(config.n, probs), llr)
            if hyp == 1:
                wide += score <= t_upper
                narrow += score <= t_lower
            else:
                wide += score >= t_lower
                narrow += score >= t_upper
        return hyp, wide, narrow

    chunk = max(1, -(-config.trials // max(threads, 1)))
    jobs = []
    for hyp, probs in ((1, p1), (2, p2)):
        for lo in range(0, config.trials, chunk):
            jobs.append((hyp, probs, lo, min(lo + chunk, config.trials)))
    totals = {1: [0, 0], 2: [0, 0]}
    if threads == 1:
        results = map(run_chunk, jobs)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_chunk, jobs))
    for hyp, wide, narrow in results:
        totals[hyp][0] += wide
        totals[hyp][1] += narrow

    counts = {
        "alpha1": totals[1][0],
        "alpha2": totals[1][1],
        "beta1": totals[2][0],
        "beta2": totals[2][1],
    }
    alpha1 = _estimate(counts["alpha1"], config.trials, config.n)
    alpha2 = _estimate(counts["alpha2"], config.trials, config.n)
    beta1 = _estimate(counts["beta1"], config.trials, config.n)
    beta2 = _estimate(counts["beta2"], config.trials, config.n)
    pi1, pi2 = config.priors
    return SimResult(
        n=config.n,
        trials=config.trials,
        alpha1=alpha1,
        alpha2=alpha2,
        beta1=beta1,
        beta2=beta2,
        pe1=_mix_estimates(alpha1, beta1, pi1, pi2, config.n),
        pe2=_mix_estimates(alpha2, beta2, pi1, pi2, config.n),
        counts=counts,
    )


def exact_binary_tail(pair: HypothesisPair, n: int,
                      th: Thresholds) -> TailProbabilities:
    """Exact error/erasure probabilities on a binary alphabet.

    L is a linear function of the count k of the second symbol, so each
    probability is a binomial tail sum, accumulated in the log domain.
    Threshold comparisons reuse the simulator's convention: alpha events use
    <=, beta events use >=.
    """
    if pair.size() != 2:
        raise NotBinary(f"alphabet size {pair.size()} is not 2")
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n = {n} must be a positive integer")
    check_admissible(pair, th)
    llr = np.array(pair.llr())
    ks = np.arange(n + 1)
    scores = np.array([_llr_score((n - k, k), llr) for k in ks])
    t_upper = n * th.lambda_upper
    t_lower = n * th.lambda_lower

    def tail(prob_symbol1: float, mask) -> float:
        if not mask.any():
            return 0.0
        logpmf = (
            gammaln(n + 1) - gammaln(ks + 1) - gammaln(n - ks + 1)
            + ks * math.log(prob_symbol1)
            + (n - ks) * math.log1p(-prob_symbol1)
        )
        selected = logpmf[mask]
        m = selected.max()
        return float(math.exp(m + math.log(np.exp(selected - m).sum())))

    q1 = pair.p1.probs[1]
    q2 = pair.p2.probs[1]
    return TailProbabilities(
        alpha1=tail(q1, scores <= t_upper),
        alpha2=tail(q1, scores <= t_lower),
        beta1=tail(q2, scores >= t_lower),
        beta2=tail(q2, scores >= t_upper),
    )


def empirical_exponent(points):
    """Least-squares exponent fit: regress -ln(p) on n over (n, p) points.

    The slope estimates the exponent; the intercept absorbs any constant
    subexponential prefactor. Needs at least 3 points with estimates
    strictly inside (0, 1); zero estimates carry no slope information, so
    the caller must increase trials or reduce n.
    """
    points = list(points)
    if len(points) < 3:
        raise DomainError(f"need at least 3 points, got {len(points)}")
    ns = []
    ys = []
    for n, p in points:
        if not 0.0 < p < 1.0:
            raise DomainError(
                f"estimate {p} at n = {n} outside (0, 1); "
                "increase trials or reduce n"
            )
        ns.append(float(n))
        ys.append(-math.log(p))
    if len(set(ns)) < 2:
        raise DomainError("points need at least two distinct n values")
    slope, intercept = np.polyfit(ns, ys, 1)
    return float(slope), float(intercept)


def martingale_trace(pair: HypothesisPair, hypothesis: int, n: int,
                     seed: int) -> MartingaleTrace:
    """One realized trace of the LLR estimate martingale.

    Under hypothesis 1 the trace starts at U_0 = n*D(P1||P2), each step
    replaces one expected increment with the realized ln(P1(X_k)/P2(X_k)),
    and U_n is the realized log-likelihood ratio. Under hypothesis 2 the
    trace starts at U_0 = -n*D(P2||P1) and ends at the same realized L; its
    step sizes match the hypothesis-2 increment table up to sign.
    """
    if hypothesis not in (1, 2):
        raise DomainError(f"hypothesis must be 1 or 2, got {hypothesis}")
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n = {n} must be a positive integer")
    _check_seed(seed)
    llr = np.array(pair.llr())
    if hypothesis == 1:
        probs = np.asarray(pair.p1.probs)
        drift = kl_divergence(pair.p1, pair.p2)
        start = n * drift
        steps = llr - drift
    else:
        probs = np.asarray(pair.p2.probs)
        drift = kl_divergence(pair.p2, pair.p1)
        start = -n * drift
        steps = llr + drift
    rng = _trial_rng(seed, _PURPOSE_TRACE, hypothesis, 0)
    symbols = rng.choice(len(llr), size=n, p=probs)
    increments = steps[symbols]
    values = np.empty(n + 1)
    values[0] = start
    np.cumsum(increments, out=values[1:])
    values[1:] += start
    return MartingaleTrace(
        values=tuple(float(v) for v in values),
        hypothesis_index=hypothesis,
        increments=tuple(float(v) for v in increments),
    )


def sll_check(pair: HypothesisPair, hypothesis: int, n: int, trials: int,
              seed: int) -> SllResult:
    """Sample mean of L/n across trials with its standard error.

    The law of large numbers puts the mean near D(P1||P2) under hypothesis 1
    and near -D(P2||P1) under hypothesis 2.
    """
    if hypothesis not in (1, 2):
        raise DomainError(f"hypothesis must be 1 or 2, got {hypothesis}")
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n = {n} must be a positive integer")
    if not isinstance(trials, int) or trials < 2:
        raise DomainError(f"trials = {trials} must be an integer >= 2 "
                          "(a standard error needs two trials)")
    _check_seed(seed)
    llr = np.array(pair.llr())
    probs = np.asarray(pair.p1.probs if hypothesis == 1 else pair.p2.probs)
    values = np.empty(trials)
    for trial in range(trials):
        rng = _trial_rng(seed, _PURPOSE_SLLN, hypothesis, trial)
        values[trial] = _llr_score(rng.multinomial(n, probs), llr) / n
    return SllResult(
        mean=float(values.mean()),
        stderr=float(values.std(ddof=1) / math.sqrt(trials)),
    )
