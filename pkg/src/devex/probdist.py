"""Probability mass functions on finite alphabets and information measures.

All logarithms are natural and every divergence is reported in nats. PMFs are
strictly positive by construction: the exponent machinery downstream takes
logs of these entries, and silently flooring a zero would corrupt every
exponent rather than fail loudly.

Sums use math.fsum (correctly rounded), so every scalar produced here is
exactly invariant under a relabeling that permutes both distributions the
same way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    AlphabetMismatch,
    DegenerateIncrements,
    DomainError,
    DuplicateLabel,
    NonPositiveProbability,
    NotNormalized,
)

# Inputs whose sum deviates from 1 by more than this are rejected instead of
# renormalized; it absorbs decimal-literal round-off without masking bad data.
NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True)
class Pmf:
    """Strictly positive probability mass function on a finite alphabet.

    Instances are built by make_pmf, which validates and renormalizes.
    Immutable and safe to share between threads.
    """

    labels: tuple[str, ...]
    probs: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.labels)


def make_pmf(labels, probs) -> Pmf:
    """Validate (labels, probs) into a Pmf.

    Probabilities are renormalized only when their sum deviates from 1 by at
    most NORMALIZATION_TOL; a larger deviation is an input error, not noise.
    """
    labels = tuple(str(x) for x in labels)
    probs = tuple(float(p) for p in probs)
    if len(labels) != len(probs):
        raise DomainError(
            f"labels and probs lengths differ: {len(labels)} vs {len(probs)}"
        )
    if len(labels) < 2:
        raise DomainError("alphabet needs at least 2 symbols")
    if len(set(labels)) != len(labels):
        raise DuplicateLabel(f"labels are not pairwise distinct: {labels}")
    for lab, p in zip(labels, probs):
        if not p > 0.0:
            raise NonPositiveProbability(f"P({lab}) = {p} must be > 0")
    total = math.fsum(probs)
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise NotNormalized(f"probabilities sum to {total!r}, not 1")
    if total != 1.0:
        probs = tuple(p / total for p in probs)
    return Pmf(labels, probs)


@dataclass(frozen=True)
class HypothesisPair:
    """Two hypotheses P1, P2 sharing one alphabet (same labels, same order)."""

    p1: Pmf
    p2: Pmf

    def __post_init__(self):
        if self.p1.labels != self.p2.labels:
            raise AlphabetMismatch(
                f"label lists differ: {self.p1.labels} vs {self.p2.labels}"
            )

    def llr(self) -> tuple[float, ...]:
        """Per-symbol log-likelihood ratio ln(P1(x)/P2(x)) in nats."""
        return tuple(
            math.log(a / b) for a, b in zip(self.p1.probs, self.p2.probs)
        )

    def size(self) -> int:
        return len(self.p1)


@dataclass(frozen=True)
class LlrStats:
    """Martingale increment statistics of the log-likelihood ratio under one
    hypothesis: uniform jump bound d, conditional variance sigma_sq, their
    ratio gamma = sigma_sq/d**2, and the per-symbol increment table as
    (probability under the generating measure, increment in nats).
    """

    hypothesis_index: int
    d: float
    sigma_sq: float
    gamma: float
    increments: tuple[tuple[float, float], ...]


def _require_same_alphabet(p: Pmf, q: Pmf):
    if p.labels != q.labels:
        raise AlphabetMismatch(f"label lists differ: {p.labels} vs {q.labels}")


def kl_divergence(p: Pmf, q: Pmf) -> float:
    """Relative entropy D(p||q) = sum_x p(x) ln(p(x)/q(x)) in nats."""
    _require_same_alphabet(p, q)
    return math.fsum(
        a * math.log(a / b) for a, b in zip(p.probs, q.probs)
    )


def binary_kl(p: float, q: float) -> float:
    """Binary divergence D(p||q) = p ln(p/q) + (1-p) ln((1-p)/(1-q)).

    p may sit on the boundary of [0,1] (0 ln 0 = 0); q must be interior so
    the result is always finite.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p = {p} outside [0, 1]")
    if not 0.0 < q < 1.0:
        raise DomainError(f"q = {q} outside (0, 1)")
    val = 0.0
    if p > 0.0:
        val += p * math.log(p / q)
    if p < 1.0:
        val += (1.0 - p) * math.log((1.0 - p) / (1.0 - q))
    # cancellation near p = q can leave a tiny negative residue
    return max(0.0, val)


def renyi_divergence(p: Pmf, q: Pmf, t: float) -> float:
    """Renyi divergence of order t:

        D_t(p||q) = (1/(t-1)) ln sum_x p(x)^t q(x)^(1-t)

    This convention makes (t-1)*D_t(p2||p1) equal log_mgf(pair, t) for every
    pair, which is the identity the rest of the package relies on. t = 1 is
    rejected; no continuous extension is attempted.
    """
    _require_same_alphabet(p, q)
    t = float(t)
    if t == 1.0:
        raise DomainError("t = 1 is excluded (Renyi order must differ from 1)")
    terms = [
        t * math.log(a) + (1.0 - t) * math.log(b)
        for a, b in zip(p.probs, q.probs)
    ]
    m = max(terms)
    return (m + math.log(math.fsum(math.exp(a - m) for a in terms))) / (t - 1.0)


def log_mgf(pair: HypothesisPair, t: float) -> float:
    """H(t) = ln sum_x P1(x)^(1-t) P2(x)^t, via max-shifted log-sum-exp.

    H is convex with H(0) = H(1) = 0; its Legendre transform is the rate
    function of the normalized log-likelihood ratio under P1.
    """
    t = float(t)
    terms = [
        (1.0 - t) * math.log(a) + t * math.log(b)
        for a, b in zip(pair.p1.probs, pair.p2.probs)
    ]
    m = max(terms)
    return m + math.log(math.fsum(math.exp(a - m) for a in terms))


def llr_stats(pair: HypothesisPair, hypothesis_index: int) -> LlrStats:
    """Increment statistics of the LLR martingale under one hypothesis.

    Under hypothesis 1 the increments are ln(P1(x)/P2(x)) - D(P1||P2)
    weighted by P1(x); under hypothesis 2 they are ln(P2(x)/P1(x)) -
    D(P2||P1) weighted by P2(x). d is the largest absolute increment,
    sigma_sq the weighted second moment, gamma their ratio sigma_sq/d**2.
    """
    if hypothesis_index == 1:
        base, other = pair.p1, pair.p2
    elif hypothesis_index == 2:
        base, other = pair.p2, pair.p1
    else:
        raise DomainError(f"hypothesis_index must be 1 or 2, got {hypothesis_index}")
    llr = [math.log(a / b) for a, b in zip(base.probs, other.probs)]
    mean = math.fsum(w * y for w, y in zip(base.probs, llr))
    increments = tuple(y - mean for y in llr)
    d = max(abs(y) for y in increments)
    if d == 0.0:
        raise DegenerateIncrements(
            "identical hypotheses: all increments vanish, gamma is undefined"
        )
    sigma_sq = math.fsum(w * y * y for w, y in zip(base.probs, increments))
    return LlrStats(
        hypothesis_index=hypothesis_index,
        d=d,
        sigma_sq=sigma_sq,
        gamma=sigma_sq / (d * d),
        increments=tuple(zip(base.probs, increments)),
    )
