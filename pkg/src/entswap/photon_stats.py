"""Photon-number statistics of down-conversion sources behind lossy channels.

A source with conversion efficiency ``eps`` emits n photon pairs with
probability (1-eps)*eps**n (a geometric distribution), and each photon sent
into a channel with transmission ``eta`` survives independently, so the
number of arrivals is a binomial thinning of the emission number.  The joint
arrival probabilities defined here feed every fidelity formula in
:mod:`entswap.lo_bsm` and :mod:`entswap.nlo_bsm`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

# Exact integer binomials below this order, log-gamma evaluation above.
# Verification sums go out to n ~ 200 where the exact integers get large.
_EXACT_BINOM_MAX_N = 60


@dataclass(frozen=True)
class SourceParams:
    """Pair source described by its conversion efficiency ``epsilon`` in [0, 1).

    The single-pair emission probability is ``p = (1 - epsilon) * epsilon``,
    which never exceeds 1/4.
    """

    epsilon: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.epsilon < 1.0:
            raise DomainError(f"epsilon must be in [0, 1), got {self.epsilon}")

    @property
    def p(self) -> float:
        """Single-pair emission probability (1 - epsilon) * epsilon."""
        return p_from_epsilon(self.epsilon)

    @classmethod
    def from_p(cls, p: float) -> "SourceParams":
        """Build a source from its single-pair probability p <= 1/4."""
        return cls(epsilon_from_p(p))


@dataclass(frozen=True)
class ChannelParams:
    """Channel with single-photon transmission probability ``eta`` in [0, 1]."""

    eta: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.eta <= 1.0:
            raise DomainError(f"eta must be in [0, 1], got {self.eta}")


@dataclass(frozen=True)
class SwapScenario:
    """Two sources feeding one joint measurement through two lossy channels."""

    source_a: SourceParams
    source_b: SourceParams
    channel_a: ChannelParams
    channel_b: ChannelParams

    @classmethod
    def from_values(cls, eps_a: float, eps_b: float, eta_a: float, eta_b: float) -> "SwapScenario":
        return cls(
            SourceParams(eps_a),
            SourceParams(eps_b),
            ChannelParams(eta_a),
            ChannelParams(eta_b),
        )

    def swapped(self) -> "SwapScenario":
        """The same scenario with the A and B sides exchanged."""
        return SwapScenario(self.source_b, self.source_a, self.channel_b, self.channel_a)


def p_from_epsilon(eps: float) -> float:
    """Single-pair probability (1 - eps) * eps for conversion efficiency eps."""
    if not 0.0 <= eps < 1.0:
        raise DomainError(f"epsilon must be in [0, 1), got {eps}")
    return (1.0 - eps) * eps


def epsilon_from_p(p: float) -> float:
    """Invert p = (1 - eps) * eps on the lower branch: eps = (1 - sqrt(1 - 4p)) / 2.

    Valid for 0 <= p <= 1/4; a few ulps of overshoot above 1/4 are tolerated
    so that swept grids may end exactly at the boundary.
    """
    if p < 0.0 or p > 0.25 + 1e-15:
        raise DomainError(f"pair probability must be in [0, 1/4], got {p}")
    radicand = max(0.0, 1.0 - 4.0 * p)
    return 0.5 * (1.0 - math.sqrt(radicand))


def pair_number_pmf(source: SourceParams, n: int) -> float:
    """Probability that the source emits exactly n photon pairs in one clock cycle."""
    if n < 0:
        raise DomainError(f"pair number must be >= 0, got {n}")
    return (1.0 - source.epsilon) * source.epsilon**n


def binomial_coefficient(n: int, k: int) -> float:
    """C(n, k) as a float; exact integers for small n, log-gamma above."""
    if k < 0 or k > n:
        return 0.0
    if n <= _EXACT_BINOM_MAX_N:
        return float(math.comb(n, k))
    return math.exp(math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1))


def binomial_thin_pmf(n: int, k: int, eta: float) -> float:
    """Probability that k of n independent photons survive transmission eta."""
    if k < 0 or k > n:
        raise DomainError(f"need 0 <= k <= n, got k={k}, n={n}")
    # 0**0 = 1 handles the lossless and fully opaque edge cases.
    return binomial_coefficient(n, k) * eta**k * (1.0 - eta) ** (n - k)


def joint_arrival_pmf(scenario: SwapScenario, k: int, n: int, l: int, m: int) -> float:
    """Probability that source A emits n pairs of which k photons arrive, and
    source B emits m pairs of which l photons arrive.

    Factorizes as pair_number_pmf(A, n) * thin(n, k, eta_A) times the same for B;
    summing over all (k, n, l, m) gives 1.
    """
    if not (0 <= k <= n) or not (0 <= l <= m):
        raise DomainError(f"need 0 <= k <= n and 0 <= l <= m, got k={k}, n={n}, l={l}, m={m}")
    return (
        pair_number_pmf(scenario.source_a, n)
        * binomial_thin_pmf(n, k, scenario.channel_a.eta)
        * pair_number_pmf(scenario.source_b, m)
        * binomial_thin_pmf(m, l, scenario.channel_b.eta)
    )


def _loss_denominator(eps: float, eta: float) -> float:
    # 1 - eps*(1 - eta), the geometric-series denominator produced by summing
    # the no-arrival (or one-arrival) branch over all emission numbers.
    return 1.0 - eps * (1.0 - eta)


def p_zero_arrivals(scenario: SwapScenario) -> float:
    """Probability that no photon at all reaches the measurement.

    Closed form of sum_{n,m} P(0|n, 0|m):
    (1-eps_A)(1-eps_B) / [(1 - eps_A(1-eta_A)) (1 - eps_B(1-eta_B))].
    """
    ea, eb = scenario.source_a.epsilon, scenario.source_b.epsilon
    ha, hb = scenario.channel_a.eta, scenario.channel_b.eta
    return (1.0 - ea) * (1.0 - eb) / (_loss_denominator(ea, ha) * _loss_denominator(eb, hb))


def p_one_arrival(scenario: SwapScenario) -> float:
    """Probability that exactly one photon reaches the measurement.

    Sum of the two single-arrival branches, each a differentiated geometric
    series:

        (1-eps_A)(1-eps_B) * [ eps_A eta_A / D_A^2 / D_B
                             + eps_B eta_B / D_A / D_B^2 ]

    with D_X = 1 - eps_X (1 - eta_X).
    """
    ea, eb = scenario.source_a.epsilon, scenario.source_b.epsilon
    ha, hb = scenario.channel_a.eta, scenario.channel_b.eta
    da = _loss_denominator(ea, ha)
    db = _loss_denominator(eb, hb)
    pref = (1.0 - ea) * (1.0 - eb)
    return pref * (ea * ha / (da * da * db) + eb * hb / (da * db * db))


def truncation_tail_bound(scenario: SwapScenario, n_max: int) -> float:
    """Upper bound on the probability mass with more than n_max pairs on either side.

    Geometric tails: eps**(N+1) / (1 - eps) per source, summed.
    """
    ea, eb = scenario.source_a.epsilon, scenario.source_b.epsilon
    return ea ** (n_max + 1) / (1.0 - ea) + eb ** (n_max + 1) / (1.0 - eb)
