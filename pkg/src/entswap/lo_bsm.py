"""Non-postselected fidelity of swapping heralded by a linear-optical BSM.

The analysis is source-statistics only: any event in which at least two
photons arrive at the measurement counts as a (possibly false) herald, and
the faithful events are exactly those where each source emitted a single
pair and both transmitted photons arrived.  Which interferometric circuit
implements the measurement is deliberately left unspecified.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, UndefinedFidelityError
from .photon_stats import SwapScenario

ONE_THIRD = 1.0 / 3.0


@dataclass(frozen=True)
class LoFidelityReport:
    """Fidelity of one scenario together with the probabilities behind it.

    ``p_faithful`` is the both-single-pair, both-arrive probability,
    ``p_herald`` the probability of any >= 2-photon arrival event, and
    ``bound`` the loss-dependent fidelity ceiling (at most 1/3).
    """

    fidelity: float
    p_faithful: float
    p_herald: float
    bound: float


def fidelity_leading_order(p_a: float, p_b: float) -> float:
    """Lossless two-photon-level fidelity p_A p_B / (p_A p_B + p_A^2 + p_B^2).

    Bounded by 1/3, saturated at p_A = p_B.
    """
    _check_pair_prob(p_a, "p_a")
    _check_pair_prob(p_b, "p_b")
    denom = p_a * p_b + p_a * p_a + p_b * p_b
    if denom == 0.0:
        raise UndefinedFidelityError("both pair probabilities are zero; no herald events exist")
    return p_a * p_b / denom


def fidelity_leading_order_lossy(p_a: float, p_b: float, eta: float) -> float:
    """Two-photon-level fidelity with loss eta on the channel from source B:

        eta p_A p_B / (eta p_A p_B + p_A^2 + eta^2 p_B^2)

    Maximized at p_A = eta * p_B where it reaches 1/3; at p_A = p_B it
    degrades to roughly eta.
    """
    _check_pair_prob(p_a, "p_a")
    _check_pair_prob(p_b, "p_b")
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"eta must be in [0, 1], got {eta}")
    if eta == 0.0:
        raise UndefinedFidelityError("eta = 0 leaves no faithful herald events")
    denom = eta * p_a * p_b + p_a * p_a + eta * eta * p_b * p_b
    if denom == 0.0:
        raise UndefinedFidelityError("both pair probabilities are zero; no herald events exist")
    return eta * p_a * p_b / denom


def _herald_terms(scenario: SwapScenario) -> tuple[float, float, float, float, float]:
    ea, eb = scenario.source_a.epsilon, scenario.source_b.epsilon
    ha, hb = scenario.channel_a.eta, scenario.channel_b.eta
    ua, ub = 1.0 - ea, 1.0 - eb
    a, b = ea * ha, eb * hb
    da, db = ua + a, ub + b  # = 1 - eps*(1 - eta)
    return ua, ub, a, b, da * db


def _herald_polynomial(ua: float, ub: float, a: float, b: float) -> float:
    # 1 - P0 - P1 rearranged over the common denominator (D_A D_B)^2 into a
    # sum of positive terms, so small-epsilon evaluation does not cancel:
    #   a^2 ub^2 + b^2 ua^2 + ab ua ub + 2 a^2 ub b + 2 a b^2 ua + a^2 b^2
    # The grouping below is bitwise symmetric under (a, ua) <-> (b, ub).
    x = a * ub
    y = b * ua
    ab = a * b
    return (x * x + y * y) + x * y + ab * ((2.0 * x + 2.0 * y) + ab)


def p_herald_lo(scenario: SwapScenario) -> float:
    """Probability that at least two photons arrive, i.e. 1 - P0 - P1."""
    ua, ub, a, b, dd = _herald_terms(scenario)
    return _herald_polynomial(ua, ub, a, b) / (dd * dd)


def fidelity_upper_bound(scenario: SwapScenario) -> float:
    """Loss-dependent ceiling (1/3) (1 - eps_A(1-eta_A))^2 (1 - eps_B(1-eta_B))^2."""
    _, _, _, _, dd = _herald_terms(scenario)
    return ONE_THIRD * dd * dd


def fidelity_general(scenario: SwapScenario) -> LoFidelityReport:
    """Exact fidelity P(1|1,1|1) / (1 - P0 - P1) for arbitrary loss and pumping.

    Evaluated through the positive-term rearrangement of the herald
    probability, which is algebraically identical to 1 - P0 - P1 but stays
    accurate down to arbitrarily small pumping and loss.  Exactly symmetric
    under exchanging the A and B sides.
    """
    ua, ub, a, b, dd = _herald_terms(scenario)
    poly = _herald_polynomial(ua, ub, a, b)
    if poly <= 0.0:
        raise UndefinedFidelityError(
            "herald probability is zero (no source pumped into a transmitting channel)"
        )
    p_faithful = (ua * ub) * (a * b)
    fidelity = p_faithful * (dd * dd) / poly
    return LoFidelityReport(
        fidelity=fidelity,
        p_faithful=p_faithful,
        p_herald=poly / (dd * dd),
        bound=ONE_THIRD * dd * dd,
    )


def fidelity_balanced(eps: float, eta: float) -> float:
    """Fidelity for equal sources and equal channel losses:

        (1-eps)^2 (1-eps+eps*eta)^3 / (3(1-eps) + eps*eta)
    """
    if not 0.0 < eps < 1.0:
        if eps == 0.0:
            raise UndefinedFidelityError("eps = 0 produces no herald events")
        raise DomainError(f"eps must be in (0, 1), got {eps}")
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"eta must be in [0, 1], got {eta}")
    u = 1.0 - eps
    d = u + eps * eta
    return u * u * d**3 / (3.0 * u + eps * eta)


def fidelity_balanced_smalleta(p: float) -> float:
    """Strong-loss limit of the balanced case, as a function of pair probability:

        (1/3) * ((1 + sqrt(1 - 4p)) / 2)^4
    """
    _check_pair_prob(p, "p")
    q = 0.5 * (1.0 + (max(0.0, 1.0 - 4.0 * p)) ** 0.5)
    return ONE_THIRD * q**4


def fidelity_unbalanced_limit(p_b: float) -> float:
    """Optimal fidelity when one channel is far lossier than the other:

        (1/3) * ((1 + sqrt(1 - 4 p_B)) / 2)^2

    p_B is the pair probability of the source behind the lossier channel;
    the other source is assumed attenuated to the matching photon flux.
    """
    _check_pair_prob(p_b, "p_b")
    q = 0.5 * (1.0 + (max(0.0, 1.0 - 4.0 * p_b)) ** 0.5)
    return ONE_THIRD * q * q


def p_for_balanced_smalleta(f_target: float) -> float:
    """Pair probability at which the balanced strong-loss fidelity hits a target.

    Inverts (1/3) q^4 = f with q = (1 + sqrt(1-4p))/2; defined for targets in
    [1/48, 1/3].
    """
    q = (3.0 * f_target) ** 0.25
    return _p_from_q(q, f_target)


def p_for_unbalanced_limit(f_target: float) -> float:
    """Pair probability at which the attenuated unbalanced fidelity hits a target.

    Inverts (1/3) q^2 = f; defined for targets in [1/12, 1/3].
    """
    q = (3.0 * f_target) ** 0.5
    return _p_from_q(q, f_target)


def _p_from_q(q: float, f_target: float) -> float:
    if not 0.5 <= q <= 1.0 + 1e-15:
        raise DomainError(
            f"target fidelity {f_target:g} is outside the reachable range of this curve"
        )
    root = 2.0 * q - 1.0
    return max(0.0, (1.0 - root * root) / 4.0)


def optimal_epsilon_a(eps_b: float, eta_a: float, eta_b: float) -> float:
    """Conversion efficiency of source A that balances the arriving photon fluxes.

    Solves (1 - eps_B) eps_A eta_A = (1 - eps_A) eps_B eta_B exactly:

        eps_A = eps_B eta_B / ((1 - eps_B) eta_A + eps_B eta_B)

    At this point the general fidelity meets its loss-dependent ceiling up to
    corrections of order eps*eta.  For small efficiencies this reduces to
    p_A = (eta_B / eta_A) p_B, i.e. attenuating the source in the better
    channel to match the flux of the worse one.
    """
    if not 0.0 < eps_b < 1.0:
        raise DomainError(f"eps_b must be in (0, 1), got {eps_b}")
    if eta_a <= 0.0:
        raise DomainError(f"eta_a must be > 0, got {eta_a}")
    if eta_b < 0.0:
        raise DomainError(f"eta_b must be >= 0, got {eta_b}")
    flux_b = eps_b * eta_b
    return flux_b / ((1.0 - eps_b) * eta_a + flux_b)


def _check_pair_prob(p: float, name: str) -> None:
    if p < 0.0 or p > 0.25 + 1e-15:
        raise DomainError(f"{name} must be in [0, 1/4], got {p}")
