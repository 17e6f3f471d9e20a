"""Fidelity of swapping heralded by sum-frequency generation of the two photons.

Each pair of photons (one per side) that reaches the nonlinear element
up-converts with probability p_sfg, so an arrival pattern of k and l photons
heralds with weight k*l*p_sfg.  Multiphoton emissions on a single side never
herald on their own, which is what removes the 1/3 ceiling of the
linear-optical measurement: the heralded fidelity

    (1 - eps_A)^2 (1 - eps_B)^2

depends only on the source efficiencies, not on the channel losses.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .errors import (
    DomainError,
    ModelValidityError,
    ModelValidityWarning,
    UndefinedFidelityError,
)
from .photon_stats import SourceParams, SwapScenario, epsilon_from_p, joint_arrival_pmf

# Above this single-photon conversion probability the weak-interaction
# expansion behind the herald weights starts to be questionable unless the
# channels are very lossy; warn but keep computing.
WEAK_SFG_WARN_THRESHOLD = 0.1


@dataclass(frozen=True)
class NloFidelityReport:
    """Fidelity with the herald probabilities for one scenario and device."""

    fidelity: float
    p_faithful: float
    p_herald: float
    p_sfg: float


def _check_p_sfg(p_sfg: float) -> None:
    if not 0.0 <= p_sfg <= 1.0:
        raise DomainError(f"p_sfg must be in [0, 1], got {p_sfg}")
    if p_sfg > WEAK_SFG_WARN_THRESHOLD:
        warnings.warn(
            f"p_sfg = {p_sfg:g} is outside the weak-conversion regime; results "
            "remain valid only for very lossy channels or weak sources",
            ModelValidityWarning,
            stacklevel=3,
        )


def sfg_herald_pmf(
    scenario: SwapScenario, p_sfg: float, k: int, n: int, l: int, m: int
) -> float:
    """Probability that the (k|n, l|m) arrival pattern occurs and heralds.

    Equals joint_arrival_pmf(...) * k * l * p_sfg.  The herald weight
    k*l*p_sfg is a probability, so values above 1 are a model violation.
    """
    _check_p_sfg(p_sfg)
    weight = k * l * p_sfg
    if weight > 1.0:
        raise ModelValidityError(
            f"herald weight k*l*p_sfg = {weight:g} exceeds 1; the weak-conversion "
            "model does not cover this event"
        )
    if weight == 0.0:
        # Still validate index ranges on the zero-weight path.
        joint_arrival_pmf(scenario, k, n, l, m)
        return 0.0
    return joint_arrival_pmf(scenario, k, n, l, m) * weight


def p_faithful_sfg(scenario: SwapScenario, p_sfg: float) -> float:
    """Herald probability of the faithful event (single pair each, both arrive)."""
    ea, eb = scenario.source_a.epsilon, scenario.source_b.epsilon
    ha, hb = scenario.channel_a.eta, scenario.channel_b.eta
    return (1.0 - ea) * (1.0 - eb) * ea * eb * ha * hb * p_sfg


def p_total_sfg(scenario: SwapScenario, p_sfg: float) -> float:
    """Total herald probability, summed over every arrival pattern:

        p_sfg * eta_A * eta_B * eps_A/(1-eps_A) * eps_B/(1-eps_B)
    """
    _check_p_sfg(p_sfg)
    ea, eb = scenario.source_a.epsilon, scenario.source_b.epsilon
    ha, hb = scenario.channel_a.eta, scenario.channel_b.eta
    return p_sfg * ha * hb * (ea / (1.0 - ea)) * (eb / (1.0 - eb))


def fidelity_nlo(source_a: SourceParams, source_b: SourceParams) -> float:
    """Channel-independent heralded fidelity (1 - eps_A)^2 (1 - eps_B)^2."""
    ea, eb = source_a.epsilon, source_b.epsilon
    if ea == 0.0 or eb == 0.0:
        raise UndefinedFidelityError(
            "a source with eps = 0 never heralds, so the fidelity is undefined"
        )
    ua, ub = 1.0 - ea, 1.0 - eb
    return (ua * ua) * (ub * ub)


def fidelity_report(scenario: SwapScenario, p_sfg: float) -> NloFidelityReport:
    """Full herald bookkeeping for one scenario and device efficiency.

    The fidelity field is computed from the source efficiencies alone; the
    faithful/total herald probabilities it equals are reported alongside.
    """
    p_herald = p_total_sfg(scenario, p_sfg)
    if p_herald <= 0.0:
        raise UndefinedFidelityError("total herald probability is zero")
    return NloFidelityReport(
        fidelity=fidelity_nlo(scenario.source_a, scenario.source_b),
        p_faithful=p_faithful_sfg(scenario, p_sfg),
        p_herald=p_herald,
        p_sfg=p_sfg,
    )


def p_for_target_fidelity(f_target: float) -> float:
    """Pair probability at which two equal sources reach a target fidelity.

    Inverts (1 - eps)^4 = f_target via eps = 1 - f_target**(1/4); errors if
    the required eps reaches 1/2, where p = eps(1-eps) stops being invertible.
    """
    if not 0.0 < f_target <= 1.0:
        raise DomainError(f"target fidelity must be in (0, 1], got {f_target}")
    eps = 1.0 - f_target**0.25
    if eps >= 0.5:
        raise DomainError(
            f"target fidelity {f_target:g} needs eps = {eps:g} >= 1/2, outside the "
            "p <= 1/4 domain"
        )
    return eps * (1.0 - eps)


def epsilon_pair_for_fidelity(f_target: float) -> float:
    """Conversion efficiency (equal sources) reaching a target fidelity."""
    p = p_for_target_fidelity(f_target)
    return epsilon_from_p(p)
