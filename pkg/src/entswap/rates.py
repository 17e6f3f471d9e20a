"""Swapping-rate comparison between the linear-optical and SFG-heralded schemes.

The linear-optical scheme has to attenuate the source behind the better
channel (p_A = eta_B p_B / eta_A) to reach its best fidelity, which costs
rate; the SFG scheme pays its conversion probability instead but can drive
both sources equally hard.  Under the attenuation convention the two rates
differ by exactly p_sfg * eta_A / eta_B.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .photon_stats import SwapScenario


@dataclass(frozen=True)
class CrossoverResult:
    """Whether the SFG scheme out-rates the attenuated linear-optical one."""

    nlo_wins: bool
    ratio: float


@dataclass(frozen=True)
class RateReport:
    rate_lo: float
    rate_nlo: float
    clock_rate: float
    crossover_ratio: float


def rate_lo(scenario: SwapScenario, clock: float, attenuated: bool = True) -> float:
    """Linear-optical swapping rate eta_A eta_B p_A p_B R_c.

    With ``attenuated`` (the default) the A-side pair probability is replaced
    by the optimal-fidelity value eta_B p_B / eta_A, giving eta_B^2 p_B^2 R_c;
    otherwise the scenario's own p_A is used.
    """
    _check_clock(clock)
    ha, hb = scenario.channel_a.eta, scenario.channel_b.eta
    p_b = scenario.source_b.p
    if attenuated:
        if ha <= 0.0:
            raise DomainError("the attenuation convention needs eta_a > 0")
        return (hb * p_b) ** 2 * clock
    return ha * hb * scenario.source_a.p * p_b * clock


def rate_nlo(scenario: SwapScenario, p_sfg: float, clock: float) -> float:
    """SFG-heralded swapping rate p_sfg eta_A eta_B p_A p_B R_c (no attenuation)."""
    _check_clock(clock)
    if not 0.0 <= p_sfg <= 1.0:
        raise DomainError(f"p_sfg must be in [0, 1], got {p_sfg}")
    ha, hb = scenario.channel_a.eta, scenario.channel_b.eta
    return p_sfg * ha * hb * scenario.source_a.p * scenario.source_b.p * clock


def crossover(p_sfg: float, eta_a: float, eta_b: float) -> CrossoverResult:
    """Rate-advantage test: the SFG scheme wins when p_sfg > eta_B / eta_A.

    Returns the verdict together with the ratio p_sfg * eta_A / eta_B, which
    equals rate_nlo / rate_lo when the linear-optical side runs attenuated
    and the SFG side runs at p_A = p_B.
    """
    if eta_b <= 0.0:
        raise DomainError(f"eta_b must be > 0, got {eta_b}")
    if eta_a < 0.0 or eta_a > 1.0 or eta_b > 1.0:
        raise DomainError("transmissions must be in [0, 1]")
    if not 0.0 <= p_sfg <= 1.0:
        raise DomainError(f"p_sfg must be in [0, 1], got {p_sfg}")
    ratio = p_sfg * eta_a / eta_b
    return CrossoverResult(nlo_wins=ratio > 1.0, ratio=ratio)


def rate_report(scenario: SwapScenario, p_sfg: float, clock: float) -> RateReport:
    return RateReport(
        rate_lo=rate_lo(scenario, clock),
        rate_nlo=rate_nlo(scenario, p_sfg, clock),
        clock_rate=clock,
        crossover_ratio=crossover(p_sfg, scenario.channel_a.eta, scenario.channel_b.eta).ratio,
    )


def _check_clock(clock: float) -> None:
    if clock < 0.0:
        raise DomainError(f"clock rate must be >= 0, got {clock}")
