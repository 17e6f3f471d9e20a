"""Independent verification of the closed-form fidelities.

Two routes, both deliberately avoiding the algebra used by the closed forms:

* exact-sum: numerically accumulate the truncated four-index arrival sums,
  with the per-photon binomial factors taken from scipy rather than from
  this package, and report a geometric tail bound on the truncation;
* monte-carlo: sample the generative model (geometric pair numbers, binomial
  thinning, herald acceptance) with a seeded counter-derived RNG and report
  a binomial standard error.

Monte Carlo work is split into a fixed number of logical shards, each seeded
from (seed, shard_index); thread workers only schedule shards, so estimates
are bit-identical for any worker count and fully reproducible per seed.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import (
    DomainError,
    InsufficientStatisticsError,
    ModelValidityError,
    UndefinedFidelityError,
)
from .photon_stats import SwapScenario

RNG_DESCRIPTION = "numpy PCG64 seeded by SeedSequence([seed, shard_index])"


@dataclass(frozen=True)
class OracleConfig:
    """Verification settings.

    ``shards`` fixes the logical partition of Monte Carlo samples (results do
    not depend on ``workers``, which only sets thread concurrency).
    """

    mode: str = "exact-sum"
    n_max: int = 200
    samples: int = 1_000_000
    seed: int = 0
    shards: int = 64
    workers: int = 1

    def __post_init__(self) -> None:
        if self.mode not in ("exact-sum", "monte-carlo"):
            raise DomainError(f"mode must be 'exact-sum' or 'monte-carlo', got {self.mode!r}")
        if self.n_max < 1:
            raise DomainError(f"n_max must be >= 1, got {self.n_max}")
        if self.samples < 1:
            raise DomainError(f"samples must be >= 1, got {self.samples}")
        if self.shards < 1 or self.workers < 1:
            raise DomainError("shards and workers must be >= 1")


@dataclass(frozen=True)
class OracleEstimate:
    value: float
    std_error: float
    tail_bound: float
    heralds: int | None = None  # Monte Carlo only


def _require_mode(cfg: OracleConfig, mode: str) -> None:
    if cfg.mode != mode:
        raise DomainError(f"this oracle needs mode {mode!r}, config says {cfg.mode!r}")


def _arrival_table(eps: float, eta: float, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Emission weights (1-eps) eps^n and the binomial arrival pmf table.

    pmf[n, k] is the probability that k of n photons arrive; scipy returns 0
    for k > n, so the full rectangle is safe to sum over.
    """
    n = np.arange(n_max + 1)
    k = np.arange(n_max + 1)
    weights = (1.0 - eps) * eps**n
    pmf = stats.binom.pmf(k[None, :], n[:, None], eta)
    return weights, pmf


def exact_fidelity_lo(scenario: SwapScenario, cfg: OracleConfig) -> OracleEstimate:
    """Truncated-sum evaluation of P(1|1,1|1) / P(at least two arrivals)."""
    _require_mode(cfg, "exact-sum")
    ea, eb = scenario.source_a.epsilon, scenario.source_b.epsilon
    ha, hb = scenario.channel_a.eta, scenario.channel_b.eta
    w_a, pmf_a = _arrival_table(ea, ha, cfg.n_max)
    w_b, pmf_b = _arrival_table(eb, hb, cfg.n_max)

    total_a = float(w_a @ pmf_a.sum(axis=1))
    total_b = float(w_b @ pmf_b.sum(axis=1))
    zero_a, one_a = float(w_a @ pmf_a[:, 0]), float(w_a @ pmf_a[:, 1])
    zero_b, one_b = float(w_b @ pmf_b[:, 0]), float(w_b @ pmf_b[:, 1])

    denominator = total_a * total_b - zero_a * zero_b - one_a * zero_b - zero_a * one_b
    if denominator <= 0.0:
        raise UndefinedFidelityError("no herald events below the truncation")
    numerator = w_a[1] * pmf_a[1, 1] * w_b[1] * pmf_b[1, 1]
    value = numerator / denominator

    missing = ea ** (cfg.n_max + 1) / (1.0 - ea) + eb ** (cfg.n_max + 1) / (1.0 - eb)
    return OracleEstimate(value=value, std_error=0.0, tail_bound=value * missing / denominator)


def _mean_arrival_tail(eps: float, eta: float, n_max: int) -> float:
    # sum_{n > N} n eps^n = eps^{N+1} ((N+1)(1-eps) + eps) / (1-eps)^2
    if eps == 0.0:
        return 0.0
    tail_n = eps ** (n_max + 1) * ((n_max + 1) * (1.0 - eps) + eps) / (1.0 - eps) ** 2
    return eta * (1.0 - eps) * tail_n


def exact_fidelity_nlo(
    scenario: SwapScenario, p_sfg: float, cfg: OracleConfig
) -> OracleEstimate:
    """Truncated-sum evaluation of the up-conversion-heralded fidelity.

    The device probability multiplies the faithful and total herald weights
    alike, so it cancels from the ratio; it is validated but never enters the
    arithmetic.
    """
    _require_mode(cfg, "exact-sum")
    if not 0.0 <= p_sfg <= 1.0:
        raise DomainError(f"p_sfg must be in [0, 1], got {p_sfg}")
    ea, eb = scenario.source_a.epsilon, scenario.source_b.epsilon
    ha, hb = scenario.channel_a.eta, scenario.channel_b.eta
    w_a, pmf_a = _arrival_table(ea, ha, cfg.n_max)
    w_b, pmf_b = _arrival_table(eb, hb, cfg.n_max)

    k = np.arange(cfg.n_max + 1, dtype=float)
    mean_a = float(w_a @ (pmf_a @ k))
    mean_b = float(w_b @ (pmf_b @ k))
    denominator = mean_a * mean_b
    if denominator <= 0.0:
        raise UndefinedFidelityError("no herald events below the truncation")
    numerator = w_a[1] * pmf_a[1, 1] * w_b[1] * pmf_b[1, 1]
    value = numerator / denominator

    rel_a = _mean_arrival_tail(ea, ha, cfg.n_max) / mean_a
    rel_b = _mean_arrival_tail(eb, hb, cfg.n_max) / mean_b
    tail = value * (rel_a + rel_b + rel_a * rel_b)
    return OracleEstimate(value=value, std_error=0.0, tail_bound=tail)


def _shard_sizes(samples: int, shards: int) -> list[int]:
    base, extra = divmod(samples, shards)
    return [base + (1 if s < extra else 0) for s in range(shards)]


def _sample_arrivals(
    rng: np.random.Generator, scenario: SwapScenario, size: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    # geometric(p) has support {1, 2, ...}; shifting gives P(n) = (1-eps) eps^n.
    n = rng.geometric(1.0 - scenario.source_a.epsilon, size) - 1
    m = rng.geometric(1.0 - scenario.source_b.epsilon, size) - 1
    k = rng.binomial(n, scenario.channel_a.eta)
    l = rng.binomial(m, scenario.channel_b.eta)
    return n, m, k, l


def _run_shards(cfg: OracleConfig, shard_fn) -> list[tuple[int, int]]:
    sizes = _shard_sizes(cfg.samples, cfg.shards)
    if cfg.workers == 1:
        return [shard_fn(idx, size) for idx, size in enumerate(sizes)]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(shard_fn, range(cfg.shards), sizes))


def mc_fidelity_lo(scenario: SwapScenario, cfg: OracleConfig) -> OracleEstimate:
    """Sampled fidelity: heralds are trials with >= 2 arrivals, faithful ones
    the (1|1, 1|1) pattern."""
    _require_mode(cfg, "monte-carlo")

    def shard(idx: int, size: int) -> tuple[int, int]:
        rng = np.random.default_rng([cfg.seed, idx])
        n, m, k, l = _sample_arrivals(rng, scenario, size)
        herald = (k + l) >= 2
        faithful = herald & (n == 1) & (m == 1) & (k == 1) & (l == 1)
        return int(herald.sum()), int(faithful.sum())

    counts = _run_shards(cfg, shard)
    heralds = sum(h for h, _ in counts)
    faithfuls = sum(f for _, f in counts)
    return _ratio_estimate(faithfuls, heralds)


def mc_fidelity_nlo(
    scenario: SwapScenario, p_sfg: float, cfg: OracleConfig
) -> OracleEstimate:
    """Sampled fidelity with acceptance probability k*l*p_sfg per trial."""
    _require_mode(cfg, "monte-carlo")
    if not 0.0 <= p_sfg <= 1.0:
        raise DomainError(f"p_sfg must be in [0, 1], got {p_sfg}")

    def shard(idx: int, size: int) -> tuple[int, int]:
        rng = np.random.default_rng([cfg.seed, idx])
        n, m, k, l = _sample_arrivals(rng, scenario, size)
        weight = k * l * p_sfg
        if np.any(weight > 1.0):
            raise ModelValidityError(
                "a sampled event has herald weight k*l*p_sfg > 1; reduce p_sfg "
                "or the source efficiencies"
            )
        herald = rng.uniform(size=size) < weight
        faithful = herald & (n == 1) & (m == 1) & (k == 1) & (l == 1)
        return int(herald.sum()), int(faithful.sum())

    counts = _run_shards(cfg, shard)
    heralds = sum(h for h, _ in counts)
    faithfuls = sum(f for _, f in counts)
    return _ratio_estimate(faithfuls, heralds)


def _ratio_estimate(faithfuls: int, heralds: int) -> OracleEstimate:
    if heralds == 0:
        raise InsufficientStatisticsError("no herald events sampled; increase samples")
    value = faithfuls / heralds
    std_error = (value * (1.0 - value) / heralds) ** 0.5
    return OracleEstimate(value=value, std_error=std_error, tail_bound=0.0, heralds=heralds)


def random_scenarios(
    count: int,
    seed: int,
    eps_range: tuple[float, float] = (0.01, 0.45),
    eta_range: tuple[float, float] = (0.05, 1.0),
) -> list[SwapScenario]:
    """Reproducible random parameter grid for verification runs."""
    rng = np.random.default_rng(seed)
    scenarios = []
    for _ in range(count):
        ea, eb = rng.uniform(*eps_range, size=2)
        ha, hb = rng.uniform(*eta_range, size=2)
        scenarios.append(SwapScenario.from_values(float(ea), float(eb), float(ha), float(hb)))
    return scenarios


# Floor for exact-sum comparisons: double-precision accumulation noise.
EXACT_ABS_TOLERANCE = 1e-10
MC_SIGMA_TOLERANCE = 5.0
# Below this many heralds a 5-sigma band is meaningless (the binomial error
# estimate itself is unreliable), so the row is reported as under-sampled.
MIN_HERALDS = 25


def _scenario_fields(scenario: SwapScenario) -> dict:
    return {
        "eps_a": scenario.source_a.epsilon,
        "eps_b": scenario.source_b.epsilon,
        "eta_a": scenario.channel_a.eta,
        "eta_b": scenario.channel_b.eta,
    }


def _comparison_row(
    scenario: SwapScenario,
    model: str,
    method: str,
    estimate: OracleEstimate,
    closed_form: float,
) -> dict:
    if method == "exact-sum":
        tolerance = max(estimate.tail_bound, EXACT_ABS_TOLERANCE)
    else:
        tolerance = MC_SIGMA_TOLERANCE * estimate.std_error
    abs_diff = abs(estimate.value - closed_form)
    return {
        "scenario": _scenario_fields(scenario),
        "model": model,
        "method": method,
        "value": estimate.value,
        "std_error": estimate.std_error,
        "tail_bound": estimate.tail_bound,
        "closed_form": closed_form,
        "abs_diff": abs_diff,
        "tolerance": tolerance,
        "pass": bool(abs_diff <= tolerance),
    }


def verification_report(
    scenarios: list[SwapScenario],
    cfg: OracleConfig,
    p_sfg: float = 1e-3,
    methods: tuple[str, ...] = ("exact-sum", "monte-carlo"),
    closed_form_lo=None,
    closed_form_nlo=None,
) -> dict:
    """Compare oracle estimates against the closed forms on a scenario grid.

    The closed forms are injectable so the comparison harness itself can be
    exercised against deliberately corrupted values.  Rows where a Monte
    Carlo run produced no heralds are reported with an ``error`` field and
    excluded from the pass/fail count.
    """
    from . import lo_bsm, nlo_bsm

    if closed_form_lo is None:
        closed_form_lo = lambda s: lo_bsm.fidelity_general(s).fidelity
    if closed_form_nlo is None:
        closed_form_nlo = lambda s: nlo_bsm.fidelity_nlo(s.source_a, s.source_b)

    rows = []
    for scenario in scenarios:
        for model in ("lo", "nlo"):
            closed = closed_form_lo(scenario) if model == "lo" else closed_form_nlo(scenario)
            for method in methods:
                method_cfg = OracleConfig(
                    mode=method,
                    n_max=cfg.n_max,
                    samples=cfg.samples,
                    seed=cfg.seed,
                    shards=cfg.shards,
                    workers=cfg.workers,
                )
                try:
                    if model == "lo":
                        if method == "exact-sum":
                            estimate = exact_fidelity_lo(scenario, method_cfg)
                        else:
                            estimate = mc_fidelity_lo(scenario, method_cfg)
                    else:
                        if method == "exact-sum":
                            estimate = exact_fidelity_nlo(scenario, p_sfg, method_cfg)
                        else:
                            estimate = mc_fidelity_nlo(scenario, p_sfg, method_cfg)
                except (InsufficientStatisticsError, ModelValidityError) as exc:
                    rows.append(
                        {
                            "scenario": _scenario_fields(scenario),
                            "model": model,
                            "method": method,
                            "error": str(exc),
                            "pass": None,
                        }
                    )
                    continue
                if estimate.heralds is not None and estimate.heralds < MIN_HERALDS:
                    rows.append(
                        {
                            "scenario": _scenario_fields(scenario),
                            "model": model,
                            "method": method,
                            "error": f"only {estimate.heralds} heralds sampled; "
                            f"need >= {MIN_HERALDS} for a meaningful comparison",
                            "pass": None,
                        }
                    )
                    continue
                rows.append(_comparison_row(scenario, model, method, estimate, closed))

    failures = sum(1 for row in rows if row["pass"] is False)
    errors = sum(1 for row in rows if row["pass"] is None)
    return {
        "rng": RNG_DESCRIPTION,
        "seed": cfg.seed,
        "n_max": cfg.n_max,
        "samples": cfg.samples,
        "shards": cfg.shards,
        "p_sfg": p_sfg,
        "rows": rows,
        "checks": len(rows),
        "failures": failures,
        "errors": errors,
        "pass": failures == 0,
    }
