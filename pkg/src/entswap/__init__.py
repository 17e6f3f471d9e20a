"""Fidelity, efficiency, and rate analysis for heralded entanglement swapping.

Closed-form photon-number statistics and fidelities for swapping heralded by
linear-optical and by sum-frequency-generation Bell state measurements, the
device physics that sets the up-conversion probability, exact truncated
Fock-space checks, and independent oracles that verify every closed form.
"""

from .errors import (
    ConfigError,
    DomainError,
    EntswapError,
    InputError,
    InsufficientStatisticsError,
    ModelValidityError,
    ModelValidityWarning,
    TruncationError,
    UndefinedFidelityError,
)
from .photon_stats import (
    ChannelParams,
    SourceParams,
    SwapScenario,
    epsilon_from_p,
    joint_arrival_pmf,
    p_from_epsilon,
    p_one_arrival,
    p_zero_arrivals,
    pair_number_pmf,
)
from .lo_bsm import (
    LoFidelityReport,
    fidelity_balanced,
    fidelity_balanced_smalleta,
    fidelity_general,
    fidelity_leading_order,
    fidelity_leading_order_lossy,
    fidelity_unbalanced_limit,
    fidelity_upper_bound,
    optimal_epsilon_a,
)
from .nlo_bsm import (
    NloFidelityReport,
    fidelity_nlo,
    p_for_target_fidelity,
    p_total_sfg,
    sfg_herald_pmf,
)
from .sfg_device import (
    CavityParams,
    SteadyState,
    WaveguideParams,
    cavity_steady_state,
    eta_sfg_cavity,
    kappa_from_q,
    p_sfg_cavity,
    p_sfg_from_eta,
    p_sfg_waveguide,
)
from .rates import CrossoverResult, RateReport, crossover, rate_lo, rate_nlo
from .fock_sim import (
    BellOutcome,
    StateVector,
    bell_fidelity,
    bell_state,
    dfg_spurious_amplitude,
    product_state,
    sfg_evolve,
    swap_condition_on_sfg,
)
from .oracle import (
    OracleConfig,
    OracleEstimate,
    exact_fidelity_lo,
    exact_fidelity_nlo,
    mc_fidelity_lo,
    mc_fidelity_nlo,
)

__version__ = "0.1.0"
