"""Single-photon up-conversion probability of nonlinear cavities and waveguides.

A triply-resonant chi(2) cavity with modes a, b (inputs) and c (sum
frequency) is described by coupled-mode theory.  All frequencies and rates
inside this module are angular (rad/s); lab conventions (quality factors,
ordinary frequencies in Hz, wavelengths in nm, %/W/cm^2 efficiencies) are
converted at the boundary, see :mod:`entswap.config`.

Conventions for the classical characterization link:

    P_c = eta_sfg * P_a * P_b        (outgoing SFG power vs pump powers)
    p_sfg = 4 g^2 / (kappa_a kappa_c)  (inherent single-photon probability)

with the two related through the cavity coupling factors, so a measured
eta_sfg can be turned into p_sfg without knowing g directly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy.constants import c as _C_LIGHT
from scipy.constants import h as _H_PLANCK
from scipy.constants import hbar as _HBAR

from .errors import DomainError, ModelValidityWarning

# Fractional linewidth disparity between the two input modes beyond which the
# single-number p_sfg formula (which assumes kappa_a ~ kappa_b) gets flagged.
KAPPA_DISPARITY_WARN = 0.5


@dataclass(frozen=True)
class CavityParams:
    """Triply-resonant cavity in angular-frequency units (rad/s throughout).

    kappa_x is the total linewidth of mode x and kappa_xe its external
    (coupling) part; omega_pa and omega_pb are the drive frequencies used in
    classical characterization, equal to the mode frequencies on resonance.
    """

    g: float
    omega_a: float
    omega_b: float
    omega_c: float
    kappa_a: float
    kappa_b: float
    kappa_c: float
    kappa_ae: float
    kappa_be: float
    kappa_ce: float
    omega_pa: float
    omega_pb: float

    def __post_init__(self) -> None:
        if self.g < 0.0:
            raise DomainError(f"g must be >= 0, got {self.g}")
        for name in ("omega_a", "omega_b", "omega_c", "kappa_a", "kappa_b", "kappa_c"):
            if getattr(self, name) <= 0.0:
                raise DomainError(f"{name} must be > 0, got {getattr(self, name)}")
        for ext, tot in (("kappa_ae", "kappa_a"), ("kappa_be", "kappa_b"), ("kappa_ce", "kappa_c")):
            ext_v, tot_v = getattr(self, ext), getattr(self, tot)
            if not 0.0 < ext_v <= tot_v:
                raise DomainError(f"need 0 < {ext} <= {tot}, got {ext_v} vs {tot_v}")

    @classmethod
    def on_resonance(
        cls,
        g: float,
        omega_a: float,
        omega_b: float,
        kappa_a: float,
        kappa_b: float,
        kappa_c: float,
        kappa_ae: float,
        kappa_be: float,
        kappa_ce: float,
    ) -> "CavityParams":
        """Frequency-matched cavity (omega_c = omega_a + omega_b) driven on resonance."""
        return cls(
            g=g,
            omega_a=omega_a,
            omega_b=omega_b,
            omega_c=omega_a + omega_b,
            kappa_a=kappa_a,
            kappa_b=kappa_b,
            kappa_c=kappa_c,
            kappa_ae=kappa_ae,
            kappa_be=kappa_be,
            kappa_ce=kappa_ce,
            omega_pa=omega_a,
            omega_pb=omega_b,
        )


@dataclass(frozen=True)
class SteadyState:
    """Static intracavity amplitudes (sqrt-photon units) under continuous drive."""

    amp_a: complex
    amp_b: complex
    amp_c: complex
    a_in: float
    b_in: float

    @property
    def n_a(self) -> float:
        return abs(self.amp_a) ** 2

    @property
    def n_b(self) -> float:
        return abs(self.amp_b) ** 2

    @property
    def n_c(self) -> float:
        return abs(self.amp_c) ** 2


@dataclass(frozen=True)
class WaveguideParams:
    """Phase-matched waveguide in lab units.

    eta_sfg_norm: normalized efficiency in 1/(W cm^2) (percent already removed)
    spectral_acceptance: phase-matching bandwidth-length product in Hz*cm
    length: cm
    photon_frequency: Hz (ordinary frequency of the long-wavelength photon)
    """

    eta_sfg_norm: float
    spectral_acceptance: float
    length: float
    photon_frequency: float

    def __post_init__(self) -> None:
        for name in ("eta_sfg_norm", "spectral_acceptance", "photon_frequency"):
            if getattr(self, name) <= 0.0:
                raise DomainError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.length < 0.0:
            raise DomainError(f"length must be >= 0, got {self.length}")


def kappa_from_q(omega: float, q: float) -> float:
    """Linewidth kappa = omega / Q for a resonance at angular frequency omega."""
    if q <= 0.0:
        raise DomainError(f"quality factor must be > 0, got {q}")
    return omega / q


def omega_from_wavelength_nm(wavelength_nm: float) -> float:
    """Angular frequency 2 pi c / lambda for a vacuum wavelength in nm."""
    if wavelength_nm <= 0.0:
        raise DomainError(f"wavelength must be > 0, got {wavelength_nm}")
    return 2.0 * math.pi * _C_LIGHT / (wavelength_nm * 1e-9)


def sfg_coupling_from_shg(g_shg: float) -> float:
    """Nonlinear coupling rate for SFG given the measured SHG rate (factor 2)."""
    return 2.0 * g_shg


def sfg_efficiency_from_shg(eta_shg: float) -> float:
    """Normalized SFG efficiency given the measured SHG efficiency (factor 4)."""
    return 4.0 * eta_shg


def cavity_steady_state(cav: CavityParams, power_a: float, power_b: float) -> SteadyState:
    """Solve the driven coupled-mode equations to leading order in g/kappa.

    The input fluxes are a_in = sqrt(P_a / (hbar omega_a)) etc.; each input
    mode fills its Lorentzian independently and the sum-frequency amplitude
    follows from the product:

        a = i sqrt(kappa_ae/2) a_in / (i (omega_a - omega_pa) + kappa_a/2)
        c = -i g a b / (i (omega_c - omega_pa - omega_pb) + kappa_c/2)
    """
    if power_a < 0.0 or power_b < 0.0:
        raise DomainError("pump powers must be >= 0")
    a_in = (power_a / (_HBAR * cav.omega_a)) ** 0.5
    b_in = (power_b / (_HBAR * cav.omega_b)) ** 0.5
    amp_a = 1j * (cav.kappa_ae / 2.0) ** 0.5 * a_in / (
        1j * (cav.omega_a - cav.omega_pa) + cav.kappa_a / 2.0
    )
    amp_b = 1j * (cav.kappa_be / 2.0) ** 0.5 * b_in / (
        1j * (cav.omega_b - cav.omega_pb) + cav.kappa_b / 2.0
    )
    amp_c = -1j * cav.g * amp_a * amp_b / (
        1j * (cav.omega_c - cav.omega_pa - cav.omega_pb) + cav.kappa_c / 2.0
    )
    return SteadyState(amp_a=amp_a, amp_b=amp_b, amp_c=amp_c, a_in=a_in, b_in=b_in)


def sfg_output_power(cav: CavityParams, power_a: float, power_b: float) -> float:
    """Outgoing SFG power P_c = (kappa_ce/2) hbar omega_c |c|^2 under both drives."""
    state = cavity_steady_state(cav, power_a, power_b)
    return (cav.kappa_ce / 2.0) * _HBAR * cav.omega_c * state.n_c


def _lorentzian(detuning: float, kappa: float) -> float:
    return detuning * detuning + (kappa / 2.0) ** 2


def eta_sfg_cavity(cav: CavityParams) -> float:
    """Classical conversion efficiency eta_sfg (per W), including detunings:

        g^2 * (kappa_ae/2) / ((omega_a - omega_pa)^2 + (kappa_a/2)^2)
            * (kappa_be/2) / ((omega_b - omega_pb)^2 + (kappa_b/2)^2)
            * (kappa_ce/2) / ((omega_c - omega_pa - omega_pb)^2 + (kappa_c/2)^2)
            * hbar omega_c / (hbar omega_a hbar omega_b)

    Detuning any denominator far off resonance drives the efficiency to zero.
    """
    la = _lorentzian(cav.omega_a - cav.omega_pa, cav.kappa_a)
    lb = _lorentzian(cav.omega_b - cav.omega_pb, cav.kappa_b)
    lc = _lorentzian(cav.omega_c - cav.omega_pa - cav.omega_pb, cav.kappa_c)
    return (
        cav.g**2
        * (cav.kappa_ae / 2.0) / la
        * (cav.kappa_be / 2.0) / lb
        * (cav.kappa_ce / 2.0) / lc
        * (_HBAR * cav.omega_c) / ((_HBAR * cav.omega_a) * (_HBAR * cav.omega_b))
    )


def p_sfg_cavity(cav: CavityParams) -> float:
    """Inherent single-photon conversion probability 4 g^2 / (kappa_a kappa_c).

    Applies to photons with bandwidth up to the cavity linewidth.  Derived
    assuming kappa_a ~ kappa_b; a strong disparity is flagged, not rejected.
    """
    disparity = abs(cav.kappa_a - cav.kappa_b) / cav.kappa_a
    if disparity > KAPPA_DISPARITY_WARN:
        warnings.warn(
            f"kappa_a and kappa_b differ by {disparity:.0%}; the single-number "
            "conversion probability assumes comparable input linewidths",
            ModelValidityWarning,
            stacklevel=2,
        )
    p = 4.0 * cav.g**2 / (cav.kappa_a * cav.kappa_c)
    if p > 1.0:
        warnings.warn(
            f"p_sfg = {p:g} exceeds 1; coupling too strong for the perturbative "
            "single-photon picture",
            ModelValidityWarning,
            stacklevel=2,
        )
    return p


def p_sfg_from_eta(cav: CavityParams, eta_sfg: float) -> float:
    """Single-photon conversion probability from a measured classical efficiency:

        p_sfg = eta_sfg * (kappa_a/2)^2 / (kappa_ae/2)
                        * (kappa_b/2)^2 / (kappa_be/2)
                        * kappa_c / (kappa_a * kappa_ce/2)
                        * hbar omega_a hbar omega_b / (hbar omega_c)

    Composing eta_sfg_cavity (on resonance, frequency matched) with this map
    reproduces 4 g^2 / (kappa_a kappa_c) identically; a below-ideal measured
    efficiency scales p_sfg down linearly.
    """
    if eta_sfg < 0.0:
        raise DomainError(f"eta_sfg must be >= 0, got {eta_sfg}")
    return (
        eta_sfg
        * (cav.kappa_a / 2.0) ** 2 / (cav.kappa_ae / 2.0)
        * (cav.kappa_b / 2.0) ** 2 / (cav.kappa_be / 2.0)
        * cav.kappa_c / (cav.kappa_a * cav.kappa_ce / 2.0)
        * (_HBAR * cav.omega_a) * (_HBAR * cav.omega_b) / (_HBAR * cav.omega_c)
    )


def p_sfg_waveguide(wg: WaveguideParams) -> float:
    """Single-photon conversion probability of a waveguide using its full
    phase-matching bandwidth:

        p_sfg = 2 pi * eta_sfg * h * nu * (acceptance) * L

    with eta_sfg in 1/(W cm^2), the acceptance in Hz*cm and L in cm, so the
    result is dimensionless.
    """
    return (
        2.0
        * math.pi
        * wg.eta_sfg_norm
        * _H_PLANCK
        * wg.photon_frequency
        * wg.spectral_acceptance
        * wg.length
    )
