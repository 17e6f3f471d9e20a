"""Flat key-value config files with explicit unit suffixes.

Lab-facing parameters are written the way they are quoted on hardware:

    # comment lines and blanks are ignored
    g = 20 MHz            # coupling rate as an ordinary frequency (g/2pi)
    q_a = 4e5             # dimensionless quality factor
    lambda_a = 1550 nm
    eta_sfg = 500000 %/W/cm^2
    accept = 6 GHz*cm
    length = 1 cm
    eps_a = 0.2
    clock = 1 GHz
    outputs = f_nlo,f_lo_unbalanced

Numeric values carry at most one unit token; anything that does not parse as
a number is kept as a raw string (sweep variables, output lists).  All
conversions happen here, at the boundary: frequencies become Hz (and are
multiplied by 2*pi only where a device model needs angular units), lengths
become the unit each consumer expects, and the percent sign in the
normalized-efficiency unit becomes a factor of 1/100, which is the single
most dangerous conversion in the whole parameter set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError
from .photon_stats import SwapScenario, epsilon_from_p
from .sfg_device import (
    CavityParams,
    WaveguideParams,
    kappa_from_q,
    omega_from_wavelength_nm,
    sfg_coupling_from_shg,
    sfg_efficiency_from_shg,
)

_FREQUENCY_HZ = {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9, "THz": 1e12}
_LENGTH_CM = {"nm": 1e-7, "um": 1e-4, "mm": 0.1, "cm": 1.0, "m": 100.0}
_ACCEPTANCE_HZ_CM = {
    "Hz*cm": 1.0,
    "kHz*cm": 1e3,
    "MHz*cm": 1e6,
    "GHz*cm": 1e9,
    "THz*cm": 1e12,
}
_SFG_EFFICIENCY = {"%/W/cm^2": 1e-2, "1/W/cm^2": 1.0, "/W/cm^2": 1.0}


@dataclass(frozen=True)
class Quantity:
    """A parsed numeric entry: magnitude plus the unit token as written."""

    value: float
    unit: str | None


ConfigValue = Quantity | str


def parse_config_text(text: str, source: str = "<config>") -> dict[str, ConfigValue]:
    """Parse ``key = value [unit]`` lines into a dict, later keys winning."""
    entries: dict[str, ConfigValue] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw_line!r}")
        key, _, value_part = line.partition("=")
        key = key.strip()
        if not key:
            raise ConfigError(f"{source}:{lineno}: empty key")
        tokens = value_part.split()
        if not tokens:
            raise ConfigError(f"{source}:{lineno}: key {key!r} has no value")
        try:
            magnitude = float(tokens[0])
        except ValueError:
            entries[key] = value_part.strip()
            continue
        if len(tokens) == 1:
            entries[key] = Quantity(magnitude, None)
        elif len(tokens) == 2:
            entries[key] = Quantity(magnitude, tokens[1])
        else:
            raise ConfigError(
                f"{source}:{lineno}: key {key!r} has more than one unit token: {value_part!r}"
            )
    return entries


def parse_config_file(path: str) -> dict[str, ConfigValue]:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_config_text(handle.read(), source=path)


def merge(base: dict[str, ConfigValue], overrides: dict[str, ConfigValue]) -> dict[str, ConfigValue]:
    """Config precedence: entries in ``overrides`` replace entries in ``base``."""
    merged = dict(base)
    merged.update(overrides)
    return merged


def _quantity(entries: dict[str, ConfigValue], key: str) -> Quantity:
    value = entries[key]
    if not isinstance(value, Quantity):
        raise ConfigError(f"key {key!r} must be numeric, got {value!r}")
    return value


def _converted(entries: dict[str, ConfigValue], key: str, table: dict[str, float], what: str) -> float:
    q = _quantity(entries, key)
    if q.unit is None:
        raise ConfigError(f"key {key!r} needs a {what} unit ({', '.join(table)})")
    if q.unit not in table:
        raise ConfigError(f"key {key!r} has unsupported {what} unit {q.unit!r}")
    return q.value * table[q.unit]


def get_dimensionless(entries: dict[str, ConfigValue], key: str) -> float:
    q = _quantity(entries, key)
    if q.unit == "%":
        return q.value * 1e-2
    if q.unit is not None:
        raise ConfigError(f"key {key!r} must be dimensionless, got unit {q.unit!r}")
    return q.value


def get_frequency_hz(entries: dict[str, ConfigValue], key: str) -> float:
    q = _quantity(entries, key)
    if q.unit is None:
        return q.value  # bare numbers are Hz
    if q.unit not in _FREQUENCY_HZ:
        raise ConfigError(f"key {key!r} has unsupported frequency unit {q.unit!r}")
    return q.value * _FREQUENCY_HZ[q.unit]


def get_length_cm(entries: dict[str, ConfigValue], key: str) -> float:
    return _converted(entries, key, _LENGTH_CM, "length")


def get_wavelength_nm(entries: dict[str, ConfigValue], key: str) -> float:
    return _converted(entries, key, _LENGTH_CM, "length") / _LENGTH_CM["nm"]


def get_acceptance_hz_cm(entries: dict[str, ConfigValue], key: str) -> float:
    return _converted(entries, key, _ACCEPTANCE_HZ_CM, "bandwidth-length")


def get_sfg_efficiency(entries: dict[str, ConfigValue], key: str) -> float:
    return _converted(entries, key, _SFG_EFFICIENCY, "normalized-efficiency")


def get_string(entries: dict[str, ConfigValue], key: str) -> str:
    value = entries[key]
    if isinstance(value, Quantity):
        raise ConfigError(f"key {key!r} must be a word, got a number")
    return value


def _source_epsilon(entries: dict[str, ConfigValue], side: str) -> float:
    eps_key, p_key = f"eps_{side}", f"p_{side}"
    if eps_key in entries and p_key in entries:
        raise ConfigError(f"give either {eps_key!r} or {p_key!r}, not both")
    if eps_key in entries:
        return get_dimensionless(entries, eps_key)
    if p_key in entries:
        return epsilon_from_p(get_dimensionless(entries, p_key))
    raise ConfigError(f"missing source parameter {eps_key!r} or {p_key!r}")


def build_scenario(entries: dict[str, ConfigValue]) -> SwapScenario:
    """Scenario from keys eps_a/p_a, eps_b/p_b, eta_a, eta_b (etas default to 1)."""
    eta_a = get_dimensionless(entries, "eta_a") if "eta_a" in entries else 1.0
    eta_b = get_dimensionless(entries, "eta_b") if "eta_b" in entries else 1.0
    return SwapScenario.from_values(
        _source_epsilon(entries, "a"), _source_epsilon(entries, "b"), eta_a, eta_b
    )


def _mode_omega(entries: dict[str, ConfigValue], mode: str) -> float:
    lam_key, freq_key = f"lambda_{mode}", f"freq_{mode}"
    if lam_key in entries and freq_key in entries:
        raise ConfigError(f"give either {lam_key!r} or {freq_key!r}, not both")
    if lam_key in entries:
        return omega_from_wavelength_nm(get_wavelength_nm(entries, lam_key))
    if freq_key in entries:
        return 2.0 * math.pi * get_frequency_hz(entries, freq_key)
    raise ConfigError(f"missing mode frequency: {lam_key!r} or {freq_key!r}")


def build_cavity(entries: dict[str, ConfigValue]) -> CavityParams:
    """Cavity from lab-convention keys.

    Needs g (or g_shg) as an ordinary frequency, lambda_a/lambda_b (or
    freq_a/freq_b) and quality factors q_a, q_b, q_c.  The sum-frequency mode
    defaults to omega_a + omega_b unless lambda_c/freq_c is given; external
    quality factors qe_x default to 2*q_x (half the loss through the port);
    drives are on resonance.
    """
    if "g" in entries and "g_shg" in entries:
        raise ConfigError("give either 'g' or 'g_shg', not both")
    if "g" in entries:
        g = 2.0 * math.pi * get_frequency_hz(entries, "g")
    elif "g_shg" in entries:
        g = sfg_coupling_from_shg(2.0 * math.pi * get_frequency_hz(entries, "g_shg"))
    else:
        raise ConfigError("missing coupling rate 'g' or 'g_shg'")

    omega_a = _mode_omega(entries, "a")
    omega_b = _mode_omega(entries, "b")
    if "lambda_c" in entries or "freq_c" in entries:
        omega_c = _mode_omega(entries, "c")
    else:
        omega_c = omega_a + omega_b

    kappas = {}
    for mode, omega in (("a", omega_a), ("b", omega_b), ("c", omega_c)):
        q_key = f"q_{mode}"
        if q_key not in entries:
            raise ConfigError(f"missing quality factor {q_key!r}")
        kappas[mode] = kappa_from_q(omega, get_dimensionless(entries, q_key))
        qe_key = f"qe_{mode}"
        if qe_key in entries:
            kappas[mode + "e"] = kappa_from_q(omega, get_dimensionless(entries, qe_key))
        else:
            kappas[mode + "e"] = kappas[mode] / 2.0

    return CavityParams(
        g=g,
        omega_a=omega_a,
        omega_b=omega_b,
        omega_c=omega_c,
        kappa_a=kappas["a"],
        kappa_b=kappas["b"],
        kappa_c=kappas["c"],
        kappa_ae=kappas["ae"],
        kappa_be=kappas["be"],
        kappa_ce=kappas["ce"],
        omega_pa=omega_a,
        omega_pb=omega_b,
    )


def build_waveguide(entries: dict[str, ConfigValue]) -> WaveguideParams:
    """Waveguide from keys eta_sfg (or eta_shg), accept, length, lambda."""
    if "eta_sfg" in entries and "eta_shg" in entries:
        raise ConfigError("give either 'eta_sfg' or 'eta_shg', not both")
    if "eta_sfg" in entries:
        eta = get_sfg_efficiency(entries, "eta_sfg")
    elif "eta_shg" in entries:
        eta = sfg_efficiency_from_shg(get_sfg_efficiency(entries, "eta_shg"))
    else:
        raise ConfigError("missing normalized efficiency 'eta_sfg' or 'eta_shg'")
    for key in ("accept", "length", "lambda"):
        if key not in entries:
            raise ConfigError(f"missing waveguide key {key!r}")
    wavelength_nm = get_wavelength_nm(entries, "lambda")
    photon_frequency = omega_from_wavelength_nm(wavelength_nm) / (2.0 * math.pi)
    return WaveguideParams(
        eta_sfg_norm=eta,
        spectral_acceptance=get_acceptance_hz_cm(entries, "accept"),
        length=get_length_cm(entries, "length"),
        photon_frequency=photon_frequency,
    )
