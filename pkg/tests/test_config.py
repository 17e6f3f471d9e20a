import math

import pytest

from entswap.config import (
    Quantity,
    build_cavity,
    build_scenario,
    build_waveguide,
    get_acceptance_hz_cm,
    get_dimensionless,
    get_frequency_hz,
    get_length_cm,
    get_sfg_efficiency,
    get_string,
    get_wavelength_nm,
    merge,
    parse_config_text,
)
from entswap.errors import ConfigError


class TestParsing:
    def test_numbers_units_and_strings(self):
        entries = parse_config_text(
            """
            # a comment
            g = 20 MHz
            q_a = 4e5
            scale = log   # trailing comment
            outputs = f_nlo,f_lo_unbalanced
            """
        )
        assert entries["g"] == Quantity(20.0, "MHz")
        assert entries["q_a"] == Quantity(4e5, None)
        assert entries["scale"] == "log"
        assert entries["outputs"] == "f_nlo,f_lo_unbalanced"

    def test_later_entries_win(self):
        entries = parse_config_text("x = 1\nx = 2")
        assert entries["x"] == Quantity(2.0, None)

    def test_missing_equals_is_an_error(self):
        with pytest.raises(ConfigError):
            parse_config_text("just words")

    def test_extra_unit_tokens_rejected(self):
        with pytest.raises(ConfigError, match="lambda_a"):
            parse_config_text("lambda_a = 1550 nm extra")

    def test_empty_value_rejected(self):
        with pytest.raises(ConfigError, match="q_a"):
            parse_config_text("q_a = ")

    def test_merge_precedence(self):
        base = parse_config_text("a = 1\nb = 2")
        override = parse_config_text("b = 3\nc = 4")
        merged = merge(base, override)
        assert merged["a"] == Quantity(1.0, None)
        assert merged["b"] == Quantity(3.0, None)
        assert merged["c"] == Quantity(4.0, None)


class TestConversions:
    def test_frequency_scaling(self):
        entries = parse_config_text("a = 5 GHz\nb = 2 THz\nc = 7")
        assert get_frequency_hz(entries, "a") == 5e9
        assert get_frequency_hz(entries, "b") == 2e12
        assert get_frequency_hz(entries, "c") == 7.0

    def test_bad_frequency_unit_names_the_key(self):
        entries = parse_config_text("clock = 3 nm")
        with pytest.raises(ConfigError, match="clock"):
            get_frequency_hz(entries, "clock")

    def test_lengths(self):
        entries = parse_config_text("l1 = 1 cm\nl2 = 10 mm\nl3 = 1550 nm")
        assert get_length_cm(entries, "l1") == 1.0
        assert get_length_cm(entries, "l2") == pytest.approx(1.0)
        assert get_wavelength_nm(entries, "l3") == pytest.approx(1550.0)

    def test_percent_efficiency_is_the_dangerous_conversion(self):
        entries = parse_config_text("e1 = 500000 %/W/cm^2\ne2 = 5000 1/W/cm^2")
        assert get_sfg_efficiency(entries, "e1") == pytest.approx(5000.0)
        assert get_sfg_efficiency(entries, "e2") == pytest.approx(5000.0)

    def test_acceptance_units(self):
        entries = parse_config_text("acc = 6 GHz*cm")
        assert get_acceptance_hz_cm(entries, "acc") == pytest.approx(6e9)

    def test_dimensionless_and_percent(self):
        entries = parse_config_text("eta = 0.5\npct = 50 %")
        assert get_dimensionless(entries, "eta") == 0.5
        assert get_dimensionless(entries, "pct") == pytest.approx(0.5)
        with pytest.raises(ConfigError, match="eta2"):
            get_dimensionless(parse_config_text("eta2 = 5 MHz"), "eta2")

    def test_string_accessor(self):
        entries = parse_config_text("mode = fast\nn = 3")
        assert get_string(entries, "mode") == "fast"
        with pytest.raises(ConfigError, match="n"):
            get_string(entries, "n")


class TestScenarioBuilder:
    def test_from_epsilons(self):
        scen = build_scenario(parse_config_text("eps_a = 0.2\neps_b = 0.1\neta_a = 0.5"))
        assert scen.source_a.epsilon == 0.2
        assert scen.source_b.epsilon == 0.1
        assert scen.channel_a.eta == 0.5
        assert scen.channel_b.eta == 1.0

    def test_from_pair_probabilities(self):
        scen = build_scenario(parse_config_text("p_a = 0.09\np_b = 0.25"))
        assert scen.source_a.epsilon == pytest.approx(0.1, abs=1e-12)
        assert scen.source_b.epsilon == pytest.approx(0.5, abs=1e-12)

    def test_conflicting_source_keys(self):
        with pytest.raises(ConfigError, match="eps_a"):
            build_scenario(parse_config_text("eps_a = 0.2\np_a = 0.1\neps_b = 0.1"))

    def test_missing_source(self):
        with pytest.raises(ConfigError, match="eps_b"):
            build_scenario(parse_config_text("eps_a = 0.2"))


class TestCavityBuilder:
    BASE = """
    g = 20 MHz
    lambda_a = 1550 nm
    lambda_b = 1550 nm
    lambda_c = 775 nm
    q_a = 4e5
    q_b = 4e5
    q_c = 1e5
    """

    def test_lab_units_to_angular(self):
        cav = build_cavity(parse_config_text(self.BASE))
        assert cav.g == pytest.approx(2 * math.pi * 20e6)
        assert cav.omega_a == pytest.approx(2 * math.pi * 193.414e12, rel=1e-4)
        assert cav.kappa_a == pytest.approx(cav.omega_a / 4e5)
        assert cav.kappa_ae == pytest.approx(cav.kappa_a / 2)
        assert cav.omega_pa == cav.omega_a

    def test_sum_frequency_defaults_to_matching(self):
        text = "\n".join(
            line for line in self.BASE.splitlines() if "lambda_c" not in line
        )
        cav = build_cavity(parse_config_text(text))
        assert cav.omega_c == cav.omega_a + cav.omega_b

    def test_shg_coupling_conversion(self):
        text = self.BASE.replace("g = 20 MHz", "g_shg = 10 MHz")
        cav = build_cavity(parse_config_text(text))
        assert cav.g == pytest.approx(2 * math.pi * 20e6)

    def test_conflicting_couplings(self):
        with pytest.raises(ConfigError, match="g"):
            build_cavity(parse_config_text(self.BASE + "g_shg = 10 MHz"))

    def test_missing_quality_factor(self):
        text = "\n".join(line for line in self.BASE.splitlines() if "q_c" not in line)
        with pytest.raises(ConfigError, match="q_c"):
            build_cavity(parse_config_text(text))

    def test_explicit_external_quality_factor(self):
        cav = build_cavity(parse_config_text(self.BASE + "qe_a = 4e5"))
        assert cav.kappa_ae == pytest.approx(cav.kappa_a)


class TestWaveguideBuilder:
    BASE = """
    eta_sfg = 500000 %/W/cm^2
    accept = 6 GHz*cm
    length = 1 cm
    lambda = 1550 nm
    """

    def test_lab_units(self):
        wg = build_waveguide(parse_config_text(self.BASE))
        assert wg.eta_sfg_norm == pytest.approx(5000.0)
        assert wg.spectral_acceptance == pytest.approx(6e9)
        assert wg.length == 1.0
        assert wg.photon_frequency == pytest.approx(193.414e12, rel=1e-4)

    def test_shg_efficiency_conversion(self):
        text = self.BASE.replace(
            "eta_sfg = 500000 %/W/cm^2", "eta_shg = 125000 %/W/cm^2"
        )
        wg = build_waveguide(parse_config_text(text))
        assert wg.eta_sfg_norm == pytest.approx(5000.0)

    def test_missing_key_named(self):
        text = "\n".join(line for line in self.BASE.splitlines() if "accept" not in line)
        with pytest.raises(ConfigError, match="accept"):
            build_waveguide(parse_config_text(text))
