import numpy as np
import pytest

from entswap.errors import (
    DomainError,
    ModelValidityError,
    ModelValidityWarning,
    UndefinedFidelityError,
)
from entswap.lo_bsm import fidelity_balanced_smalleta
from entswap.nlo_bsm import (
    epsilon_pair_for_fidelity,
    fidelity_nlo,
    fidelity_report,
    p_faithful_sfg,
    p_for_target_fidelity,
    p_total_sfg,
    sfg_herald_pmf,
)
from entswap.photon_stats import SourceParams, SwapScenario, joint_arrival_pmf


def scenario(eps_a, eps_b, eta_a, eta_b):
    return SwapScenario.from_values(eps_a, eps_b, eta_a, eta_b)


def summed_total_herald(scen, p_sfg, n_max=30):
    """Independent oracle: sum arrival pmf times k*l*p_sfg term by term.

    The truncation tail is geometric (eps**31 ~ 1e-22 for eps <= 0.2), far
    below the comparison tolerance.
    """
    total = 0.0
    for n in range(n_max + 1):
        for k in range(n + 1):
            for m in range(n_max + 1):
                for l in range(m + 1):
                    total += joint_arrival_pmf(scen, k, n, l, m) * k * l * p_sfg
    return total


class TestHeraldPmf:
    def test_zero_without_both_photons(self):
        scen = scenario(0.2, 0.2, 0.8, 0.8)
        assert sfg_herald_pmf(scen, 1e-3, 0, 2, 1, 1) == 0.0
        assert sfg_herald_pmf(scen, 1e-3, 1, 1, 0, 3) == 0.0

    def test_faithful_event_value(self):
        scen = scenario(0.3, 0.2, 0.6, 0.4)
        expected = 0.7 * 0.8 * 0.3 * 0.2 * 0.6 * 0.4 * 1e-3
        assert sfg_herald_pmf(scen, 1e-3, 1, 1, 1, 1) == pytest.approx(expected, rel=1e-13)
        assert p_faithful_sfg(scen, 1e-3) == pytest.approx(expected, rel=1e-13)

    def test_multiphoton_term_arithmetic(self):
        scen = scenario(0.1, 0.1, 0.5, 0.5)
        expected = joint_arrival_pmf(scen, 2, 2, 1, 1) * 2 * 1 * 1e-3
        assert sfg_herald_pmf(scen, 1e-3, 2, 2, 1, 1) == pytest.approx(expected, rel=1e-13)

    def test_multiphoton_term_monte_carlo(self):
        scen = scenario(0.1, 0.1, 0.5, 0.5)
        p_sfg = 1e-2
        rng = np.random.default_rng(99)
        size = 4_000_000
        n = rng.geometric(0.9, size) - 1
        m = rng.geometric(0.9, size) - 1
        k = rng.binomial(n, 0.5)
        l = rng.binomial(m, 0.5)
        accept = rng.uniform(size=size) < np.minimum(k * l * p_sfg, 1.0)
        hits = int(np.sum(accept & (k == 2) & (n == 2) & (l == 1) & (m == 1)))
        prob = sfg_herald_pmf(scen, p_sfg, 2, 2, 1, 1)
        sigma = (prob * (1 - prob) / size) ** 0.5
        assert hits / size == pytest.approx(prob, abs=5 * sigma)

    def test_weight_above_one_rejected(self):
        scen = scenario(0.3, 0.3, 0.9, 0.9)
        with pytest.warns(ModelValidityWarning), pytest.raises(ModelValidityError):
            sfg_herald_pmf(scen, 0.5, 2, 2, 2, 2)

    def test_large_p_sfg_warns(self):
        scen = scenario(0.2, 0.2, 0.5, 0.5)
        with pytest.warns(ModelValidityWarning):
            sfg_herald_pmf(scen, 0.5, 1, 1, 1, 1)


class TestTotalHerald:
    def test_silent_source_gives_zero(self):
        assert p_total_sfg(scenario(0.0, 0.3, 0.5, 0.5), 1e-3) == 0.0

    def test_validity_boundary(self):
        with pytest.warns(ModelValidityWarning):
            value = p_total_sfg(scenario(0.5, 0.5, 1.0, 1.0), 1.0)
        assert value == pytest.approx(1.0, rel=1e-14)

    def test_closed_form_matches_summation(self):
        scen = scenario(0.2, 0.2, 0.3, 0.7)
        closed = p_total_sfg(scen, 1e-4)
        assert closed == pytest.approx(summed_total_herald(scen, 1e-4), rel=1e-13)

    def test_linearity(self):
        scen = scenario(0.17, 0.23, 0.5, 0.25)
        base = p_total_sfg(scen, 1e-4)
        assert p_total_sfg(scen, 2e-4) == 2.0 * base
        doubled_eta_a = scenario(0.17, 0.23, 1.0, 0.25)
        assert p_total_sfg(doubled_eta_a, 1e-4) == pytest.approx(2.0 * base, rel=1e-14)
        doubled_eta_b = scenario(0.17, 0.23, 0.5, 0.5)
        assert p_total_sfg(doubled_eta_b, 1e-4) == pytest.approx(2.0 * base, rel=1e-14)


class TestFidelity:
    def test_weak_pumping_limit(self):
        value = fidelity_nlo(SourceParams(1e-8), SourceParams(1e-8))
        assert value == pytest.approx(1.0, abs=5e-8)

    def test_equal_sources_at_p02(self):
        src = SourceParams.from_p(0.2)
        q = (1 + (1 - 0.8) ** 0.5) / 2
        assert fidelity_nlo(src, src) == pytest.approx(q**4, rel=1e-12)
        assert fidelity_nlo(src, src) == pytest.approx(0.2742, abs=5e-5)

    def test_one_third_crossing(self):
        p = p_for_target_fidelity(1.0 / 3.0)
        src = SourceParams.from_p(p)
        assert fidelity_nlo(src, src) == pytest.approx(1.0 / 3.0, rel=1e-12)

    def test_silent_source_is_undefined(self):
        with pytest.raises(UndefinedFidelityError):
            fidelity_nlo(SourceParams(0.0), SourceParams(0.2))

    def test_loss_independent_by_construction(self):
        src_a, src_b = SourceParams(0.25), SourceParams(0.15)
        rng = np.random.default_rng(13)
        reference = None
        for _ in range(50):
            ha, hb = rng.uniform(0.01, 1.0, 2)
            scen = SwapScenario(src_a, src_b, *_channels(float(ha), float(hb)))
            report = fidelity_report(scen, 1e-3)
            assert report.fidelity == pytest.approx(
                report.p_faithful / report.p_herald, rel=1e-12
            )
            if reference is None:
                reference = report.fidelity
            assert report.fidelity == reference

    def test_always_thrice_the_balanced_strong_loss_curve(self):
        for p in np.linspace(0.001, 0.25, 40):
            src = SourceParams.from_p(float(p))
            assert fidelity_nlo(src, src) == pytest.approx(
                3.0 * fidelity_balanced_smalleta(float(p)), rel=1e-12
            )


def _channels(eta_a, eta_b):
    from entswap.photon_stats import ChannelParams

    return ChannelParams(eta_a), ChannelParams(eta_b)


class TestTargetInversion:
    def test_perfect_fidelity_needs_no_pumping(self):
        assert p_for_target_fidelity(1.0) == 0.0

    def test_one_third_target(self):
        p = p_for_target_fidelity(1.0 / 3.0)
        assert 0.180 <= p <= 0.185
        eps = epsilon_pair_for_fidelity(1.0 / 3.0)
        assert (1 - eps) ** 4 == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_constructed_inverse(self):
        assert p_for_target_fidelity(0.9**4) == pytest.approx(0.09, abs=1e-12)
        assert epsilon_pair_for_fidelity(0.9**4) == pytest.approx(0.1, abs=1e-12)

    @pytest.mark.parametrize("bad", [0.0, -0.1, 1.1])
    def test_out_of_range_rejected(self, bad):
        with pytest.raises(DomainError):
            p_for_target_fidelity(bad)

    def test_too_small_target_rejected(self):
        with pytest.raises(DomainError):
            p_for_target_fidelity(1.0 / 17.0)


class TestReport:
    def test_report_fields(self):
        scen = scenario(0.2, 0.3, 0.6, 0.1)
        report = fidelity_report(scen, 1e-3)
        assert report.p_sfg == 1e-3
        assert report.p_faithful <= report.p_herald
        assert report.fidelity == pytest.approx(
            fidelity_nlo(scen.source_a, scen.source_b), rel=1e-15
        )

    def test_zero_herald_is_undefined(self):
        with pytest.raises(UndefinedFidelityError):
            fidelity_report(scenario(0.0, 0.3, 0.6, 0.1), 1e-3)
