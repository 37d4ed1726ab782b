import pytest
from hypothesis import given, strategies as st

from manetsim import (
    effective_throughput,
    extract_k,
    predict_absolute,
    predict_general,
    predict_no_congestion,
    predict_unified,
)


class TestPredictGeneral:
    def test_reference_point(self):
        # N=1000 nodes of 1000 units each, drained to zero at 5000 moves/step
        assert predict_general(1_000_000.0, 0.0, 5000.0, 1.0) == 200.0

    def test_no_energy_spent(self):
        assert predict_general(100.0, 100.0, 5.0, 1.0) == 0.0

    def test_small_case(self):
        assert predict_general(100.0, 50.0, 1.0, 1.0) == 50.0

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            predict_general(100.0, 0.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            predict_general(10.0, 20.0, 1.0, 1.0)


class TestPredictNoCongestion:
    def test_reference_point(self):
        # E0=1000, tau0=3.275, rho=0.1: 1000 / 0.3275
        assert predict_no_congestion(1000.0, 0.0, 0.1, 3.275, 1.0) == pytest.approx(
            3053.435114503817, abs=0.01
        )

    def test_range_correction(self):
        assert predict_no_congestion(1000.0, 100.0, 1.0, 1.0, 1.0) == pytest.approx(950.0)

    def test_boundary_full_range(self):
        assert predict_no_congestion(1000.0, 2000.0, 1.0, 1.0, 1.0) == 0.0

    def test_domain_error(self):
        with pytest.raises(ValueError):
            predict_no_congestion(1000.0, 0.0, 0.0, 3.275, 1.0)


class TestPredictAbsolute:
    def test_reference_point(self):
        assert predict_absolute(1000.0, 5.0, 1.0) == 200.0

    def test_unit_case(self):
        assert predict_absolute(1.0, 1.0, 1.0) == 1.0

    def test_double_energy(self):
        assert predict_absolute(2000.0, 5.0, 1.0) == 400.0


class TestPredictUnified:
    def test_reduces_to_absolute_when_congested(self):
        # rho*tau0 > C selects the capacity branch
        assert predict_unified(1000.0, 5.0, 3.275, 5.0, 1.0, k=1.0) == predict_absolute(
            1000.0, 5.0, 1.0
        )

    def test_free_flow_branch(self):
        assert predict_unified(1000.0, 0.1, 3.275, 5.0, 1.0, k=1.0) == pytest.approx(
            3053.435114503817, abs=0.01
        )

    def test_linear_in_k(self):
        t1 = predict_unified(1000.0, 0.1, 3.275, 5.0, 1.0, k=0.5)
        t2 = predict_unified(1000.0, 0.1, 3.275, 5.0, 1.0, k=1.0)
        assert t2 == pytest.approx(2 * t1)

    def test_matches_no_congestion_formula_exactly(self):
        # k = (E0 - R/2)/E0 with Omega = rho*tau0 reproduces the free-flow formula
        e0, r_t, rho, tau0, de = 1000.0, 80.0, 0.1, 3.2, 1.0
        k = (e0 - r_t / 2.0) / e0
        assert predict_unified(e0, rho, tau0, 5.0, de, k) == pytest.approx(
            predict_no_congestion(e0, r_t, rho, tau0, de), rel=1e-12
        )

    def test_regime_continuity(self):
        # at rho*tau0 == C both branches agree for fixed k
        e0, de, c = 1000.0, 1.0, 5.0
        tau0 = 2.5
        rho = c / tau0
        below = predict_unified(e0, rho * (1 - 1e-12), tau0, c, de, k=0.97)
        above = predict_unified(e0, rho * (1 + 1e-12), tau0, c, de, k=0.97)
        assert below == pytest.approx(above, rel=1e-9)


class TestExtractK:
    def test_absolute_regime_reference(self):
        # T=200, Omega=C=5: k = 200*5/1000 = 1
        assert extract_k(200.0, 1000.0, 5.0, 3.275, 5.0, 1.0) == 1.0

    def test_domain_error(self):
        with pytest.raises(ValueError):
            extract_k(0.0, 1000.0, 0.1, 3.275, 5.0, 1.0)

    @given(
        st.floats(0.05, 2.0),
        st.floats(10.0, 5000.0),
        st.floats(0.01, 8.0),
        st.floats(1.0, 10.0),
        st.floats(1.0, 8.0),
        st.floats(0.1, 4.0),
    )
    def test_round_trip(self, k0, e0, rho, tau0, cap, de):
        t = predict_unified(e0, rho, tau0, cap, de, k0)
        k = extract_k(t, e0, rho, tau0, cap, de)
        assert k == pytest.approx(k0, abs=1e-12, rel=1e-12)

    def test_monotone_in_rate_through_omega(self):
        rates = [0.1, 0.5, 1.0, 2.0, 10.0]
        preds = [predict_unified(1000.0, r, 3.0, 5.0, 1.0, 1.0) for r in rates]
        assert preds == sorted(preds, reverse=True)


def test_effective_throughput():
    assert effective_throughput(0.1, 3.275, 5.0) == pytest.approx(0.3275)
    assert effective_throughput(5.0, 3.275, 5.0) == 5.0
