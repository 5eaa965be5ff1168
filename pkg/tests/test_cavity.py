import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lgs.cavity import (
    CavityParams,
    cold_coeff,
    hot_coeffs,
    scatter_coeffs,
    scatter_ideal,
    scatter_real,
)
from lgs.state import (
    AtomGround,
    BasisKet,
    HybridState,
    Polarization,
    max_deviation,
    norm_squared,
)

H, V = Polarization.H, Polarization.V
GH, GV = AtomGround.GH, AtomGround.GV

BASIS = [(H, GH), (H, GV), (V, GH), (V, GV)]


def params(kappa=1.0, gamma=0.0, eta=1.0, omega=0.0):
    return CavityParams(kappa, gamma, eta, eta, omega)


def one(pol, atom, line=0):
    return HybridState({BasisKet(pol, line, (atom,)): 1.0}, 1)


# closed forms at omega = 0 with symmetric coupling eta; derived by hand,
# independent of the general expressions in lgs.cavity
def rh1_closed(kappa, gamma, eta=1.0):
    return -kappa * gamma / (8 * eta**2 + kappa * gamma)


def rh2_closed(kappa, gamma, eta=1.0):
    return 8 * eta**2 / (8 * eta**2 + kappa * gamma)


def test_cold_on_resonance_is_minus_one():
    assert cold_coeff(params(omega=0.0)) == -1


def test_cold_far_detuned_tends_to_plus_one():
    assert abs(cold_coeff(params(kappa=1.0, omega=1e8)) - 1) < 1e-7


@given(st.floats(-1e3, 1e3), st.floats(0.01, 100))
def test_cold_is_unimodular(omega, kappa):
    assert abs(abs(cold_coeff(params(kappa=kappa, omega=omega))) - 1) < 1e-12


def test_hot_strong_coupling_limit():
    p = params(kappa=1.0, gamma=1e-9, eta=1e3)
    rh1, rh2 = hot_coeffs(p)
    assert abs(rh1) < 1e-6
    assert abs(rh2 - 1) < 1e-6


def test_hot_closed_forms_on_resonance():
    for kappa, gamma in [(1.0, 0.2), (1.0, 0.1), (2.0, 0.2), (0.5, 0.05)]:
        rh1, rh2 = hot_coeffs(params(kappa, gamma))
        assert abs(rh1 - rh1_closed(kappa, gamma)) < 1e-14
        assert abs(rh2 - rh2_closed(kappa, gamma)) < 1e-14
        assert abs(rh1.imag) < 1e-15 and abs(rh2.imag) < 1e-15


def test_hot_survival_value():
    p = params(kappa=1.0, gamma=0.2)
    assert abs(scatter_coeffs(p).hot_norm() - 0.9524092802) < 1e-9


def test_hot_with_zero_couplings_rejected():
    with pytest.raises(ValueError, match="cold"):
        hot_coeffs(CavityParams(1.0, 0.1, 0.0, 0.0, 0.0))


def test_asymmetric_couplings_pick_the_driven_transition():
    p = CavityParams(1.0, 0.1, 2.0, 0.5, 0.0)
    rh1_h, rh2_h = hot_coeffs(p, H)
    rh1_v, rh2_v = hot_coeffs(p, V)
    assert rh2_h == rh2_v  # cross coefficient is symmetric
    assert rh1_h != rh1_v


@given(
    st.floats(0.01, 100),
    st.floats(0, 10),
    st.floats(0.1, 10),
    st.floats(0.1, 10),
    st.floats(-100, 100),
)
def test_hot_coefficients_never_exceed_unit_survival(kappa, gamma, eta_h, eta_v, omega):
    p = CavityParams(kappa, gamma, eta_h, eta_v, omega)
    rh1, rh2 = hot_coeffs(p)
    assert abs(rh1) ** 2 + abs(rh2) ** 2 <= 1 + 1e-12


@given(st.floats(0.01, 100), st.floats(0.1, 10), st.floats(-100, 100))
def test_no_spontaneous_decay_means_unit_survival(kappa, eta, omega):
    p = CavityParams(kappa, 0.0, eta, eta, omega)
    rh1, rh2 = hot_coeffs(p)
    assert abs(abs(rh1) ** 2 + abs(rh2) ** 2 - 1) < 1e-12


def test_ideal_rules():
    assert scatter_ideal(one(H, GH), 0, 0).amplitude(BasisKet(V, 0, (GV,))) == 1
    assert scatter_ideal(one(H, GV), 0, 0).amplitude(BasisKet(H, 0, (GV,))) == -1
    assert scatter_ideal(one(V, GH), 0, 0).amplitude(BasisKet(V, 0, (GH,))) == -1
    assert scatter_ideal(one(V, GV), 0, 0).amplitude(BasisKet(H, 0, (GH,))) == 1


def test_ideal_twice_is_identity():
    for pol, atom in BASIS:
        s = one(pol, atom)
        assert max_deviation(scatter_ideal(scatter_ideal(s, 0, 0), 0, 0), s) < 1e-15


def test_ideal_only_touches_the_given_line():
    s = one(H, GH, line=3)
    assert scatter_ideal(s, 0, 0).terms == s.terms


def test_real_rules_structure():
    p = params(kappa=1.0, gamma=0.2)
    rh1, rh2 = hot_coeffs(p)
    out = scatter_real(one(H, GH), 0, 0, p)
    assert abs(out.amplitude(BasisKet(H, 0, (GH,))) - rh1) < 1e-14
    assert abs(out.amplitude(BasisKet(V, 0, (GV,))) - rh2) < 1e-14
    out = scatter_real(one(V, GV), 0, 0, p)
    assert abs(out.amplitude(BasisKet(H, 0, (GH,))) - rh2) < 1e-14
    assert abs(out.amplitude(BasisKet(V, 0, (GV,))) - rh1) < 1e-14


def test_real_cold_cases_are_exact_on_resonance():
    p = params(kappa=1.0, gamma=0.2)
    out = scatter_real(one(H, GV), 0, 0, p)
    assert out.amplitude(BasisKet(H, 0, (GV,))) == -1
    out = scatter_real(one(V, GH), 0, 0, p)
    assert out.amplitude(BasisKet(V, 0, (GH,))) == -1


def test_real_matches_ideal_in_the_strong_coupling_limit():
    # kappa*gamma/eta^2 = 1e-8
    p = CavityParams(1.0, 1e-8, 1.0, 1.0, 0.0)
    for pol, atom in BASIS:
        s = one(pol, atom)
        dev = max_deviation(scatter_real(s, 0, 0, p), scatter_ideal(s, 0, 0))
        assert dev < 1e-3


def test_real_bounce_survival():
    p = params(kappa=1.0, gamma=0.2)
    out = scatter_real(one(H, GH), 0, 0, p)
    expected = rh1_closed(1.0, 0.2) ** 2 + rh2_closed(1.0, 0.2) ** 2
    assert abs(norm_squared(out) - expected) < 1e-12


def test_real_conserves_line_and_ground_space():
    p = params(kappa=1.0, gamma=0.2)
    s = HybridState(
        {BasisKet(H, 2, (GH, GV)): 0.8, BasisKet(V, 2, (GV, GH)): 0.6}, 2
    )
    out = scatter_real(s, 2, 0, p)
    assert out.lines() == {2}
    for ket in out:
        assert all(a in (GH, GV) for a in ket.atoms)


@given(st.floats(0.05, 20), st.floats(0, 5), st.floats(0.2, 5))
@settings(max_examples=50)
def test_real_bounce_never_gains_norm(kappa, gamma, eta):
    p = CavityParams(kappa, gamma, eta, eta, 0.0)
    for pol, atom in BASIS:
        out = scatter_real(one(pol, atom), 0, 0, p)
        assert norm_squared(out) <= 1 + 1e-12
