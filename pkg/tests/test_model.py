import cmath
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_amplitude
from opaent import (
    AmplitudeModel,
    DetuningMode,
    derive_constants,
    paper_params,
    solve_steady_state,
    steady_amplitude_exact,
    steady_amplitude_paper,
)
from opaent.errors import ConvergenceError, ThresholdError
from opaent.model import thermal_occupation

# mpmath (50 digits) evaluations with the pinned constants
KAPPA = 941825.78365442663867
N_BAR_10MK = 20.340618351800996813
G_SINGLE = 205.14081805340547887
EPS_1 = 1004460200737.0509270
EPS_2 = 898416515816.45209360
ALPHA_1_ABS = 15984.684919706032908
G1_OVER_KAPPA = 4.9238020567165453330
G2_OVER_KAPPA = 4.4039824426285881281


def test_kappa_matches_quoted_value(params):
    d = derive_constants(params)
    assert d.kappa == pytest.approx(KAPPA, rel=1e-14)
    assert round(d.kappa / 1e6, 2) == 0.94


def test_kappa_formula_exact(params):
    assert derive_constants(params).kappa == math.pi * 299792458.0 / (2 * 1e5 * 5e-3)


def test_thermal_occupation_zero_temperature(params):
    assert derive_constants(params.replace(temperature=0.0)).n_bar == 0.0
    assert thermal_occupation(params.omega_m, 1e-30) == 0.0


def test_thermal_occupation_10mk(params):
    assert derive_constants(params).n_bar == pytest.approx(N_BAR_10MK, rel=1e-13)


def test_single_photon_coupling_and_drive(params):
    d = derive_constants(params)
    assert d.g_1 == pytest.approx(G_SINGLE, rel=1e-13)
    assert d.g_2 == d.g_1
    assert d.eps_1 == pytest.approx(EPS_1, rel=1e-13)
    assert d.eps_2 == pytest.approx(EPS_2, rel=1e-13)
    assert d.fsr == pytest.approx(math.pi * 299792458.0 / 5e-3)


def test_bare_mode_cavity_frequency_includes_detuning(params):
    d = derive_constants(params.replace(detuning_mode=DetuningMode.BARE))
    assert d.omega_C1 == d.omega_L1 + params.detuning_1
    assert d.omega_C2 == d.omega_L2 + params.detuning_2


@settings(max_examples=50, deadline=None)
@given(t1=st.floats(1e-4, 10.0), t2=st.floats(1e-4, 10.0))
def test_thermal_occupation_monotone(t1, t2):
    w = 2 * math.pi * 10e6
    lo, hi = sorted((t1, t2))
    assert thermal_occupation(w, lo) <= thermal_occupation(w, hi)


@pytest.mark.parametrize(
    "field, value",
    [("mass", 0.0), ("finesse", -1.0), ("cavity_length", 0.0), ("omega_m", -1.0),
     ("power_1", -0.1), ("temperature", -1.0), ("opa_gain", -1.0)],
)
def test_invalid_params_rejected(field, value):
    with pytest.raises(ValueError, match=field):
        paper_params(**{field: value})


def test_low_quality_factor_warns():
    with pytest.warns(UserWarning, match="quality factor"):
        paper_params(gamma_m=2 * math.pi * 1e6)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        paper_params()


# --- steady amplitudes ---------------------------------------------------


def test_paper_amplitude_resonant_no_opa():
    a = steady_amplitude_paper(3.0, 2.0, 0.0, 0.0, 0.7)
    assert a == 1.5 + 0j


def test_paper_amplitude_magnitude_red_sideband(params):
    a = steady_amplitude_paper(EPS_1, KAPPA, params.omega_m, 0.0, 0.0)
    assert abs(a) == pytest.approx(ALPHA_1_ABS, rel=1e-12)
    assert round(abs(a) / 1e4, 2) == 1.60


def test_paper_amplitude_quarter_phase():
    k, delta, eps = 1.0, 50.0, 7.0
    a = steady_amplitude_paper(eps, k, delta, k, math.pi / 2)
    assert a == pytest.approx(eps / complex(k, delta - 2 * k), rel=1e-15)


def test_paper_amplitude_threshold():
    with pytest.raises(ThresholdError):
        steady_amplitude_paper(1.0, 1.0, 0.0, 0.5, 0.0)


def test_exact_equals_paper_without_opa():
    for delta in (-3.0, 0.0, 0.4, 67.0):
        a = steady_amplitude_exact(2.0, 1.0, delta, 0.0, 1.1)
        b = steady_amplitude_paper(2.0, 1.0, delta, 0.0, 1.1)
        assert abs(a - b) <= 1e-12 * abs(b)


def test_exact_real_fixed_point():
    a = steady_amplitude_exact(1.0, 1.0, 0.0, 0.3, 0.0)
    assert a.imag == 0.0
    assert a.real == pytest.approx(1 / (1 - 0.6), rel=1e-15)


def test_exact_against_linear_solve():
    k = 1.0
    a = steady_amplitude_exact(1.0, k, k, k / 2, math.pi / 2)
    b = brute_force_amplitude(1.0, k, k, k / 2, math.pi / 2)
    assert abs(a - b) < 1e-14


@settings(max_examples=100, deadline=None)
@given(
    kappa=st.floats(0.1, 10.0),
    delta=st.floats(-100.0, 100.0),
    gain=st.floats(0.0, 0.45),
    theta=st.floats(0.0, 2 * math.pi),
    eps=st.floats(0.1, 1e3),
)
def test_exact_solves_conjugate_equation(kappa, delta, gain, theta, eps):
    G = gain * kappa  # below threshold for every detuning
    a = steady_amplitude_exact(eps, kappa, delta, G, theta)
    lhs = complex(kappa, delta) * a - 2 * G * cmath.exp(1j * theta) * a.conjugate()
    assert abs(lhs - eps) <= 1e-10 * eps
    b = brute_force_amplitude(eps, kappa, delta, G, theta)
    assert abs(a - b) <= 1e-9 * abs(b)


@pytest.mark.parametrize("fn", [steady_amplitude_paper, steady_amplitude_exact])
def test_amplitude_odd_in_drive(fn):
    a = fn(3.0, 1.0, 2.0, 0.3, 0.9)
    b = fn(-3.0, 1.0, 2.0, 0.3, 0.9)
    assert b == -a


def test_exact_threshold():
    with pytest.raises(ThresholdError):
        steady_amplitude_exact(1.0, 3.0, 4.0, 2.5, 0.3)


# --- steady state --------------------------------------------------------


@pytest.mark.parametrize("mode", list(DetuningMode))
def test_undriven_cavity(params, mode):
    s = solve_steady_state(params.replace(power_1=0.0, power_2=0.0, detuning_mode=mode))
    assert s.q_s == 0.0 and s.p_s == 0.0
    assert s.alpha_1 == 0 and s.alpha_2 == 0
    assert s.Gcpl_1 == 0.0 and s.Gcpl_2 == 0.0


def test_effective_mode_couplings(params):
    s = solve_steady_state(params)
    assert s.Delta_1 == params.omega_m and s.Delta_2 == -params.omega_m
    assert s.Gcpl_1 / params.kappa == pytest.approx(G1_OVER_KAPPA, rel=1e-12)
    assert s.Gcpl_2 / params.kappa == pytest.approx(G2_OVER_KAPPA, rel=1e-12)
    assert round(s.Gcpl_1 / params.kappa, 1) == 4.9
    d = derive_constants(params)
    assert s.q_s == pytest.approx(
        (d.g_1 * abs(s.alpha_1) ** 2 + d.g_2 * abs(s.alpha_2) ** 2) / params.omega_m, rel=1e-15)


def test_bare_mode_weak_drive_first_order(params):
    p = params.replace(detuning_mode=DetuningMode.BARE, power_1=1e-12, power_2=0.0)
    d = derive_constants(p)
    s = solve_steady_state(p, d)
    # one-shot evaluation at q = 0; the correction is O(|alpha|^4)
    a0 = steady_amplitude_paper(d.eps_1, d.kappa, p.detuning_1, 0.0, p.opa_phase)
    q0 = d.g_1 * abs(a0) ** 2 / p.omega_m
    assert s.q_s == pytest.approx(q0, rel=1e-9)
    assert s.Delta_1 == pytest.approx(p.detuning_1 - d.g_1 * s.q_s, rel=1e-15)


@pytest.mark.parametrize("model", list(AmplitudeModel))
@pytest.mark.parametrize("gain", [0.0, 1.0, 4.0])
def test_bare_mode_residual(params, model, gain):
    p = params.replace(detuning_mode=DetuningMode.BARE).with_gain_in_kappa(gain)
    d = derive_constants(p)
    s = solve_steady_state(p, d, model)
    force = d.g_1 * abs(s.alpha_1) ** 2 + d.g_2 * abs(s.alpha_2) ** 2
    assert abs(s.q_s * p.omega_m - force) / max(1.0, s.q_s * p.omega_m) < 1e-10
    assert s.iterations > 0


def test_bare_mode_nonconvergence_reported(params):
    p = params.replace(detuning_mode=DetuningMode.BARE)
    with pytest.raises(ConvergenceError, match="did not converge"):
        solve_steady_state(p, max_iter=3)


def test_model_selector_accepts_strings(params):
    p = params.with_gain_in_kappa(2.0)
    assert solve_steady_state(p, amplitude_model="exact") == solve_steady_state(
        p, amplitude_model=AmplitudeModel.EXACT)
    assert solve_steady_state(p, amplitude_model="exact") != solve_steady_state(p)


def test_gcpl_uses_modulus(params):
    s = solve_steady_state(params.with_gain_in_kappa(3.0))
    d = derive_constants(params)
    assert s.Gcpl_1 == pytest.approx(math.sqrt(2) * d.g_1 * abs(s.alpha_1))
    assert np.iscomplexobj(np.array(s.alpha_1))
