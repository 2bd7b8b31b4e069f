"""Forms: expansion coefficients against independent oracles, exact identities,
evaluation accuracy, and the imaginary-axis transforms."""

import math
from fractions import Fraction

import pytest

from spherepack.errors import NonRealValue
from spherepack.forms import (
    FormId,
    HalfPlanePoint,
    axis_combo_direct,
    axis_combo_weighted,
    check_jacobi,
    check_ramanujan,
    delta_qseries,
    divisor_sum,
    e4sq_over_delta_qseries,
    eisenstein_qseries,
    eta_product_qseries,
    eval_form,
    eval_phi0,
    eval_phi0_axis,
    eval_psi_s,
    eval_psi_s_axis,
    eval_psi_i_axis,
    eval_psi_s_from_thetas,
    e2e4_minus_e6_qseries,
    form_qseries,
    normalized_derivative,
    phi0_qseries,
    phi0_weighted_kernel,
    psi_i_qseries,
    psi_s_qseries,
    serre_derivative,
    theta_qseries,
)
from spherepack.qseries import Nome

PI = math.pi


# -- divisor sums ------------------------------------------------------------

def brute_sigma(n, k):
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def test_divisor_sum_examples():
    assert divisor_sum(1, 1) == 1
    assert divisor_sum(2, 3) == 9
    assert divisor_sum(6, 1) == 12


@pytest.mark.parametrize("k", [1, 3, 5])
def test_divisor_sum_against_brute_force(k):
    for n in range(1, 200):
        assert divisor_sum(n, k) == brute_sigma(n, k)


def test_divisor_sum_rejects_bad_input():
    with pytest.raises(ValueError):
        divisor_sum(0, 1)
    with pytest.raises(ValueError):
        divisor_sum(3, 2)


# -- q-expansions ------------------------------------------------------------

def test_eisenstein_normalization():
    for w in (2, 4, 6):
        assert eisenstein_qseries(w, 10).coefficient(0) == 1
    assert eisenstein_qseries(4, 10).coefficient(1) == 240
    assert eisenstein_qseries(2, 10).coefficient(1) == -24
    assert eisenstein_qseries(6, 10).coefficient(1) == -504


def test_eisenstein_coefficients_are_sigma_multiples():
    e4 = eisenstein_qseries(4, 30)
    for n in range(1, 31):
        assert e4.coefficient(n) == 240 * brute_sigma(n, 3)


def test_theta_low_coefficients():
    t00 = theta_qseries("00", 30)
    t01 = theta_qseries("01", 30)
    t10 = theta_qseries("10", 30)
    assert t00.coefficient(0) == 1 and t00.coefficient(4) == 2
    assert t01.coefficient(4) == -2
    assert t10.coefficient(1) == 2 and t10.coefficient(0) == 0
    assert t10.coefficient(9) == 2


def test_delta_low_coefficients():
    d = delta_qseries(10)
    assert d.coefficient(0) == 0
    assert d.coefficient(1) == 1
    assert d.coefficient(2) == -24
    assert d.coefficient(3) == 252


def test_delta_matches_eta_product_through_order_50():
    assert delta_qseries(50) == eta_product_qseries(50)


def test_phi0_leading_terms():
    num = e2e4_minus_e6_qseries(10)
    assert num.coefficient(0) == 0
    assert num.coefficient(1) == 720
    p = phi0_qseries(10)
    assert p.coefficient(0) == 0
    assert p.leading_exponent() == 1
    assert p.coefficient(1) == 518400


def test_psi_s_leading_terms_and_support():
    p = psi_s_qseries(64)
    assert p.coefficient(0) == 0
    assert p.coefficient(4) == -10240
    # invariance under tau -> tau + 2: every exponent a multiple of 4
    assert all(k % 4 == 0 for k in p.support())


def test_psi_i_expansion_and_shift_relation():
    """psi_i has principal part q4^-8 and satisfies psi_i(z) - psi_i(z+1) = psi_s(z)."""
    n = 64
    pi_ser = psi_i_qseries(n)
    assert pi_ser.coefficient(-8) == 1
    assert pi_ser.coefficient(0) == 144
    assert pi_ser.coefficient(4) == -5120
    ps = psi_s_qseries(n)
    # shifting tau by 1 multiplies the q4^k coefficient by i^k; support is in
    # 4Z here, so the factor is (-1)^(k/4)
    for k in range(-8, n + 1):
        shifted = pi_ser.coefficient(k) * (-1) ** (k // 4) if k % 4 == 0 else Fraction(0)
        expected = ps.coefficient(k) if k >= ps.lowest else Fraction(0)
        assert pi_ser.coefficient(k) - shifted == expected


def test_e4sq_over_delta_has_simple_pole():
    b = e4sq_over_delta_qseries(10)
    assert b.lowest == -1
    assert b.coefficient(-1) == 1
    assert b.coefficient(0) == 504


# -- exact identities ----------------------------------------------------------

def test_ramanujan_identities_exact_to_order_50():
    report = check_ramanujan(50)
    assert report.all_zero


def test_ramanujan_first_coefficients():
    e2 = eisenstein_qseries(2, 5)
    lhs = e2.derivative().coefficient(1)
    e4 = eisenstein_qseries(4, 5)
    rhs = ((e2 * e2 - e4).scale(Fraction(1, 12))).coefficient(1)
    assert lhs == rhs == -24


def test_jacobi_identity_exact_and_numeric():
    report = check_jacobi(200, samples=(0.3 + 0.9j,))
    assert report.all_zero
    assert report.numeric_residuals[0] < 1e-12


def test_jacobi_fourth_power_coefficients():
    t004 = theta_qseries("00", 16) ** 4
    t104 = theta_qseries("10", 16) ** 4
    t014 = theta_qseries("01", 16) ** 4
    assert t004.coefficient(4) == 8
    assert t104.coefficient(4) == 16
    assert t014.coefficient(4) == -8


def test_serre_derivative_images():
    e4 = eisenstein_qseries(4, 30)
    e6 = eisenstein_qseries(6, 30)
    assert serre_derivative(e4, 4) == e6.scale(Fraction(-1, 3))
    assert serre_derivative(e6, 6) == (e4 * e4).scale(Fraction(-1, 2))


def test_serre_derivative_kills_constants_at_weight_zero():
    from spherepack.qseries import one_series
    assert serre_derivative(one_series(Nome.Q2, 10), 0).is_zero()


def test_normalized_derivative_e4_identity():
    # q-coefficient of D E4 equals that of (E2 E4 - E6)/3
    e4 = eisenstein_qseries(4, 10)
    de4 = normalized_derivative(e4)
    assert de4.coefficient(1) == 240
    assert e2e4_minus_e6_qseries(10).scale(Fraction(1, 3)).coefficient(1) == 240


# -- evaluation ---------------------------------------------------------------

def test_eval_e4_at_i_against_high_order_oracle():
    oracle = eisenstein_qseries(4, 200).eval(1j)
    val = eval_form(FormId.E4, 1j)
    assert abs(val - oracle) < 1e-10 * abs(oracle)
    assert abs(val - 1.4557628) < 2e-7


def test_eval_theta00_at_i():
    oracle = theta_qseries("00", 400).eval(1j)
    val = eval_form(FormId.THETA00, 1j)
    assert abs(val - oracle) < 1e-10 * abs(oracle)
    assert abs(val - 1.0864348) < 2e-7


def test_eval_e6_vanishes_at_i():
    assert abs(eval_form(FormId.E6, 1j)) < 1e-12


def test_eval_e2_at_i_is_three_over_pi():
    assert abs(eval_form(FormId.E2, 1j) - 3.0 / PI) < 1e-12


def test_delta_consistency_at_random_points():
    import random
    rng = random.Random(7)
    for _ in range(20):
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.6, 3.0))
        d = eval_form(FormId.DELTA, tau)
        e4 = eval_form(FormId.E4, tau)
        e6 = eval_form(FormId.E6, tau)
        assert abs(d - (e4 ** 3 - e6 ** 2) / 1728.0) < 1e-10 * abs(d)


def test_phi0_asymptotic_at_3i():
    val = eval_phi0(3j)
    lead = 518400.0 * math.exp(-6 * PI)
    assert abs(val / lead - 1.0) < 0.01


def test_psi_s_asymptotic_at_3i():
    val = eval_psi_s(3j)
    lead = -10240.0 * math.exp(-3 * PI)
    assert abs(val / lead - 1.0) < 0.05


def test_psi_s_two_evaluation_paths_agree():
    for tau in (0.3 + 1.1j, 1j, -0.2 + 0.8j):
        a = eval_psi_s(tau)
        b = eval_psi_s_from_thetas(tau)
        assert abs(a - b) < 1e-10 * max(abs(a), 1.0)


def test_psi_s_periodicity_tau_plus_two():
    tau = 0.3 + 1.1j
    assert abs(eval_psi_s(tau + 2) - eval_psi_s(tau)) < 1e-12


def test_halfplane_point_rejects_lower_half():
    with pytest.raises(ValueError):
        HalfPlanePoint(0.0, -1.0)
    with pytest.raises(ValueError):
        HalfPlanePoint(0.0, 0.0)
    assert HalfPlanePoint(0.25, 2.0).tau == 0.25 + 2.0j


def test_form_qseries_covers_all_ids():
    for form in FormId:
        series = form_qseries(form)
        assert series.nome in (Nome.Q2, Nome.Q4)


# -- axis behaviour -----------------------------------------------------------

def test_phi0_axis_overlap_direct_vs_transformed():
    """The inversion law must reproduce the direct series on [0.8, 1.25]."""
    for t in (0.8, 0.9, 0.97, 1.0):
        direct = (eval_phi0(1j * t)).real  # series still converges here
        trans = eval_phi0_axis(t)
        assert abs(direct - trans) < 1e-8 * abs(direct)


def test_phi0_axis_t1_continuity():
    below = eval_phi0_axis(1.0 - 1e-9)
    above = eval_phi0_axis(1.0 + 1e-9)
    assert abs(below - above) < 1e-6 * abs(above)


def test_psi_s_axis_overlap_direct_vs_transformed():
    for t in (0.8, 0.9, 0.97, 1.0):
        direct = (eval_psi_s(1j * t)).real
        trans = eval_psi_s_axis(t)
        assert abs(direct - trans) < 1e-8 * abs(direct)


def test_phi0_axis_asymptotics():
    val = eval_phi0_axis(4.0)
    lead = 518400.0 * math.exp(-8 * PI)
    assert abs(val / lead - 1.0) < 0.01
    small = eval_phi0_axis(0.25)
    assert small > 1e6  # dominated by (36 t^2/pi^2) exp(2 pi/t)


def test_psi_s_axis_asymptotic():
    val = eval_psi_s_axis(3.0)
    lead = -10240.0 * math.exp(-3 * PI)
    assert abs(val / lead - 1.0) < 0.05


def test_phi0_axis_positive_on_log_grid():
    n = 60
    for j in range(n + 1):
        t = 0.05 * (20.0 / 0.05) ** (j / n)
        assert eval_phi0_axis(t) > 0.0


def test_psi_s_axis_negative_on_log_grid():
    n = 60
    for j in range(n + 1):
        t = 0.05 * (20.0 / 0.05) ** (j / n)
        assert eval_psi_s_axis(t) < 0.0


def test_psi_i_axis_positive_and_consistent():
    for t in (0.3, 0.7, 1.0, 1.4, 3.0):
        v = eval_psi_i_axis(t)
        assert v > 0.0
        # psi_i(it) = -t^2 psi_s(i/t) ties the two axis evaluators together
        w = -t * t * eval_psi_s_axis(1.0 / t)
        assert abs(v - w) < 1e-8 * abs(v)


def test_weighted_kernel_matches_definition_below_one():
    for t in (0.3, 0.6, 0.9):
        direct = t * t * eval_phi0(1j / t).real
        assert abs(phi0_weighted_kernel(t) - direct) < 1e-10 * abs(direct)


def test_weighted_kernel_continuity_at_one():
    below = phi0_weighted_kernel(1.0 - 1e-9)
    above = phi0_weighted_kernel(1.0 + 1e-9)
    assert abs(below - above) < 1e-6 * abs(above)


def test_axis_combos_match_naive_evaluation_midrange():
    c = 36.0 / PI ** 2
    for t in (0.6, 1.0, 1.8):
        naive_plus = eval_phi0_axis(t) + c * eval_psi_s_axis(t)
        naive_minus = eval_phi0_axis(t) - c * eval_psi_s_axis(t)
        assert abs(axis_combo_direct(t, +1) - naive_plus) < 1e-7 * max(abs(naive_plus), abs(naive_minus))
        assert abs(axis_combo_direct(t, -1) - naive_minus) < 1e-7 * abs(naive_minus)
        naive_wplus = c * eval_psi_i_axis(t) + phi0_weighted_kernel(t)
        naive_wminus = c * eval_psi_i_axis(t) - phi0_weighted_kernel(t)
        assert abs(axis_combo_weighted(t, +1) - naive_wplus) < 1e-7 * abs(naive_wplus)
        assert abs(axis_combo_weighted(t, -1) - naive_wminus) < 1e-7 * max(abs(naive_wminus), abs(naive_wplus))


def test_axis_realness_small_imag_parts():
    # direct complex evaluation at purely imaginary tau should be essentially real
    for t in (0.3, 0.5, 1.0, 2.0, 5.0):
        v = eval_phi0(1j * t) if t >= 1.0 else None
        if v is not None:
            assert abs(v.imag) < 1e-9 * abs(v)
        assert isinstance(eval_phi0_axis(t), float)
        assert isinstance(eval_psi_s_axis(t), float)
