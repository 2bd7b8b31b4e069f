"""Certificate machinery: bound algebra, sign verification, Poisson harness."""

import math

import pytest

from spherepack.cohn_elkies import (
    E8_DENSITY,
    ce_bound,
    default_ce_grid,
    poisson_check,
    rescaled_bound,
    verify_ce,
    verify_magic_ce,
)
from spherepack.errors import InsufficientGrid, NonpositiveFhat0
from spherepack.magic import default_evaluator
from spherepack.packing import e8_packing_spec, periodic_density

PI = math.pi


def test_ce_bound_values():
    assert ce_bound(1.0, 1.0, 8) == pytest.approx(PI ** 4 / 6144.0, rel=1e-15)
    assert ce_bound(2.0, 1.0, 1) == pytest.approx(2.0, rel=1e-15)


def test_ce_bound_linearity():
    base = ce_bound(1.0, 1.0, 8)
    assert ce_bound(3.0, 1.0, 8) == pytest.approx(3.0 * base, rel=1e-14)
    assert ce_bound(1.0, 2.0, 8) == pytest.approx(base / 2.0, rel=1e-14)


def test_ce_bound_rejects_nonpositive():
    with pytest.raises(NonpositiveFhat0):
        ce_bound(1.0, 0.0, 8)
    with pytest.raises(NonpositiveFhat0):
        ce_bound(1.0, -1.0, 8)


def test_rescaled_bound_reductions():
    assert rescaled_bound(1.0, 1.0) == pytest.approx(E8_DENSITY, rel=1e-15)
    assert rescaled_bound(1.0, 1.0, scale=1.0, d=8) == pytest.approx(
        ce_bound(1.0, 1.0, 8), rel=1e-15)
    # near-linearity in the ratio
    assert rescaled_bound(1.0 + 1e-6, 1.0) - E8_DENSITY == pytest.approx(
        1e-6 * E8_DENSITY, rel=1e-6)


def test_bound_matches_lattice_density_exactly():
    assert abs(rescaled_bound(1.0, 1.0) - periodic_density(e8_packing_spec())) < 1e-12


def test_default_grid_shape():
    grid = default_ce_grid()
    assert grid[0] == 0.0 and grid[-1] == pytest.approx(6.0)
    assert any(math.sqrt(2) < r < 1.42 for r in grid)  # refinement near sqrt(2)


def test_verify_ce_gaussian_fails_sign_condition():
    # the standard Gaussian is its own transform but positive everywhere
    f = lambda r: math.exp(-PI * r * r)
    report = verify_ce(f, f, grid=[0.0, 1.0, 1.5, 2.0, 3.0], tol=1e-9)
    assert not report.pass_
    assert report.ce2_max_violation > 0.0
    assert report.ce1_pass  # f(0) = 1 > 0 is fine; CE2 is what fails


def test_verify_ce_requires_points_beyond_sqrt2():
    f = lambda r: math.exp(-PI * r * r)
    with pytest.raises(InsufficientGrid):
        verify_ce(f, f, grid=[0.0, 0.5, 1.0])


def test_magic_certificate_passes():
    report = verify_magic_ce()
    assert report.ce1_pass
    assert report.ce2_max_violation <= report.tol
    assert report.ce3_min_value >= -report.tol
    assert abs(report.bound - E8_DENSITY) < 1e-6
    assert report.pass_


def test_magic_certificate_matches_callable_route():
    ev = default_evaluator()
    grid = [0.0, 1.0, 1.5, 2.0, 2.5, 3.0]
    a = verify_magic_ce(ev, grid=grid)
    b = verify_ce(ev.eval_g, ev.eval_g_hat, grid=grid)
    assert a.ce2_max_violation == pytest.approx(b.ce2_max_violation, abs=1e-15)
    assert a.ce3_min_value == pytest.approx(b.ce3_min_value, abs=1e-15)
    assert a.pass_ == b.pass_


def test_poisson_self_dual_point():
    lhs, rhs = poisson_check(1.0)
    assert lhs == rhs  # identical sums term by term
    assert lhs > 1.0


@pytest.mark.parametrize("sigma", [0.7, 1.0, 1.5, 2.0])
def test_poisson_identity(sigma):
    lhs, rhs = poisson_check(sigma, max_shell_norm2=40)
    assert abs(lhs - rhs) < 1e-10 * lhs


def test_poisson_scaling_relation():
    # substitution symmetry: rhs at sigma is sigma^-4 times lhs at 1/sigma
    lhs_half, _ = poisson_check(0.5)
    _, rhs2 = poisson_check(2.0)
    assert rhs2 == pytest.approx(lhs_half / 2.0 ** 4, rel=1e-12)


def test_poisson_rejects_bad_sigma():
    with pytest.raises(ValueError):
        poisson_check(0.0)
    with pytest.raises(ValueError):
        poisson_check(0.05)  # tail not certifiable at the default cutoff
