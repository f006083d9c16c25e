import numpy as np
import pytest

import nskwave as nw
from nskwave import thermo


def test_residual_vanishes_at_end_states(pattern_std, model14):
    v_m, v_p = pattern_std.mid.v, pattern_std.right.v
    assert nw.profile_residual(v_m, 0.0, 0.0, pattern_std, model14) == pytest.approx(0.0, abs=1e-15)
    # Rankine-Hugoniot forces the right end to cancel as well
    assert nw.profile_residual(v_p, 0.0, 0.0, pattern_std, model14) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(nw.DomainError):
        nw.profile_residual(-1.0, 0.0, 0.0, pattern_std, model14)


def test_solved_profile_residual(profile_std):
    assert profile_std.self_residual() < 1e-8


def test_profile_monotone_and_normalized(profile_std):
    assert np.all(np.diff(profile_std.v) > 0.0)
    assert np.all(profile_std.vp > 0.0)
    mid = 0.5 * (profile_std.v_m + profile_std.v_plus)
    assert float(profile_std.volume(0.0)[0]) == pytest.approx(mid, abs=1e-10)


def test_profile_reaches_far_field(profile_std):
    assert abs(profile_std.v[0] - profile_std.v_m) < 1e-10
    assert abs(profile_std.v[-1] - profile_std.v_plus) < 1e-10


def test_degenerate_strength_rejected(model14, right_state):
    pat = nw.pattern_from_intermediate(1.0, right_state, model14)
    with pytest.raises(nw.ProfileError):
        nw.solve_profile(pat, model14)


def test_oscillatory_regime_rejected(model14, right_state):
    # dispersion dominates for sufficiently strong shocks at these exponents
    pat = nw.pattern_from_intermediate(0.785, right_state, model14)
    with pytest.raises(nw.MonotonicityError):
        nw.solve_profile(pat, model14)


def test_eval_far_field_and_midpoint(profile_std):
    st = nw.eval_profile(profile_std, np.array([profile_std.xi_lo - 10.0]))
    assert st["v"][0] == profile_std.v_m and st["u"][0] == profile_std.u_m
    assert st["vx"][0] == 0.0 and st["w"][0] == 0.0
    st = nw.eval_profile(profile_std, np.array([profile_std.xi_hi + 10.0]))
    assert st["v"][0] == profile_std.v_plus
    st = nw.eval_profile(profile_std, np.array([0.0]))
    assert st["v"][0] == pytest.approx(0.5 * (profile_std.v_m + profile_std.v_plus), abs=1e-10)


def test_mass_equation_along_profile(profile_std):
    rng = np.random.default_rng(3)
    xi = rng.uniform(profile_std.xi_lo, profile_std.xi_hi, 100)
    st = nw.eval_profile(profile_std, xi)
    assert np.max(np.abs(st["ux"] + profile_std.sigma * st["vx"])) < 1e-12


def test_velocity_slope_proportional_to_volume_slope(profile_std):
    # u' = -sigma v' makes the two-sided comparability exact with C = sigma
    xi = np.linspace(profile_std.xi_lo, profile_std.xi_hi, 500)
    st = nw.eval_profile(profile_std, xi)
    assert np.all(st["ux"] <= 0.0)
    np.testing.assert_allclose(np.abs(st["ux"]), profile_std.sigma * st["vx"], rtol=1e-13)


def test_auxiliary_field_definition(profile_std, model14):
    xi = np.linspace(-20, 20, 101)
    st = nw.eval_profile(profile_std, xi)
    expected = -np.sqrt(thermo.capillarity(st["v"], model14)) * st["vx"] / st["v"] ** 2.5
    np.testing.assert_allclose(st["w"], expected, atol=1e-14)


def test_interpolant_derivative_close_to_differences(profile_std):
    # mid-cell finite differences of the interpolated volume
    xi = profile_std.xi
    mids = 0.5 * (xi[200:260] + xi[201:261])
    h = 1e-4
    vp_fd = (profile_std.volume(mids + h)[0] - profile_std.volume(mids - h)[0]) / (2 * h)
    vp = profile_std.volume(mids)[1]
    np.testing.assert_allclose(vp, vp_fd, atol=1e-6)


def test_tail_is_log_linear(profile_std):
    gap = profile_std.v_plus - profile_std.v
    sel = (gap > 1e-9) & (gap < 0.01 * profile_std.delta_S) & (profile_std.xi > 0)
    xi, lg = profile_std.xi[sel], np.log(gap[sel])
    slope, intercept = np.polyfit(xi, lg, 1)
    resid = lg - (slope * xi + intercept)
    # affine up to the subleading fast mode (about a percent in log scale)
    assert slope < 0 and np.max(np.abs(resid)) < 0.05
    assert profile_std.tail_rate == pytest.approx(-slope, rel=1e-6)


def test_sweep_fitted_constants_stable(profile_sweep):
    """Slope ceiling, curvature control and tail rate track the strength."""
    vp_ratio, curv_ratio, tail_ratio, resid = [], [], [], []
    for delta_S, (pat, prof) in profile_sweep.items():
        resid.append(prof.self_residual())
        assert np.all(np.diff(prof.v) > 0.0)
        assert float(prof.volume(0.0)[0]) == pytest.approx(
            0.5 * (prof.v_m + prof.v_plus), abs=1e-10)
        vp_ratio.append(np.max(prof.vp) / delta_S ** 2)
        curv_ratio.append(np.max(np.abs(prof.vpp) / (delta_S * prof.vp)))
        tail_ratio.append(prof.tail_rate / delta_S)
    assert max(resid) < 1e-8
    for seq in (vp_ratio, curv_ratio, tail_ratio):
        seq = np.array(seq)
        assert np.all(np.isfinite(seq))
        assert seq.max() / seq.min() < 2.0
    # decay rate within a factor 3 of the strength scale
    assert all(0.5 <= r <= 3.0 for r in tail_ratio)
