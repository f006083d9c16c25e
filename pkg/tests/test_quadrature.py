import numpy as np
import pytest
from scipy.integrate import quad

from nskwave.quadrature import adaptive_simpson, lp_norm


def test_polynomial_exact():
    val = adaptive_simpson(lambda x: x ** 3 - 2 * x, [0.0, 2.0])
    assert val == pytest.approx(0.0, abs=1e-12)


def test_against_scipy_quad():
    f = lambda x: np.exp(-2.0 * np.abs(x)) * np.cos(3.0 * x)
    mine = adaptive_simpson(f, [-30.0, 0.0, 30.0], abs_tol=1e-12, rel_tol=1e-11)
    ref, _ = quad(f, -30, 30, epsabs=1e-13, limit=400)
    assert mine == pytest.approx(ref, abs=1e-10)


def test_localized_feature_found_from_breakpoints():
    # sharp bump far from the interval center, seeded by a breakpoint
    f = lambda x: np.exp(-((x - 900.0) ** 2))
    val = adaptive_simpson(f, [0.0, 900.0, 1000.0], abs_tol=1e-12, rel_tol=1e-10)
    assert val == pytest.approx(np.sqrt(np.pi), rel=1e-8)


def test_exponential_hump_at_gap_edge():
    # monotone decay over a long interval: refinement must walk into the edge
    f = lambda x: np.exp(-0.2 * x)
    val = adaptive_simpson(f, [0.0, 2000.0], abs_tol=1e-13, rel_tol=1e-10)
    assert val == pytest.approx(5.0 * (1.0 - np.exp(-400.0)), rel=1e-8)


def test_zero_integrand():
    assert adaptive_simpson(lambda x: np.zeros_like(x), [0.0, 1.0]) == 0.0


def test_sign_change_terminates():
    val = adaptive_simpson(np.sin, [0.0, 2.0 * np.pi], abs_tol=1e-13, rel_tol=1e-10)
    assert val == pytest.approx(0.0, abs=1e-10)


def test_lp_norm():
    val = lp_norm(lambda x: np.exp(-np.abs(x)), [-40.0, 0.0, 40.0], 2)
    assert val == pytest.approx(1.0, rel=1e-9)
    with pytest.raises(ValueError):
        lp_norm(lambda x: x, [0.0, 1.0], 0.5)


def test_requires_two_breakpoints():
    with pytest.raises(ValueError):
        adaptive_simpson(lambda x: x, [1.0])
