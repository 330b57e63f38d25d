import numpy as np
import pytest

from phasebound.errors import QuadratureError, UsageError
from phasebound.quadrature import (
    QuadratureConfig,
    integrate_adaptive,
    kronrod_panel,
)


def test_panel_exact_on_gauss_degree_polynomials():
    # the embedded 7-point Gauss rule is exact through degree 13, so a
    # single panel must nail these and report a tiny error estimate
    for deg in (0, 1, 5, 9, 13):
        poly = np.polynomial.Polynomial(np.arange(1.0, deg + 2.0))
        exact = poly.integ()(2.0) - poly.integ()(-1.0)
        val, err = kronrod_panel(poly, -1.0, 2.0)
        assert val == pytest.approx(exact, rel=1e-13)
        assert err < 1e-9 * max(1.0, abs(exact))


def test_adaptive_sine():
    res = integrate_adaptive(np.sin, 0.0, np.pi)
    assert res.value == pytest.approx(2.0, abs=1e-12)
    assert res.error_bound <= 1e-12 or res.error_bound < 1e-10


def test_adaptive_inverse_sqrt_endpoint():
    # integrable endpoint singularity forces real subdivision work; plain
    # bisection cannot do much better than ~1e-8 here, which is why the
    # action integrals remove their singularities by substitution first
    res = integrate_adaptive(lambda x: 1.0 / np.sqrt(x), 0.0, 1.0,
                             QuadratureConfig(abs_tol=1e-8, rel_tol=1e-8))
    assert res.value == pytest.approx(2.0, abs=1e-7)
    assert res.panels > 10


def test_zero_width_interval():
    res = integrate_adaptive(np.exp, 1.5, 1.5)
    assert res.value == 0.0
    assert res.panels == 0


def test_reversed_limits_rejected():
    with pytest.raises(UsageError):
        integrate_adaptive(np.sin, 1.0, 0.0)


def test_budget_exhaustion_carries_estimate():
    cfg = QuadratureConfig(abs_tol=1e-15, rel_tol=1e-15, max_subdivisions=4)
    with pytest.raises(QuadratureError) as exc:
        integrate_adaptive(lambda x: np.abs(x) ** -0.9, 1e-12, 1.0, cfg)
    assert exc.value.estimate is not None
    assert exc.value.error_bound > 0.0


def test_non_finite_integrand_rejected():
    with pytest.raises(QuadratureError):
        integrate_adaptive(lambda x: np.full_like(x, np.nan), 0.0, 1.0)


def test_config_validation():
    with pytest.raises(UsageError):
        QuadratureConfig(abs_tol=0.0)
    with pytest.raises(UsageError):
        QuadratureConfig(max_subdivisions=0)
