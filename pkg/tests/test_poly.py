import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pqcapprox import poly as P


# ---------------------------------------------------------------------------
# parity_split
# ---------------------------------------------------------------------------


def test_parity_split_constant():
    even, odd = P.parity_split(P.Polynomial((1.0,)))
    assert even.base.coeffs == (1.0,)
    assert odd.base.is_zero()


def test_parity_split_linear():
    even, odd = P.parity_split(P.Polynomial((0.0, 1.0)))
    assert even.base.is_zero()
    assert odd.base.coeffs == (0.0, 1.0)


def test_parity_split_mixed():
    even, odd = P.parity_split(P.Polynomial((0.0, 0.5, 1.0)))
    assert even.base.coeffs == (0.0, 0.0, 1.0)
    assert odd.base.coeffs == (0.0, 0.5)


@given(st.lists(st.floats(-10, 10), min_size=1, max_size=12))
def test_parity_split_roundtrip(coeffs):
    p = P.Polynomial(tuple(coeffs))
    even, odd = P.parity_split(p)
    total = np.zeros(max(len(even.base.coeffs), len(odd.base.coeffs)))
    total[: len(even.base.coeffs)] += even.base.coeffs
    total[: len(odd.base.coeffs)] += odd.base.coeffs
    assert np.array_equal(total[: len(p.coeffs)], np.asarray(p.coeffs))
    assert np.all(total[len(p.coeffs) :] == 0)


def test_parity_polynomial_rejects_mixed():
    with pytest.raises(ValueError):
        P.ParityPolynomial(P.Polynomial((1.0, 1.0)), 0)


# ---------------------------------------------------------------------------
# Bernstein evaluation
# ---------------------------------------------------------------------------


def test_bernstein_constant_partition_of_unity():
    f = P.TargetFunctionSpec(1, lambda x: 1.0)
    for n in (1, 3, 17):
        for x in (0.0, 0.3, 1.0):
            assert P.bernstein_eval(f, n, (x,)) == pytest.approx(1.0, abs=1e-12)


def test_bernstein_affine_precision():
    f = P.TargetFunctionSpec(1, lambda x: x[0])
    assert P.bernstein_eval(f, 3, (0.4,)) == pytest.approx(0.4, abs=1e-12)


def test_bernstein_square_frozen():
    # direct-summation oracle: B_n(x^2) = x^2 + x(1-x)/n -> 0.375 at n=2, x=0.5
    f = P.TargetFunctionSpec(1, lambda x: x[0] ** 2)
    assert P.bernstein_eval(f, 2, (0.5,)) == pytest.approx(0.375, abs=1e-13)


@given(
    st.integers(1, 64),
    st.floats(0.0, 1.0),
)
@settings(max_examples=40, deadline=None)
def test_partition_of_unity_property(n, x):
    basis = P._bernstein_basis(n, x)
    assert abs(float(np.sum(basis)) - 1.0) <= 1e-12


@pytest.mark.parametrize("d", [1, 2, 3])
def test_bernstein_affine_multivariate(d):
    coeffs = np.linspace(0.1, 0.3, d)
    f = P.TargetFunctionSpec(d, lambda x: float(np.dot(coeffs, x)) + 0.05)
    rng = np.random.default_rng(d)
    for _ in range(5):
        x = tuple(rng.random(d))
        for n in (1, 2, 5):
            assert P.bernstein_eval(f, n, x) == pytest.approx(f(x), abs=1e-12)


def test_bernstein_log_space_large_n():
    f = P.TargetFunctionSpec(1, lambda x: x[0])
    assert P.bernstein_eval(f, 200, (0.7,)) == pytest.approx(0.7, abs=1e-10)


# ---------------------------------------------------------------------------
# Closed-form bounds
# ---------------------------------------------------------------------------


def test_lipschitz_bound_zero_ell():
    assert P.lipschitz_bernstein_bound(3, 0.0, 1.0, 10, 0.2) == pytest.approx(0.2)


def test_lipschitz_bound_frozen_values():
    assert P.lipschitz_bernstein_bound(1, 1.0, 1.0, 100, 0.1) == pytest.approx(0.6)
    assert P.lipschitz_bernstein_bound(2, 1.0, 1.0, 1, 1.0) == pytest.approx(2.125)


def test_thm_bounds_frozen_values():
    assert P.thm_bounds("thm3", d=1, s=1, beta=2, K=4) == pytest.approx(0.0625)
    assert P.thm_bounds("thm2", d=3, ell=0.0, n=5, eps=0.17) == pytest.approx(0.17)
    assert P.thm_bounds("l2corollary", d=1, s=1, beta=2, K=4) == pytest.approx(
        4.00390625
    )


def test_thm_bounds_unknown_kind():
    with pytest.raises(ValueError):
        P.thm_bounds("thm7", d=1)


# ---------------------------------------------------------------------------
# Sign approximant
# ---------------------------------------------------------------------------


def test_sign_approx_odd_at_zero():
    p = P.sign_approx_poly(0.2, 0.05)
    assert p.parity == 1
    assert p(0.0) == pytest.approx(0.0, abs=1e-14)


def test_sign_approx_accuracy_band():
    p = P.sign_approx_poly(0.2, 0.05)
    # high-precision reference: the approximant must sit within eps of sgn
    assert 0.95 <= p(0.5) <= 1.0
    assert -1.0 <= p(-0.5) <= -0.95


def test_sign_approx_bounds_on_grid():
    p = P.sign_approx_poly(0.1, 0.01)
    grid = np.linspace(-1, 1, 4001)
    vals = p(grid)
    assert np.max(np.abs(vals)) <= 1.0 + 1e-12
    outside = np.abs(grid) >= 0.05
    assert np.max(np.abs(vals[outside] - np.sign(grid[outside]))) <= 0.01


def test_sign_degree_constant_is_recorded():
    p = P.sign_approx_poly(0.2, 0.05)
    const = P.sign_degree_constant(0.2, 0.05, p.degree)
    assert 0 < const < 20


# ---------------------------------------------------------------------------
# Localization polynomial
# ---------------------------------------------------------------------------


def test_localization_single_band():
    spec = P.LocalizationSpec(1, 0.1, 0.05)
    loc = P.localization_poly(spec)
    xs = np.linspace(0, 1, 200)
    vals = loc(xs)
    assert np.all(vals > 0) and np.all(vals < 0.05)


def test_localization_two_bands_frozen():
    spec = P.LocalizationSpec(2, 0.1, 0.05)
    loc = P.localization_poly(spec)
    assert 0.0 < loc(0.25) < 0.05
    assert 0.5 < loc(0.75) < 0.55


def test_localization_even_coefficients():
    spec = P.LocalizationSpec(2, 0.1, 0.05)
    loc = P.localization_poly(spec)
    assert all(c == 0.0 for c in loc.coeffs[1::2])


@pytest.mark.parametrize("K,delta,eps", [(2, 0.1, 0.05), (4, 0.05, 0.1)])
def test_localization_band_contract(K, delta, eps):
    spec = P.LocalizationSpec(K, delta, eps)
    loc = P.localization_poly(spec)
    for k in range(K):
        lo, hi = spec.band(k)
        xs = np.linspace(lo, hi, 300)
        r = loc(xs) - k / K
        assert r.min() > 0.0 and r.max() < eps
    grid = np.linspace(-1, 1, 3000)
    assert np.max(np.abs(loc(grid))) <= 1.0


def test_localization_spec_validation():
    with pytest.raises(ValueError):
        P.LocalizationSpec(4, 0.3, 0.1)  # delta >= 1/K
    with pytest.raises(ValueError):
        P.LocalizationSpec(4, 0.05, 0.3)  # eps >= 1/K


# ---------------------------------------------------------------------------
# Taylor expansion
# ---------------------------------------------------------------------------


def _halfsine():
    return P.TargetFunctionSpec(
        1,
        lambda x: 0.5 * math.sin(x[0]),
        derivative_oracle=lambda a, x: 0.5 * math.sin(x[0] + a[0] * math.pi / 2),
        holder=(2.0, 1.0),
    )


def test_taylor_reproduces_polynomials():
    f = P.TargetFunctionSpec(2, lambda x: 0.3 + 0.2 * x[0] - 0.1 * x[0] * x[1])
    exp = P.taylor_expand(f, (0.2, 0.7), 2)
    rng = np.random.default_rng(0)
    for _ in range(20):
        x = rng.random(2)
        dx = tuple(x - np.array([0.2, 0.7]))
        assert exp(dx) == pytest.approx(f(tuple(x)), abs=1e-7)


def test_taylor_halfsine_first_order():
    exp = P.taylor_expand(_halfsine(), (0.0,), 1)
    assert exp.terms.get((0,), 0.0) == pytest.approx(0.0, abs=1e-12)
    assert exp.terms[(1,)] == pytest.approx(0.5, abs=1e-12)


def test_taylor_remainder_bound():
    # remainder at order s=3 obeys d^s * |x - x0|^beta with beta = 4
    f = P.TargetFunctionSpec(
        1,
        lambda x: 0.5 * math.sin(x[0]),
        derivative_oracle=lambda a, x: 0.5 * math.sin(x[0] + a[0] * math.pi / 2),
        holder=(4.0, 1.0),
    )
    exp = P.taylor_expand(f, (0.0,), 3)
    x = 0.1
    remainder = abs(f((x,)) - exp((x,)))
    assert remainder <= 1.0 * x**4


def test_taylor_coefficient_bound_violation():
    f = P.TargetFunctionSpec(1, lambda x: 5.0 * x[0], derivative_oracle=lambda a, x: 5.0 if a[0] == 1 else 0.0, holder=(2.0, 1.0))
    with pytest.raises(ValueError):
        P.taylor_expand(f, (0.0,), 1)


def test_finite_difference_matches_oracle():
    f = _halfsine()
    for alpha in [(0,), (1,), (2,)]:
        fd = P.finite_difference(f.evaluator, alpha, (0.3,))
        exact = f.derivative_oracle(alpha, (0.3,))
        assert fd == pytest.approx(exact, rel=1e-5, abs=1e-7)


def test_finite_difference_mixed_partial():
    f = lambda x: math.sin(x[0]) * math.cos(x[1])
    fd = P.finite_difference(f, (1, 1), (0.4, 0.2))
    exact = math.cos(0.4) * -math.sin(0.2)
    assert fd == pytest.approx(exact, rel=1e-5)


def test_finite_difference_order_cap():
    with pytest.raises(ValueError):
        P.finite_difference(lambda x: x[0], (5,), (0.5,))
