"""Tests for the column-distribution layer: tails, moments, samplers, records."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy import integrate

from tailspec import tailmodels
from tailspec.tailmodels import (
    TailHypothesis,
    concentration_tail_bound,
    coupon_basis,
    derive_seed,
    entry_cdf,
    gamma_function,
    gaussian,
    inverse_tail_truncated_pareto,
    magnitude_tail,
    model_record,
    moment_p_truncated_pareto,
    normalizer,
    pareto,
    parse_model_record,
    raw_abs_moment,
    rosenthal_bracket,
    rosenthal_mq,
    sample_column,
    scaled,
    second_moment,
    stream,
    sym_weibull,
    truncated_pareto,
)


def trunc_pareto_density(p, lam, x):
    return p / (2.0 * (1.0 - lam ** (-p)) * abs(x) ** (p + 1.0))


def trunc_pareto_tail(p, lam, s):
    """P(|xi| > s) for the raw truncated Pareto, by the defining formula."""
    if s <= 1.0:
        return 1.0
    if s >= lam:
        return 0.0
    return (s ** (-p) - lam ** (-p)) / (1.0 - lam ** (-p))


# ---------------------------------------------------------------------------
# Model construction and validation


def test_model_constructors_validate():
    with pytest.raises(ValueError):
        truncated_pareto(0.0, 2.0)
    with pytest.raises(ValueError):
        truncated_pareto(4.0, 1.0)
    with pytest.raises(ValueError):
        pareto(2.0)
    with pytest.raises(ValueError):
        sym_weibull(0.0)
    with pytest.raises(ValueError):
        sym_weibull(2.5)
    with pytest.raises(ValueError):
        scaled(1.0, None)


def test_scaled_flattens_nested_scaling():
    inner = scaled(2.0, pareto(4.0))
    outer = scaled(3.0, inner)
    assert outer.scale == 6.0
    assert outer.inner.kind == "pareto"


# ---------------------------------------------------------------------------
# Inverse tail and tail functions


def test_inverse_tail_endpoints():
    assert inverse_tail_truncated_pareto(1.0, 2.0, 1.0) == 1.0
    assert inverse_tail_truncated_pareto(1.0, 2.0, 0.0) == 2.0


def test_inverse_tail_half_mass_against_bisection():
    p, lam, v = 2.0, 4.0, 0.5
    s = inverse_tail_truncated_pareto(p, lam, v)
    # Independent oracle: bisect the monotone tail function on [1, lam].
    lo, hi = 1.0, lam
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if trunc_pareto_tail(p, lam, mid) > v:
            lo = mid
        else:
            hi = mid
    assert_allclose(s, 0.5 * (lo + hi), rtol=1e-12)
    assert_allclose(s, 1.3719886811400708, rtol=1e-12)
    # Plugging back reproduces the tail probability exactly.
    assert_allclose(trunc_pareto_tail(p, lam, s), v, rtol=1e-12)


@given(
    p=st.floats(0.2, 12.0),
    lam=st.floats(1.01, 50.0),
    v=st.floats(0.0, 1.0),
)
@settings(max_examples=200, deadline=None)
def test_inverse_tail_plug_back_property(p, lam, v):
    s = inverse_tail_truncated_pareto(p, lam, v)
    assert 1.0 <= s <= lam * (1.0 + 1e-12)
    lam_mp = lam ** (-p)
    assert_allclose((s ** (-p) - lam_mp) / (1.0 - lam_mp), v, atol=1e-9)


def test_inverse_tail_monotone_decreasing_in_v():
    values = [inverse_tail_truncated_pareto(3.0, 5.0, v) for v in np.linspace(0.0, 1.0, 41)]
    assert all(a >= b for a, b in zip(values, values[1:]))


def test_inverse_tail_domain_errors():
    with pytest.raises(ValueError):
        inverse_tail_truncated_pareto(-1.0, 2.0, 0.5)
    with pytest.raises(ValueError):
        inverse_tail_truncated_pareto(2.0, 0.9, 0.5)
    with pytest.raises(ValueError):
        inverse_tail_truncated_pareto(2.0, 2.0, 1.5)


def test_magnitude_tail_matches_density_quadrature():
    p, lam = 3.0, 4.0
    model = truncated_pareto(p, lam, normalized=False)
    for s in (1.0, 1.5, 2.0, 3.9):
        mass, _ = integrate.quad(lambda x: 2.0 * trunc_pareto_density(p, lam, x), s, lam)
        assert_allclose(float(magnitude_tail(model, s)), mass, rtol=1e-9)


def test_magnitude_tail_known_forms():
    assert_allclose(float(magnitude_tail(pareto(4.0, normalized=False), 2.0)), 2.0 ** -4)
    assert_allclose(float(magnitude_tail(sym_weibull(1.0, normalized=False), 3.0)), math.exp(-3.0))
    # Normalization rescales the argument by the moment constant.
    m = sym_weibull(1.0)
    a2 = math.sqrt(second_moment(sym_weibull(1.0, normalized=False)))
    assert_allclose(float(magnitude_tail(m, 1.0)), math.exp(-a2))


def test_entry_cdf_symmetry_and_monotonicity():
    for model in (truncated_pareto(4.0, 2.0), pareto(4.0), sym_weibull(1.0), gaussian()):
        xs = np.linspace(-4.0, 4.0, 101)
        cdf = entry_cdf(model, xs)
        assert np.all(np.diff(cdf) >= -1e-15)
        assert_allclose(entry_cdf(model, -xs) + cdf, np.ones_like(xs), atol=1e-14)


# ---------------------------------------------------------------------------
# Moments


def test_moment_p_truncated_pareto_against_quadrature():
    for p, lam in ((1.0, math.e), (2.0, math.e), (4.0, 2.0), (2.5, 7.0)):
        integral, _ = integrate.quad(
            lambda x: 2.0 * x**p * trunc_pareto_density(p, lam, x), 1.0, lam
        )
        assert_allclose(moment_p_truncated_pareto(p, lam), integral ** (1.0 / p), rtol=1e-10)


def test_moment_p_truncated_pareto_examples():
    assert_allclose(moment_p_truncated_pareto(1.0, math.e), 1.0 / (1.0 - math.exp(-1.0)), rtol=1e-12)
    assert_allclose(
        moment_p_truncated_pareto(2.0, math.e),
        math.sqrt(2.0 / (1.0 - math.exp(-2.0))),
        rtol=1e-12,
    )
    # lambda -> 1+ concentrates all mass at |x| = 1.
    assert_allclose(moment_p_truncated_pareto(2.0, 1.0 + 1e-9), 1.0, atol=1e-6)


def test_raw_abs_moment_against_quadrature():
    p, lam = 4.0, 2.0
    model = truncated_pareto(p, lam, normalized=False)
    for r in (1.0, 2.0, 3.0, 4.0, 5.5):
        integral, _ = integrate.quad(
            lambda x: 2.0 * x**r * trunc_pareto_density(p, lam, x), 1.0, lam
        )
        assert_allclose(raw_abs_moment(model, r), integral, rtol=1e-10)


def test_raw_abs_moment_closed_forms():
    assert_allclose(raw_abs_moment(pareto(4.0, normalized=False), 3.0), 4.0, rtol=1e-12)
    assert_allclose(raw_abs_moment(sym_weibull(1.0, normalized=False), 3.0), math.gamma(4.0), rtol=1e-12)
    g = gaussian()
    assert_allclose(raw_abs_moment(g, 1.0), math.sqrt(2.0 / math.pi), rtol=1e-12)
    assert_allclose(raw_abs_moment(g, 2.0), 1.0, rtol=1e-12)
    assert_allclose(raw_abs_moment(g, 4.0), 3.0, rtol=1e-12)
    with pytest.raises(ValueError):
        raw_abs_moment(pareto(4.0, normalized=False), 4.0)


def test_second_moment_values():
    assert_allclose(second_moment(pareto(4.0, normalized=False)), 2.0, rtol=1e-12)
    assert_allclose(second_moment(sym_weibull(2.0, normalized=False)), 1.0, rtol=1e-12)
    assert_allclose(second_moment(sym_weibull(1.0, normalized=False)), 2.0, rtol=1e-12)
    assert second_moment(gaussian()) == 1.0
    assert second_moment(coupon_basis()) == 1.0
    assert_allclose(second_moment(scaled(3.0, pareto(4.0, normalized=False))), 18.0, rtol=1e-12)
    # Normalized heavy-tailed models with a variance normalizer hit exactly 1.
    assert_allclose(second_moment(pareto(4.0)), 1.0, rtol=1e-12)
    assert_allclose(second_moment(sym_weibull(1.0)), 1.0, rtol=1e-12)


def test_truncated_pareto_second_moment_against_quadrature():
    p, lam = 4.0, 2.0
    raw = truncated_pareto(p, lam, normalized=False)
    integral, _ = integrate.quad(lambda x: 2.0 * x**2 * trunc_pareto_density(p, lam, x), 1.0, lam)
    assert_allclose(second_moment(raw), integral, rtol=1e-10)
    # The normalized model divides by a_p, not by the standard deviation, so
    # its second moment is the ratio of the two moment constants.
    norm = truncated_pareto(p, lam)
    assert_allclose(second_moment(norm), integral / moment_p_truncated_pareto(p, lam) ** 2, rtol=1e-10)


def test_normalizer_values():
    assert_allclose(normalizer(truncated_pareto(4.0, 2.0)), moment_p_truncated_pareto(4.0, 2.0), rtol=1e-12)
    assert_allclose(normalizer(pareto(4.0)), math.sqrt(2.0), rtol=1e-12)
    assert_allclose(normalizer(sym_weibull(1.0)), math.sqrt(2.0), rtol=1e-12)
    assert normalizer(gaussian()) == 1.0
    # The constant is a property of the distribution family, not of the flag.
    assert_allclose(normalizer(pareto(4.0, normalized=False)), math.sqrt(2.0), rtol=1e-12)


# ---------------------------------------------------------------------------
# Gamma


def test_gamma_small_integers_and_half():
    assert_allclose(gamma_function(1.0), 1.0, rtol=1e-12)
    assert_allclose(gamma_function(4.0), 6.0, rtol=1e-12)
    assert_allclose(gamma_function(0.5), math.sqrt(math.pi), rtol=1e-12)


def test_gamma_against_math_gamma_grid():
    xs = np.concatenate([np.linspace(0.02, 10.0, 400), np.linspace(10.5, 170.0, 200)])
    worst = max(abs(gamma_function(float(x)) - math.gamma(float(x))) / math.gamma(float(x)) for x in xs)
    assert worst <= 1e-10


@given(x=st.floats(1e-3, 170.0))
@settings(max_examples=300, deadline=None)
def test_gamma_matches_reference_everywhere(x):
    assert_allclose(gamma_function(x), math.gamma(x), rtol=1e-10)


def test_gamma_domain_error():
    with pytest.raises(ValueError):
        gamma_function(0.0)
    with pytest.raises(ValueError):
        gamma_function(-2.5)


# ---------------------------------------------------------------------------
# Rosenthal and concentration calculators


def test_rosenthal_mq_examples():
    assert_allclose(rosenthal_mq(3.0, np.array([1.0]), 1.0, 2.0), 2.0, rtol=1e-12)
    a = np.array([1.0, 1.0]) / math.sqrt(2.0)
    assert_allclose(rosenthal_mq(4.0, a, 1.0, 1.0), 1.0, rtol=1e-12)
    e1 = np.zeros(5)
    e1[0] = 1.0
    assert_allclose(rosenthal_mq(4.0, e1, 1.0, 3.0), 3.0, rtol=1e-12)
    with pytest.raises(ValueError):
        rosenthal_mq(2.0, a, 1.0, 1.0)


def test_rosenthal_bracket_orders_and_scales():
    a = np.array([1.0, 2.0, 2.0])
    lo, hi = rosenthal_bracket(4.0, a, 1.3, 2.1, c_abs=1.0)
    mq = rosenthal_mq(4.0, a, 1.3, 2.1)
    assert_allclose(lo, mq / 2.0, rtol=1e-12)
    assert_allclose(hi, 4.0 / math.log(4.0) * mq, rtol=1e-12)
    lo2, hi2 = rosenthal_bracket(4.0, a, 1.3, 2.1, c_abs=3.0)
    assert_allclose(hi2, 3.0 * hi, rtol=1e-12)
    assert_allclose(lo2, lo, rtol=1e-12)


def test_concentration_tail_bound_example_and_limits():
    value = concentration_tail_bound(6.0, 0.5, 2.0, 10**4, 100, c_abs=1.0)
    expected = (6.0 / (0.5 * math.log(6.0))) ** 3 * 2.0 * 100 / 10.0**6
    assert_allclose(value, expected, rtol=1e-12)
    assert 0.059 < value < 0.061
    # Probability clip.
    assert concentration_tail_bound(6.0, 1e-9, 2.0, 10, 10**6, c_abs=1.0) == 1.0
    # Monotone decreasing in t with limit 0.
    ts = np.array([0.5, 1.0, 2.0, 8.0, 64.0, 1e6])
    vals = [concentration_tail_bound(6.0, float(t), 2.0, 10**4, 100, c_abs=1.0) for t in ts]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-12
    with pytest.raises(ValueError):
        concentration_tail_bound(4.0, 1.0, 2.0, 10, 10, c_abs=1.0)


# ---------------------------------------------------------------------------
# Tail hypothesis


def test_tail_hypothesis_phi_and_bound():
    poly = TailHypothesis("polynomial", p=6.0, vartheta=2.0)
    assert_allclose(poly.phi(2.0), 64.0, rtol=1e-12)
    assert_allclose(poly.tail_bound(2.0), 2.0 / 64.0, rtol=1e-12)
    assert poly.tail_bound(0.5) == 1.0
    expo = TailHypothesis("exponential", alpha=1.0, vartheta=1.0)
    assert_allclose(expo.phi(3.0), math.expm1(3.0), rtol=1e-12)
    with pytest.raises(ValueError):
        TailHypothesis("polynomial", p=4.0)
    with pytest.raises(ValueError):
        TailHypothesis("exponential", alpha=3.0)
    with pytest.raises(ValueError):
        TailHypothesis("polynomial", p=5.0, vartheta=0.5)


# ---------------------------------------------------------------------------
# Streams and sampling


def test_stream_determinism_and_independence():
    a = stream(1234, 0).standard_normal(8)
    b = stream(1234, 0).standard_normal(8)
    c = stream(1234, 1).standard_normal(8)
    assert_allclose(a, b, rtol=0, atol=0)
    assert not np.allclose(a, c)
    assert derive_seed(7, 3) == derive_seed(7, 3)
    assert derive_seed(7, 3) != derive_seed(7, 4)
    with pytest.raises(ValueError):
        stream(-1, 0)


def test_sample_column_determinism():
    model = truncated_pareto(4.0, 2.0)
    x = sample_column(model, 50, stream(42, 0))
    y = sample_column(model, 50, stream(42, 0))
    assert_allclose(x, y, rtol=0, atol=0)


def test_truncated_pareto_sample_range():
    p, lam = 4.0, 2.0
    model = truncated_pareto(p, lam)
    a_p = moment_p_truncated_pareto(p, lam)
    x = np.abs(sample_column(model, 4000, stream(7, 0)))
    assert np.all(x >= 1.0 / a_p - 1e-12)
    assert np.all(x <= lam / a_p + 1e-12)
    raw = np.abs(sample_column(truncated_pareto(p, lam, normalized=False), 4000, stream(7, 0)))
    assert np.all(raw >= 1.0) and np.all(raw <= lam)


def test_pareto_sample_lower_edge():
    model = pareto(4.0)
    a2 = math.sqrt(2.0)
    x = np.abs(sample_column(model, 4000, stream(11, 0)))
    assert np.all(x >= 1.0 / a2 - 1e-12)


def test_coupon_sample_structure():
    col = sample_column(coupon_basis(), 4, stream(3, 0))
    nz = np.nonzero(col)[0]
    assert nz.size == 1
    assert_allclose(col[nz[0]], 2.0, rtol=1e-15)


def test_coupon_outcome_average_is_identity():
    # Average of Z Z^T over the n equally likely outcomes, by direct summation.
    # With a perfect-square n the entries sqrt(n) are exact and so is the sum.
    n = 4
    total = np.zeros((n, n))
    for i in range(n):
        z = np.zeros(n)
        z[i] = math.sqrt(n)
        total += np.outer(z, z)
    assert_allclose(total / n, np.eye(n), rtol=0, atol=0)
    # General n matches to one rounding of sqrt(n)^2.
    n = 5
    total = np.zeros((n, n))
    for i in range(n):
        z = np.zeros(n)
        z[i] = math.sqrt(n)
        total += np.outer(z, z)
    assert_allclose(total / n, np.eye(n), atol=1e-15)


def test_scaled_zero_gives_zero_column():
    col = sample_column(scaled(0.0, gaussian()), 3, stream(9, 0))
    assert_allclose(col, np.zeros(3), rtol=0, atol=0)


def test_weibull_inverse_map_identity():
    # The sampler's magnitude map is the inverse of the tail function:
    # for alpha = 1 the normalized magnitude at tail level u is -ln(u)/sqrt(2).
    model = sym_weibull(1.0)
    u = math.exp(-1.0)
    mag = 1.0 / math.sqrt(2.0)
    assert_allclose(float(magnitude_tail(model, mag)), u, rtol=1e-12)


def test_sample_signs_are_balanced():
    x = sample_column(sym_weibull(1.0), 20000, stream(5, 0))
    frac = np.mean(x > 0)
    assert abs(frac - 0.5) < 0.02


def test_empirical_cdf_close_to_analytic():
    # Quick distribution sanity check; the tighter version runs in acceptance.
    for model in (truncated_pareto(4.0, 2.0), pareto(4.0)):
        x = np.sort(sample_column(model, 2000, stream(21, 0)))
        grid = (np.arange(2000) + 1) / 2000.0
        cdf = entry_cdf(model, x)
        d = np.max(np.maximum(np.abs(cdf - grid), np.abs(cdf - (grid - 1 / 2000.0))))
        assert d < 0.05


# ---------------------------------------------------------------------------
# Records


def test_model_record_round_trip():
    models = [
        truncated_pareto(4.0, 2.0),
        truncated_pareto(3.5, 1.75, normalized=False),
        pareto(4.0),
        pareto(5.0, normalized=False),
        sym_weibull(1.0),
        sym_weibull(0.75, normalized=False),
        gaussian(),
        coupon_basis(),
        scaled(2.5, pareto(4.0)),
        scaled(0.5, sym_weibull(2.0, normalized=False)),
    ]
    for model in models:
        text = model_record(model)
        back = parse_model_record(text)
        assert back == model, text


def test_parse_model_record_rejects_junk():
    with pytest.raises(ValueError):
        parse_model_record("kind=unknown")
    with pytest.raises(ValueError):
        parse_model_record("p=4.0")
