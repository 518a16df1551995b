import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cvwitness.epr_criterion import delta, gees_quick_test
from cvwitness.errors import DomainError
from cvwitness.gaussian_moments import (
    GaussianQForm,
    minimum_correlation_form,
    q_averages,
    q_normalization_check,
    santos_form,
    tmsv_form,
    to_moment_set,
)
from cvwitness.oracles import q_quadrature_moments


def test_santos_uncorrelated():
    f = santos_form(1.0, 0.0)
    assert (f.A, f.B, f.C) == (0.5, 0.5, 0.0)
    m = to_moment_set(f)
    assert m.n1 == pytest.approx(1.0) and m.n2 == pytest.approx(1.0)
    assert delta(m) == 0


def test_santos_delta_and_photon_numbers():
    m = to_moment_set(santos_form(1.0, 0.6))
    assert delta(m) == pytest.approx(-2.4, abs=1e-12)
    assert m.n1 == pytest.approx(1.0, abs=1e-12) and m.n2 == pytest.approx(1.0, abs=1e-12)


def test_santos_physical_flag():
    assert santos_form(1.0, 0.7).physical
    assert not santos_form(1.0, 0.8).physical
    assert not santos_form(0.0, 0.1).physical


def test_santos_domain():
    with pytest.raises(DomainError):
        santos_form(1.0, 1.0)
    with pytest.raises(DomainError):
        santos_form(-0.5, 0.1)


def test_mincorr_moments():
    m = to_moment_set(minimum_correlation_form(1.0, 0.3))
    assert m.n1 == pytest.approx(1.297811749623830, abs=1e-12)
    assert m.n2 == pytest.approx(0.332789772922588, abs=1e-12)
    assert delta(m) == pytest.approx(-1.5, abs=1e-12)
    assert minimum_correlation_form(1.0, 0.3).physical


def test_mincorr_unphysical_point_is_flagged():
    f = minimum_correlation_form(0.5, 0.25)
    m = to_moment_set(f)
    assert m.n2 == pytest.approx(math.tanh(0.5) * 0.75 / 0.5 - 1, abs=1e-12)
    assert m.n2 < 0
    assert not f.physical
    assert m.warnings


def test_mincorr_large_r_limit():
    m = to_moment_set(minimum_correlation_form(20.0, 0.3))
    assert m.n1 == pytest.approx(m.n2, abs=1e-12)
    assert delta(m) == pytest.approx(-1.5, abs=1e-12)


def test_mincorr_domain():
    with pytest.raises(DomainError):
        minimum_correlation_form(1.0, 0.5)
    with pytest.raises(DomainError):
        minimum_correlation_form(0.0, 0.2)


def test_nonconvergent_kernel_rejected():
    with pytest.raises(DomainError):
        GaussianQForm(1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        GaussianQForm(-1.0, 1.0, 0.0)


def test_product_kernel_has_no_correlation():
    m = to_moment_set(GaussianQForm(0.4, 0.7, 0.0))
    assert m.cross == 0
    assert not gees_quick_test(m)


@pytest.mark.parametrize("form", [santos_form(1, 0.6), minimum_correlation_form(1, 0.3), tmsv_form(0.8)])
def test_normalization(form):
    assert q_normalization_check(form) == pytest.approx(1.0, abs=1e-15)
    assert q_quadrature_moments(form)["norm"] == pytest.approx(1.0, abs=1e-6)


def test_tmsv_kernel_reproduces_closed_form():
    r = 0.7
    m = to_moment_set(tmsv_form(r))
    assert m.n1 == pytest.approx(math.sinh(r) ** 2, abs=1e-14)
    assert m.cross.real == pytest.approx(math.sinh(r) * math.cosh(r), abs=1e-14)


kernels = st.tuples(
    st.floats(0.3, 2.0), st.floats(0.3, 2.0), st.floats(-0.9, 0.9)
).map(lambda t: GaussianQForm(t[0], t[1], t[2] * math.sqrt(t[0] * t[1])))


@settings(max_examples=30, deadline=None)
@given(kernels)
def test_anti_normal_offset_and_families(form):
    aa, bb, ab = q_averages(form)
    m = to_moment_set(form)
    assert aa - m.n1 == pytest.approx(1.0, abs=1e-12)
    assert bb - m.n2 == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 5.0), st.floats(-0.95, 0.95))
def test_santos_family_identities(n, x):
    m = to_moment_set(santos_form(n, x))
    assert m.n1 == pytest.approx(m.n2, abs=1e-12)
    assert m.n1 == pytest.approx(n, abs=1e-9)
    assert delta(m) == pytest.approx(-2 * x * (n + 1), abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(-2.0, 0.49))
def test_mincorr_family_identities(r, d):
    g = math.tanh(r)
    m = to_moment_set(minimum_correlation_form(r, d))
    assert m.n1 + 1 == pytest.approx((1 - d) / (g * (1 - 2 * d)), rel=1e-12)
    assert m.n2 + 1 == pytest.approx(g * (1 - d) / (1 - 2 * d), rel=1e-12)
    assert delta(m) == pytest.approx(-2 * d / (1 - 2 * d), rel=1e-12, abs=1e-15)


def test_moments_agree_with_quadrature_for_random_kernels():
    rng = np.random.default_rng(5)
    for _ in range(10):
        A, B = rng.uniform(0.3, 1.5, size=2)
        C = rng.uniform(-0.85, 0.85) * math.sqrt(A * B)
        form = GaussianQForm(A, B, C)
        quad = q_quadrature_moments(form)
        m = to_moment_set(form)
        assert quad["n1"] == pytest.approx(m.n1, abs=1e-6)
        assert quad["n2"] == pytest.approx(m.n2, abs=1e-6)
        assert quad["delta"] == pytest.approx(delta(m), abs=1e-6)
