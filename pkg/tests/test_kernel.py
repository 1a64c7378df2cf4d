import math

import numpy as np
import pytest
from hypothesis import given

from dirichlet_composition.errors import DomainError, ImageAtBoundaryError
from dirichlet_composition.kernel import (
    KernelPoint,
    adjoint_on_kernel,
    diff_ratio,
    diff_ratio_polar,
    kernel_eval,
    kernel_inner,
    kernel_norm_sq,
    kernel_norm_sq_polar,
    ratio_terms,
)
from dirichlet_composition.mobius import IDENTITY

from conftest import disk_points, self_maps


def test_kernel_at_zero():
    assert kernel_eval(0.4 - 0.2j, 0) == 1
    assert kernel_eval(0, 0.9j) == 1


def test_kernel_conjugate_symmetry():
    w, z = 0.3 + 0.4j, -0.5 + 0.1j
    assert abs(kernel_eval(w, z).conjugate() - kernel_eval(z, w)) < 1e-15


def test_kernel_domain():
    with pytest.raises(DomainError):
        kernel_eval(1.0, 0.1)
    with pytest.raises(DomainError):
        kernel_eval(0.1, 1.0)
    with pytest.raises(DomainError):
        KernelPoint(1 - 1e-15)


def test_kernel_point_polar():
    p = KernelPoint.polar(2.0**-40, 2j)
    assert p.w == pytest.approx(1j)
    assert p.one_minus_abs2 == 2.0**-40 * (2 - 2.0**-40)


def test_kernel_norm_examples():
    assert kernel_norm_sq(0) == 1
    assert kernel_norm_sq(math.sqrt(1 - math.exp(-1))) == pytest.approx(2)
    assert kernel_norm_sq(math.sqrt(1 - math.exp(-3))) == pytest.approx(4)


def test_kernel_norm_polar_matches():
    assert kernel_norm_sq_polar(0.25) == pytest.approx(kernel_norm_sq(0.75))


def test_kernel_norm_monotone():
    r = np.linspace(0, 0.999, 500)
    values = [kernel_norm_sq(x) for x in r]
    assert np.all(np.diff(values) > 0)


def test_kernel_inner_examples():
    w = 0.3 - 0.6j
    assert kernel_inner(w, 0) == 1
    assert kernel_inner(w, w) == pytest.approx(kernel_norm_sq(w))
    assert abs(kernel_inner(w, w).imag) < 1e-15
    a, b = 0.2, 0.5j
    assert kernel_inner(a, b) == pytest.approx(kernel_inner(b, a).conjugate())


def test_cauchy_schwarz(rng):
    for _ in range(1000):
        r = 0.999 * np.sqrt(rng.uniform(size=2))
        w1, w2 = r * np.exp(2j * np.pi * rng.uniform(size=2))
        assert abs(kernel_inner(w1, w2)) ** 2 <= kernel_norm_sq(w1) * kernel_norm_sq(w2) * (1 + 1e-12)


def test_branch_validity(rng):
    w = 0.9999 * np.sqrt(rng.uniform(size=1000)) * np.exp(2j * np.pi * rng.uniform(size=1000))
    z = 0.9999 * np.sqrt(rng.uniform(size=1000)) * np.exp(2j * np.pi * rng.uniform(size=1000))
    assert np.all(np.real(1 - np.conj(w) * z) > 0)


def test_adjoint_on_kernel_examples(neg, half_shift):
    assert adjoint_on_kernel(IDENTITY, 0.3j).w == pytest.approx(0.3j)
    assert adjoint_on_kernel(neg, 0.5).w == pytest.approx(-0.5)
    assert adjoint_on_kernel(half_shift, 0).w == pytest.approx(0.5)


def test_adjoint_on_kernel_boundary(half_shift):
    # (1 + z)/2 sends 1 - 2^-46 to within 2^-47 of the circle
    with pytest.raises(ImageAtBoundaryError):
        adjoint_on_kernel(half_shift, KernelPoint.polar(2.0**-46, 1))


def test_diff_ratio_equal_maps_is_zero(hyp05):
    for k in (4, 20, 40):
        assert diff_ratio_polar(hyp05, hyp05, 2.0**-k, 1j).ratio == 0.0


def test_diff_ratio_negation_near_boundary(neg):
    r = 1 - 1e-6
    mu = 1 - r * r
    L = math.log(1 / mu)
    expected = (2 * L + 2 * math.log(1 + r * r)) / (1 + L)
    assert expected == pytest.approx(1.956, abs=1e-3)
    assert diff_ratio(neg, IDENTITY, r).ratio == pytest.approx(expected, rel=1e-9)
    assert diff_ratio_polar(neg, IDENTITY, 1e-6, 1).ratio == pytest.approx(expected, rel=1e-12)


def test_diff_ratio_negation_tends_to_two(neg):
    deltas = np.ldexp(1.0, -np.arange(10, 46, 5))
    ratios = ratio_terms(neg, IDENTITY, deltas, 1.0)[0]
    assert np.all(np.diff(ratios) > 0) and ratios[-1] < 2
    assert 2 - ratios[-1] < 0.03


def test_ratio_terms_combine_consistently(neg):
    ratio, lp, lq, cross = ratio_terms(neg, IDENTITY, 2.0**-20, 1.0)
    norm = kernel_norm_sq_polar(2.0**-20)
    assert ratio == pytest.approx((lp + lq - 2 * cross) / norm, rel=1e-12)


@given(self_maps, self_maps, disk_points(0.9))
def test_diff_ratio_expansion(phi, psi, w):
    p, q = complex(phi(w)), complex(psi(w))
    direct = (kernel_norm_sq(p) + kernel_norm_sq(q) - 2 * kernel_inner(p, q).real) / kernel_norm_sq(w)
    sample = diff_ratio(phi, psi, w)
    assert sample.ratio >= 0
    assert sample.ratio == pytest.approx(direct, rel=1e-9, abs=1e-13)


@given(self_maps, self_maps)
def test_diff_ratio_nonnegative_on_ladder(phi, psi):
    deltas = np.ldexp(1.0, -np.arange(4, 41))[None, :]
    zeta = np.exp(2j * np.pi * np.arange(16) / 16)[:, None]
    ratio = ratio_terms(phi, psi, deltas, zeta)[0]
    assert np.all(ratio >= 0) and np.all(np.isfinite(ratio))
