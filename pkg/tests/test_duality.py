import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from harperlab.duality import (
    DualFiniteSection,
    amo_splus_half,
    decay_fit,
    dual_section,
    dual_spectrum,
    invariance_check,
    lipschitz_gamma,
    scaling_check,
    shift_check,
)
from harperlab.errors import AllZeroTail, GammaNonPositive
from harperlab.intervals import IntervalSet, hausdorff
from harperlab.potential import TrigPotential, make_amo, make_fourier

ZERO = TrigPotential([0.0])

# 4 pi (2 sum_{n>=1} n^2 e^{-2n})^{1/2}, summed in closed form x(1+x)/(1-x)^3 at x = e^{-2}
GAMMA_AT_ONE = 8.664047824332014


def test_self_dual_section_matches_direct():
    beta, xi, N = 0.3819660112501051, 0.17, 8
    sec = dual_section(make_amo(1.0), beta, xi, N)
    n = np.arange(-N, N + 1)
    direct = np.diag(2 * np.cos(2 * np.pi * (beta * n + xi))) + np.eye(2 * N + 1, k=1) + np.eye(2 * N + 1, k=-1)
    assert np.allclose(sec.matrix, direct, atol=1e-14)


def test_zero_potential_section_is_diagonal():
    sec = dual_section(ZERO, (1, 3), 0.05, 6)
    n = sec.sites
    assert np.allclose(sec.matrix, np.diag(2 * np.cos(2 * np.pi * (n / 3 + 0.05))), atol=1e-14)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_random_sections_hermitian(seed):
    rng = np.random.default_rng(seed)
    c1 = complex(*rng.normal(size=2))
    c2 = complex(*rng.normal(size=2))
    v = make_fourier({-2: np.conj(c2), -1: np.conj(c1), 0: float(rng.normal()), 1: c1, 2: c2})
    for boundary in ("dirichlet", "periodic"):
        sec = dual_section(v, (2, 5), float(rng.random()), 7, boundary)
        assert np.allclose(sec.matrix, sec.matrix.conj().T)
        assert np.isrealobj(sec.eigenvalues())


def test_section_rejects_non_hermitian():
    with pytest.raises(ValueError):
        DualFiniteSection(1, 0.5, 0.0, np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]], dtype=float), "dirichlet")


def test_zero_potential_dual_spectrum_covers_cosine_range():
    s = dual_spectrum(ZERO, (1, 2), xi_grid=64, N=100)
    lo, hi = s.hull
    assert lo == pytest.approx(-2.0, abs=0.11) and hi == pytest.approx(2.0, abs=0.11)
    assert hausdorff(s, IntervalSet([(-2, 2)])) <= 0.1 + 1e-12


def test_more_phases_give_larger_union():
    v = make_amo(0.6)
    small = dual_spectrum(v, (1, 3), xi_grid=8, N=60)
    large = dual_spectrum(v, (1, 3), xi_grid=16, N=60)
    assert (small - large).measure == 0.0


def test_self_dual_invariance():
    r = invariance_check(make_amo(1.0), (1, 2), N=200)
    assert r.passes and r.distance < r.tolerance


def test_random_potential_distance_shrinks():
    v = make_fourier({-2: 0.2 - 0.1j, -1: 0.5, 0: 0.1, 1: 0.5, 2: 0.2 + 0.1j})
    d200 = invariance_check(v, (1, 3), N=200).distance
    d400 = invariance_check(v, (1, 3), N=400).distance
    assert d400 < d200


def test_scaling_closed_form():
    s = amo_splus_half(0.5)
    assert s.hull == pytest.approx((-math.sqrt(5), math.sqrt(5)), abs=1e-15)
    assert hausdorff(s, amo_splus_half(2.0).scaled(0.5)) < 1e-15


@pytest.mark.parametrize("pq", [(1, 2), (1, 3), (2, 5)])
def test_scaling_numeric(pq):
    r = scaling_check(0.5, pq)
    assert r.numeric_distance < 1e-6
    if pq == (1, 2):
        assert r.closed_form_distance < 1e-12


def test_decay_fit_exact_model():
    n = np.arange(-30, 31)
    fit = decay_fit(np.exp(-np.abs(n)), center="peak")
    assert fit.gamma == pytest.approx(1.0, abs=1e-10)
    assert fit.C == pytest.approx(1.0, abs=1e-9)
    assert fit.residual < 1e-10


def test_decay_fit_delta_is_edge_case():
    psi = np.zeros(21)
    psi[10] = 1.0
    fit = decay_fit(psi, center="peak")
    assert fit.edge_case and math.isinf(fit.gamma)
    with pytest.raises(AllZeroTail):
        decay_fit(np.zeros(5))


def test_dual_eigenvectors_decay_at_log_two():
    # supercritical dual: eigenvectors decay at log(1/lam); xi = 0 is avoided
    # because the reflection n -> -n then pairs states into two-hump mixtures
    sec = dual_section(make_amo(0.5), (233, 377), 0.1, 100)
    _, vecs = sec.eigenpairs()
    gammas = np.array([decay_fit(vecs[:, k], center="peak").gamma for k in range(vecs.shape[1])
                       if abs(int(np.argmax(np.abs(vecs[:, k]))) - 100) <= 50])
    close = np.abs(gammas / math.log(2) - 1) < 0.15
    assert abs(np.median(gammas) / math.log(2) - 1) < 0.15
    assert close.mean() > 0.9


def test_lipschitz_constant():
    assert lipschitz_gamma(1.0, 1.0).Gamma == pytest.approx(GAMMA_AT_ONE, rel=1e-13)
    assert lipschitz_gamma(2.0, 1.0).bound == pytest.approx(2 * GAMMA_AT_ONE, rel=1e-13)
    assert lipschitz_gamma(1.0, 40.0).Gamma < 1e-15
    assert lipschitz_gamma(1.0, math.inf).Gamma == 0.0
    with pytest.raises(GammaNonPositive):
        lipschitz_gamma(1.0, 0.0)


def test_frequency_shift_within_bound():
    r = shift_check(make_amo(0.5), (1, 3))
    assert r.holds and r.shift <= r.bound + r.residual
