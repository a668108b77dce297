import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from harperlab.errors import LevelExceedsZeta, NodesCoincide, PreconditionViolated, RootSeparationTooSmall
from harperlab.polylevel import (
    DistinctRootPoly,
    analyze,
    band_decompose,
    bound_report,
    cheb_band_measure,
    chebyshev,
    extremality_check,
    interp_gradient_check,
    level_measure,
    level_solutions,
    random_distinct_root_poly,
    remez_estimate,
    remez_ratio,
    rescaled_chebyshev,
    sublevel_bound,
    verify,
)


def brute_measure(p, a, b, pts=400_001):
    lo, hi = p.roots[0], p.roots[-1]
    # pad the root hull far enough that p leaves [a, b]
    pad = 1.0 + (max(abs(a), abs(b)) / abs(p.lc)) ** (1.0 / p.n)
    x = np.linspace(lo - pad, hi + pad, pts)
    y = p(x)
    return float(np.mean((y > a) & (y < b)) * (x[-1] - x[0]))


def test_zeta_examples():
    assert analyze(chebyshev(3)).zeta == pytest.approx(1.0, abs=1e-14)
    p = DistinctRootPoly(1.0, [-1.0, 0.0, 1.0])
    assert analyze(p).zeta == pytest.approx(2 / (3 * math.sqrt(3)), abs=1e-14)
    assert analyze(DistinctRootPoly(2.0, [0.5])).zeta == math.inf


def test_level_measure_examples():
    p = DistinctRootPoly(1.0, [-1.0, 1.0])
    assert level_measure(p, -1, 1) == pytest.approx(2 * math.sqrt(2), abs=1e-13)
    assert level_measure(p, 0, 1) == pytest.approx(2 * (math.sqrt(2) - 1), abs=1e-13)
    assert level_measure(DistinctRootPoly(1.0, [0.0]), 0, 1) == pytest.approx(1.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_level_measure_matches_grid(seed):
    rng = np.random.default_rng(seed)
    p = random_distinct_root_poly(rng, int(rng.integers(1, 6)))
    a, b = np.sort(rng.uniform(-2, 2, 2))
    span = p.roots[-1] - p.roots[0] + 2 * (1.0 + (2 / abs(p.lc)) ** (1 / p.n))
    assert level_measure(p, a, b) == pytest.approx(brute_measure(p, a, b), abs=2e-4 * span)


def test_level_solutions_sorted():
    p = chebyshev(4)
    xs = level_solutions(p, 0.5)
    assert xs.size == 4 and np.all(np.diff(xs) > 0)
    assert np.allclose(p(xs), 0.5, atol=1e-12)


def test_band_decompose_t2():
    cuts = band_decompose(chebyshev(2), 0.0, 1.0)
    s = 1 / math.sqrt(2)
    got = sorted((c.lo, c.hi) for c in cuts)
    assert got == [pytest.approx((-1, -s)), pytest.approx((s, 1))]


def test_band_decompose_requires_window_within_zeta():
    with pytest.raises(LevelExceedsZeta):
        band_decompose(chebyshev(3), -0.5, 1.5)


def test_rescaled_chebyshev_identity():
    for n in (2, 3, 5):
        p = rescaled_chebyshev(2.0 ** (n - 1), 1.0, n)
        assert np.allclose(p.roots, chebyshev(n).roots, atol=1e-14)


@pytest.mark.parametrize("n", [2, 3, 6])
def test_extremality_equality_for_chebyshev(n):
    p = rescaled_chebyshev(3.0, 0.7, n)
    for j in range(1, n + 1):
        lhs, rhs, ok = extremality_check(p, -0.2, 0.5, j)
        assert ok and lhs == pytest.approx(rhs, rel=1e-9)


def test_extremality_cubic():
    p = DistinctRootPoly(1.0, [-1.0, 0.0, 1.0])
    z = analyze(p).zeta
    for j in (1, 2, 3):
        assert extremality_check(p, 0.0, z / 2, j)[2]


def test_cheb_band_formula_matches_direct():
    rng = np.random.default_rng(3)
    for _ in range(40):
        n = int(rng.integers(1, 9))
        j = int(rng.integers(1, n + 1))
        a, b = np.sort(rng.uniform(-1, 1, 2))
        direct = band_decompose(chebyshev(n), a, b)[j - 1].measure
        assert cheb_band_measure(n, j, a, b)[0] == pytest.approx(direct, abs=1e-9)


def test_polya_equality_for_quadratic():
    p = DistinctRootPoly(-1.0, [-1.0, 1.0])
    rep = bound_report(p, 0.9, 1.0)
    assert rep.measured == pytest.approx(rep.polya, rel=1e-12)


def test_sublevel_bound_fails_for_cap_windows():
    # 1 - x^2 on (0.9, 1): the level set is a cap around the maximum and the
    # solutions of p = a bound a hull narrower than the set
    p = DistinctRootPoly(-1.0, [-1.0, 1.0])
    rep = bound_report(p, 0.9, 1.0)
    assert rep.measured == pytest.approx(2 * math.sqrt(0.1), rel=1e-12)
    assert rep.sublevel == pytest.approx(2 * 2 * math.sqrt(0.1) * math.sqrt(0.1 / 1.9), rel=1e-12)
    assert not rep.holds["sublevel"]


def test_sublevel_bound_preconditions():
    p = chebyshev(3)
    with pytest.raises(PreconditionViolated):
        sublevel_bound(p, -0.5, 0.5)
    with pytest.raises(PreconditionViolated):
        sublevel_bound(DistinctRootPoly(1.0, [0.0]), 0.0, 1.0)


def test_root_separation_enforced():
    with pytest.raises(RootSeparationTooSmall):
        DistinctRootPoly(1.0, [0.0, 1e-12, 1.0])


def test_gradient_formula_against_differences():
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = int(rng.integers(2, 7))
        xs = np.sort(rng.uniform(-2, 2, n))
        if np.min(np.diff(xs)) < 0.05:
            continue
        ys = rng.normal(size=n)
        s = lambda x: 2.0 + math.sin(x)
        ds = lambda x: math.cos(x)
        _, _, err = interp_gradient_check(xs, ys, s, float(rng.uniform(-2, 2)), int(rng.integers(1, n + 1)), ds)
        assert err < 1e-5


def test_gradient_symmetric_pattern():
    xs, ys = [-1.0, 1.0], [0.5, 0.5]
    s = lambda x: 1.0
    ds = lambda x: 0.0
    f1, _, _ = interp_gradient_check(xs, ys, s, 0.3, 1, ds)
    f2, _, _ = interp_gradient_check(xs, ys, s, -0.3, 2, ds)
    assert f1 == pytest.approx(-f2, rel=1e-12)


def test_gradient_rejects_coincident_nodes():
    with pytest.raises(NodesCoincide):
        interp_gradient_check([0.0, 0.0], [1.0, 1.0], lambda x: 1.0, 0.5, 1)


def test_remez_ratio_examples():
    full, sup_x = remez_ratio([1.0, 0.5j, -0.3], [(0.0, 1.0)])
    assert full == pytest.approx(sup_x, rel=1e-12)
    # a single harmonic has constant modulus
    full, sup_x = remez_ratio([0.0, 0.0, 2.0], [(0.1, 0.15)])
    assert full == pytest.approx(2.0) and sup_x == pytest.approx(2.0)


def test_remez_estimate_bounded_by_measure_scale():
    est = remez_estimate(50, 3, [0.2, 0.5], seed=1)
    assert np.all(est.values >= est.measures * (1 - 1e-12))
    assert est.C_hat == pytest.approx(float(np.max(est.values)))


def test_verify_small_run():
    rep = verify(n=6, trials=60, seed=5)
    v = rep.violations
    for name in ("polya", "band_count", "band_sum", "extremality", "chebyshev_formula", "corollary"):
        assert v[name] == 0, name
    assert rep.counts["polya"] == 60
    again = verify(n=6, trials=60, seed=5)
    assert again.to_dict() == rep.to_dict()
