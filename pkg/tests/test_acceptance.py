"""End-to-end acceptance checks, one criterion marker per statement.

The terminal summary prints one PASS/FAIL line per criterion.
"""
import json
import math
import time

import numpy as np
import pytest

from harperlab.chambers import chambers_amo_check, decay_fit, deviation, log_deviation
from harperlab.cli import main
from harperlab.cocycle import SANDWICH_UPPER, acceleration, local_profile, spectral_radius_bounds
from harperlab.duality import invariance_check, scaling_check
from harperlab.intervals import IntervalSet, hausdorff
from harperlab.numtheory import Frequency, cf_expand
from harperlab.polylevel import interp_gradient_check, verify
from harperlab.potential import TrigPotential, make_amo
from harperlab.spectra import ids_finite_section, ids_rational, set_limit, spectral_set

criterion = pytest.mark.criterion


def _fractions(q):
    return [p for p in range(1, q) if math.gcd(p, q) == 1]


@criterion(1, "Chambers identity exact on 64x64 grids, q = 2..20")
def test_c1_chambers_exactness():
    start = time.perf_counter()
    worst = 0.0
    for lam in (0.25, 0.5, 0.9):
        for q in range(2, 21):
            ps = _fractions(q)
            for p in {ps[0], ps[len(ps) // 2]}:
                r = chambers_amo_check(lam, (p, q))
                # |E|^q bounds the partial transfer products, hence the rounding of t
                worst = max(worst, r.max_guarded_error)
    assert worst < 1e-8
    assert time.perf_counter() - start < 60


@criterion(2, "deviation equals 2 lam^q; decay rate tends to log 0.5")
def test_c2_deviation_decay():
    lam = 0.5
    qs = []
    for q in range(8, 41):
        for p in {1, _fractions(q)[-1]}:
            assert deviation(make_amo(lam), (p, q), 0.3) == pytest.approx(2 * lam**q, rel=1e-10)
        qs.append(q)
    fit = decay_fit(make_amo(lam), [(1, q) for q in qs], 0.3)
    assert abs(-fit.c - math.log(lam)) < 0.01
    rates = [log_deviation(make_amo(lam), pq, 0.3) / pq[1] for pq in [(34, 89), (55, 144), (89, 233)]]
    assert all(abs(r - math.log(lam)) < 0.01 for r in rates)
    assert all(abs(a - math.log(lam)) > abs(b - math.log(lam)) for a, b in zip(rates, rates[1:]))


@criterion(3, "S- closed form at q = 2 and constant measure across p/q")
def test_c3_sminus_closed_form():
    tol = 1e-8
    for lam in (0.25, 0.5, 0.75):
        s = spectral_set(make_amo(lam), (1, 2), "intersection", tol=tol)
        assert abs(s.measure - (4 - 4 * lam)) < 10 * tol
    s = spectral_set(make_amo(0.5), (1, 2), "intersection", tol=tol)
    assert len(s) == 2
    assert np.allclose(s.endpoints(), [-2, -1, 1, 2], atol=tol)
    measures = [spectral_set(make_amo(0.5), pq, "intersection").measure for pq in [(1, 2), (1, 3), (2, 5), (3, 8)]]
    assert max(measures) - min(measures) < 1e-3


@criterion(4, "set-limit diagnostics decrease along golden convergents")
def test_c4_set_limit():
    start = time.perf_counter()
    seq = list(cf_expand(Frequency.golden(), 8))
    assert seq[-1] == (13, 21)
    for mode in ("intersection", "union"):
        sets = [spectral_set(make_amo(0.5), pq, mode) for pq in seq]
        gaps = [set_limit(sets, i)[2] for i in range(len(sets) - 1)]
        steps = [(a ^ b).measure for a, b in zip(sets, sets[1:])]
        assert gaps[-3] > gaps[-2] > gaps[-1]
        assert steps[-3] > steps[-2] > steps[-1]
    assert time.perf_counter() - start < 600


@criterion(5, "trace-radius sandwich on random SL(2,C) and its sharp cases")
def test_c5_trace_sandwich():
    rng = np.random.default_rng(2024)
    for _ in range(10_000):
        M = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        M = M * rng.uniform(0.1, 5.0)
        M = M / np.sqrt(np.linalg.det(M))
        r = spectral_radius_bounds(M, det_tol=1e-8, check=False)
        assert r.lower * (1 - 1e-12) <= r.rho <= r.upper * (1 + 1e-12)
    r = spectral_radius_bounds(np.eye(2))
    assert r.rho == pytest.approx(1.0, abs=1e-15) and r.rho == pytest.approx(r.lower, abs=1e-15)
    s = 1 + math.sqrt(2)
    M = np.diag([1j * s, -1j / s])
    r = spectral_radius_bounds(M)
    assert r.trace == pytest.approx(2j)
    assert abs(r.rho - s) < 1e-12 and abs(r.upper - SANDWICH_UPPER) < 1e-12


def _interior_energies(lam, pq, mode):
    s = spectral_set(make_amo(lam), pq, mode)
    mids = [0.5 * (a + b) for a, b in s.intervals]
    pick = np.linspace(0, len(mids) - 1, 10).round().astype(int)
    return [mids[i] for i in pick]


@criterion(6, "acceleration is quantized at spectrum-interior energies")
@pytest.mark.parametrize("lam,mode", [(0.5, "intersection"), (2.0, "union")])
def test_c6_acceleration(lam, mode):
    pq = (13, 21)
    v = make_amo(lam)
    for E in _interior_energies(lam, pq, mode):
        for eps0 in (0.05, 0.2, 0.4):
            res = None
            for h in (0.02, 0.01):
                acc = acceleration(local_profile(v, pq, E, eps0, h), eps0, max_residual=math.inf)
                res = acc.residual
                if res < 0.1:
                    break
            assert res < 0.1, (E, eps0, acc)


@criterion(6, "acceleration is quantized at spectrum-interior energies")
def test_c6_free_acceleration_zero():
    acc = acceleration(local_profile(TrigPotential([0.0]), (13, 21), 0.3, 0.1, 0.02), 0.1)
    assert acc.omega_raw == 0.0 and acc.omega == 0


@pytest.fixture(scope="module")
def level_report():
    start = time.perf_counter()
    rep = verify(n=8, trials=1000, seed=0)
    return rep, time.perf_counter() - start


@criterion(7, "level-set suite over 1000 seeded trials")
@pytest.mark.parametrize("check", ["polya", "corollary", "band_count", "band_sum", "extremality", "chebyshev_formula"])
def test_c7_level_suite(level_report, check):
    rep, elapsed = level_report
    assert rep.counts[check] >= 875
    assert rep.violations[check] == 0
    assert elapsed < 120


@criterion(7, "level-set suite over 1000 seeded trials")
@pytest.mark.xfail(strict=True, reason="the diameter form of the sublevel bound fails when the "
                   "level set reaches outside the hull of the solutions of p = a")
@pytest.mark.parametrize("check", ["sublevel", "sublevel_mirrored"])
def test_c7_sublevel_bound(level_report, check):
    rep, _ = level_report
    assert rep.violations[check] == 0


@criterion(8, "interpolation derivative formula against finite differences")
def test_c8_gradient_formula():
    rng = np.random.default_rng(8)
    done = 0
    while done < 1000:
        n = int(rng.integers(1, 7))
        xs = np.sort(rng.uniform(-2, 2, n))
        if n > 1 and np.min(np.diff(xs)) < 0.1:
            continue
        ys = rng.normal(size=n)
        a, w, ph = rng.uniform(0.2, 0.8), rng.uniform(0.5, 2.0), rng.uniform(0, 2 * np.pi)
        s = lambda x: 1.0 + a * math.sin(w * x + ph)
        ds = lambda x: a * w * math.cos(w * x + ph)
        _, _, err = interp_gradient_check(xs, ys, s, float(rng.uniform(-2.5, 2.5)), int(rng.integers(1, n + 1)), ds)
        assert err < 1e-5
        done += 1


@criterion(9, "duality: scaling identity and finite-section invariance")
def test_c9_scaling():
    r = scaling_check(0.5, (1, 2))
    assert r.closed_form_distance < 1e-6
    assert r.numeric_distance < 1e-6


@criterion(9, "duality: scaling identity and finite-section invariance")
@pytest.mark.parametrize("pq", [(1, 2), (1, 3)])
def test_c9_invariance(pq):
    v = make_amo(0.5)
    d400 = invariance_check(v, pq, N=400).distance
    d800 = invariance_check(v, pq, N=800).distance
    assert d400 < 5e-2
    assert d800 <= 0.5 * d400 * (1 + 1e-3)


@criterion(10, "IDS formula agrees with eigenvalue counting and is monotone")
def test_c10_ids():
    rng = np.random.default_rng(10)
    v = make_amo(1.3)
    checked = 0
    while checked < 20:
        q = int(rng.integers(1, 21))
        ps = _fractions(q) or [0]
        p = int(rng.choice(ps))
        th, E = float(rng.random()), float(rng.uniform(-4.8, 4.8))
        assert abs(ids_rational(v, (p, q), th, E) - ids_finite_section(v, (p, q), th, E, size=50 * q)) <= 2 / (50 * q)
        Es = np.linspace(-5, 5, 101)
        vals = [ids_rational(v, (p, q), th, e) for e in Es]
        assert np.all(np.diff(vals) >= -1e-12)
        checked += 1


@criterion(11, "butterfly at qmax 13: one row per reduced p/q, mirror symmetric")
def test_c11_butterfly(tmp_path, capsys):
    out = tmp_path / "butterfly.json"
    start = time.perf_counter()
    code = main(["butterfly", "--qmax", "13", "--potential", "amo:1.0", "--output", str(out)])
    elapsed = time.perf_counter() - start
    assert code == 0 and elapsed < 300
    rows = json.loads(out.read_text(encoding="utf-8"))["rows"]
    expected = {(p, q) for q in range(1, 14) for p in range(q) if math.gcd(p, q) == 1}
    got = {(r["p"], r["q"]) for r in rows}
    assert got == expected and len(rows) == len(expected)
    sets = {(r["p"], r["q"]): IntervalSet([tuple(iv) for iv in r["intervals"]]) for r in rows}
    for (p, q), s in sets.items():
        assert hausdorff(s, sets[((q - p) % q, q)]) < 1e-7
