import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from harperlab.errors import StripExceeded
from harperlab.potential import (
    TrigPotential,
    dual_kernel,
    eval_complex,
    from_csv,
    from_kernel,
    make_amo,
    make_fourier,
    parse_potential,
    strip_norm_bound,
    trig_extrema,
)


def test_amo_values():
    assert make_amo(0.0).is_zero
    assert make_amo(0.5)(0.0) == pytest.approx(1.0)
    assert make_amo(1.0)(0.25) == pytest.approx(0.0, abs=1e-15)


def test_amo_on_imaginary_axis():
    eps = 0.3
    assert eval_complex(make_amo(1.0), 1j * eps) == pytest.approx(2 * math.cosh(2 * math.pi * eps))


def test_eval_outside_strip_rejected():
    v = TrigPotential([0.5, 0.0, 0.5], delta=0.2)
    with pytest.raises(StripExceeded):
        eval_complex(v, 0.3j)


def test_strip_norm_bound_amo():
    lam, delta = 0.7, 0.15
    b = strip_norm_bound(make_amo(lam), delta).bound
    assert b == pytest.approx(2 * lam * math.exp(2 * math.pi * delta))
    assert strip_norm_bound(make_amo(0.0), 0.5).bound == 0.0


def test_non_hermitian_rejected():
    with pytest.raises(ValueError):
        TrigPotential([1.0, 0.0, 2.0])


def test_outer_zero_harmonics_trimmed():
    v = make_fourier({0: 1.0, 3: 0.0, -3: 0.0})
    assert v.degree == 0


def test_dual_kernel_roundtrip():
    v = make_fourier({0: 0.3, 1: 0.2 + 0.1j, -1: 0.2 - 0.1j, 2: 0.4j, -2: -0.4j})
    k = dual_kernel(v)
    assert k[v.degree] == pytest.approx(0.3)
    assert from_kernel(k) == v
    assert list(dual_kernel(make_amo(0.8))) == [0.8, 0, 0.8]


def test_csv_roundtrip(tmp_path):
    path = tmp_path / "v.csv"
    path.write_text("k,re,im\n0,0.5,0\n1,0.25,0.1\n-1,0.25,-0.1\n", encoding="utf-8")
    v = from_csv(path)
    assert v.coeff(1) == pytest.approx(0.25 + 0.1j)
    assert parse_potential(f"fourier:{path}") == v


def test_csv_rejects_nonhermitian_and_duplicates(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,0.25,0.1\n-1,0.25,0.1\n", encoding="utf-8")
    with pytest.raises(ValueError):
        from_csv(bad)
    dup = tmp_path / "dup.csv"
    dup.write_text("0,1,0\n0,2,0\n", encoding="utf-8")
    with pytest.raises(ValueError):
        from_csv(dup)


def test_parse_potential_errors():
    with pytest.raises(ValueError):
        parse_potential("amo:abc")
    with pytest.raises(ValueError):
        parse_potential("gauss:1")


def random_potential(seed: int, d: int) -> TrigPotential:
    rng = np.random.default_rng(seed)
    c = rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1)
    c[0] = c[0].real
    return TrigPotential(np.concatenate([np.conj(c[:0:-1]), c]))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6))
def test_extrema_never_worse_than_dense_grid(seed, d):
    v = random_potential(seed, d)
    lo, _, hi, _ = trig_extrema(v.coeffs)
    vals = v(np.linspace(0, 1, 20001))
    assert lo <= vals.min() + 1e-12
    assert hi >= vals.max() - 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 5), st.floats(0.0, 0.3))
def test_strip_bound_dominates_grid(seed, d, delta):
    v = random_potential(seed, d)
    x = np.linspace(0, 1, 257)
    eps = np.linspace(-delta, delta, 9)
    z = x[:, None] + 1j * eps[None, :]
    assert np.max(np.abs(v.at(z))) <= strip_norm_bound(v, delta).bound * (1 + 1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.floats(-1, 1), st.floats(-0.5, 0.5))
def test_conjugate_symmetry(seed, x, eps):
    v = random_potential(seed, 3)
    z = complex(x, eps)
    assert v.at(z.conjugate()) == pytest.approx(np.conj(v.at(z)), rel=1e-12, abs=1e-12)
