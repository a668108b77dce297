"""Periodic approximants: discriminants, their phase-Fourier structure, Floquet
bands, the union/intersection spectral sets, IDS and butterfly tables."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal, eigvalsh

from ._parallel import parallel_map
from .cocycle import orbit_products
from .errors import EigensolverFailure, StripExceeded, ToleranceUnreachable
from .intervals import IntervalSet
from .numtheory import as_rational
from .polylevel import DistinctRootPoly, analyze
from .potential import TrigPotential, trig_critical_points

__all__ = [
    "discriminant",
    "DiscriminantProfile",
    "theta_fourier",
    "bloch_matrix",
    "BandSpectrum",
    "band_edges",
    "discriminant_poly",
    "theta_envelope",
    "spectral_set",
    "set_limit",
    "ids_rational",
    "ids_finite_section",
    "butterfly_table",
    "floquet_checks",
    "reduced_fractions",
]


def _phases(p: int, q: int) -> np.ndarray:
    return (np.arange(q) * p % q) / q


def _scaled_traces(v: TrigPotential, p: int, q: int, E, theta):
    """``(u, log_s)`` with trace ``= u * exp(log_s)`` for broadcast ``E``, ``theta``."""
    E, theta = np.broadcast_arrays(np.asarray(E), np.asarray(theta))
    shape = E.shape
    Ef, thf = E.ravel(), theta.ravel()
    ph = _phases(p, q)[:, None] + thf[None, :]
    if np.iscomplexobj(thf):
        vals = v.at(ph)
    else:
        vals = v(ph)
    m00, _, _, m11, ls = orbit_products(Ef[None, :] - vals)
    return (m00 + m11).reshape(shape), ls.reshape(shape)


def discriminant(v: TrigPotential, pq, theta, E, eps: float = 0.0):
    """Trace of the ``q``-step transfer product; complex when ``eps != 0``."""
    p, q = as_rational(pq)
    if abs(eps) > v.delta:
        raise StripExceeded(f"|eps| exceeds strip radius {v.delta}")
    th = np.asarray(theta, dtype=float)
    if eps != 0:
        th = th + 1j * eps
    u, ls = _scaled_traces(v, p, q, E, th)
    t = u * np.exp(ls)
    if eps == 0:
        t = np.real(t)
    return t.item() if np.ndim(t) == 0 else t


@dataclass(frozen=True)
class DiscriminantProfile:
    """Phase-Fourier coefficients ``a_k`` of ``t(theta) = sum a_k e^{2 pi i q k theta}``.

    ``coeffs[k + d] * exp(log_scale) = a_k``; ``log_abs`` keeps ``log |a_k|``
    even when ``a_k`` underflows relative to the largest coefficient.
    """

    E: float
    p: int
    q: int
    coeffs: np.ndarray
    log_scale: float
    log_abs: np.ndarray

    @property
    def degree(self) -> int:
        return self.coeffs.size // 2

    def a(self, k: int) -> complex:
        d = self.degree
        if abs(k) > d:
            return 0j
        return complex(self.coeffs[k + d]) * math.exp(self.log_scale)

    @property
    def a0(self) -> float:
        return self.a(0).real

    def abs_coeffs(self) -> np.ndarray:
        return np.exp(self.log_abs)

    def evaluate(self, theta, eps: float = 0.0):
        theta = np.asarray(theta, dtype=float)
        d = self.degree
        ks = np.arange(-d, d + 1)
        w = self.coeffs * np.exp(-2 * np.pi * self.q * ks * eps)
        z = np.exp(2j * np.pi * self.q * np.multiply.outer(theta, ks)) @ w
        z = z * math.exp(self.log_scale)
        return np.real(z) if eps == 0 else z


def _dft_coeffs(v, p, q, E, shift: float):
    """Coefficients ``a_k exp(-2 pi q k shift)`` from ``2d+1`` samples at
    ``theta_m + i shift``; returned normalized with a log scale."""
    d = v.degree
    M = 2 * d + 1
    th = np.arange(M) / (q * M)
    if shift != 0:
        th = th + 1j * shift
    u, ls = _scaled_traces(v, p, q, np.full(M, E, dtype=float), th)
    top = float(np.max(ls))
    t = u * np.exp(ls - top)
    c = np.fft.fft(t) / M  # c[k mod M] for k = -d..d
    ks = np.arange(-d, d + 1)
    return c[ks % M], top


def theta_fourier(v: TrigPotential, pq, E: float, refine: bool = False) -> DiscriminantProfile:
    """Exact phase-Fourier coefficients of the discriminant at energy ``E``.

    The discriminant has phase-Fourier support in ``q Z`` intersected with
    ``[-q d, q d]``, so a ``2d+1``-point transform over one period recovers it
    exactly.  With ``refine``, each ``a_k`` (``k >= 1``) is re-measured at an
    imaginary phase shift that lifts it to within two decades of the dominant
    coefficient, so small harmonics keep full relative precision.
    """
    p, q = as_rational(pq)
    E = float(E)
    d = v.degree
    c, top = _dft_coeffs(v, p, q, E, 0.0)
    log_abs = np.full(2 * d + 1, -np.inf)
    nz = c != 0
    log_abs[nz] = np.log(np.abs(c[nz])) + top
    phase = np.where(nz, c / np.where(nz, np.abs(c), 1.0), 0.0)
    if refine and d > 0:
        step = 1.0 / (np.pi * q)
        n_steps = int(v.delta / step)
        for k in range(1, d + 1):
            best = (np.abs(c[k + d]) / np.max(np.abs(c)), log_abs[k + d], phase[k + d])
            if best[0] >= 1e-2:
                continue
            for m in range(1, n_steps + 1):
                eta = -m * step
                cs, tops = _dft_coeffs(v, p, q, E, eta)
                big = np.max(np.abs(cs))
                ratio = np.abs(cs[k + d]) / big if big > 0 else 0.0
                if ratio > best[0] and cs[k + d] != 0:
                    # undo the exp(2 pi q k |eta|) amplification
                    la = math.log(abs(cs[k + d])) + tops + 2 * np.pi * q * k * eta
                    best = (ratio, la, cs[k + d] / abs(cs[k + d]))
                if ratio >= 1e-2:
                    break
            log_abs[k + d] = best[1]
            phase[k + d] = best[2]
            # real energy: the discriminant is real on the real line
            log_abs[d - k] = best[1]
            phase[d - k] = np.conj(best[2])
    phase[d] = np.sign(phase[d].real) if phase[d] != 0 else 0.0
    ref = float(np.max(log_abs)) if np.any(np.isfinite(log_abs)) else 0.0
    coeffs = np.where(np.isfinite(log_abs), phase * np.exp(log_abs - ref), 0.0)
    return DiscriminantProfile(E, p, q, coeffs.astype(complex), ref, log_abs)


def bloch_matrix(v: TrigPotential, pq, theta: float, k: float) -> np.ndarray:
    """``q x q`` Floquet-Bloch matrix with corner phases ``e^{+-ik}``;
    ``det(E - H) = t(E) - 2 cos k``."""
    p, q = as_rational(pq)
    diag = v(theta + _phases(p, q))
    if q == 1:
        return np.array([[diag[0] + 2 * math.cos(k)]], dtype=complex)
    H = np.diag(diag).astype(complex)
    idx = np.arange(q - 1)
    H[idx, idx + 1] = 1.0
    H[idx + 1, idx] = 1.0
    H[0, q - 1] += np.exp(-1j * k)
    H[q - 1, 0] += np.exp(1j * k)
    return H


def _bloch_eigs(v, p, q, theta, k):
    try:
        H = bloch_matrix(v, (p, q), theta, k)
        if k == 0 or k == math.pi:
            return np.sort(eigvalsh(H.real))
        return np.sort(eigvalsh(H))
    except np.linalg.LinAlgError as exc:
        raise EigensolverFailure(str(exc)) from exc


@dataclass(frozen=True)
class BandSpectrum:
    p: int
    q: int
    theta: float
    bands: tuple[tuple[float, float], ...]

    def as_set(self, tol: float = 0.0) -> IntervalSet:
        return IntervalSet(self.bands, tol)

    @property
    def edges(self) -> np.ndarray:
        return np.array([x for b in self.bands for x in b])


def band_edges(v: TrigPotential, pq, theta: float) -> BandSpectrum:
    """The ``q`` bands ``{E : |t(theta, E)| <= 2}`` from periodic and
    antiperiodic eigenvalues, listed bottom to top."""
    p, q = as_rational(pq)
    ev = np.sort(np.concatenate([_bloch_eigs(v, p, q, theta, 0.0),
                                 _bloch_eigs(v, p, q, theta, math.pi)]))
    bands = tuple((float(ev[2 * i]), float(ev[2 * i + 1])) for i in range(q))
    return BandSpectrum(p, q, float(theta), bands)


def discriminant_poly(v: TrigPotential, pq, theta: float) -> DistinctRootPoly:
    """``t(theta, .)`` as a monic polynomial through its ``q`` real roots
    (eigenvalues of the Bloch matrix at quasi-momentum ``pi/2``)."""
    p, q = as_rational(pq)
    roots = _bloch_eigs(v, p, q, theta, math.pi / 2)
    return DistinctRootPoly(1.0, roots, eps_sep=0.0)


def theta_envelope(v: TrigPotential, pq, E: float, refine: bool = False,
                   profile: DiscriminantProfile | None = None):
    """``(min_theta t, max_theta t, min_theta |t|, max_theta |t|)`` at energy ``E``."""
    prof = profile or theta_fourier(v, pq, E, refine=refine)
    c = prof.coeffs
    d = c.size // 2
    ks = np.arange(-d, d + 1)
    if d == 0 or not np.any(c[ks != 0]):
        f = float(np.real(c[d])) * math.exp(prof.log_scale)
        return f, f, abs(f), abs(f)
    y = trig_critical_points(c)
    vals = np.real(np.exp(2j * np.pi * np.multiply.outer(y, ks)) @ c) * math.exp(prof.log_scale)
    fmin, fmax = float(np.min(vals)), float(np.max(vals))
    amin = 0.0 if fmin < 0 < fmax else min(abs(fmin), abs(fmax))
    return fmin, fmax, amin, max(abs(fmin), abs(fmax))


def _env_fn(v, pq, mode):
    if mode == "union":
        return lambda E: theta_envelope(v, pq, E)[2] - 2.0
    return lambda E: theta_envelope(v, pq, E)[3] - 2.0


def _bisect(g, inside: float, outside: float, tol: float) -> float:
    """Boundary between ``g <= 0`` (at ``inside``) and ``g > 0`` (at ``outside``)."""
    while abs(outside - inside) > tol:
        mid = 0.5 * (inside + outside)
        if g(mid) <= 0:
            inside = mid
        else:
            outside = mid
    return 0.5 * (inside + outside)


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    out, start = [], None
    for i, m in enumerate(mask):
        if m and start is None:
            start = i
        elif not m and start is not None:
            out.append((start, i - 1))
            start = None
    if start is not None:
        out.append((start, len(mask) - 1))
    return out


def _resolve_segment(g, lo, hi, tol, lo_inside: bool | None, hi_inside: bool | None,
                     samples: int = 33) -> list[tuple[float, float]]:
    """Components of ``{g <= 0}`` within ``[lo, hi]`` to resolution ``tol``."""
    xs = np.linspace(lo, hi, samples)
    vals = np.array([g(x) for x in xs])
    inside = vals <= 0
    if lo_inside is not None:
        inside[0] = lo_inside
    if hi_inside is not None:
        inside[-1] = hi_inside
    comps = []
    for i0, i1 in _runs(inside):
        a = xs[i0] if i0 == 0 else _bisect(g, xs[i0], xs[i0 - 1], tol)
        b = xs[i1] if i1 == samples - 1 else _bisect(g, xs[i1], xs[i1 + 1], tol)
        comps.append((a, b))
    return comps


def _walk_out(g, edge: float, direction: float, limit: float, tol: float) -> float:
    """From ``edge`` (inside), step outward until ``g > 0`` and bisect back."""
    h = max(tol, 1e-6 * max(1.0, abs(edge)))
    x_in = edge
    while True:
        x = x_in + direction * h
        if (x - limit) * direction >= 0:
            x = limit
            if g(x) <= 0:
                return x
        if g(x) > 0:
            return _bisect(g, x_in, x, tol)
        x_in = x
        h *= 2.0


def spectral_set(v: TrigPotential, pq, mode: str = "union", E_window=None,
                 tol: float = 1e-8, n_theta: int = 64) -> IntervalSet:
    """``S+`` (``mode='union'``: some phase has ``|t| <= 2``) or ``S-``
    (``mode='intersection'``: every phase has ``|t| <= 2``).

    Band edges over a phase grid seed the search; each boundary is then
    located by bisection on the exact phase envelope of ``|t|``.
    """
    mode = {"splus": "union", "sminus": "intersection"}.get(mode, mode)
    if mode not in ("union", "intersection"):
        raise ValueError(f"unknown mode {mode!r}")
    p, q = as_rational(pq)
    if E_window is None:
        W = 2.0 + v.l1_norm()
        E_window = (-W - 1.0, W + 1.0)
    lo_w, hi_w = map(float, E_window)
    scale = max(1.0, abs(lo_w), abs(hi_w))
    if not tol > 1e-14 * scale:
        raise ToleranceUnreachable(f"tol={tol} below attainable {1e-14 * scale:.1e}")
    thetas = np.arange(n_theta) / (n_theta * q)
    band_sets = [band_edges(v, (p, q), th).as_set() for th in thetas]
    g = _env_fn(v, (p, q), mode)
    comps: list[tuple[float, float]] = []
    if mode == "union":
        seed = IntervalSet.union_all(band_sets, tol=0.0).clip(lo_w, hi_w)
        ivs = list(seed.intervals)
        if not ivs:
            return IntervalSet((), tol)
        left = _walk_out(g, ivs[0][0], -1.0, lo_w, tol)
        right = _walk_out(g, ivs[-1][1], +1.0, hi_w, tol)
        cur_lo = left
        for (a0, b0), (a1, b1) in zip(ivs[:-1], ivs[1:]):
            pieces = _resolve_segment(g, b0, a1, tol, True, True)
            if len(pieces) == 1 and pieces[0] == (b0, a1):
                continue  # gap closes
            comps.append((cur_lo, pieces[0][1]))
            comps.extend(pieces[1:-1])
            cur_lo = pieces[-1][0]
        comps.append((cur_lo, right))
    else:
        seed = IntervalSet.intersection_all(band_sets).clip(lo_w, hi_w)
        for a0, b0 in seed.intervals:
            if b0 - a0 <= tol:
                continue
            comps.extend(_resolve_segment(g, a0, b0, tol, None, None))
    # gaps narrower than the bisection width are not resolved
    merged: list[list[float]] = []
    for a, b in sorted(comps):
        if merged and a - merged[-1][1] <= tol:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return IntervalSet(merged, tol)


def set_limit(sets: Sequence[IntervalSet], tail_start: int):
    """Tail intersection (finite liminf), tail union (finite limsup) and the
    measure of their difference over ``sets[tail_start:]``."""
    if len(sets) < tail_start + 2:
        raise ValueError("need at least two sets in the tail")
    tail = list(sets[tail_start:])
    liminf = IntervalSet.intersection_all(tail)
    limsup = IntervalSet.union_all(tail)
    return liminf, limsup, (limsup - liminf).measure


def ids_rational(v: TrigPotential, pq, theta: float, E: float) -> float:
    """Integrated density of states of the period-``q`` operator at phase ``theta``."""
    p, q = as_rational(pq)
    bs = band_edges(v, (p, q), theta)
    below = 0
    for i, (lo, hi) in enumerate(bs.bands):
        if E >= hi:
            below += 1
            continue
        if E <= lo:
            break
        t = float(discriminant(v, (p, q), theta, E))
        s = (-1) ** (q - i)
        phi = math.acos(min(1.0, max(-1.0, s * t / 2.0))) / math.pi
        return (below + phi) / q
    return below / q


def ids_finite_section(v: TrigPotential, pq, theta: float, E, size: int | None = None):
    """Eigenvalue counting function of a Dirichlet section (default ``100 q`` sites)."""
    p, q = as_rational(pq)
    L = size or 100 * q
    diag = v(theta + (np.arange(L) * p % q) / q)
    try:
        ev = eigh_tridiagonal(diag, np.ones(L - 1), eigvals_only=True)
    except np.linalg.LinAlgError as exc:
        raise EigensolverFailure(str(exc)) from exc
    E = np.asarray(E, dtype=float)
    out = np.searchsorted(ev, E, side="right") / L
    return float(out) if out.ndim == 0 else out


def reduced_fractions(qmax: int) -> list[tuple[int, int]]:
    """Reduced ``p/q`` in ``[0, 1)`` with ``q <= qmax``, ordered by value."""
    if qmax < 1:
        raise ValueError("qmax must be >= 1")
    out = [(p, q) for q in range(1, qmax + 1) for p in range(q) if math.gcd(p, q) == 1]
    return sorted(out, key=lambda pq: (pq[0] / pq[1], pq[1]))


def butterfly_table(v: TrigPotential, qmax: int, mode: str = "union",
                    tol: float = 1e-8) -> list[tuple[tuple[int, int], IntervalSet]]:
    """``spectral_set`` for every reduced frequency with denominator ``<= qmax``."""
    fracs = reduced_fractions(qmax)
    sets = parallel_map(lambda pq: spectral_set(v, pq, mode, tol=tol), fracs)
    return list(zip(fracs, sets))


def floquet_checks(v: TrigPotential, pq, theta: float, tol: float = 1e-8) -> dict:
    """Structural facts about the discriminant at a fixed phase: monic of
    degree ``q``, ``q`` simple real roots, ``|t| >= 2`` at interior critical
    points and exactly ``q`` bands."""
    p, q = as_rational(pq)
    bs = band_edges(v, (p, q), theta)
    W = max(abs(bs.bands[0][0]), abs(bs.bands[-1][1])) + 1.0
    # leading coefficient from a Chebyshev-node interpolant in E
    nodes = W * np.cos(np.pi * (np.arange(q + 1) + 0.5) / (q + 1))
    vals = np.asarray(discriminant(v, (p, q), theta, nodes), dtype=float)
    cheb = np.polynomial.chebyshev.Chebyshev.fit(nodes / W, vals, q, domain=[-1, 1])
    lc = float(cheb.coef[-1]) * (2.0 ** (q - 1) if q > 1 else 1.0) / W**q
    edge_vals = np.asarray(discriminant(v, (p, q), theta, bs.edges), dtype=float)
    signs = np.sign(edge_vals)
    sign_changes = int(np.sum(signs[:-1] * signs[1:] < 0))
    zeta = analyze(discriminant_poly(v, (p, q), theta)).zeta if q > 1 else math.inf
    return {
        "leading_coefficient": lc,
        "monic": abs(lc - 1.0) <= 1e-8,
        "root_count": sign_changes,
        "distinct_real_roots": sign_changes == q,
        "zeta": zeta,
        "critical_values_outside": zeta >= 2.0 - tol,
        "band_count": len(bs.bands),
        "bands_ok": len(bs.bands) == q,
    }
