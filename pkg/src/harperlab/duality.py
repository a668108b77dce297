"""Dual long-range operators and the invariance of the union spectrum.

The dual of ``psi_{n-1} + psi_{n+1} + v(beta n + theta) psi_n`` acts by
convolution with the Fourier coefficients of ``v`` plus the diagonal
``2 cos(2 pi (beta n + xi))``.  Finite sections of it approximate the
union over ``xi`` of its spectra, which coincides with the union spectrum
of the original family.  Exponential decay of dual eigenvectors is measured
by :func:`decay_fit` and fed into the Lipschitz estimate of
:func:`lipschitz_gamma`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import eigh, eigvals_banded

from ._parallel import parallel_map
from .errors import AllZeroTail, EigensolverFailure, GammaNonPositive
from .intervals import IntervalSet, hausdorff
from .numtheory import as_rational
from .potential import TrigPotential, dual_kernel, make_amo
from .spectra import spectral_set

__all__ = [
    "DualFiniteSection",
    "dual_section",
    "dual_spectrum",
    "InvarianceResult",
    "invariance_check",
    "amo_splus_half",
    "ScalingCheck",
    "scaling_check",
    "DecayFit",
    "decay_fit",
    "LipschitzBound",
    "lipschitz_gamma",
    "ShiftCheck",
    "shift_check",
]

_HERM_TOL = 1e-12


@dataclass(frozen=True)
class DualFiniteSection:
    N: int
    beta: float
    xi: float
    matrix: np.ndarray
    boundary: str

    def __post_init__(self):
        M = self.matrix
        scale = max(1.0, float(np.max(np.abs(M))))
        if np.max(np.abs(M - M.conj().T)) > _HERM_TOL * scale:
            raise ValueError("dual section is not hermitian")

    @property
    def sites(self) -> np.ndarray:
        """Lattice labels of the rows, starting at ``-N``."""
        return np.arange(self.matrix.shape[0]) - self.N

    def eigenvalues(self) -> np.ndarray:
        try:
            return np.linalg.eigvalsh(self.matrix)
        except np.linalg.LinAlgError as exc:
            raise EigensolverFailure(str(exc)) from exc

    def eigenpairs(self) -> tuple[np.ndarray, np.ndarray]:
        try:
            return eigh(self.matrix)
        except np.linalg.LinAlgError as exc:
            raise EigensolverFailure(str(exc)) from exc


def _beta_float(beta) -> float:
    if isinstance(beta, (int, float)) and not isinstance(beta, bool):
        return float(beta)
    p, q = as_rational(beta)
    return p / q


def _wrap_length(N: int, beta, d: int) -> int:
    # the diagonal must be periodic on the ring, so the length is a multiple of q
    p, q = as_rational(beta)
    L = q * math.ceil((2 * N + 1) / q)
    while L <= 2 * d:
        L += q
    return L


def _diagonal(beta, xi: float, sites: np.ndarray, v0: float) -> np.ndarray:
    try:
        p, q = as_rational(beta)
        frac = (sites * p % q) / q  # exact residues for rational beta
    except (TypeError, ValueError):
        frac = np.mod(float(beta) * sites, 1.0)
    return v0 + 2.0 * np.cos(2 * np.pi * (frac + xi))


def _couplings(v: TrigPotential, beta, xi: float, N: int, boundary: str):
    """Diagonal plus ``(rows, cols, values)`` of the strictly lower entries."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if boundary not in ("dirichlet", "periodic"):
        raise ValueError(f"unknown boundary {boundary!r}")
    kern = dual_kernel(v)
    d = v.degree
    L = _wrap_length(N, beta, d) if boundary == "periodic" else 2 * N + 1
    diag = _diagonal(beta, xi, np.arange(L) - N, float(kern[d].real))
    rows, cols, vals = [], [], []
    idx = np.arange(L)
    for k in range(1, d + 1):
        c = kern[d + k]
        if c == 0:
            continue
        # (H psi)_n picks up vhat_{n-m} psi_m
        if boundary == "periodic":
            i, j = idx, (idx - k) % L
        else:
            i, j = idx[k:], idx[k:] - k
        rows.append(i)
        cols.append(j)
        vals.append(np.full(i.size, c, dtype=complex))
    if rows:
        return diag, np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)
    e = np.zeros(0, dtype=int)
    return diag, e, e, np.zeros(0, dtype=complex)


def dual_section(v: TrigPotential, beta, xi: float, N: int,
                 boundary: str = "dirichlet") -> DualFiniteSection:
    """Dual operator on the sites ``-N..N``.

    ``boundary='periodic'`` closes the chain into a ring whose length is the
    smallest multiple of ``q`` that is at least ``2N + 1``; it needs a
    rational ``beta``.
    """
    diag, r, c, w = _couplings(v, beta, xi, N, boundary)
    M = np.diag(diag).astype(complex)
    np.add.at(M, (r, c), w)
    np.add.at(M, (c, r), np.conj(w))
    if not np.any(M.imag):
        M = M.real.copy()
    return DualFiniteSection(int(N), _beta_float(beta), float(xi), M, boundary)


def _section_eigs(v, beta, xi, N, boundary) -> np.ndarray:
    diag, r, c, w = _couplings(v, beta, xi, N, boundary)
    L = diag.size
    if r.size == 0:
        return np.sort(diag)
    # interleave 0, L-1, 1, L-2, ... so a ring of bandwidth d becomes a band of width 2d
    if boundary == "periodic":
        order = np.empty(L, dtype=int)
        order[0::2] = np.arange((L + 1) // 2)
        order[1::2] = L - 1 - np.arange(L // 2)
        pos = np.empty(L, dtype=int)
        pos[order] = np.arange(L)
    else:
        pos = np.arange(L)
    pr, pc = pos[r], pos[c]
    up = pr < pc
    row = np.where(up, pr, pc)
    col = np.where(up, pc, pr)
    val = np.where(up, w, np.conj(w))
    u = int(np.max(col - row))
    real = not np.any(val.imag)
    band = np.zeros((u + 1, L), dtype=float if real else complex)
    band[u, pos] = diag
    np.add.at(band, (u + row - col, col), val.real if real else val)
    try:
        return np.sort(eigvals_banded(band, lower=False))
    except np.linalg.LinAlgError as exc:
        raise EigensolverFailure(str(exc)) from exc


def dual_spectrum(v: TrigPotential, beta, xi_grid: int = 64, N: int | None = None,
                  fatten: float | None = None, boundary: str = "periodic") -> IntervalSet:
    """Union over a phase grid of finite-section dual eigenvalues, each
    widened by ``fatten`` (default ``10/N``, with ``N = 50 q`` by default).

    The dual diagonal has period ``1/q`` in ``xi``, so the grid samples
    ``[0, 1/q)``.
    """
    p, q = as_rational(beta)
    N = 50 * q if N is None else int(N)
    eps = 10.0 / N if fatten is None else float(fatten)
    xis = np.arange(xi_grid) / (q * xi_grid)
    eigs = parallel_map(lambda x: _section_eigs(v, (p, q), float(x), N, boundary), xis)
    pts = np.unique(np.concatenate(eigs))
    return IntervalSet([(e - eps, e + eps) for e in pts], 0.0)


class InvarianceResult(NamedTuple):
    distance: float
    passes: bool
    tolerance: float
    dual: IntervalSet
    direct: IntervalSet


def invariance_check(v: TrigPotential, beta, N: int | None = None, xi_count: int = 64,
                     boundary: str = "periodic") -> InvarianceResult:
    """Hausdorff distance between the dual union spectrum and the direct
    union spectrum; passes when it is below ``20/N``, twice the fatten radius."""
    p, q = as_rational(beta)
    N = 50 * q if N is None else int(N)
    dual = dual_spectrum(v, (p, q), xi_count, N, boundary=boundary)
    direct = spectral_set(v, (p, q), "union")
    dist = hausdorff(dual, direct)
    tol = 20.0 / N
    return InvarianceResult(dist, dist < tol, tol, dual, direct)


def amo_splus_half(lam: float) -> IntervalSet:
    """Closed form of the union spectrum at frequency ``1/2`` for ``2 lam cos``."""
    r = 2.0 * math.sqrt(1.0 + lam * lam)
    return IntervalSet([(-r, r)])


class ScalingCheck(NamedTuple):
    closed_form_distance: float | None
    numeric_distance: float


def scaling_check(lam: float, pq=(1, 2), tol: float = 1e-10) -> ScalingCheck:
    """Compare the union spectrum of coupling ``lam`` with ``lam`` times the
    union spectrum of coupling ``1/lam``; the two coincide under duality."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    p, q = as_rational(pq)
    closed = None
    if (p, q) == (1, 2):
        closed = hausdorff(amo_splus_half(lam), amo_splus_half(1.0 / lam).scaled(lam))
    a = spectral_set(make_amo(lam), (p, q), "union", tol=tol)
    b = spectral_set(make_amo(1.0 / lam), (p, q), "union", tol=tol / lam).scaled(lam)
    return ScalingCheck(closed, hausdorff(a, b))


@dataclass(frozen=True)
class DecayFit:
    C: float
    gamma: float
    residual: float
    center: int
    window: tuple[int, int]  # range of |n| used in the fit
    edge_case: bool = False


def decay_fit(psi, center: int | str | None = None, floor: float = 1e-12) -> DecayFit:
    """Fit ``log |psi_n| ~ log C - gamma |n|``.

    ``n`` is measured from ``center``: the middle entry by default, or the
    largest entry when ``center='peak'``.  Entries below ``floor`` times the
    peak are treated as unresolved; the fit uses the outer half of the
    resolved range of ``|n|``.  ``C`` is then the smallest constant for which
    the envelope holds on every resolved entry.
    """
    a = np.abs(np.asarray(psi, dtype=complex))
    if a.ndim != 1 or a.size == 0:
        raise ValueError("psi must be a non-empty vector")
    top = float(a.max())
    if top == 0.0:
        raise AllZeroTail("psi vanishes identically; gamma is unidentifiable")
    if center is None:
        c = a.size // 2
    elif center == "peak":
        c = int(np.argmax(a))
    else:
        c = int(center)
    n = np.abs(np.arange(a.size) - c)
    ok = a > floor * top
    reach = int(n[ok].max())
    if reach == 0:
        return DecayFit(top, math.inf, 0.0, c, (0, 0), True)
    lo = max(1, reach // 2)
    sel = ok & (n >= lo)
    if np.count_nonzero(sel) < 2 or np.unique(n[sel]).size < 2:
        sel = ok & (n >= 1)
    if np.unique(n[sel]).size < 2:
        # a single resolved shell: the rate through the center is the only estimate
        g = float(np.log(top / a[sel].max()) / n[sel].max()) if a[c] == top else 0.0
        C = float(np.max(a[ok] * np.exp(g * n[ok])))
        return DecayFit(C, g, 0.0, c, (lo, reach), True)
    x, y = n[sel].astype(float), np.log(a[sel])
    slope, intercept = np.polyfit(x, y, 1)
    gamma = max(0.0, float(-slope))
    res = float(np.sqrt(np.mean((y - (intercept + slope * x)) ** 2)))
    C = float(np.max(a[ok] * np.exp(gamma * n[ok])))
    return DecayFit(C, gamma, res, c, (lo, reach), False)


class LipschitzBound(NamedTuple):
    Gamma: float
    bound: float  # C * Gamma, the modulus of continuity in beta
    terms: int


def lipschitz_gamma(C: float, gamma: float) -> LipschitzBound:
    """``Gamma = 4 pi (sum_{n in Z} n^2 e^{-2 gamma |n|})^{1/2}``, truncated
    once the terms drop below ``1e-16`` of the partial sum."""
    if not gamma > 0:
        raise GammaNonPositive(f"gamma={gamma} must be positive")
    if C < 0:
        raise ValueError("C must be >= 0")
    if math.isinf(gamma):
        return LipschitzBound(0.0, 0.0, 0)
    total, n = 0.0, 0
    while True:
        n += 1
        term = n * n * math.exp(-2.0 * gamma * n)
        total += term
        # the terms decrease once n exceeds 1/gamma
        if n > 1.0 / gamma and term < 1e-16 * total:
            break
    G = 4.0 * math.pi * math.sqrt(2.0 * total)
    return LipschitzBound(G, C * G, n)


class ShiftCheck(NamedTuple):
    E: float
    fit: DecayFit
    shift: float
    bound: float
    residual: float
    holds: bool


def shift_check(v: TrigPotential, beta, xi: float = 0.0, N: int = 60,
                dbeta: float = 1e-3) -> ShiftCheck:
    """Perturb the dual frequency of a localized dual eigenvector.

    The eigenvector of the Dirichlet section most concentrated at the origin
    is truncated below the fit floor, its ``(C, gamma)`` envelope about the
    origin is measured, and the distance from its eigenvalue to the spectrum
    of the section at ``beta + dbeta`` is compared with
    ``C Gamma dbeta`` plus the truncation residual.
    """
    b0 = _beta_float(beta)
    sec = dual_section(v, b0, xi, N)
    w, V = sec.eigenpairs()
    mid = N
    weights = np.abs(V[mid, :])
    i = int(np.argmax(weights))
    psi = V[:, i].copy()
    E = float(w[i])
    psi[np.abs(psi) <= 1e-12 * np.abs(psi).max()] = 0.0
    psi /= np.linalg.norm(psi)
    fit = decay_fit(psi, center=mid)
    resid = float(np.linalg.norm(sec.matrix @ psi - E * psi))
    bound = lipschitz_gamma(fit.C, fit.gamma).bound * abs(dbeta) if fit.gamma > 0 else math.inf
    moved = dual_section(v, b0 + dbeta, xi, N).eigenvalues()
    shift = float(np.min(np.abs(moved - E)))
    return ShiftCheck(E, fit, shift, bound, resid, shift <= bound + resid)
