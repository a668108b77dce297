"""Schrödinger cocycles: transfer matrices, scaled products, Lyapunov exponents
and the quantized acceleration."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import (
    GridTooCoarse,
    NonUnimodular,
    QuadratureNotConverged,
    StripExceeded,
)
from .numtheory import Frequency, as_rational, cf_expand
from .potential import TrigPotential, strip_norm_bound, trig_critical_points

__all__ = [
    "transfer_matrix",
    "ScaledProduct",
    "finite_product",
    "orbit_products",
    "RadiusBounds",
    "spectral_radius_bounds",
    "log_radius_from_trace",
    "lyapunov_rational",
    "LEProfile",
    "lyapunov_profile",
    "local_profile",
    "Acceleration",
    "acceleration",
    "lyapunov_orbit",
    "fourier_cutoff",
]

SANDWICH_UPPER = 1.0 + math.sqrt(2.0)


def _check_strip(v: TrigPotential, eps) -> None:
    if np.any(np.abs(np.asarray(eps, dtype=float)) > v.delta):
        raise StripExceeded(f"|eps| exceeds strip radius {v.delta}")


def transfer_matrix(v: TrigPotential, E: float, z: complex = 0.0) -> np.ndarray:
    """``[[E - v(z), -1], [1, 0]]``; real when ``z`` is real."""
    z = complex(z)
    _check_strip(v, z.imag)
    if z.imag == 0:
        a = E - float(v(z.real))
        return np.array([[a, -1.0], [1.0, 0.0]])
    a = E - complex(v.at(z))
    return np.array([[a, -1.0], [1.0, 0.0]], dtype=complex)


@dataclass(frozen=True)
class ScaledProduct:
    """``matrix * exp(log_scale)`` with ``matrix`` of unit sup-norm."""

    matrix: np.ndarray
    log_scale: float

    def full(self) -> np.ndarray:
        return self.matrix * math.exp(self.log_scale)

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix)) * math.exp(self.log_scale)

    @property
    def log_det_error(self) -> float:
        """``|det - 1|`` of the reconstructed product, computed without overflow."""
        d = np.linalg.det(self.matrix)
        return abs(d * math.exp(2 * self.log_scale) - 1.0) if self.log_scale < 300 else float("nan")


def orbit_products(diag: np.ndarray):
    """Products ``A_{n-1} ... A_0`` for many orbits at once.

    ``diag`` has shape ``(n, m)``: entry ``[j, i]`` is ``E - v(phase_j)`` on
    orbit ``i``.  Returns ``(m00, m01, m10, m11, log_scale)`` arrays of
    length ``m`` with each matrix renormalized to unit sup-norm at every step.
    """
    diag = np.asarray(diag)
    n, m = diag.shape
    dt = np.result_type(diag.dtype, float)
    m00 = np.ones(m, dtype=dt)
    m01 = np.zeros(m, dtype=dt)
    m10 = np.zeros(m, dtype=dt)
    m11 = np.ones(m, dtype=dt)
    log_scale = np.zeros(m)
    for j in range(n):
        a = diag[j]
        n00 = a * m00 - m10
        n01 = a * m01 - m11
        m10, m11 = m00, m01
        m00, m01 = n00, n01
        s = np.maximum.reduce([np.abs(m00), np.abs(m01), np.abs(m10), np.abs(m11)])
        s = np.where(s > 0, s, 1.0)
        m00, m01, m10, m11 = m00 / s, m01 / s, m10 / s, m11 / s
        log_scale += np.log(s)
    return m00, m01, m10, m11, log_scale


def _orbit_phases(beta, theta, n: int):
    """Phases ``theta + j beta`` for ``j < n``; exact residues for rational beta."""
    j = np.arange(n)
    if isinstance(beta, Frequency) and not beta.is_rational:
        b = float(beta)
        return np.mod(j * b, 1.0)[:, None] + np.atleast_1d(theta)[None, :]
    p, q = as_rational(beta)
    return ((j * p) % q / q)[:, None] + np.atleast_1d(theta)[None, :]


def finite_product(v: TrigPotential, E: float, beta, theta: float, n: int,
                   eps: float = 0.0) -> ScaledProduct:
    """Log-scaled ``A(theta + (n-1) beta + i eps) ... A(theta + i eps)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_strip(v, eps)
    phases = _orbit_phases(beta, np.array([theta], dtype=float), n)
    if eps == 0:
        diag = E - v(phases)
    else:
        diag = E - v.at(phases + 1j * eps)
    m00, m01, m10, m11, ls = orbit_products(diag)
    mat = np.array([[m00[0], m01[0]], [m10[0], m11[0]]])
    return ScaledProduct(mat, float(ls[0]))


class RadiusBounds(NamedTuple):
    rho: float
    trace: complex
    lower: float
    upper: float


def spectral_radius_bounds(M, det_tol: float = 1e-10, check: bool = True) -> RadiusBounds:
    """Spectral radius of a 2x2 unimodular matrix with the trace sandwich
    ``max(1, |tr|/2) <= rho <= (1 + sqrt 2) max(1, |tr|/2)``."""
    M = np.asarray(M, dtype=complex)
    if M.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    scale = max(1.0, float(np.max(np.abs(M))) ** 2)
    if abs(det - 1.0) > det_tol * scale:
        raise NonUnimodular(f"|det - 1| = {abs(det - 1.0):.3e}")
    tr = M[0, 0] + M[1, 1]
    s = np.sqrt(tr * tr - 4 * det)
    if (np.conj(tr) * s).real < 0:
        s = -s
    r1 = (tr + s) / 2
    r2 = det / r1 if r1 != 0 else 0.0
    rho = max(abs(r1), abs(r2))
    base = max(1.0, abs(tr) / 2)
    lower, upper = base, SANDWICH_UPPER * base
    if check:
        slack = 1e-12 * upper
        if not (lower - slack <= rho <= upper + slack):
            raise AssertionError(f"trace sandwich violated: {lower} <= {rho} <= {upper}")
    return RadiusBounds(float(rho), complex(tr), float(lower), float(upper))


def log_radius_from_trace(u, log_s=0.0):
    """``log rho`` of a unimodular matrix with trace ``u * exp(log_s)``.

    Uses the larger-modulus root of ``z**2 - t z + 1`` evaluated without
    overflow or cancellation.
    """
    u = np.asarray(u, dtype=complex)
    log_s = np.asarray(log_s, dtype=float)
    w = np.exp(-2.0 * log_s)
    s = np.sqrt(u * u - 4.0 * w)
    s = np.where((np.conj(u) * s).real < 0, -s, s)
    mag = np.abs(u + s) / 2.0
    with np.errstate(divide="ignore"):
        out = log_s + np.log(mag)
    # rho >= 1 always; clip round-off below it
    return np.maximum(out, 0.0)


def _trig_on_grid(coeffs, log_w, n: int, offset: float = 0.0):
    """``sum_k coeffs_k exp(log_w_k) exp(2 pi i k y)`` at ``y = (j + offset)/n``,
    returned as ``(u, log_s)`` with ``|u|`` of order one."""
    d = coeffs.size // 2
    ks = np.arange(-d, d + 1)
    log_mag = np.full(coeffs.size, -np.inf)
    nz = coeffs != 0
    log_mag[nz] = np.log(np.abs(coeffs[nz])) + log_w[nz]
    top = float(np.max(log_mag)) if np.any(nz) else 0.0
    c = np.zeros(coeffs.size, dtype=complex)
    c[nz] = coeffs[nz] / np.abs(coeffs[nz]) * np.exp(log_mag[nz] - top)
    y = (np.arange(n) + offset) / n
    u = np.zeros(n, dtype=complex)
    for k, ck in zip(ks, c):
        if ck != 0:
            u += ck * np.exp(2j * np.pi * k * y)
    return u, top


def _real_trig(c: np.ndarray, y) -> np.ndarray:
    d = c.size // 2
    ks = np.arange(-d, d + 1)
    return np.real(np.exp(2j * np.pi * np.multiply.outer(np.asarray(y, dtype=float), ks)) @ c)


def _level_crossings(c: np.ndarray, levels) -> np.ndarray:
    """Points of ``[0, 1)`` where the real trig polynomial crosses one of ``levels``.

    Consecutive critical-point candidates bound monotone pieces, so every
    transversal crossing is bracketed.
    """
    x = np.unique(np.mod(trig_critical_points(c), 1.0))
    x = np.concatenate([x, [x[0] + 1.0]])
    f = _real_trig(c, x)
    out = []
    for lvl in levels:
        g = f - lvl
        for i in np.flatnonzero(g[:-1] * g[1:] < 0):
            r = brentq(lambda y: float(_real_trig(c, y)) - lvl, x[i], x[i + 1], xtol=1e-15)
            out.append(r % 1.0)
    return np.unique(np.array(out))


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss(n: int):
    if n not in _GL_CACHE:
        s, w = np.polynomial.legendre.leggauss(n)
        _GL_CACHE[n] = ((s + 1) / 2, w / 2)
    return _GL_CACHE[n]


def _segment_integral(c, log_s, a: float, b: float, tol: float) -> float:
    # y = a + (b - a)(1 - cos(pi s))/2 turns sqrt endpoint behaviour into analytic
    prev = None
    n = 16
    while n <= 2**15:
        s, w = _gauss(n)
        y = a + (b - a) * (1 - np.cos(np.pi * s)) / 2
        jac = (b - a) * np.pi / 2 * np.sin(np.pi * s)
        val = float(np.sum(w * jac * log_radius_from_trace(_real_trig(c, y), log_s)))
        if prev is not None and abs(val - prev) < tol:
            return val
        prev = val
        n *= 2
    raise QuadratureNotConverged(f"segment [{a}, {b}] did not converge")


def _le_real_split(prof, quad_tol: float) -> float | None:
    """Phase average of ``log rho`` split at the crossings of ``|t| = 2``;
    ``None`` when there are no crossings (the integrand is then smooth)."""
    level = 2.0 * math.exp(-prof.log_scale) if prof.log_scale < 700 else 0.0
    if level == 0.0:
        return None
    c = prof.coeffs
    cuts = _level_crossings(c, (level, -level))
    if cuts.size == 0:
        return None
    ends = np.concatenate([cuts, [cuts[0] + 1.0]])
    total = 0.0
    for a, b in zip(ends[:-1], ends[1:]):
        if abs(_real_trig(c, 0.5 * (a + b))) <= level:
            continue  # |t| <= 2 on the whole piece: log rho vanishes
        total += _segment_integral(c, prof.log_scale, float(a), float(b), quad_tol * (b - a))
    return total


def _le_from_profile(prof, eps: float, quad_tol: float, max_points: int) -> float:
    q = prof.q
    if eps == 0:
        split = _le_real_split(prof, quad_tol)
        if split is not None:
            return max(split, 0.0) / q
    d = prof.coeffs.size // 2
    ks = np.arange(-d, d + 1)
    log_w = -2.0 * np.pi * q * ks * eps
    n = 64
    u, top = _trig_on_grid(prof.coeffs, log_w, n)
    total = float(np.sum(log_radius_from_trace(u, top + prof.log_scale)))
    est = total / n
    while n < max_points:
        u, _ = _trig_on_grid(prof.coeffs, log_w, n, offset=0.5)
        # same normalisation as the first pass so the two halves combine
        total += float(np.sum(log_radius_from_trace(u, top + prof.log_scale)))
        n *= 2
        new = total / n
        if abs(new - est) < quad_tol:
            return max(new, 0.0) / q
        est = new
    raise QuadratureNotConverged(
        f"L(E={prof.E}, eps={eps}) not within {quad_tol} after {n} nodes"
    )


def lyapunov_rational(v: TrigPotential, pq, E: float, eps: float = 0.0,
                      quad_tol: float = 1e-9, max_points: int = 2**22) -> float:
    """Lyapunov exponent of the period-``q`` cocycle at complex phase shift ``eps``.

    Equals ``(1/q)`` times the phase average of ``log rho`` of the ``q``-step
    product.  The trace is a trigonometric polynomial in ``q theta`` with
    exactly known coefficients, so the average is taken over one period of
    that polynomial with a doubling trapezoid rule.
    """
    from .spectra import theta_fourier

    _check_strip(v, eps)
    prof = theta_fourier(v, pq, E, refine=True)
    return _le_from_profile(prof, eps, quad_tol, max_points)


@dataclass
class LEProfile:
    eps: np.ndarray
    L: np.ndarray
    E: float
    pq: tuple[int, int]
    right_derivative: np.ndarray = field(default=None)
    error_proxy: float | None = None
    cutoff: int | None = None

    def __post_init__(self):
        if self.right_derivative is None:
            self.right_derivative = _right_derivatives(self.eps, self.L)


def _right_derivatives(eps: np.ndarray, L: np.ndarray) -> np.ndarray:
    out = np.full(eps.size, np.nan)
    for i in range(eps.size - 2):
        out[i] = _one_sided(eps, L, i)
    return out


def _one_sided(eps, L, i):
    h = eps[i + 1] - eps[i]
    d1 = (-3 * L[i] + 4 * L[i + 1] - L[i + 2]) / (2 * h)
    if i + 4 < eps.size:
        d2 = (-3 * L[i] + 4 * L[i + 2] - L[i + 4]) / (4 * h)
        return (4 * d1 - d2) / 3
    return d1


def _resolve_beta(beta, depth: int):
    """Deepest usable convergent plus the previous one for irrational input."""
    if isinstance(beta, str):
        beta = Frequency.parse(beta)
    if isinstance(beta, Frequency) and not beta.is_rational:
        seq = cf_expand(beta, depth)
        return seq[-1], (seq[-2] if len(seq) > 1 else None)
    return as_rational(beta), None


def _profile_values(v, pq, E, eps_grid, quad_tol):
    from .spectra import theta_fourier

    prof = theta_fourier(v, pq, E, refine=True)
    return np.array([_le_from_profile(prof, float(e), quad_tol, 2**22) for e in eps_grid])


def lyapunov_profile(v: TrigPotential, beta, E: float, delta1: float,
                     grid: int | Sequence[float] = 41, depth: int = 8,
                     quad_tol: float = 1e-9, check: bool = True) -> LEProfile:
    """``L(eps)`` on a symmetric grid in ``[-delta1, delta1]``.

    ``grid`` is either the number of points or an explicit grid.  Irrational
    ``beta`` is replaced by its ``depth``-th convergent; the sup-difference to
    the previous convergent's profile is stored as ``error_proxy``.
    """
    if not 0 < delta1 <= v.delta:
        raise StripExceeded(f"delta1={delta1} must lie in (0, {v.delta}]")
    if isinstance(grid, (int, np.integer)):
        eps = np.linspace(-delta1, delta1, int(grid))
    else:
        eps = np.asarray(grid, dtype=float)
    _check_strip(v, eps)
    pq, prev = _resolve_beta(beta, depth)
    L = _profile_values(v, pq, E, eps, quad_tol)
    proxy = None
    if prev is not None and prev[1] > 0:
        proxy = float(np.max(np.abs(L - _profile_values(v, prev, E, eps, quad_tol))))
    if check:
        _check_profile(eps, L)
    cutoff = fourier_cutoff(v, E, delta1)
    return LEProfile(eps, L, float(E), pq, error_proxy=proxy, cutoff=cutoff)


def _check_profile(eps, L, tol: float = 1e-8):
    if np.any(L < 0):
        raise AssertionError("negative Lyapunov exponent")
    # evenness: compare mirrored grid points when the grid is symmetric
    if np.allclose(eps, -eps[::-1], atol=1e-14):
        if np.max(np.abs(L - L[::-1])) > tol:
            raise AssertionError("L(eps) is not even")
    h = np.diff(eps)
    if eps.size >= 3 and np.allclose(h, h[0], rtol=1e-9):
        second = L[:-2] + L[2:] - 2 * L[1:-1]
        if np.min(second) < -tol:
            raise AssertionError("L(eps) fails the midpoint convexity test")


def local_profile(v: TrigPotential, beta, E: float, eps0: float, h: float,
                  depth: int = 8, quad_tol: float = 1e-9) -> LEProfile:
    """Five-point forward grid ``eps0 + h * (0..4)`` for a single acceleration."""
    eps = eps0 + h * np.arange(5)
    _check_strip(v, eps)
    pq, _ = _resolve_beta(beta, depth)
    L = _profile_values(v, pq, E, eps, quad_tol)
    return LEProfile(eps, L, float(E), pq)


class Acceleration(NamedTuple):
    omega_raw: float
    omega: int
    residual: float


def acceleration(profile: LEProfile, eps0: float, max_residual: float = 0.2) -> Acceleration:
    """Right derivative of ``L`` at ``eps0`` divided by ``2 pi``, rounded."""
    eps = profile.eps
    i = int(np.argmin(np.abs(eps - eps0)))
    if abs(eps[i] - eps0) > 1e-12 * max(1.0, abs(eps0)) or i + 2 >= eps.size:
        raise ValueError(f"eps0={eps0} is not an interior grid point")
    raw = float(_one_sided(eps, profile.L, i)) / (2 * math.pi)
    omega = int(round(raw))
    res = abs(raw - omega)
    if res > max_residual:
        raise GridTooCoarse(f"acceleration residual {res:.3f} at eps0={eps0}")
    return Acceleration(raw, omega, res)


def lyapunov_orbit(v: TrigPotential, alpha, E: float, eps: float = 0.0,
                   n: int = 100_000, theta: float = 0.0) -> float:
    """Finite-orbit estimate ``(1/n) log ||A_{n-1} ... A_0||``; a cross-check only."""
    sp = finite_product(v, E, alpha, theta, n, eps)
    return (sp.log_scale + math.log(float(np.linalg.norm(sp.matrix, 2)))) / n


def fourier_cutoff(v: TrigPotential, E: float, delta: float) -> int:
    """Smallest ``K >= 0`` with ``2 pi delta K > log sup_strip ||A^E||``, capped
    by the degree (higher harmonics vanish identically)."""
    a = abs(E) + strip_norm_bound(v, delta).bound
    norm = (a + math.sqrt(a * a + 4)) / 2
    k = max(0, math.floor(math.log(norm) / (2 * math.pi * delta)) + 1)
    return min(k, v.degree)
