"""Real analytic potentials represented as trigonometric polynomials."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import StripExceeded

__all__ = [
    "TrigPotential",
    "StripNormBound",
    "make_amo",
    "make_fourier",
    "eval_complex",
    "strip_norm_bound",
    "dual_kernel",
    "from_kernel",
    "from_csv",
    "parse_potential",
    "trig_extrema",
    "trig_critical_points",
]

_HERM_TOL = 1e-12


class TrigPotential:
    """``v(x) = sum_{|k|<=d} c_k exp(2 pi i k x)`` with ``c_{-k} = conj(c_k)``.

    ``coeffs[k + d]`` holds ``c_k``.  ``delta`` is the strip radius used for
    complexified evaluation; trig polynomials are entire, so it is only a
    bookkeeping bound.
    """

    def __init__(self, coeffs, delta: float = 1.0):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex)).copy()
        if c.ndim != 1 or c.size % 2 == 0:
            raise ValueError("coefficient array must have odd length 2d+1")
        if not delta > 0:
            raise ValueError("strip radius must be positive")
        scale = max(1.0, float(np.max(np.abs(c))))
        if np.max(np.abs(c - np.conj(c[::-1]))) > _HERM_TOL * scale:
            raise ValueError("coefficients are not hermitian: v would not be real")
        c = 0.5 * (c + np.conj(c[::-1]))
        # drop vanishing outer harmonics so the degree is honest
        d = c.size // 2
        while d > 0 and c[0] == 0 and c[-1] == 0:
            c = c[1:-1]
            d -= 1
        self.coeffs = c
        self.coeffs.setflags(write=False)
        self.delta = float(delta)

    @property
    def degree(self) -> int:
        return self.coeffs.size // 2

    def coeff(self, k: int) -> complex:
        d = self.degree
        return complex(self.coeffs[k + d]) if abs(k) <= d else 0j

    @property
    def ks(self) -> np.ndarray:
        d = self.degree
        return np.arange(-d, d + 1)

    def __call__(self, x):
        """Real values on the real line."""
        x = np.asarray(x, dtype=float)
        d = self.degree
        out = np.full(x.shape, self.coeffs[d].real)
        for k in range(1, d + 1):
            out = out + 2.0 * np.real(self.coeffs[d + k] * np.exp(2j * np.pi * k * x))
        return out

    def at(self, z):
        """Complex values at complex phases, without the strip check."""
        z = np.asarray(z, dtype=complex)
        d = self.degree
        out = np.full(z.shape, self.coeffs[d], dtype=complex)
        for k in range(1, d + 1):
            out = out + self.coeffs[d + k] * np.exp(2j * np.pi * k * z)
            out = out + self.coeffs[d - k] * np.exp(-2j * np.pi * k * z)
        return out

    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))

    def sup_norm(self) -> float:
        lo, _, hi, _ = trig_extrema(self.coeffs)
        return max(abs(lo), abs(hi))

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrigPotential):
            return NotImplemented
        return (
            self.coeffs.shape == other.coeffs.shape
            and bool(np.all(self.coeffs == other.coeffs))
            and self.delta == other.delta
        )

    def __hash__(self):
        return hash((self.coeffs.tobytes(), self.delta))

    def __repr__(self) -> str:
        return f"TrigPotential(degree={self.degree}, delta={self.delta})"


@dataclass(frozen=True)
class StripNormBound:
    delta: float
    bound: float


def make_amo(lam: float) -> TrigPotential:
    """``v(x) = 2 lam cos(2 pi x)``."""
    lam = float(lam)
    return TrigPotential([lam, 0.0, lam])


def make_fourier(coeffs: Mapping[int, complex], delta: float = 1.0) -> TrigPotential:
    """Build from a ``{k: c_k}`` mapping; missing harmonics are zero."""
    if not coeffs:
        return TrigPotential([0.0], delta)
    d = max(abs(int(k)) for k in coeffs)
    c = np.zeros(2 * d + 1, dtype=complex)
    for k, val in coeffs.items():
        c[int(k) + d] = val
    return TrigPotential(c, delta)


def eval_complex(v: TrigPotential, z):
    """Evaluate at ``z = x + i eps``; raises if ``|eps|`` leaves the strip."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z.imag) > v.delta):
        raise StripExceeded(f"|Im z| exceeds strip radius {v.delta}")
    out = v.at(z)
    return complex(out) if out.ndim == 0 else out


def strip_norm_bound(v: TrigPotential, delta: float) -> StripNormBound:
    """``sum_k |c_k| exp(2 pi delta |k|)``, an upper bound for the sup over the strip."""
    if delta < 0 or delta > v.delta:
        raise StripExceeded(f"delta={delta} outside [0, {v.delta}]")
    b = float(np.sum(np.abs(v.coeffs) * np.exp(2 * np.pi * delta * np.abs(v.ks))))
    return StripNormBound(float(delta), b)


def dual_kernel(v: TrigPotential) -> np.ndarray:
    """Convolution kernel of the dual operator, indexed ``-d..d``."""
    return np.array(v.coeffs)


def from_kernel(kernel, delta: float = 1.0) -> TrigPotential:
    return TrigPotential(kernel, delta)


def from_csv(path) -> TrigPotential:
    """Read rows ``k,re,im``.  A non-numeric first row is treated as a header."""
    entries: dict[int, complex] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for i, row in enumerate(csv.reader(fh)):
            row = [c.strip() for c in row]
            if not row or not any(row) or row[0].startswith("#"):
                continue
            if len(row) != 3:
                raise ValueError(f"{path}:{i + 1}: expected k,re,im")
            try:
                k, re, im = int(row[0]), float(row[1]), float(row[2])
            except ValueError:
                if i == 0:
                    continue
                raise ValueError(f"{path}:{i + 1}: malformed row {row}") from None
            if k in entries:
                raise ValueError(f"{path}: duplicate harmonic k={k}")
            entries[k] = complex(re, im)
    for k, c in entries.items():
        partner = entries.get(-k, 0j)
        if abs(partner - np.conj(c)) > _HERM_TOL * max(1.0, abs(c)):
            raise ValueError(f"{path}: c_{-k} is not conj(c_{k}); potential must be real")
    return make_fourier(entries)


def parse_potential(spec: str) -> TrigPotential:
    """``amo:<lambda>`` or ``fourier:<path>``."""
    kind, _, arg = spec.partition(":")
    if kind == "amo":
        try:
            return make_amo(float(arg))
        except ValueError as exc:
            raise ValueError(f"malformed coupling in {spec!r}") from exc
    if kind == "fourier":
        if not arg:
            raise ValueError("fourier: needs a file path")
        return from_csv(arg)
    raise ValueError(f"unrecognised potential spec: {spec!r}")


def trig_critical_points(coeffs) -> np.ndarray:
    """Candidate critical points in ``[0, 1)`` of a real trig polynomial.

    Unit-circle roots of the degree-2d algebraic polynomial
    ``sum_k k c_k z^{k+d}``, polished by Newton steps, together with a coarse
    grid that backs them up in case the root finder loses accuracy.
    """
    c = np.asarray(coeffs, dtype=complex)
    d = c.size // 2
    ks = np.arange(-d, d + 1)
    if d == 0:
        return np.zeros(1)
    grid = np.linspace(0.0, 1.0, 8 * (2 * d + 1), endpoint=False)
    deriv = ks * c
    scale = np.max(np.abs(deriv))
    if scale == 0:
        return grid[:1]
    cand = [grid]
    poly = deriv[::-1] / scale
    nz = np.flatnonzero(np.abs(poly) > 0)
    poly = poly[nz[0]: nz[-1] + 1]
    if poly.size > 1:
        roots = np.roots(poly)
        roots = roots[np.isfinite(roots) & (roots != 0)]
        cand.append(np.mod(np.angle(roots) / (2 * np.pi), 1.0))
    x = np.concatenate(cand)
    x0 = x.copy()
    w1 = 2j * np.pi * ks * c
    w2 = -(4 * np.pi**2) * ks**2 * c
    for _ in range(4):
        e = np.exp(2j * np.pi * np.multiply.outer(x, ks))
        f1 = np.real(e @ w1)
        f2 = np.real(e @ w2)
        step = np.where(f2 != 0, f1 / np.where(f2 == 0, 1.0, f2), 0.0)
        # keep Newton local: a step longer than a harmonic width is not polishing
        step = np.clip(step, -0.25 / d, 0.25 / d)
        x = np.mod(x - step, 1.0)
    return np.concatenate([x0, x])


def trig_extrema(coeffs) -> tuple[float, float, float, float]:
    """Global ``(min, argmin, max, argmax)`` over ``[0, 1)`` of a real trig polynomial."""
    c = np.asarray(coeffs, dtype=complex)
    d = c.size // 2
    ks = np.arange(-d, d + 1)
    x = trig_critical_points(c)
    vals = np.real(np.exp(2j * np.pi * np.multiply.outer(x, ks)) @ c)
    i_lo, i_hi = int(np.argmin(vals)), int(np.argmax(vals))
    return float(vals[i_lo]), float(x[i_lo]), float(vals[i_hi]), float(x[i_hi])
