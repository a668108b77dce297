"""Phase dependence of periodic discriminants: the almost Mathieu identity
``t = a_0 - 2 lam^q cos(2 pi q theta)``, its general decay analogue, the
``M_q`` envelopes and the three-case classification of ``a_{q,0}``."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .numtheory import as_rational
from .potential import TrigPotential, make_amo, trig_extrema
from .spectra import DiscriminantProfile, discriminant, theta_fourier

__all__ = [
    "ChambersCheck",
    "chambers_amo_check",
    "deviation",
    "log_deviation",
    "ChambersReport",
    "chambers_report",
    "DecayFit",
    "decay_fit",
    "mq_profile",
    "CaseLabel",
    "CaseResult",
    "case_classify",
]


class ChambersCheck(NamedTuple):
    max_error: float
    max_scaled_error: float
    max_guarded_error: float


def chambers_amo_check(lam: float, pq, E_grid=None, theta_grid=None) -> ChambersCheck:
    """Largest deviation of the directly computed discriminant from
    ``a_0(E) - 2 lam^q cos(2 pi q theta)`` over the grids.

    The scaled error divides by ``max(1, max_theta |t|)`` at each energy,
    the size of the floating-point trace itself.  The guarded error divides
    by ``max(1, |E|^q)``, which bounds the growth of the partial transfer
    products and hence the rounding in ``t``.
    """
    p, q = as_rational(pq)
    v = make_amo(lam)
    if E_grid is None:
        E_grid = np.linspace(-2 - 2 * abs(lam), 2 + 2 * abs(lam), 64)
    if theta_grid is None:
        theta_grid = np.arange(64) / 64
    E_grid = np.asarray(E_grid, dtype=float)
    theta_grid = np.asarray(theta_grid, dtype=float)
    amp = 2.0 * lam**q
    worst = worst_scaled = worst_guarded = 0.0
    for E in E_grid:
        a0 = theta_fourier(v, (p, q), E).a0
        t = np.asarray(discriminant(v, (p, q), theta_grid, np.full(theta_grid.shape, E)))
        err = np.abs(t - (a0 - amp * np.cos(2 * np.pi * q * theta_grid)))
        e = float(np.max(err))
        worst = max(worst, e)
        worst_scaled = max(worst_scaled, e / max(1.0, float(np.max(np.abs(t)))))
        worst_guarded = max(worst_guarded, e / max(1.0, abs(float(E)) ** q))
    return ChambersCheck(worst, worst_scaled, worst_guarded)


def _zero_mean(prof: DiscriminantProfile):
    """Coefficients of ``t - a_0`` normalized to their largest entry, plus its log."""
    d = prof.degree
    la = prof.log_abs.copy()
    la[d] = -np.inf
    if not np.any(np.isfinite(la)):
        return None, -math.inf
    top = float(np.max(la))
    phase = np.where(prof.coeffs != 0, prof.coeffs / np.where(prof.coeffs != 0,
                                                              np.abs(prof.coeffs), 1), 0)
    c = np.where(np.isfinite(la), phase * np.exp(la - top), 0.0)
    return c, top


def log_deviation(v: TrigPotential, pq, E: float) -> float:
    """``log sup_theta |t(theta, E) - a_0(E)|`` without underflow."""
    prof = theta_fourier(v, pq, E, refine=True)
    c, top = _zero_mean(prof)
    if c is None:
        return -math.inf
    lo, _, hi, _ = trig_extrema(c)
    m = max(abs(lo), abs(hi))
    return top + math.log(m) if m > 0 else -math.inf


def deviation(v: TrigPotential, pq, E: float) -> float:
    """``sup_theta |t(theta, E) - a_0(E)|``, exact up to rounding."""
    return math.exp(log_deviation(v, pq, E))


@dataclass(frozen=True)
class ChambersReport:
    p: int
    q: int
    E: float
    a0: float
    deviation: float
    abs_coeffs: tuple[float, ...]  # |a_k| for k = 0..d
    lower: float
    upper: float

    def to_dict(self) -> dict:
        return {
            "p": self.p, "q": self.q, "E": self.E, "a0": self.a0,
            "deviation": self.deviation,
            "abs_coeffs": list(self.abs_coeffs),
            "lower_bound": self.lower, "triangle_bound": self.upper,
        }


def chambers_report(v: TrigPotential, pq, E: float) -> ChambersReport:
    """Deviation together with the sandwich ``max_k |a_k| <= dev <= 2 sum_k |a_k|``."""
    p, q = as_rational(pq)
    prof = theta_fourier(v, (p, q), E, refine=True)
    d = prof.degree
    absc = np.exp(prof.log_abs[d:])
    dev = deviation(v, (p, q), E)
    tail = absc[1:]
    return ChambersReport(p, q, float(E), prof.a0, dev, tuple(float(x) for x in absc),
                          float(np.max(tail)) if tail.size else 0.0,
                          float(2 * np.sum(tail)))


class DecayFit(NamedTuple):
    c: float  # decay rate: deviation ~ exp(-c q)
    intercept: float
    rates: tuple[float, ...]  # (1/q) log deviation per entry
    qs: tuple[int, ...]


def decay_fit(v: TrigPotential, fractions: Sequence, E: float) -> DecayFit:
    """Least-squares fit ``log deviation ~ intercept - c q`` along a sequence of frequencies."""
    qs, logs = [], []
    for pq in fractions:
        p, q = as_rational(pq)
        qs.append(q)
        logs.append(log_deviation(v, (p, q), E))
    qs_a, logs_a = np.array(qs, dtype=float), np.array(logs)
    ok = np.isfinite(logs_a)
    rates = tuple(float(l / q) for l, q in zip(logs_a, qs_a))
    if ok.sum() < 2:
        return DecayFit(math.nan, math.nan, rates, tuple(qs))
    slope, intercept = np.polyfit(qs_a[ok], logs_a[ok], 1)
    return DecayFit(float(-slope), float(intercept), rates, tuple(qs))


def mq_profile(profile: DiscriminantProfile, eps_grid, K: int | None = None):
    """``M_q(eps) = max_{|k|<=K} |a_k| e^{-2 pi eps k q}`` and ``(1/q) log+ M_q``."""
    d = profile.degree
    K = d if K is None else min(K, d)
    ks = np.arange(-K, K + 1)
    la = profile.log_abs[d - K: d + K + 1]
    eps = np.atleast_1d(np.asarray(eps_grid, dtype=float))
    logm = np.max(la[None, :] - 2 * np.pi * profile.q * np.multiply.outer(eps, ks), axis=1)
    return np.exp(logm), np.maximum(logm, 0.0) / profile.q


class CaseLabel(NamedTuple):
    label: str  # "case1" | "case2" | "case3"
    margin: float


@dataclass(frozen=True)
class CaseResult:
    labels: tuple[CaseLabel, ...]
    eventually_case1: bool
    io_case2: bool
    io_case3: bool
    verdict: str
    onset: int | None  # first index after which every label is case1


def _label(a0: float, c: float, q: int) -> CaseLabel:
    w = math.exp(-c * q)
    x = abs(a0)
    if x < 2 - w:
        return CaseLabel("case1", (2 - w) - x)
    if x > 2 + w:
        return CaseLabel("case2", x - (2 + w))
    return CaseLabel("case3", min(x - (2 - w), (2 + w) - x))


def case_classify(a_q0: Sequence[float], c: float, qs: Sequence[int],
                  tail_start: int | None = None) -> CaseResult:
    """Label each ``a_{q,0}`` against thresholds ``2 -+ e^{-c q}`` and summarize the tail."""
    if len(a_q0) != len(qs):
        raise ValueError("sequences must be aligned")
    if not c > 0:
        raise ValueError("c must be positive")
    labels = tuple(_label(float(a), c, int(q)) for a, q in zip(a_q0, qs))
    ts = len(labels) // 2 if tail_start is None else tail_start
    tail = [lb.label for lb in labels[ts:]]
    ev1 = bool(tail) and all(x == "case1" for x in tail)
    io2 = "case2" in tail
    io3 = "case3" in tail
    verdict = "eventually-case1" if ev1 else ("io-case3" if io3 else "io-case2")
    onset = None
    for i in range(len(labels) - 1, -1, -1):
        if labels[i].label != "case1":
            break
        onset = i
    return CaseResult(labels, ev1, io2, io3, verdict, onset)
