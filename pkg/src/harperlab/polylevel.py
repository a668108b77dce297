"""Level sets of real polynomials with distinct real roots.

Polynomials are stored as a leading coefficient plus sorted roots and are
never expanded into monomial coefficients.  Everything here is built on the
monotone pieces between consecutive critical points: on each piece a level
equation has at most one solution, found by bracketing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import (
    DegenerateSet,
    LevelExceedsZeta,
    NodesCoincide,
    PreconditionViolated,
    RootSeparationTooSmall,
)
from .potential import trig_critical_points

__all__ = [
    "DistinctRootPoly",
    "ExtremaData",
    "BandCut",
    "BoundReport",
    "analyze",
    "level_solutions",
    "level_measure",
    "bound_report",
    "band_decompose",
    "cheb_band_measure",
    "chebyshev",
    "rescaled_chebyshev",
    "extremality_check",
    "interp_gradient_check",
    "remez_ratio",
    "remez_estimate",
    "random_distinct_root_poly",
    "verify",
]


class DistinctRootPoly:
    """``lc * prod(x - roots)`` with strictly increasing real roots."""

    def __init__(self, lc: float, roots: Sequence[float], eps_sep: float | None = None):
        r = np.sort(np.asarray(roots, dtype=float).ravel())
        if r.size < 1:
            raise ValueError("need at least one root")
        if lc == 0 or not np.isfinite(lc):
            raise ValueError("leading coefficient must be finite and nonzero")
        if not np.all(np.isfinite(r)):
            raise ValueError("roots must be finite")
        span = float(r[-1] - r[0])
        if eps_sep is None:
            eps_sep = 1e-8 * span
        if r.size > 1 and np.min(np.diff(r)) <= eps_sep:
            raise RootSeparationTooSmall(
                f"roots closer than {eps_sep:.3e}; distinct roots required"
            )
        self.lc = float(lc)
        self.roots = r
        self.roots.setflags(write=False)
        self.eps_sep = float(eps_sep)

    @property
    def n(self) -> int:
        return int(self.roots.size)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.lc * np.prod(np.subtract.outer(x, self.roots), axis=-1)

    def deriv(self, x):
        x = np.asarray(x, dtype=float)
        diff = np.subtract.outer(x, self.roots)
        total = np.zeros(x.shape)
        for i in range(self.n):
            total = total + np.prod(np.delete(diff, i, axis=-1), axis=-1)
        return self.lc * total

    def __neg__(self) -> "DistinctRootPoly":
        return DistinctRootPoly(-self.lc, self.roots, self.eps_sep)

    def scaled(self, c: float) -> "DistinctRootPoly":
        return DistinctRootPoly(c * self.lc, self.roots, self.eps_sep)

    def coefficients(self) -> np.ndarray:
        """Monomial coefficients, highest degree first (for testing only)."""
        return self.lc * np.poly(self.roots)

    def __repr__(self) -> str:
        return f"DistinctRootPoly(lc={self.lc:g}, n={self.n})"


@dataclass(frozen=True)
class ExtremaData:
    extrema: np.ndarray
    values: np.ndarray
    zeta: float
    roots: np.ndarray
    zero_diam: float


class BandCut(NamedTuple):
    j: int
    lo: float
    hi: float
    orientation: int

    @property
    def measure(self) -> float:
        return self.hi - self.lo


def analyze(p: DistinctRootPoly) -> ExtremaData:
    """Critical points between consecutive roots and ``zeta = min |p(y_j)|``."""
    r = p.roots
    ys = []
    for x0, x1 in zip(r[:-1], r[1:]):
        f0, f1 = p.deriv(x0), p.deriv(x1)
        if f0 == 0 or f1 == 0 or np.sign(f0) == np.sign(f1):
            raise RootSeparationTooSmall("derivative does not change sign between roots")
        ys.append(brentq(p.deriv, x0, x1, xtol=1e-15 * max(1.0, abs(x1)), rtol=1e-15))
    ys = np.array(ys)
    vals = p(ys) if ys.size else np.array([])
    zeta = float(np.min(np.abs(vals))) if ys.size else math.inf
    return ExtremaData(ys, vals, zeta, p.roots, float(r[-1] - r[0]))


class _Piece(NamedTuple):
    lo: float  # -inf allowed
    hi: float  # +inf allowed
    increasing: bool


def _pieces(p: DistinctRootPoly, ext: ExtremaData) -> list[_Piece]:
    cuts = [-math.inf, *ext.extrema.tolist(), math.inf]
    out = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if math.isfinite(lo) and math.isfinite(hi):
            mid = 0.5 * (lo + hi)
        elif math.isfinite(lo):
            mid = lo + 1.0
        elif math.isfinite(hi):
            mid = hi - 1.0
        else:
            mid = 0.0
        inc = bool(p.deriv(mid) > 0) if p.n > 1 else p.lc > 0
        out.append(_Piece(lo, hi, inc))
    return out


def _piece_range(p: DistinctRootPoly, pc: _Piece) -> tuple[float, float]:
    def end(x, side):
        if math.isfinite(x):
            return float(p(x))
        # sign of p at +-inf
        s = math.copysign(1.0, p.lc) * (1.0 if side > 0 or p.n % 2 == 0 else -1.0)
        return s * math.inf
    a, b = end(pc.lo, -1), end(pc.hi, +1)
    return (min(a, b), max(a, b))


def _solve_on_piece(p: DistinctRootPoly, pc: _Piece, c: float) -> float:
    """The unique ``x`` in the piece with ``p(x) = c`` (``c`` inside its range)."""
    if p.n == 1:
        return float(p.roots[0]) + c / p.lc
    lo, hi = pc.lo, pc.hi
    scale = max(1.0, float(p.roots[-1] - p.roots[0]))
    if not math.isfinite(lo) or not math.isfinite(hi):
        anchor = hi if math.isfinite(hi) else lo
        direction = -1.0 if not math.isfinite(lo) else 1.0
        step = scale
        far = anchor + direction * step
        sgn_anchor = np.sign(p(anchor) - c)
        while np.sign(p(far) - c) == sgn_anchor and sgn_anchor != 0:
            step *= 2.0
            far = anchor + direction * step
            if step > 1e300:
                raise ArithmeticError("failed to bracket level solution")
        lo, hi = (far, anchor) if direction < 0 else (anchor, far)
    f = lambda x: float(p(x)) - c
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    return brentq(f, lo, hi, xtol=1e-15 * max(1.0, abs(lo), abs(hi)), rtol=1e-15, maxiter=500)


def level_solutions(p: DistinctRootPoly, c: float, ext: ExtremaData | None = None) -> np.ndarray:
    """All real solutions of ``p(x) = c`` in increasing order."""
    ext = ext or analyze(p)
    sols = []
    for pc in _pieces(p, ext):
        lo, hi = _piece_range(p, pc)
        if lo <= c <= hi:
            sols.append(_solve_on_piece(p, pc, c))
    return np.unique(np.array(sols))


def _piece_cut(p, pc, a, b):
    """``[x_lo, x_hi]`` where ``a <= p <= b`` on a monotone piece, or None."""
    lo, hi = _piece_range(p, pc)
    a2, b2 = max(a, lo), min(b, hi)
    if a2 >= b2:
        return None
    xs = []
    for c in (a2, b2):
        if c == lo:
            xs.append(pc.lo if pc.increasing else pc.hi)
        elif c == hi:
            xs.append(pc.hi if pc.increasing else pc.lo)
        else:
            xs.append(_solve_on_piece(p, pc, c))
    x0, x1 = sorted(xs)
    return x0, x1


def level_measure(p: DistinctRootPoly, a: float, b: float, ext: ExtremaData | None = None) -> float:
    """Lebesgue measure of ``{x : a < p(x) < b}``."""
    if not a < b:
        raise ValueError("need a < b")
    ext = ext or analyze(p)
    total = 0.0
    for pc in _pieces(p, ext):
        cut = _piece_cut(p, pc, a, b)
        if cut is not None:
            total += cut[1] - cut[0]
    return total


def band_decompose(p: DistinctRootPoly, a: float, b: float,
                   ext: ExtremaData | None = None) -> list[BandCut]:
    """The ``n`` bands of ``{a <= p <= b}``, numbered from right to left."""
    if not a < b:
        raise ValueError("need a < b")
    ext = ext or analyze(p)
    z = ext.zeta
    if a < -z or b > z:
        raise LevelExceedsZeta(f"levels ({a}, {b}) leave [-{z}, {z}]")
    cuts = []
    pieces = _pieces(p, ext)
    for idx, pc in enumerate(reversed(pieces)):
        cut = _piece_cut(p, pc, a, b)
        if cut is None:
            raise LevelExceedsZeta("a monotone piece misses the level window")
        cuts.append(BandCut(idx + 1, cut[0], cut[1], 1 if pc.increasing else -1))
    return cuts


class BoundReport(NamedTuple):
    measured: float
    polya: float
    sublevel: float | None
    corollary: float | None
    holds: dict


def _maxsq(r: float) -> float:
    return max(r, math.sqrt(r))


def bound_report(p: DistinctRootPoly, a: float, b: float, sup_v: float | None = None,
                 ext: ExtremaData | None = None) -> BoundReport:
    """Measured level-set size against the Pólya bound, the sublevel bound and,
    when ``sup_v`` (the sup norm of the potential) is given, the discriminant
    bound ``4 (2 + sup_v) max(r, sqrt r)``, ``r = (b - a)/2``.

    The sublevel bound applies for ``0 <= a < b`` and, mirrored through
    ``p -> -p``, for ``a < b <= 0``; mixed-sign windows get ``None``.
    """
    if not a < b:
        raise ValueError("need a < b")
    ext = ext or analyze(p)
    n = p.n
    measured = level_measure(p, a, b, ext)
    polya = 2.0 ** (2.0 - 2.0 / n) * ((b - a) / abs(p.lc)) ** (1.0 / n)
    sub = None
    if n >= 2 and (a >= 0 or b <= 0):
        if a >= 0:
            level, r = a, (b - a) / (ext.zeta + a)
        else:
            level, r = b, (b - a) / (ext.zeta - b)
        sols = level_solutions(p, level, ext)
        diam = float(sols[-1] - sols[0]) if sols.size else 0.0
        sub = 2.0 * diam * _maxsq(r)
    cor = None
    if sup_v is not None and 0 <= a <= 2:
        cor = 4.0 * (2.0 + sup_v) * _maxsq((b - a) / 2.0)
    slack = 1e-12
    holds = {"polya": measured <= polya * (1 + slack) + slack}
    if sub is not None:
        holds["sublevel"] = measured <= sub * (1 + slack) + slack
    if cor is not None:
        holds["corollary"] = measured <= cor * (1 + slack) + slack
    return BoundReport(measured, polya, sub, cor, holds)


def sublevel_bound(p: DistinctRootPoly, a: float, b: float) -> float:
    if not (0 <= a < b or a < b <= 0):
        raise PreconditionViolated("sublevel bound needs 0 <= a < b or a < b <= 0")
    if p.n < 2:
        raise PreconditionViolated("sublevel bound needs degree >= 2")
    rep = bound_report(p, a, b)
    return rep.sublevel


def cheb_band_measure(n: int, j: int, a: float, b: float) -> tuple[float, float]:
    """Exact size of band ``j`` of ``{a <= T_n <= b}`` and the cap ``(2/n) sqrt(b - a)``."""
    if not 1 <= j <= n:
        raise IndexError(f"band index {j} outside 1..{n}")
    if not -1 <= a < b <= 1:
        raise ValueError("need -1 <= a < b <= 1")

    def g(x):
        if j % 2 == 0:
            return (j * math.pi - math.acos(x)) / n
        return ((j - 1) * math.pi + math.acos(x)) / n

    return abs(math.cos(g(b)) - math.cos(g(a))), 2.0 / n * math.sqrt(b - a)


def chebyshev(n: int) -> DistinctRootPoly:
    k = np.arange(1, n + 1)
    return DistinctRootPoly(2.0 ** (n - 1), np.cos(np.pi * (2 * k - 1) / (2 * n)))


def rescaled_chebyshev(L: float, zeta: float, n: int, check: bool = True) -> DistinctRootPoly:
    """``zeta T_n((L/zeta)^(1/n) x / 2^(1-1/n))``: leading coefficient ``L`` and
    every critical value equal to ``+-zeta``."""
    if not (L > 0 and zeta > 0):
        raise ValueError("L and zeta must be positive")
    k = np.arange(1, n + 1)
    u = np.cos(np.pi * (2 * k - 1) / (2 * n))
    x = u * 2.0 ** (1.0 - 1.0 / n) / (L / zeta) ** (1.0 / n)
    p = DistinctRootPoly(L, x)
    if check and n >= 2:
        ext = analyze(p)
        if np.max(np.abs(np.abs(ext.values) - zeta)) > 1e-9 * max(1.0, zeta):
            raise AssertionError("rescaled Chebyshev critical values are not +-zeta")
    return p


def extremality_check(p: DistinctRootPoly, a: float, b: float, j: int,
                      ext: ExtremaData | None = None) -> tuple[float, float, bool]:
    """Band ``j`` of ``p`` against the same band of the matching rescaled ``T_n``."""
    ext = ext or analyze(p)
    cuts = band_decompose(p, a, b, ext)
    lhs = cuts[j - 1].measure
    z = ext.zeta
    lc, lo, hi = p.lc, a, b
    if lc < 0:
        lc, lo, hi = -lc, -b, -a
    n = p.n
    if n == 1:
        # T_1(c x / 2) = c x / 2 with c = 2 lc / zeta is undefined (zeta = inf);
        # a linear map has a single band of length (b - a)/lc
        rhs = (hi - lo) / lc
    else:
        c = (2.0 * lc / z) ** (1.0 / n)
        m, _ = cheb_band_measure(n, j, max(-1.0, lo / z), min(1.0, hi / z))
        rhs = 2.0 / c * m
    return lhs, rhs, lhs <= rhs + 1e-10


def _lagrange_interp(xs, ys, s, x):
    """``sum_j ys_j / s(xs_j) l_j(x) + prod (x - xs_j)``."""
    n = len(xs)
    total = 0.0
    for j in range(n):
        lj = 1.0
        for k in range(n):
            if k != j:
                lj *= (x - xs[k]) / (xs[j] - xs[k])
        total += ys[j] / s(xs[j]) * lj
    prod = 1.0
    for k in range(n):
        prod *= x - xs[k]
    return total + prod


def _interp_deriv(xs, ys, s, x):
    """``d/dx`` of the interpolant at ``x`` by the product rule, exactly."""
    n = len(xs)
    total = 0.0
    for j in range(n):
        others = [k for k in range(n) if k != j]
        den = 1.0
        for k in others:
            den *= xs[j] - xs[k]
        dl = 0.0
        for m in others:
            term = 1.0
            for k in others:
                if k != m:
                    term *= x - xs[k]
            dl += term
        total += ys[j] / s(xs[j]) * dl / den
    dprod = 0.0
    for m in range(n):
        term = 1.0
        for k in range(n):
            if k != m:
                term *= x - xs[k]
        dprod += term
    return total + dprod


def interp_gradient_check(xs: Sequence[float], values: Sequence[float], s: Callable,
                          x_star: float, k: int, ds: Callable | None = None,
                          h: float | None = None) -> tuple[float, float, float]:
    """Closed-form ``d T(x*)/d x_k`` against a Richardson-extrapolated central difference.

    ``k`` is 1-based.  ``ds`` is the derivative of ``s``; when omitted it is
    taken by a central difference.
    """
    xs = [float(x) for x in xs]
    ys = [float(y) for y in values]
    n = len(xs)
    if len(ys) != n or not 1 <= k <= n:
        raise ValueError("mismatched nodes/values or bad index")
    srt = sorted(xs)
    span = max(1.0, srt[-1] - srt[0])
    if n > 1 and min(b - a for a, b in zip(srt[:-1], srt[1:])) < 1e-10 * span:
        raise NodesCoincide("interpolation nodes coincide")
    if any(s(x) == 0 for x in xs):
        raise ValueError("s vanishes at a node")
    kk = k - 1
    xk = xs[kk]
    if ds is None:
        hs = 1e-6 * max(1.0, abs(xk))
        ds = lambda x: (s(x + hs) - s(x - hs)) / (2 * hs)
    b_star = 1.0
    b_k = 1.0
    for m in range(n):
        if m != kk:
            b_star *= x_star - xs[m]
            b_k *= xk - xs[m]
    t_k = ys[kk] / s(xk)
    dt_k = _interp_deriv(xs, ys, s, xk)
    formula = -b_star / (b_k * s(xk)) * (dt_k * s(xk) + t_k * ds(xk))

    gaps = [abs(xk - xs[m]) for m in range(n) if m != kk]
    if h is None:
        h = 1e-3 * (min(gaps) if gaps else max(1.0, abs(xk)))

    def shifted(delta):
        x2 = list(xs)
        x2[kk] = xk + delta
        return _lagrange_interp(x2, ys, s, x_star)

    def central(step):
        return (shifted(step) - shifted(-step)) / (2 * step)

    fd = (4 * central(h / 2) - central(h)) / 3
    denom = max(abs(formula), abs(fd), 1e-300)
    return formula, fd, abs(formula - fd) / denom


def _autocorr(c: np.ndarray) -> np.ndarray:
    """Coefficients of ``|Q|^2`` for ``Q = sum_{j=1}^r c_j e(jx)``, indexed ``-(r-1)..r-1``."""
    r = c.size
    full = np.correlate(c, c, mode="full")  # sum_j c_{j+m} conj(c_j)
    return full if r else np.zeros(1)


def remez_ratio(c: Sequence[complex], X) -> tuple[float, float]:
    """``(||Q||_T, sup_X |Q|)`` for ``Q = sum_{j=1}^r c_j e^{2 pi i j x}``.

    Both suprema are exact: critical points of ``|Q|^2`` come from the
    unit-circle roots of an algebraic polynomial, and interval endpoints are
    added for the restricted sup.
    """
    c = np.asarray(c, dtype=complex)
    w = _autocorr(c)
    d = w.size // 2
    ks = np.arange(-d, d + 1)
    crit = trig_critical_points(w)

    def q2(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return np.real(np.exp(2j * np.pi * np.multiply.outer(x, ks)) @ w)

    full = math.sqrt(max(0.0, float(np.max(q2(crit)))))
    pts = [np.array([x for iv in X for x in iv])]
    inside = [x for x in crit if any(a <= x <= b for a, b in X)]
    pts.append(np.array(inside))
    cand = np.concatenate(pts)
    sup_x = math.sqrt(max(0.0, float(np.max(q2(cand)))))
    return full, sup_x


def _random_set(rng: np.random.Generator, measure: float, pieces: int):
    """Random union of ``pieces`` disjoint arcs of ``[0, 1)`` with total ``measure``."""
    if measure >= 1.0:
        return [(0.0, 1.0)]
    lens = rng.dirichlet(np.ones(pieces)) * measure
    gaps = rng.dirichlet(np.ones(pieces + 1)) * (1.0 - measure)
    out, x = [], gaps[0]
    for L, g in zip(lens, gaps[1:]):
        out.append((x, x + L))
        x += L + g
    return out


@dataclass
class RemezEstimate:
    C_hat: float
    values: np.ndarray = field(repr=False)
    measures: np.ndarray = field(repr=False)


def remez_estimate(trials: int, r: int, set_measures: Sequence[float], seed: int = 0,
                   pieces: int = 3) -> RemezEstimate:
    """Empirical ``max |X| (||Q||_T / sup_X |Q|)^(1/r)`` over random degree-``r``
    polynomials in ``e^{2 pi i x}`` and random sets ``X``."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if r < 1:
        raise ValueError("degree r must be >= 1")
    ms = [float(m) for m in set_measures]
    if not ms or min(ms) <= 0:
        raise DegenerateSet("every set must have positive measure")
    children = np.random.SeedSequence(seed).spawn(trials)
    vals = np.empty(trials)
    meas = np.empty(trials)
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        m = ms[i % len(ms)]
        X = _random_set(rng, m, int(rng.integers(1, pieces + 1)))
        c = rng.normal(size=r) + 1j * rng.normal(size=r)
        full, sup_x = remez_ratio(c, X)
        vals[i] = m * (full / sup_x) ** (1.0 / r)
        meas[i] = m
    return RemezEstimate(float(np.max(vals)), vals, meas)


def random_distinct_root_poly(rng: np.random.Generator, n: int, min_gap: float = 1e-3) -> DistinctRootPoly:
    """Roots spread over a random window with a guaranteed minimum gap."""
    center = rng.normal()
    width = float(rng.uniform(0.5, 4.0))
    while True:
        r = np.sort(center + width * (rng.random(n) - 0.5))
        if n == 1 or np.min(np.diff(r)) > min_gap * width:
            break
    lc = float(rng.choice([-1.0, 1.0]) * np.exp(rng.normal()))
    return DistinctRootPoly(lc, r)


@dataclass
class VerifyReport:
    trials: int
    counts: dict
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"trials": self.trials, "checks": self.counts,
                "violations": self.violations, "failures": self.failures}

    @property
    def violations(self) -> dict:
        out = {k: 0 for k in self.counts}
        for f in self.failures:
            out[f["check"]] += 1
        return out


def _check_trial(rng: np.random.Generator, n_max: int, trial: int, counts: dict, failures: list):
    def record(name, ok, lhs, rhs):
        counts[name] = counts.get(name, 0) + 1
        if not ok:
            failures.append({"trial": trial, "check": name, "lhs": float(lhs), "rhs": float(rhs)})

    n = int(rng.integers(1, n_max + 1))
    p = random_distinct_root_poly(rng, n)
    ext = analyze(p)
    M = 1.2 * float(np.max(np.abs(p(np.linspace(p.roots[0], p.roots[-1], 257))))) + 1e-3

    a, b = np.sort(rng.uniform(-M, M, 2))
    rep = bound_report(p, a, b, ext=ext)
    record("polya", rep.holds["polya"], rep.measured, rep.polya)

    if n >= 2:
        a, b = np.sort(rng.uniform(0, M, 2))
        rep = bound_report(p, a, b, ext=ext)
        record("sublevel", rep.holds["sublevel"], rep.measured, rep.sublevel)
        a, b = np.sort(rng.uniform(-M, 0, 2))
        rep = bound_report(p, a, b, ext=ext)
        record("sublevel_mirrored", rep.holds["sublevel"], rep.measured, rep.sublevel)

    z = ext.zeta if n >= 2 else M
    a, b = np.sort(rng.uniform(-z, z, 2))
    cuts = band_decompose(p, a, b, ext)
    record("band_count", len(cuts) == n, len(cuts), n)
    total = sum(c.measure for c in cuts)
    lm = level_measure(p, a, b, ext)
    record("band_sum", abs(total - lm) <= 1e-9 * max(1.0, lm), total, lm)
    j = int(rng.integers(1, n + 1))
    lhs, rhs, ok = extremality_check(p, a, b, j, ext)
    record("extremality", ok, lhs, rhs)

    nc = int(rng.integers(1, n_max + 1))
    a, b = np.sort(rng.uniform(-1, 1, 2))
    jc = int(rng.integers(1, nc + 1))
    tn = chebyshev(nc)
    direct = band_decompose(tn, a, b)[jc - 1].measure
    formula, _ = cheb_band_measure(nc, jc, a, b)
    record("chebyshev_formula", abs(direct - formula) < 1e-9, direct, formula)


def _check_discriminant_trial(rng: np.random.Generator, n_max: int, trial: int,
                              counts: dict, failures: list):
    from .potential import TrigPotential
    from .spectra import discriminant_poly

    d = int(rng.integers(1, 3))
    c = (rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1)) * 0.5
    c[0] = c[0].real
    v = TrigPotential(np.concatenate([np.conj(c[:0:-1]), c]))
    q = int(rng.integers(1, n_max + 1))
    ps = [pp for pp in range(q) if math.gcd(pp, q) == 1]
    pq = (ps[int(rng.integers(len(ps)))], q)
    theta = float(rng.random())
    t = discriminant_poly(v, pq, theta)
    a = float(rng.uniform(0, 2))
    b = float(rng.uniform(a, a + 4))
    rep = bound_report(t, a, b, sup_v=v.sup_norm())
    record_ok = rep.holds["corollary"]
    counts["corollary"] = counts.get("corollary", 0) + 1
    if not record_ok:
        failures.append({"trial": trial, "check": "corollary",
                         "lhs": rep.measured, "rhs": rep.corollary})


def verify(n: int = 8, trials: int = 1000, seed: int = 0) -> VerifyReport:
    """Seeded randomized suite over all level-set statements; failures are listed."""
    children = np.random.SeedSequence(seed).spawn(trials)
    counts: dict = {}
    failures: list = []
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        _check_trial(rng, n, i, counts, failures)
        _check_discriminant_trial(rng, n, i, counts, failures)
    return VerifyReport(trials, dict(sorted(counts.items())), failures)
