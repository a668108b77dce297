"""Finite unions of closed intervals with exact set algebra and Lebesgue measure."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

import numpy as np

__all__ = ["IntervalSet", "hausdorff"]


def _normalize(pairs: Iterable, tol: float) -> tuple[tuple[float, float], ...]:
    items = sorted((float(a), float(b)) for a, b in pairs)
    for a, b in items:
        if not a <= b:
            raise ValueError(f"malformed interval [{a}, {b}]")
    snap = tol / 4.0
    out: list[list[float]] = []
    for a, b in items:
        if out and a <= out[-1][1] + snap:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    if tol > 0:
        out = [iv for iv in out if iv[1] - iv[0] >= snap]
    return tuple((a, b) for a, b in out)


@dataclass(frozen=True, init=False)
class IntervalSet:
    """Sorted disjoint closed intervals; ``tol`` is the endpoint resolution.

    Gaps narrower than ``tol/4`` are closed and, when ``tol > 0``, components
    narrower than ``tol/4`` are dropped, since sets are compared up to null
    sets.
    """

    intervals: tuple[tuple[float, float], ...]
    tol: float

    def __init__(self, intervals: Iterable = (), tol: float = 0.0):
        if tol < 0:
            raise ValueError("tol must be >= 0")
        object.__setattr__(self, "tol", float(tol))
        object.__setattr__(self, "intervals", _normalize(intervals, float(tol)))

    # basic queries -------------------------------------------------------
    @property
    def measure(self) -> float:
        return float(sum(b - a for a, b in self.intervals))

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def __contains__(self, x: float) -> bool:
        return any(a <= x <= b for a, b in self.intervals)

    @property
    def hull(self) -> tuple[float, float] | None:
        if not self.intervals:
            return None
        return self.intervals[0][0], self.intervals[-1][1]

    def endpoints(self) -> np.ndarray:
        return np.array([x for iv in self.intervals for x in iv])

    def gaps(self) -> list[tuple[float, float]]:
        return [(self.intervals[i][1], self.intervals[i + 1][0])
                for i in range(len(self.intervals) - 1)]

    def fattened(self, eps: float) -> "IntervalSet":
        return IntervalSet([(a - eps, b + eps) for a, b in self.intervals], self.tol)

    def scaled(self, c: float) -> "IntervalSet":
        """Image under ``x -> c x``."""
        return IntervalSet([tuple(sorted((c * a, c * b))) for a, b in self.intervals],
                           abs(c) * self.tol)

    def clip(self, lo: float, hi: float) -> "IntervalSet":
        return self & IntervalSet([(lo, hi)])

    # algebra -------------------------------------------------------------
    def _combine(self, other: "IntervalSet", rule, keep_points: bool) -> "IntervalSet":
        tol = max(self.tol, other.tol)
        pts = sorted(set(self.endpoints().tolist()) | set(other.endpoints().tolist()))
        if not pts:
            return IntervalSet((), tol)
        pieces: list[tuple[float, float]] = []
        for x in pts:
            if keep_points and rule(x in self, x in other):
                pieces.append((x, x))
        for x0, x1 in zip(pts[:-1], pts[1:]):
            mid = 0.5 * (x0 + x1)
            if rule(mid in self, mid in other):
                pieces.append((x0, x1))
        return IntervalSet(pieces, tol)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return self._combine(other, lambda a, b: a or b, True)

    def intersection(self, other: "IntervalSet") -> "IntervalSet":
        return self._combine(other, lambda a, b: a and b, True)

    def symmetric_difference(self, other: "IntervalSet") -> "IntervalSet":
        """Closure of the symmetric difference; isolated points are dropped."""
        return self._combine(other, lambda a, b: a != b, False)

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        """Closure of ``self \\ other`` (modulo endpoints)."""
        return self._combine(other, lambda a, b: a and not b, False)

    __or__ = union
    __and__ = intersection
    __xor__ = symmetric_difference
    __sub__ = difference

    @staticmethod
    def union_all(sets: Iterable["IntervalSet"], tol: float | None = None) -> "IntervalSet":
        sets = list(sets)
        t = max((s.tol for s in sets), default=0.0) if tol is None else tol
        return IntervalSet([iv for s in sets for iv in s.intervals], t)

    @staticmethod
    def intersection_all(sets: Iterable["IntervalSet"]) -> "IntervalSet":
        sets = list(sets)
        if not sets:
            raise ValueError("intersection of an empty family")
        out = sets[0]
        for s in sets[1:]:
            out = out & s
        return out

    def approx_equal(self, other: "IntervalSet", atol: float) -> bool:
        if len(self) != len(other):
            return False
        return bool(np.all(np.abs(self.endpoints() - other.endpoints()) <= atol))

    # serialization -------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "intervals": [[a, b] for a, b in self.intervals],
            "measure": self.measure,
            "tol": self.tol,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "IntervalSet":
        return cls([tuple(iv) for iv in data["intervals"]], data.get("tol", 0.0))

    def __repr__(self) -> str:
        body = ", ".join(f"[{a:.10g}, {b:.10g}]" for a, b in self.intervals)
        return f"IntervalSet({body or 'empty'}; tol={self.tol:g})"


def _dist_to(xs: np.ndarray, s: IntervalSet) -> np.ndarray:
    lo = np.array([a for a, _ in s.intervals])
    hi = np.array([b for _, b in s.intervals])
    d = np.maximum(lo[None, :] - xs[:, None], 0.0) + np.maximum(xs[:, None] - hi[None, :], 0.0)
    return d.min(axis=1)


def _directed(a: IntervalSet, b: IntervalSet) -> float:
    # distance to b is piecewise linear on each component of a: its maximum is
    # at an endpoint of a or at the midpoint of a gap of b
    cand = [a.endpoints()]
    mids = np.array([0.5 * (x + y) for x, y in b.gaps()])
    if mids.size:
        cand.append(mids[[m in a for m in mids]])
    xs = np.concatenate(cand)
    return float(np.max(_dist_to(xs, b)))


def hausdorff(a: IntervalSet, b: IntervalSet) -> float:
    """Exact Hausdorff distance between two finite interval unions."""
    if not a and not b:
        return 0.0
    if not a or not b:
        return float("inf")
    return max(_directed(a, b), _directed(b, a))
