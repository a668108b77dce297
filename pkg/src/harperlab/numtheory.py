"""Continued fractions, canonical convergents and Liouville-type subsequences.

Frequencies are kept exact wherever possible: rationals as reduced ``p/q``,
irrationals as lists of continued-fraction terms.  Decimal input is accepted
but only the terms it can certify are kept.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import PrecisionExhausted

__all__ = [
    "Frequency",
    "ConvergentSequence",
    "ConvergentReport",
    "cf_terms_of",
    "cf_expand",
    "verify_convergent_bounds",
    "select_subsequence",
    "as_rational",
]


@dataclass(frozen=True)
class Frequency:
    """A rotation number in [0, 1).

    Either rational (``p``/``q`` reduced mod 1) or given by continued
    fraction terms ``a_1, a_2, ...`` (``a0`` is the integer part).  With
    ``periodic=True`` the terms repeat forever, which is how the golden and
    silver means are represented.
    """

    p: int | None = None
    q: int | None = None
    a0: int = 0
    terms: tuple[int, ...] = ()
    periodic: bool = False
    label: str = ""

    def __post_init__(self):
        if self.p is not None or self.q is not None:
            if self.p is None or self.q is None or self.q <= 0:
                raise ValueError("rational frequency needs integer p and positive q")
            g = math.gcd(self.p, self.q)
            p, q = self.p // g, self.q // g
            object.__setattr__(self, "p", p % q)
            object.__setattr__(self, "q", q)
            object.__setattr__(self, "terms", ())
            return
        if any(int(a) < 1 for a in self.terms):
            raise ValueError("continued fraction terms must be >= 1")
        if self.periodic and not self.terms:
            raise ValueError("a periodic expansion needs at least one term")
        object.__setattr__(self, "terms", tuple(int(a) for a in self.terms))

    # constructors -----------------------------------------------------
    @classmethod
    def rational(cls, p: int, q: int) -> "Frequency":
        return cls(p=int(p), q=int(q))

    @classmethod
    def from_cf(cls, terms: Sequence[int], a0: int = 0, periodic: bool = False) -> "Frequency":
        return cls(a0=int(a0), terms=tuple(terms), periodic=periodic)

    @classmethod
    def golden(cls) -> "Frequency":
        return cls(terms=(1,), periodic=True, label="golden")

    @classmethod
    def silver(cls) -> "Frequency":
        return cls(terms=(2,), periodic=True, label="silver")

    @classmethod
    def from_decimal(cls, text: str, digits: int) -> "Frequency":
        """Frequency known to ``digits`` decimal places.

        Keeps the continued-fraction terms of the decimal value whose
        convergents satisfy ``10**-digits < 1/(2 q_n**2)``; by Legendre's
        criterion those convergents are shared by every real number within
        the stated precision.
        """
        try:
            x = Fraction(Decimal(text))
        except InvalidOperation as exc:
            raise ValueError(f"not a decimal number: {text!r}") from exc
        if digits < 1:
            raise ValueError("digits must be >= 1")
        err = Fraction(1, 10**digits)
        x = x - math.floor(x)
        a0, all_terms = cf_terms_of(x)
        kept: list[int] = []
        q_prev, q = 0, 1
        for a in all_terms:
            q_next = a * q + q_prev
            if not err < Fraction(1, 2 * q_next * q_next):
                break
            kept.append(a)
            q_prev, q = q, q_next
        return cls(a0=a0, terms=tuple(kept), label=f"dec:{text}:{digits}")

    @classmethod
    def parse(cls, spec: str) -> "Frequency":
        """Parse ``golden``, ``silver``, ``cf:1,1,2``, ``dec:0.618:10`` or ``3/5``."""
        spec = spec.strip()
        if spec == "golden":
            return cls.golden()
        if spec == "silver":
            return cls.silver()
        if spec.startswith("cf:"):
            body = spec[3:]
            try:
                terms = tuple(int(t) for t in body.split(",") if t.strip())
            except ValueError as exc:
                raise ValueError(f"malformed continued fraction: {spec!r}") from exc
            if not terms:
                raise ValueError(f"empty continued fraction: {spec!r}")
            return cls(terms=terms, label=spec)
        if spec.startswith("dec:"):
            parts = spec.split(":")
            if len(parts) != 3:
                raise ValueError(f"expected dec:<value>:<digits>, got {spec!r}")
            return cls.from_decimal(parts[1], int(parts[2]))
        if "/" in spec:
            num, _, den = spec.partition("/")
            try:
                return cls.rational(int(num), int(den))
            except ValueError as exc:
                raise ValueError(f"malformed rational: {spec!r}") from exc
        raise ValueError(f"unrecognised frequency spec: {spec!r}")

    # queries ----------------------------------------------------------
    @property
    def is_rational(self) -> bool:
        return self.q is not None

    def term(self, i: int) -> int | None:
        """The ``i``-th term (``i >= 1``), or None once the known terms run out."""
        if self.is_rational:
            _, ts = cf_terms_of(Fraction(self.p, self.q))
            return ts[i - 1] if i <= len(ts) else None
        if self.periodic:
            return self.terms[(i - 1) % len(self.terms)]
        return self.terms[i - 1] if i <= len(self.terms) else None

    def value(self, min_q: int = 10**40) -> Fraction:
        """Exact value (rational) or a convergent with denominator >= ``min_q``."""
        if self.is_rational:
            return Fraction(self.p, self.q)
        p_prev, q_prev, p, q = 1, 0, self.a0, 1
        i = 1
        while q < min_q:
            a = self.term(i)
            if a is None:
                break
            p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
            i += 1
        return Fraction(p, q)

    def __float__(self) -> float:
        return float(self.value())

    def __str__(self) -> str:
        if self.is_rational:
            return f"{self.p}/{self.q}"
        if self.label:
            return self.label
        return "cf:" + ",".join(str(a) for a in self.terms)


def as_rational(pq) -> tuple[int, int]:
    """Coerce ``pq`` (Frequency, Fraction, ``(p, q)`` or ``"p/q"``) to reduced ``(p, q)``."""
    if isinstance(pq, Frequency):
        if not pq.is_rational:
            raise ValueError("expected a rational frequency")
        return pq.p, pq.q
    if isinstance(pq, str):
        f = Frequency.parse(pq)
        return as_rational(f)
    if isinstance(pq, Fraction):
        f = Frequency.rational(pq.numerator, pq.denominator)
        return f.p, f.q
    if isinstance(pq, tuple) and len(pq) == 2:
        f = Frequency.rational(*pq)
        return f.p, f.q
    raise TypeError(f"cannot interpret {pq!r} as a rational frequency")


def cf_terms_of(x: Fraction) -> tuple[int, list[int]]:
    """Exact Euclid expansion ``x = [a0; a1, ..., an]`` of a rational."""
    x = Fraction(x)
    a0 = math.floor(x)
    terms: list[int] = []
    num, den = x.numerator - a0 * x.denominator, x.denominator
    while num:
        a, r = divmod(den, num)
        terms.append(a)
        den, num = num, r
    return a0, terms


@dataclass(frozen=True)
class ConvergentSequence:
    """Convergents ``p_n/q_n`` with their canonical indices and CF terms."""

    convergents: tuple[tuple[int, int], ...]
    terms: tuple[int, ...] = ()
    indices: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not self.indices:
            object.__setattr__(self, "indices", tuple(range(len(self.convergents))))

    def __len__(self) -> int:
        return len(self.convergents)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.convergents)

    def __getitem__(self, i):
        return self.convergents[i]

    @property
    def denominators(self) -> list[int]:
        return [q for _, q in self.convergents]

    def fractions(self) -> list[Fraction]:
        return [Fraction(p, q) for p, q in self.convergents]

    def frequencies(self) -> list[Frequency]:
        return [Frequency.rational(p, q) for p, q in self.convergents]


def cf_expand(alpha, depth: int) -> ConvergentSequence:
    """First ``depth`` canonical convergents ``p_0/q_0, p_1/q_1, ...`` of ``alpha``.

    ``alpha`` may be a :class:`Frequency`, a spec string accepted by
    :meth:`Frequency.parse`, or an exact :class:`~fractions.Fraction`.
    Rational input stops at the value itself.  Irrational input whose known
    terms run out before ``depth`` raises :class:`PrecisionExhausted`.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if isinstance(alpha, str):
        alpha = Frequency.parse(alpha)
    if isinstance(alpha, (Fraction, int)):
        a0, ts = cf_terms_of(Fraction(alpha))
        alpha = Frequency(a0=a0, terms=tuple(ts))
        exact_rational = True
    else:
        exact_rational = alpha.is_rational
        if exact_rational:
            a0, ts = cf_terms_of(Fraction(alpha.p, alpha.q))
            alpha = Frequency(a0=a0, terms=tuple(ts))

    p_prev, q_prev, p, q = 1, 0, alpha.a0, 1
    pairs = [(p, q)]
    terms = [alpha.a0]
    for i in range(1, depth):
        a = alpha.term(i)
        if a is None:
            if exact_rational:
                break
            raise PrecisionExhausted(
                f"{alpha} certifies only {len(pairs)} convergents, {depth} requested"
            )
        p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
        pairs.append((p, q))
        terms.append(a)
    return ConvergentSequence(tuple(pairs), tuple(terms))


@dataclass(frozen=True)
class ConvergentReport:
    approximation: tuple[bool, ...]
    growth: tuple[bool, ...]
    determinant: tuple[bool, ...]

    @property
    def all_ok(self) -> bool:
        return all(self.approximation) and all(self.growth) and all(self.determinant)


def verify_convergent_bounds(seq: ConvergentSequence, alpha) -> ConvergentReport:
    """Check ``|alpha - p_n/q_n| < 1/(q_n q_{n+1})``, ``q_{n+1} >= 2**(n/2)``
    and ``p_{n+1} q_n - p_n q_{n+1} = +-1`` for every adjacent pair."""
    if not len(seq):
        raise ValueError("empty convergent sequence")
    if isinstance(alpha, str):
        alpha = Frequency.parse(alpha)
    if isinstance(alpha, Frequency):
        x = alpha.value(min_q=max(seq.denominators) ** 4 * 10**6)
        if alpha.is_rational:
            x = Fraction(alpha.p, alpha.q)
    else:
        x = Fraction(alpha)
    approx, growth, det = [], [], []
    for k in range(len(seq) - 1):
        (p0, q0), (p1, q1) = seq[k], seq[k + 1]
        n = seq.indices[k]
        approx.append(abs(x - Fraction(p0, q0)) < Fraction(1, q0 * q1))
        growth.append(q1 * q1 >= 2**n)
        det.append(abs(p1 * q0 - p0 * q1) == 1)
    return ConvergentReport(tuple(approx), tuple(growth), tuple(det))


def select_subsequence(seq: ConvergentSequence, r: float, min_q: int = 3) -> ConvergentSequence:
    """Convergents with ``q_{n+1} > q_n**r`` (strong approximants).

    An empty result at this depth is the finite-depth signature of a
    Diophantine frequency.  ``min_q`` skips the first few denominators,
    where ``q**r`` sits within integer granularity of ``q``.
    """
    if r <= 1:
        raise ValueError("r must exceed 1")
    keep = []
    for k in range(len(seq) - 1):
        q0, q1 = seq[k][1], seq[k + 1][1]
        if q0 < min_q:
            continue
        if math.log(q1) > r * math.log(q0):
            keep.append(k)
    return ConvergentSequence(
        tuple(seq[k] for k in keep),
        tuple(seq.terms[k] for k in keep) if seq.terms else (),
        tuple(seq.indices[k] for k in keep),
    )
