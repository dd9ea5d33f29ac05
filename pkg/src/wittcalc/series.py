"""Truncated formal power series over an exact coefficient ring.

A :class:`TruncSeries` of truncation N stores ``c_0..c_N`` and represents
the class of a power series modulo ``X^(N+1)``.  The coefficient ring is any
object with the ring interface of :mod:`wittcalc.rings` (a
:class:`~wittcalc.poly.PolyRing` also qualifies).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (DomainError, NonExactDivision, NonunitConstantTerm,
                     NonzeroConstantTerm, NotPLocal, RingMismatch)
from .rings import PLocalRationals, Rationals


@dataclass(frozen=True)
class TruncSeries:
    ring: object
    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs:
            raise DomainError("a truncated series needs at least c_0")

    @classmethod
    def of(cls, ring, coeffs: Sequence, truncation: int | None = None) -> TruncSeries:
        """Build from raw values, padding with zeros or cutting at truncation."""
        vals = [ring(c) for c in coeffs]
        if truncation is not None:
            vals = (vals + [ring.zero] * (truncation + 1))[:truncation + 1]
        return cls(ring, tuple(vals))

    @classmethod
    def one(cls, ring, truncation: int) -> TruncSeries:
        return cls.of(ring, [1], truncation)

    @classmethod
    def monomial(cls, ring, coeff, degree: int, truncation: int) -> TruncSeries:
        vals = [ring.zero] * (truncation + 1)
        if degree <= truncation:
            vals[degree] = ring(coeff)
        return cls(ring, tuple(vals))

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int):
        return self.coeffs[n]

    def _check(self, other: TruncSeries) -> None:
        if self.ring != other.ring:
            raise RingMismatch(f"series over {self.ring} vs {other.ring}")
        if self.truncation != other.truncation:
            raise RingMismatch(
                f"truncation {self.truncation} vs {other.truncation}")

    def __add__(self, other: TruncSeries) -> TruncSeries:
        self._check(other)
        R = self.ring
        return TruncSeries(R, tuple(R.add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: TruncSeries) -> TruncSeries:
        self._check(other)
        R = self.ring
        return TruncSeries(R, tuple(R.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> TruncSeries:
        return TruncSeries(self.ring, tuple(self.ring.neg(a) for a in self.coeffs))

    def __mul__(self, other: TruncSeries) -> TruncSeries:
        return series_mul(self, other)

    def scale(self, c) -> TruncSeries:
        R = self.ring
        c = R(c)
        return TruncSeries(R, tuple(R.mul(c, a) for a in self.coeffs))

    def truncate(self, N: int) -> TruncSeries:
        if N > self.truncation:
            raise DomainError("cannot raise the truncation of a series")
        return TruncSeries(self.ring, self.coeffs[:N + 1])

    def map(self, ring, fn=None) -> TruncSeries:
        fn = fn or ring
        return TruncSeries(ring, tuple(fn(c) for c in self.coeffs))

    def to_json(self) -> list[str]:
        return [self.ring.format(c) for c in self.coeffs]

    def exp(self) -> TruncSeries:
        return series_exp(self)

    def log(self) -> TruncSeries:
        return series_log(self)

    def inverse(self) -> TruncSeries:
        return series_invert(self)


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    a._check(b)
    R = a.ring
    N = a.truncation
    ac, bc = a.coeffs, b.coeffs
    nz_b = [j for j in range(N + 1) if not R.is_zero(bc[j])]
    out = []
    for n in range(N + 1):
        terms = [R.mul(ac[n - j], bc[j]) for j in nz_b if j <= n
                 and not R.is_zero(ac[n - j])]
        out.append(R.sum(terms) if terms else R.zero)
    return TruncSeries(R, tuple(out))


def series_exp(a: TruncSeries) -> TruncSeries:
    """exp via ``n b_n = sum_{k=1}^n k a_k b_{n-k}``: one division per index."""
    R = a.ring
    if not R.is_zero(a.coeffs[0]):
        raise NonzeroConstantTerm("exp needs a vanishing constant term")
    N = a.truncation
    b = [R.one]
    ka = [R.mul(R.from_int(k), a.coeffs[k]) for k in range(N + 1)]
    for n in range(1, N + 1):
        terms = [R.mul(ka[k], b[n - k]) for k in range(1, n + 1) if not R.is_zero(ka[k])]
        s = R.sum(terms) if terms else R.zero
        try:
            b.append(R.div_int(s, n))
        except NonExactDivision as exc:
            raise NonExactDivision(f"exp coefficient {n}: {exc}") from exc
    return TruncSeries(R, tuple(b))


def series_log(a: TruncSeries) -> TruncSeries:
    """log via ``a' = l' a``, i.e. ``n l_n = n a_n - sum_{k<n} k l_k a_{n-k}``."""
    R = a.ring
    if a.coeffs[0] != R.one:
        raise NonunitConstantTerm("log needs constant term 1")
    N = a.truncation
    l = [R.zero]
    for n in range(1, N + 1):
        s = R.mul(R.from_int(n), a.coeffs[n])
        for k in range(1, n):
            if not R.is_zero(l[k]) and not R.is_zero(a.coeffs[n - k]):
                s = R.sub(s, R.mul(R.from_int(k), R.mul(l[k], a.coeffs[n - k])))
        l.append(R.div_int(s, n))
    return TruncSeries(R, tuple(l))


def series_invert(a: TruncSeries) -> TruncSeries:
    R = a.ring
    c0 = a.coeffs[0]
    if not R.is_unit(c0):
        raise NonunitConstantTerm(f"constant term {c0} is not a unit")
    u = R.inv(c0)
    N = a.truncation
    b = [u]
    for n in range(1, N + 1):
        terms = [R.mul(a.coeffs[k], b[n - k]) for k in range(1, n + 1)
                 if not R.is_zero(a.coeffs[k])]
        s = R.sum(terms) if terms else R.zero
        b.append(R.neg(R.mul(u, s)))
    return TruncSeries(R, tuple(b))


def clear_to_plocal(a: TruncSeries, p: int) -> TruncSeries:
    """Re-type a series over Q as one over Z_(p), certifying each coefficient."""
    target = PLocalRationals(p)
    out = []
    for n, c in enumerate(a.coeffs):
        q = Fraction(c)
        if q.denominator % p == 0:
            raise NotPLocal(n, q, p)
        out.append(q)
    return TruncSeries(target, tuple(out))


def rational_series(coeffs: Sequence, truncation: int | None = None) -> TruncSeries:
    return TruncSeries.of(Rationals(), coeffs, truncation)
