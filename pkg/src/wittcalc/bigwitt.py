"""Big (integral) Witt vectors truncated at the index set {1, ..., N}.

Coordinates are the x_k of ``s(a) = prod_k (1 - x_k X^k)^(-1)``, so the
n-th ghost component is ``sum_{k | n} k x_k^(n/k)``.  Ring operations
evaluate the cached universal laws coordinate-wise, which is valid over
every coefficient ring including those with torsion.  The ``*_via_ghosts``
functions compute the same operations independently by lifting to a
torsion-free ring and inverting ghost components; they serve as the
cross-check, and they also take over for long vectors over rings that lift
to Z, where they are faster.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import laws
from .errors import (DomainError, NonExactDivision, NonIntegralGhost,
                     NonunitConstantTerm, NotAUnit, TruncationError,
                     VerificationFailure)
from .rings import (Integers, ModPrimePower, PLocalRationals, PrimeField, Rationals, Ring,
                    ring_from_json, sum_ratios)
from .series import TruncSeries, series_mul


@dataclass(frozen=True)
class BigWittVec:
    ring: Ring
    coords: tuple

    @classmethod
    def of(cls, ring: Ring, coords: Sequence) -> BigWittVec:
        if not coords:
            raise TruncationError("a big Witt vector needs truncation >= 1")
        return cls(ring, tuple(ring(c) for c in coords))

    @classmethod
    def zero(cls, ring: Ring, N: int) -> BigWittVec:
        return cls.of(ring, [0] * N)

    @classmethod
    def one(cls, ring: Ring, N: int) -> BigWittVec:
        return teichmuller(ring.one, ring, N)

    @classmethod
    def from_int(cls, n: int, ring: Ring, N: int) -> BigWittVec:
        """The image of the integer n under Z -> W(ring)."""
        base = ring.lift_ring
        w = from_ghost([base(n)] * N, base)
        return w.map(ring)

    @property
    def truncation(self) -> int:
        return len(self.coords)

    def __getitem__(self, k: int):
        """The k-th Witt coordinate x_k, 1-indexed."""
        if not 1 <= k <= self.truncation:
            raise TruncationError(f"coordinate {k} out of range 1..{self.truncation}")
        return self.coords[k - 1]

    def ghost(self, n: int):
        return ghost(self, n)

    def ghosts(self) -> list:
        return ghosts(self)

    def map(self, target: Ring, fn: Callable | None = None) -> BigWittVec:
        """Apply a ring map coordinate-wise (default: coercion into target)."""
        fn = fn or target
        return BigWittVec(target, tuple(target(fn(c)) for c in self.coords))

    def truncate(self, N: int) -> BigWittVec:
        if not 1 <= N <= self.truncation:
            raise TruncationError(f"cannot truncate {self.truncation} to {N}")
        return BigWittVec(self.ring, self.coords[:N])

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def __neg__(self):
        return neg(self)

    def is_unit(self) -> bool:
        return is_unit(self)

    def inverse(self) -> BigWittVec:
        return invert(self)

    def to_series(self) -> TruncSeries:
        return to_series(self)

    def to_json(self) -> dict:
        return {"kind": "big-witt", "ring": self.ring.to_json(),
                "truncation": self.truncation,
                "coords": [self.ring.format(c) for c in self.coords]}

    @classmethod
    def from_json(cls, doc: dict) -> BigWittVec:
        if doc.get("kind") != "big-witt":
            raise DomainError("not a big-witt value")
        ring = ring_from_json(doc["ring"])
        w = cls.of(ring, doc["coords"])
        if "truncation" in doc and int(doc["truncation"]) != w.truncation:
            raise TruncationError("truncation does not match coordinate count")
        return w


def ghost(w: BigWittVec, n: int):
    """``gh_n(w) = sum_{k | n} k x_k^(n/k)``, computed in w's ring."""
    if not 1 <= n <= w.truncation:
        raise TruncationError(f"ghost index {n} out of range 1..{w.truncation}")
    R = w.ring
    return R.sum(R.mul(R.from_int(k), R.pow(w.coords[k - 1], n // k))
                 for k in range(1, n + 1) if n % k == 0)


def _native(R: Ring) -> bool:
    return type(R) in (Integers, Rationals, PLocalRationals, ModPrimePower, PrimeField)


def _divisors_table(N: int) -> list[list[int]]:
    table: list[list[int]] = [[] for _ in range(N + 1)]
    for k in range(1, N + 1):
        for n in range(k, N + 1, k):
            table[n].append(k)
    return table


def ghosts(w: BigWittVec) -> list:
    """All ghost components ``gh_1..gh_N``."""
    R = w.ring
    N = w.truncation
    if not _native(R):
        return [ghost(w, n) for n in range(1, N + 1)]
    m = R.modulus if isinstance(R, ModPrimePower) else None
    x = w.coords
    divs = _divisors_table(N)
    if isinstance(R, (Rationals, PLocalRationals)):
        return [sum_ratios((k * x[k - 1].numerator ** (n // k), x[k - 1].denominator ** (n // k))
                           for k in divs[n])
                for n in range(1, N + 1)]
    if m:
        return [sum(k * pow(x[k - 1], n // k, m) for k in divs[n]) % m
                for n in range(1, N + 1)]
    return [R(sum(k * x[k - 1] ** (n // k) for k in divs[n])) for n in range(1, N + 1)]


def _pair(a: BigWittVec, b: BigWittVec) -> None:
    a.ring.check_same(b.ring)
    if a.truncation != b.truncation:
        raise TruncationError(f"truncation {a.truncation} vs {b.truncation}")


def _apply(op: str, a: BigWittVec, b: BigWittVec | None = None) -> BigWittVec:
    law = laws.big_law(a.truncation)
    ys = b.coords if b is not None else None
    vals = law.evaluate(op, a.coords, ys)
    return BigWittVec(a.ring, tuple(a.ring(v) for v in vals))


# Over rings that lift to Z the ghost route is pure integer arithmetic and
# overtakes the laws from this truncation on.
GHOST_ROUTE_MIN_TRUNCATION = 12


def _use_ghosts(a: BigWittVec) -> bool:
    return (a.truncation >= GHOST_ROUTE_MIN_TRUNCATION
            and isinstance(a.ring.integral_lift_ring, Integers))


def add(a: BigWittVec, b: BigWittVec) -> BigWittVec:
    _pair(a, b)
    return add_via_ghosts(a, b) if _use_ghosts(a) else _apply("sum", a, b)


def mul(a: BigWittVec, b: BigWittVec) -> BigWittVec:
    _pair(a, b)
    return mul_via_ghosts(a, b) if _use_ghosts(a) else _apply("prod", a, b)


def neg(a: BigWittVec) -> BigWittVec:
    return neg_via_ghosts(a) if _use_ghosts(a) else _apply("neg", a)


def sub(a: BigWittVec, b: BigWittVec) -> BigWittVec:
    return add(a, neg(b))


def teichmuller(a, ring: Ring, N: int) -> BigWittVec:
    """The multiplicative lift [a] = (a, 0, ..., 0), with gh_n([a]) = a^n."""
    if N < 1:
        raise TruncationError("truncation must be >= 1")
    return BigWittVec.of(ring, [a] + [0] * (N - 1))


def from_ghost(ghosts: Sequence, ring: Ring) -> BigWittVec:
    """Solve for coordinates with prescribed ghost components.

    Needs a torsion-free ring; raises :class:`NonIntegralGhost` when some
    step ``k x_k = g_k - sum_{j | k, j < k} j x_j^(k/j)`` does not divide.
    """
    if not ring.torsion_free:
        raise DomainError(f"ghost inversion needs a torsion-free ring, not {ring}")
    R = ring
    N = len(ghosts)
    divs = _divisors_table(N)
    native = _native(R)
    integral = isinstance(R, Integers)
    xs: list = []
    for k in range(1, N + 1):
        if native and not integral:
            g = R(ghosts[k - 1])
            s = sum_ratios([(g.numerator, g.denominator)]
                           + [(-j * xs[j - 1].numerator ** (k // j),
                               xs[j - 1].denominator ** (k // j)) for j in divs[k][:-1]])
            try:
                xs.append(R(Fraction(s.numerator, s.denominator * k)))
            except DomainError:
                raise NonIntegralGhost(k) from None
            continue
        if native:
            s = R(ghosts[k - 1]) - sum(j * xs[j - 1] ** (k // j) for j in divs[k][:-1])
            if integral:
                if s % k:
                    raise NonIntegralGhost(k)
                xs.append(s // k)
                continue
            try:
                xs.append(R(Fraction(s) / k))
            except DomainError:
                raise NonIntegralGhost(k) from None
            continue
        s = R(ghosts[k - 1])
        for j in divs[k][:-1]:
            s = R.sub(s, R.mul(R.from_int(j), R.pow(xs[j - 1], k // j)))
        try:
            xs.append(R.div_int(s, k))
        except NonExactDivision:
            raise NonIntegralGhost(k) from None
    return BigWittVec(R, tuple(xs))


def to_series(w: BigWittVec) -> TruncSeries:
    """``prod_{k <= N} (1 - x_k X^k)^(-1) mod X^(N+1)``."""
    R = w.ring
    N = w.truncation
    s = TruncSeries.one(R, N)
    for k in range(1, N + 1):
        x = w.coords[k - 1]
        if R.is_zero(x):
            continue
        geo = [R.zero] * (N + 1)
        power = R.one
        for j in range(0, N // k + 1):
            geo[j * k] = power
            power = R.mul(power, x)
        s = series_mul(s, TruncSeries(R, tuple(geo)))
    return s


def from_series(s: TruncSeries) -> BigWittVec:
    """Peel off ``(1 - x_k X^k)^(-1)`` factors in order, reading x_k = c_k."""
    R = s.ring
    if s.coeffs[0] != R.one:
        raise NonunitConstantTerm("series must have constant term 1")
    N = s.truncation
    if N < 1:
        raise TruncationError("series truncation must be >= 1")
    c = list(s.coeffs)
    xs = []
    for k in range(1, N + 1):
        x = c[k]
        xs.append(x)
        if R.is_zero(x):
            continue
        for n in range(N, k - 1, -1):
            c[n] = R.sub(c[n], R.mul(x, c[n - k]))
    return BigWittVec(R, tuple(xs))


def is_unit(w: BigWittVec) -> bool:
    return first_nonunit_ghost(w) is None


def first_nonunit_ghost(w: BigWittVec):
    for n in range(1, w.truncation + 1):
        g = ghost(w, n)
        if not w.ring.is_unit(g):
            return n, g
    return None


def invert(w: BigWittVec) -> BigWittVec:
    """Solve ``w * b = 1`` coordinate by coordinate through the product law.

    The product law's n-th coordinate is ``gh_n(x) * y_n`` plus terms in
    ``y_k`` for k < n, so the system is triangular with unit diagonal
    entries exactly when every ghost component is a unit.
    """
    bad = first_nonunit_ghost(w)
    if bad is not None:
        raise NotAUnit(*bad)
    R = w.ring
    N = w.truncation
    law = laws.big_law(N)
    ys = [R.zero] * N
    for n in range(1, N + 1):
        ys[n - 1] = R.zero
        rest = R(law.evaluate("prod", w.coords, ys)[n - 1])
        target = R.one if n == 1 else R.zero
        ys[n - 1] = R.mul(R.sub(target, rest), R.inv(ghost(w, n)))
    b = BigWittVec(R, tuple(ys))
    if mul(w, b) != BigWittVec.one(R, N):
        raise VerificationFailure("Witt inverse does not verify")
    return b


def _via_ghosts(combine, a: BigWittVec, b: BigWittVec | None = None) -> BigWittVec:
    R = a.ring
    L = R.integral_lift_ring
    la = a.map(L, R.lift)
    gb = b.map(L, R.lift).ghosts() if b is not None else None
    ga = la.ghosts()
    g = [combine(L, x, gb[i] if gb else None) for i, x in enumerate(ga)]
    return from_ghost(g, L).map(R)


def add_via_ghosts(a: BigWittVec, b: BigWittVec) -> BigWittVec:
    _pair(a, b)
    return _via_ghosts(lambda L, x, y: L.add(x, y), a, b)


def mul_via_ghosts(a: BigWittVec, b: BigWittVec) -> BigWittVec:
    _pair(a, b)
    return _via_ghosts(lambda L, x, y: L.mul(x, y), a, b)


def neg_via_ghosts(a: BigWittVec) -> BigWittVec:
    return _via_ghosts(lambda L, x, y: L.neg(x), a)
