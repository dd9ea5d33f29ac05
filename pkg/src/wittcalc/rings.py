"""The coefficient rings: Z, Q, Z_(p), Z/p^N and F_p.

Elements are plain Python values in canonical form: ``int`` for Z and for
residues (always reduced into ``[0, p^N)``), :class:`fractions.Fraction` for
Q and Z_(p).  A ring object knows how to build, combine and serialize its
elements.  All ring objects are immutable and hashable, so they can key
caches and be compared for mismatch detection.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DomainError, NonExactDivision, NotAUnit, RingMismatch

Element = "int | Fraction"


def is_prime(n: int) -> bool:
    """Deterministic trial division; adequate for the primes used here."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def valuation(x, p: int) -> int | float:
    """p-adic valuation of a nonzero int or Fraction; ``inf`` for zero."""
    if x == 0:
        return float("inf")
    x = Fraction(x)
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise DomainError(f"{p!r} is not a prime")
    if p >= 1 << 16:
        raise DomainError(f"prime {p} exceeds the supported range p < 2^16")


def _as_fraction(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact number")


def sum_ratios(pairs) -> Fraction:
    """Sum of ``n/d`` over integer pairs, normalized once at the end."""
    num, den = 0, 1
    for n, d in pairs:
        if d == den:
            num += n
            continue
        g = gcd(den, d)
        if g == 1:
            num = num * d + n * den
            den *= d
        else:
            dg = d // g
            num = num * dg + n * (den // g)
            den *= dg
    return Fraction(num, den)


class Ring:
    """Shared behaviour; concrete rings override the arithmetic hooks."""

    kind: str = ""
    torsion_free: bool = True

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def add(self, a, b):
        return self(a + b)

    def sub(self, a, b):
        return self(a - b)

    def mul(self, a, b):
        return self(a * b)

    def neg(self, a):
        return self(-a)

    def pow(self, a, n: int):
        return self(a ** n) if n >= 0 else self.inv(self(a ** -n))

    def is_zero(self, a) -> bool:
        return a == 0

    def sum(self, values):
        total = 0
        for v in values:
            total += v
        return self(total)

    def from_int(self, n: int):
        return self(n)

    def div_int(self, a, k: int):
        """Exact division ``a / k`` inside the ring."""
        if k == 0:
            raise NonExactDivision("division by zero")
        q = Fraction(a) / k
        try:
            return self(q)
        except DomainError as exc:
            raise NonExactDivision(f"{a} / {k} is not in {self}") from exc

    def is_p_local(self, p: int) -> bool:
        """True when the ring is a Z_(p)-algebra."""
        return False

    def format(self, a) -> str:
        return str(a)

    def parse(self, s):
        return self(s)

    def lift(self, a):
        """A preimage in :attr:`lift_ring` (identity for torsion-free rings)."""
        return a

    @property
    def lift_ring(self) -> Ring:
        return self

    @property
    def integral_lift_ring(self) -> Ring:
        """Torsion-free ring receiving :meth:`lift` for integral Witt laws.

        Sums, products and negatives of integer Witt vectors are integral,
        so residue rings can lift to Z here instead of Z_(p).
        """
        return self.lift_ring

    def check_same(self, other: Ring) -> None:
        if self != other:
            raise RingMismatch(f"ring mismatch: {self} vs {other}")


@dataclass(frozen=True)
class Integers(Ring):
    kind = "integers"

    def __call__(self, x):
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            return x
        q = _as_fraction(x)
        if q.denominator != 1:
            raise DomainError(f"{x} is not an integer")
        return q.numerator

    def is_unit(self, a) -> bool:
        return a in (1, -1)

    def inv(self, a):
        if not self.is_unit(a):
            raise NotAUnit(None, a)
        return a

    def random(self, rng: random.Random, bound: int = 9):
        return rng.randint(-bound, bound)

    def to_json(self) -> dict:
        return {"kind": self.kind}

    def __str__(self):
        return "Z"


@dataclass(frozen=True)
class Rationals(Ring):
    kind = "rationals"

    def __call__(self, x):
        return _as_fraction(x)

    def is_p_local(self, p: int) -> bool:
        return True

    def is_unit(self, a) -> bool:
        return a != 0

    def inv(self, a):
        if a == 0:
            raise NotAUnit(None, a)
        return 1 / Fraction(a)

    def random(self, rng: random.Random, bound: int = 9):
        return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))

    def to_json(self) -> dict:
        return {"kind": self.kind}

    def __str__(self):
        return "Q"


@dataclass(frozen=True)
class PLocalRationals(Ring):
    """Z_(p): rationals whose reduced denominator is prime to p."""

    p: int
    kind = "p-local-rationals"

    def __post_init__(self):
        _check_prime(self.p)

    def __call__(self, x):
        q = _as_fraction(x)
        if q.denominator % self.p == 0:
            raise DomainError(f"{q} is not in Z_({self.p})")
        return q

    def is_p_local(self, p: int) -> bool:
        return p == self.p

    def is_unit(self, a) -> bool:
        return a != 0 and Fraction(a).numerator % self.p != 0

    def inv(self, a):
        if not self.is_unit(a):
            raise NotAUnit(None, a)
        return 1 / Fraction(a)

    def random(self, rng: random.Random, bound: int = 9):
        den = rng.randint(1, bound)
        while den % self.p == 0:
            den = rng.randint(1, bound)
        return Fraction(rng.randint(-bound, bound), den)

    def to_json(self) -> dict:
        return {"kind": self.kind, "p": self.p}

    def __str__(self):
        return f"Z_({self.p})"


@dataclass(frozen=True)
class ModPrimePower(Ring):
    """Z/p^N, the precision-N truncation of the p-adic integers."""

    p: int
    N: int
    kind = "mod-prime-power"
    torsion_free = False

    def __post_init__(self):
        _check_prime(self.p)
        if not isinstance(self.N, int) or self.N < 1:
            raise DomainError(f"precision exponent must be >= 1, got {self.N!r}")

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    def __call__(self, x):
        if isinstance(x, int):
            return x % self.modulus
        q = _as_fraction(x)
        if q.denominator % self.p == 0:
            raise DomainError(f"{q} has no image in {self}")
        m = self.modulus
        return q.numerator * pow(q.denominator, -1, m) % m

    def pow(self, a, n: int):
        if n < 0:
            return pow(self.inv(a), -n, self.modulus)
        return pow(a, n, self.modulus)

    def is_p_local(self, p: int) -> bool:
        return p == self.p

    def is_unit(self, a) -> bool:
        return a % self.p != 0

    def inv(self, a):
        if not self.is_unit(a):
            raise NotAUnit(None, a)
        return pow(a, -1, self.modulus)

    def div_int(self, a, k: int):
        m = self.modulus
        g = gcd(k, m)
        if a % g:
            raise NonExactDivision(f"{a} / {k} is not defined in {self}")
        if g == 1:
            return a * pow(k, -1, m) % m
        # not unique when p | k; callers only divide by units here
        raise NonExactDivision(f"division by the non-unit {k} in {self}")

    def lift(self, a):
        return a

    @property
    def lift_ring(self) -> Ring:
        return PLocalRationals(self.p)

    @property
    def integral_lift_ring(self) -> Ring:
        return Integers()

    def random(self, rng: random.Random, bound: int | None = None):
        return rng.randrange(self.modulus)

    def to_json(self) -> dict:
        return {"kind": self.kind, "p": self.p, "N": self.N}

    def __str__(self):
        return f"Z/{self.p}^{self.N}"


@dataclass(frozen=True)
class PrimeField(ModPrimePower):
    """F_p.  Shares the residue machinery of Z/p^1 but is its own kind."""

    p: int
    N: int = 1
    kind = "prime-field"

    def __post_init__(self):
        super().__post_init__()
        if self.N != 1:
            raise DomainError("a prime field has precision exponent 1")

    def to_json(self) -> dict:
        return {"kind": self.kind, "p": self.p}

    def __str__(self):
        return f"F_{self.p}"


def same_ring(*rings: Ring) -> Ring:
    first = rings[0]
    for r in rings[1:]:
        first.check_same(r)
    return first


def ring_from_json(doc: dict) -> Ring:
    kind = doc.get("kind")
    if kind == "integers":
        return Integers()
    if kind == "rationals":
        return Rationals()
    if kind == "p-local-rationals":
        return PLocalRationals(int(doc["p"]))
    if kind == "mod-prime-power":
        return ModPrimePower(int(doc["p"]), int(doc["N"]))
    if kind == "prime-field":
        return PrimeField(int(doc["p"]))
    raise DomainError(f"unknown ring kind {kind!r}")


_RING_PATTERNS = [
    (re.compile(r"^(Z|ZZ|integers)$"), lambda m: Integers()),
    (re.compile(r"^(Q|QQ|rationals)$"), lambda m: Rationals()),
    (re.compile(r"^Z_?\((\d+)\)$"), lambda m: PLocalRationals(int(m[1]))),
    (re.compile(r"^Z/(\d+)\^(\d+)$"), lambda m: ModPrimePower(int(m[1]), int(m[2]))),
    (re.compile(r"^(?:F|GF)_?(\d+)$"), lambda m: PrimeField(int(m[1]))),
]


def parse_ring(text: str) -> Ring:
    """Parse the short forms ``Z``, ``Q``, ``Z_(p)``, ``Z/p^N``, ``F_p``."""
    s = text.strip().replace(" ", "")
    for pattern, build in _RING_PATTERNS:
        m = pattern.match(s)
        if m:
            return build(m)
    raise DomainError(f"unrecognized ring {text!r}")


def reduction_map(source: Ring, target: Ring):
    """The canonical ring map ``source -> target`` as a function, if any.

    Supported maps are the evident ones among the enumerated rings: Z to
    everything, Z_(p) to Q and to Z/p^N, Z/p^N to Z/p^M for M <= N, and the
    identity.
    """
    if source == target:
        return lambda a: a
    if isinstance(source, Integers):
        return target
    if isinstance(source, PLocalRationals):
        if isinstance(target, Rationals) or (
                isinstance(target, (ModPrimePower, PLocalRationals))
                and target.p == source.p):
            return target
    if isinstance(source, ModPrimePower) and isinstance(target, ModPrimePower):
        if target.p == source.p and target.N <= source.N:
            return target
    raise DomainError(f"no canonical ring map {source} -> {target}")
