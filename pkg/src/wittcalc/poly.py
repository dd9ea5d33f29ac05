"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`PolyRing` fixes an ordered tuple of variable names.  Monomials are
packed into a single Python integer, ``bits`` bits per exponent, so that
multiplying monomials is integer addition.  Exponent overflow is guarded by
a propagated total-degree bound.

Coefficients are ``int`` wherever possible and :class:`Fraction` otherwise;
zero coefficients are never stored.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, NonExactDivision


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


_NAME_RE = re.compile(r"^([A-Za-z_]+)(\d*)$")


def _name_key(name: str):
    m = _NAME_RE.match(name)
    if not m:
        return (name, -1)
    return (m[1], int(m[2]) if m[2] else -1)


class PolyRing:
    """Q[names]; also usable as a coefficient ring for truncated series."""

    kind = "polynomials"
    torsion_free = True

    def __init__(self, names: Iterable[str], bits: int = 16):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise DomainError("duplicate variable names")
        self.bits = bits
        self.mask = (1 << bits) - 1
        self.index = {n: i for i, n in enumerate(self.names)}

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names \
            and self.bits == other.bits

    def __hash__(self):
        return hash((self.names, self.bits))

    def __repr__(self):
        return f"PolyRing({', '.join(self.names)})"

    __str__ = __repr__

    # monomial packing

    def pack(self, exps: Sequence[int]) -> int:
        key = 0
        for i, e in enumerate(exps):
            if e:
                if e < 0 or e > self.mask:
                    raise OverflowError(f"exponent {e} out of range")
                key |= e << (i * self.bits)
        return key

    def unpack(self, key: int) -> list[int]:
        out = []
        b, m = self.bits, self.mask
        for _ in self.names:
            out.append(key & m)
            key >>= b
        return out

    def sparse_exponents(self, key: int) -> list[tuple[int, int]]:
        """Nonzero ``(variable index, exponent)`` pairs of a monomial."""
        out = []
        b, m = self.bits, self.mask
        i = 0
        while key:
            e = key & m
            if e:
                out.append((i, e))
            key >>= b
            i += 1
        return out

    def degree_of(self, key: int) -> int:
        return sum(e for _, e in self.sparse_exponents(key))

    # constructors

    def gen(self, name: str) -> SparsePoly:
        i = self.index[name]
        return SparsePoly(self, {1 << (i * self.bits): 1}, 1)

    @property
    def gens(self) -> tuple[SparsePoly, ...]:
        return tuple(self.gen(n) for n in self.names)

    def const(self, c) -> SparsePoly:
        c = _norm(Fraction(c)) if not isinstance(c, int) else c
        return SparsePoly(self, {0: c} if c else {}, 0)

    def monomial(self, exps: Mapping[str, int], coeff=1) -> SparsePoly:
        vec = [0] * len(self.names)
        for name, e in exps.items():
            vec[self.index[name]] += e
        deg = sum(vec)
        return SparsePoly(self, {self.pack(vec): _norm(coeff)} if coeff else {}, deg)

    # ring interface used by the series module

    def __call__(self, x) -> SparsePoly:
        if isinstance(x, SparsePoly):
            if x.ring != self:
                raise DomainError("polynomial from a different ring")
            return x
        if isinstance(x, str):
            return self.parse(x)
        return self.const(x)

    @property
    def zero(self) -> SparsePoly:
        return SparsePoly(self, {}, 0)

    @property
    def one(self) -> SparsePoly:
        return self.const(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a) -> bool:
        return not a.terms

    def div_int(self, a, k: int):
        return a.div_int(k)

    def from_int(self, n):
        return self.const(n)

    def sum(self, values):
        total = self.zero
        for v in values:
            total = total + v
        return total

    def is_unit(self, a) -> bool:
        return a.is_constant() and a.constant() != 0

    def inv(self, a):
        if not self.is_unit(a):
            raise DomainError(f"{a} is not a unit")
        return self.const(1 / Fraction(a.constant()))

    def is_p_local(self, p: int) -> bool:
        return True

    def format(self, a) -> str:
        return a.format()

    # text form

    def format_monomial(self, key: int) -> str:
        parts = []
        for i, e in self.sparse_exponents(key):
            name = self.names[i]
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    def parse(self, text: str) -> SparsePoly:
        s = text.strip()
        if s in ("", "0"):
            return self.zero
        s = re.sub(r"\s+", " ", s)
        s = s.replace(" - ", " + -").replace(" + + ", " + ")
        if s.startswith("+"):
            s = s[1:].strip()
        total = {}
        for term in s.split(" + "):
            term = term.strip()
            sign = 1
            if term.startswith("-"):
                sign, term = -1, term[1:].strip()
            coeff = Fraction(sign)
            vec = [0] * len(self.names)
            for factor in term.split("*"):
                factor = factor.strip()
                if not factor:
                    raise DomainError(f"malformed term {term!r}")
                if factor[0].isdigit():
                    coeff *= Fraction(factor)
                    continue
                name, _, exp = factor.partition("^")
                if name not in self.index:
                    raise DomainError(f"unknown variable {name!r}")
                vec[self.index[name]] += int(exp) if exp else 1
            key = self.pack(vec)
            total[key] = total.get(key, 0) + coeff
        terms = {k: _norm(c) for k, c in total.items() if c}
        deg = max((self.degree_of(k) for k in terms), default=0)
        return SparsePoly(self, terms, deg)


class SparsePoly:
    """An element of a :class:`PolyRing`.  Treat instances as immutable."""

    __slots__ = ("ring", "terms", "deg_bound", "__dict__")

    def __init__(self, ring: PolyRing, terms: dict, deg_bound: int):
        self.ring = ring
        self.terms = terms
        self.deg_bound = deg_bound

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, SparsePoly):
            if other.ring != self.ring:
                raise DomainError("polynomials from different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(other.terms) > len(self.terms):
            a, b = other, self
        else:
            a, b = self, other
        res = dict(a.terms)
        for k, c in b.terms.items():
            v = res.get(k, 0) + c
            if v:
                res[k] = _norm(v)
            else:
                res.pop(k, None)
        return SparsePoly(self.ring, res, max(a.deg_bound, b.deg_bound))

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly(self.ring, {k: -c for k, c in self.terms.items()},
                          self.deg_bound)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.ring.zero
            return SparsePoly(self.ring,
                              {k: _norm(c * other) for k, c in self.terms.items()},
                              self.deg_bound)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        bound = self.deg_bound + other.deg_bound
        if bound > self.ring.mask:
            raise OverflowError("degree bound exceeds monomial packing width")
        res: dict = {}
        get = res.get
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                k = ka + kb
                res[k] = get(k, 0) + ca * cb
        terms = {k: _norm(c) for k, c in res.items() if c}
        return SparsePoly(self.ring, terms, bound)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def div_int(self, k: int) -> SparsePoly:
        if k == 0:
            raise NonExactDivision("division by zero")
        return SparsePoly(self.ring,
                          {m: _norm(Fraction(c) / k) for m, c in self.terms.items()},
                          self.deg_bound)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # inspection

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(k == 0 for k in self.terms)

    def constant(self):
        return self.terms.get(0, 0)

    @cached_property
    def degree(self) -> int:
        return max((self.ring.degree_of(k) for k in self.terms), default=0)

    def coefficient(self, exps: Mapping[str, int]):
        vec = [0] * len(self.ring.names)
        for name, e in exps.items():
            vec[self.ring.index[name]] = e
        return self.terms.get(self.ring.pack(vec), 0)

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    def denominators(self) -> set[int]:
        return {Fraction(c).denominator for c in self.terms.values()} - {1}

    def variables(self) -> set[str]:
        used = set()
        for k in self.terms:
            for i, _ in self.ring.sparse_exponents(k):
                used.add(self.ring.names[i])
        return used

    def weighted_degrees(self, weights: Sequence[int]) -> set[int]:
        """Set of weighted degrees of the monomials (singleton iff isobaric)."""
        out = set()
        for k in self.terms:
            out.add(sum(weights[i] * e for i, e in self.ring.sparse_exponents(k)))
        return out

    def evaluate(self, values: Sequence):
        """Substitute ``values`` (one per ring variable) with Python arithmetic."""
        total = 0
        for k, c in self.terms.items():
            term = c
            for i, e in self.ring.sparse_exponents(k):
                term = term * values[i] ** e
            total = total + term
        return total

    def sorted_terms(self) -> list[tuple[int, object]]:
        """Terms in the canonical order: by total degree, then exponent
        vectors in descending lexicographic order of the variable list."""
        ring = self.ring

        def order(item):
            key = item[0]
            vec = ring.unpack(key)
            return (sum(vec), [-e for e in vec])

        return sorted(self.terms.items(), key=order)

    def format(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for key, c in self.sorted_terms():
            mono = self.ring.format_monomial(key)
            neg = c < 0
            mag = -c if neg else c
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not pieces:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append(("- " if neg else "+ ") + body)
        return " ".join(pieces)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"SparsePoly({self.format()!r})"
