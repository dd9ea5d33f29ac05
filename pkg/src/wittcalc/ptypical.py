"""p-typical Witt vectors of finite length.

Coordinates ``a_0..a_d`` correspond to the big Witt coordinates
``x_1, x_p, ..., x_{p^d}``; ghost components are
``gh_{p^k} = sum_{j <= k} p^j a_j^(p^(k-j))``.

Arithmetic has two independent routes.  The law route evaluates the
certified universal p-typical polynomials and is used by default while the
ghost weight ``p^d`` is at most :data:`LAW_ROUTE_MAX_WEIGHT`.  The
ghost route lifts coordinates to a torsion-free ring (Z, Z_(p) or Q),
combines ghost components there, inverts the ghost map exactly and maps the
result back; this is legitimate because reduction of coefficients is a
ring homomorphism on Witt vectors.  Heavier lengths use the ghost route;
laws up to weight :data:`wittcalc.laws.LAW_MAX_WEIGHT` can still be
requested explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import laws
from .bigwitt import BigWittVec
from .errors import (DomainError, InsufficientPrecision, NonExactDivision,
                     NonIntegralGhost, NotAUnit, NotPLocalRing, RingMismatch,
                     TruncationError, VerificationFailure)
from .rings import (Integers, ModPrimePower, PLocalRationals, PrimeField, Rationals, Ring,
                    is_prime, ring_from_json, sum_ratios)


@dataclass(frozen=True)
class PWittVec:
    prime: int
    ring: Ring
    coords: tuple

    @classmethod
    def of(cls, p: int, ring: Ring, coords: Sequence) -> PWittVec:
        if not is_prime(p):
            raise DomainError(f"{p} is not a prime")
        if not coords:
            raise TruncationError("a p-typical Witt vector needs length >= 1")
        return cls(p, ring, tuple(ring(c) for c in coords))

    @classmethod
    def zero(cls, p: int, ring: Ring, length: int) -> PWittVec:
        return cls.of(p, ring, [0] * length)

    @classmethod
    def one(cls, p: int, ring: Ring, length: int) -> PWittVec:
        return teich_p(1, p, ring, length)

    @classmethod
    def from_int(cls, n: int, p: int, ring: Ring, length: int) -> PWittVec:
        base = ring.lift_ring
        return p_from_ghost([base(n)] * length, p, base).map(ring)

    @property
    def length(self) -> int:
        return len(self.coords)

    def ghost(self, k: int):
        return ghost_p(self, k)

    def ghosts(self) -> list:
        return ghosts_p(self)

    def map(self, target: Ring, fn: Callable | None = None) -> PWittVec:
        fn = fn or target
        return PWittVec(self.prime, target, tuple(target(fn(c)) for c in self.coords))

    def truncate(self, length: int) -> PWittVec:
        if not 1 <= length <= self.length:
            raise TruncationError(f"cannot truncate length {self.length} to {length}")
        return PWittVec(self.prime, self.ring, self.coords[:length])

    def __add__(self, other):
        return p_add(self, other)

    def __sub__(self, other):
        return p_sub(self, other)

    def __mul__(self, other):
        return p_mul(self, other)

    def __neg__(self):
        return p_neg(self)

    def inverse(self) -> PWittVec:
        return p_invert(self)

    def to_json(self) -> dict:
        return {"kind": "p-witt", "prime": self.prime, "length": self.length,
                "ring": self.ring.to_json(),
                "coords": [self.ring.format(c) for c in self.coords]}

    @classmethod
    def from_json(cls, doc: dict) -> PWittVec:
        if doc.get("kind") != "p-witt":
            raise DomainError("not a p-witt value")
        w = cls.of(int(doc["prime"]), ring_from_json(doc["ring"]), doc["coords"])
        if "length" in doc and int(doc["length"]) != w.length:
            raise TruncationError("length does not match coordinate count")
        return w


def ghost_p(w: PWittVec, k: int):
    if not 0 <= k < w.length:
        raise TruncationError(f"ghost index p^{k} out of range for length {w.length}")
    R, p = w.ring, w.prime
    return R.sum(R.mul(R.from_int(p ** j), R.pow(w.coords[j], p ** (k - j)))
                 for j in range(k + 1))


def _native(R: Ring) -> bool:
    return type(R) in (Integers, Rationals, PLocalRationals, ModPrimePower, PrimeField)


def ghosts_p(w: PWittVec) -> list:
    """All ghost components, with powers built up incrementally."""
    R, p = w.ring, w.prime
    if not _native(R):
        return [ghost_p(w, k) for k in range(w.length)]
    if isinstance(R, (Rationals, PLocalRationals)):
        out, pw = [], []
        for c in w.coords:
            pw = [(n ** p, d ** p) for n, d in pw]
            pw.append((c.numerator, c.denominator))
            out.append(sum_ratios((p ** j * n, d) for j, (n, d) in enumerate(pw)))
        return out
    m = R.modulus if isinstance(R, ModPrimePower) else None
    out, pw = [], []
    for k, c in enumerate(w.coords):
        pw = [pow(x, p, m) if m else x ** p for x in pw]
        pw.append(c)
        out.append(R(sum(p ** j * x for j, x in enumerate(pw))))
    return out


def p_from_ghost(ghosts: Sequence, p: int, ring: Ring) -> PWittVec:
    """Invert ``gh_{p^k}`` over a torsion-free ring, exactly."""
    if not ring.torsion_free:
        raise DomainError(f"ghost inversion needs a torsion-free ring, not {ring}")
    R = ring
    if _native(R):
        return _p_from_ghost_native(ghosts, p, R)
    xs: list = []
    for k, g in enumerate(ghosts):
        s = R(g)
        for j in range(k):
            s = R.sub(s, R.mul(R.from_int(p ** j), R.pow(xs[j], p ** (k - j))))
        try:
            xs.append(R.div_int(s, p ** k))
        except NonExactDivision:
            raise NonIntegralGhost(p ** k) from None
    return PWittVec(p, R, tuple(xs))


def _p_from_ghost_native(ghosts, p: int, R: Ring) -> PWittVec:
    integral = isinstance(R, Integers)
    xs: list = []
    pw: list = []
    for k, g in enumerate(ghosts):
        q = p ** k
        if not integral:
            g = R(g)
            pw = [(n ** p, d ** p) for n, d in pw]
            s = sum_ratios([(g.numerator, g.denominator)]
                           + [(-p ** j * n, d) for j, (n, d) in enumerate(pw)])
            try:
                x = R(Fraction(s.numerator, s.denominator * q))
            except DomainError:
                raise NonIntegralGhost(q) from None
            xs.append(x)
            pw.append((x.numerator, x.denominator))
            continue
        pw = [x ** p for x in pw]
        s = R(g) - sum(p ** j * x for j, x in enumerate(pw))
        if integral:
            if s % q:
                raise NonIntegralGhost(q)
            x = s // q
        else:
            try:
                x = R(Fraction(s) / q)
            except DomainError:
                raise NonIntegralGhost(q) from None
        xs.append(x)
        pw.append(x)
    return PWittVec(p, R, tuple(xs))


def _pair(a: PWittVec, b: PWittVec) -> None:
    if a.prime != b.prime:
        raise RingMismatch(f"prime {a.prime} vs {b.prime}")
    a.ring.check_same(b.ring)
    if a.length != b.length:
        raise TruncationError(f"length {a.length} vs {b.length}")


# Beyond this weight the ghost route (exact integer or rational arithmetic)
# is faster than evaluating the laws, even where they are cheap to derive.
LAW_ROUTE_MAX_WEIGHT = 9


def _route(a: PWittVec, method: str) -> str:
    if method == "auto":
        cheap = a.prime ** (a.length - 1) <= LAW_ROUTE_MAX_WEIGHT
        return "law" if cheap else "ghost"
    if method not in ("law", "ghost"):
        raise DomainError(f"unknown method {method!r}")
    return method


def _by_law(op: str, a: PWittVec, b: PWittVec | None) -> PWittVec:
    law = laws.ptypical_law(a.prime, a.length)
    vals = law.evaluate(op, a.coords, b.coords if b is not None else None)
    return PWittVec(a.prime, a.ring, tuple(a.ring(v) for v in vals))


def _by_ghosts(combine, a: PWittVec, b: PWittVec | None) -> PWittVec:
    R = a.ring
    L = R.integral_lift_ring
    ga = a.map(L, R.lift).ghosts()
    gb = b.map(L, R.lift).ghosts() if b is not None else [None] * a.length
    g = [combine(L, x, y) for x, y in zip(ga, gb)]
    return p_from_ghost(g, a.prime, L).map(R)


def p_add(a: PWittVec, b: PWittVec, method: str = "auto") -> PWittVec:
    _pair(a, b)
    if _route(a, method) == "law":
        return _by_law("sum", a, b)
    return _by_ghosts(lambda L, x, y: L.add(x, y), a, b)


def p_mul(a: PWittVec, b: PWittVec, method: str = "auto") -> PWittVec:
    _pair(a, b)
    if _route(a, method) == "law":
        return _by_law("prod", a, b)
    return _by_ghosts(lambda L, x, y: L.mul(x, y), a, b)


def p_neg(a: PWittVec, method: str = "auto") -> PWittVec:
    if _route(a, method) == "law":
        return _by_law("neg", a, None)
    return _by_ghosts(lambda L, x, y: L.neg(x), a, None)


def p_sub(a: PWittVec, b: PWittVec, method: str = "auto") -> PWittVec:
    return p_add(a, p_neg(b, method), method)


def teich_p(a, p: int, ring: Ring, length: int) -> PWittVec:
    if length < 1:
        raise TruncationError("length must be >= 1")
    return PWittVec.of(p, ring, [a] + [0] * (length - 1))


def first_nonunit_ghost(a: PWittVec):
    for k in range(a.length):
        g = ghost_p(a, k)
        if not a.ring.is_unit(g):
            return k, g
    return None


def is_unit(a: PWittVec) -> bool:
    return first_nonunit_ghost(a) is None


def p_invert(a: PWittVec, method: str = "auto") -> PWittVec:
    """Inverse in W_p(A); raises NotAUnit(k) at the first non-unit ghost."""
    bad = first_nonunit_ghost(a)
    if bad is not None:
        raise NotAUnit(*bad)
    R, p = a.ring, a.prime
    if _route(a, method) == "law":
        law = laws.ptypical_law(p, a.length)
        ys = [R.zero] * a.length
        for k in range(a.length):
            ys[k] = R.zero
            rest = R(law.evaluate("prod", a.coords, ys)[k])
            target = R.one if k == 0 else R.zero
            ys[k] = R.mul(R.sub(target, rest), R.inv(ghost_p(a, k)))
        b = PWittVec(p, R, tuple(ys))
    else:
        L = R.lift_ring
        g = a.map(L, R.lift).ghosts()
        b = p_from_ghost([L.inv(x) for x in g], p, L).map(R)
    if p_mul(a, b, method) != PWittVec.one(p, R, a.length):
        raise VerificationFailure("p-typical inverse does not verify")
    return b


def project(w: BigWittVec, p: int, length: int | None = None) -> PWittVec:
    """The surjection W_Z -> W_p: keep the coordinates x_{p^k}."""
    max_len = 0
    while p ** max_len <= w.truncation:
        max_len += 1
    if length is None:
        length = max_len
    if length < 1 or length > max_len:
        raise TruncationError(
            f"length {length} needs truncation >= {p}^{length - 1}, have {w.truncation}")
    return PWittVec(p, w.ring, tuple(w.coords[p ** k - 1] for k in range(length)))


def section_j(a: PWittVec, N: int | None = None) -> BigWittVec:
    """The section of the projection over Z_(p)-algebras.

    Its ghost components are ``gh_{p^k}(a)`` at p-powers and 0 elsewhere.
    The result has truncation N (default ``p^d``); N must stay below
    ``p^(d+1)`` since higher coordinates depend on unseen input.
    """
    p = a.prime
    if not a.ring.is_p_local(p):
        raise NotPLocalRing(f"the section needs a {p}-local ring, not {a.ring}")
    if N is None:
        N = p ** (a.length - 1)
    if N < 1 or N >= p ** a.length:
        raise TruncationError(
            f"section of a length-{a.length} vector supports 1 <= N < {p ** a.length}")
    law = laws.section_law(p, N)
    vals = law.evaluate(a.coords[:law.length])
    return BigWittVec(a.ring, tuple(a.ring(v) for v in vals))


def frobenius(a: PWittVec) -> PWittVec:
    """F, with ``gh_{p^k}(F a) = gh_{p^(k+1)}(a)``; length drops by one."""
    if a.length < 2:
        raise TruncationError("Frobenius needs length >= 2")
    R = a.ring
    L = R.integral_lift_ring
    g = a.map(L, R.lift).ghosts()
    return p_from_ghost(g[1:], a.prime, L).map(R)


def verschiebung(a: PWittVec) -> PWittVec:
    """V(a_0..a_d) = (0, a_0..a_d)."""
    return PWittVec(a.prime, a.ring, (a.ring.zero,) + a.coords)


def _check_residue_vector(abar: PWittVec) -> None:
    R = abar.ring
    if not isinstance(R, ModPrimePower) or R.N != 1 or R.p != abar.prime:
        raise DomainError(f"expected coordinates in F_{abar.prime}, got {R}")


def tilde_ghost(d: int, abar: PWittVec, A: Ring | None = None,
                lift_fn: Callable | None = None) -> int:
    """``gh_{p^d}`` of any coordinate lift of ``abar`` to A, reduced mod p^(d+1).

    The value does not depend on the lift; ``lift_fn`` chooses one (default:
    the canonical representative in ``[0, p)``).
    """
    _check_residue_vector(abar)
    p = abar.prime
    if d < 0 or d >= abar.length:
        raise TruncationError(f"level {d} needs length >= {d + 1}")
    A = A or Integers()
    if isinstance(A, ModPrimePower):
        if A.p != p:
            raise DomainError(f"{A} is not a lift ring for F_{p}")
        if A.N < d + 1:
            raise InsufficientPrecision(f"{A} cannot resolve level {d}")
    elif isinstance(A, PLocalRationals):
        if A.p != p:
            raise DomainError(f"{A} is not a lift ring for F_{p}")
    elif not isinstance(A, Integers):
        raise DomainError(f"unsupported lift ring {A}")
    lift_fn = lift_fn or (lambda c: c)
    residue = PrimeField(p)
    lifts = []
    for c in abar.coords[:d + 1]:
        x = A(lift_fn(c))
        if residue(x) != c:
            raise DomainError(f"{x} does not lift {c} mod {p}")
        lifts.append(x)
    g = A.sum(A.mul(A.from_int(p ** j), A.pow(lifts[j], p ** (d - j)))
              for j in range(d + 1))
    return ModPrimePower(p, d + 1)(g)


def to_padic(a: PWittVec) -> int:
    """W_p(F_p) -> Z/p^(d+1) for a vector of length d+1."""
    return tilde_ghost(a.length - 1, a, Integers())


def from_padic(r: int, p: int, length: int) -> PWittVec:
    """Inverse of :func:`to_padic`, solved one coordinate at a time."""
    target = ModPrimePower(p, length)(r)
    F = PrimeField(p)
    coords: list[int] = []
    for k in range(length):
        want = target % p ** (k + 1)
        for c in range(p):
            trial = PWittVec(p, F, tuple(coords + [c]))
            if tilde_ghost(k, trial, Integers()) == want:
                coords.append(c)
                break
        else:
            raise VerificationFailure(f"no coordinate {k} reproduces {r} mod {p}^{k + 1}")
    return PWittVec(p, F, tuple(coords))
