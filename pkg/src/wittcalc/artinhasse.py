"""Subgroup-count series, their p-adic limit, and height-h Artin-Hasse
exponentials together with the splitting of W_Z over Z_(p)."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import bigwitt
from .bigwitt import BigWittVec
from .errors import DomainError, VerificationFailure
from .ptypical import (PWittVec, p_invert, p_mul, project, section_j,
                       to_padic)
from .rings import PLocalRationals, PrimeField, Rationals, is_prime, valuation
from .series import TruncSeries, clear_to_plocal, series_exp


@dataclass(frozen=True)
class SubgroupCountSeries:
    """``coeffs[d]`` = number of subgroups of order p^d in (Q_p/Z_p)^h."""

    h: int
    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.coeffs[0] != 1 or any(c % self.p != 1 % self.p for c in self.coeffs):
            raise VerificationFailure("subgroup counts must be 1 mod p")

    def partial_sum(self, d: int) -> int:
        return sum(self.coeffs[:d])


def _check_hp(h: int, p: int) -> None:
    if h < 1:
        raise DomainError("height must be >= 1")
    if not is_prime(p):
        raise DomainError(f"{p} is not a prime")


@lru_cache(maxsize=None)
def nh_coeffs(h: int, p: int, D: int) -> SubgroupCountSeries:
    """Expand ``1 / ((1-T)(1-pT)...(1-p^(h-1)T))`` through T^D."""
    _check_hp(h, p)
    if D < 0:
        raise DomainError("depth must be >= 0")
    c = [1] + [0] * D
    for i in range(h):
        q = p ** i
        for n in range(1, D + 1):     # multiply by 1/(1 - qT) in place
            c[n] += q * c[n - 1]
    return SubgroupCountSeries(h, p, tuple(c))


def nh_infinity(h: int, p: int, M: int) -> int:
    """``[(1-p)(1-p^2)...(1-p^(h-1))]^(-1) mod p^M`` (empty product is 1)."""
    _check_hp(h, p)
    prod = 1
    for i in range(1, h):
        prod *= 1 - p ** i
    return pow(prod, -1, p ** M)


def nh_infinity_exact(h: int, p: int) -> Fraction:
    prod = 1
    for i in range(1, h):
        prod *= 1 - p ** i
    return Fraction(1, prod)


def convergence_gap(h: int, p: int, d: int) -> int | float:
    """``v_p(N^h_{p^d} - N^h_{p^infinity})``."""
    return valuation(nh_coeffs(h, p, d).coeffs[d] - nh_infinity_exact(h, p), p)


def ah_exponent(h: int, p: int, N: int) -> TruncSeries:
    """``sum_{p^d <= N} N^h_{p^d} / p^d X^(p^d)`` over Q."""
    Q = Rationals()
    D = 0
    while p ** (D + 1) <= N:
        D += 1
    counts = nh_coeffs(h, p, D).coeffs
    vals = [Fraction(0)] * (N + 1)
    for d in range(D + 1):
        vals[p ** d] = Fraction(counts[d], p ** d)
    return TruncSeries(Q, tuple(vals))


@dataclass(frozen=True)
class ArtinHasseElement:
    h: int
    p: int
    as_series: TruncSeries
    as_big_witt: BigWittVec
    as_p_typical: PWittVec

    @property
    def truncation(self) -> int:
        return self.as_series.truncation

    def to_json(self) -> dict:
        ghosts = {str(n): self.as_big_witt.ring.format(g)
                  for n, g in enumerate(self.as_big_witt.ghosts(), start=1)}
        return {"h": self.h, "p": self.p, "series": self.as_series.to_json(),
                "big_witt": self.as_big_witt.to_json(),
                "p_typical": self.as_p_typical.to_json(), "ghosts": ghosts}


def ghost_spectrum(h: int, p: int, N: int) -> list[int]:
    """Expected ghosts: N^h_{p^d} at index p^d, zero elsewhere."""
    D = 0
    while p ** (D + 1) <= N:
        D += 1
    counts = nh_coeffs(h, p, D).coeffs
    out = [0] * N
    for d in range(D + 1):
        out[p ** d - 1] = counts[d]
    return out


@lru_cache(maxsize=64)
def artin_hasse(h: int, p: int, N: int) -> ArtinHasseElement:
    """The height-h Artin-Hasse exponential at p, truncated at X^N.

    Computed as ``exp(sum_d N^h_{p^d} X^(p^d) / p^d)`` over Q, certified
    p-local coefficient by coefficient, then converted to big Witt
    coordinates and projected.  The ghost spectrum is checked on the way.
    """
    _check_hp(h, p)
    if N < 1:
        raise DomainError("truncation must be >= 1")
    series = clear_to_plocal(series_exp(ah_exponent(h, p, N)), p)
    w = bigwitt.from_series(series)
    if [Fraction(g) for g in w.ghosts()] != ghost_spectrum(h, p, N):
        raise VerificationFailure(f"ghost spectrum of AH^{h} at p={p} is wrong")
    return ArtinHasseElement(h, p, series, w, project(w, p))


def idempotent_e(p: int, N: int) -> BigWittVec:
    """``1 - AH^1_Z``: ghosts 1 off the p-powers and 0 on them."""
    ah = artin_hasse(1, p, N).as_big_witt
    return BigWittVec.one(ah.ring, N) - ah


def random_big_witt(ring, N: int, rng: random.Random, bound: int = 5) -> BigWittVec:
    return BigWittVec.of(ring, [ring.random(rng, bound) for _ in range(N)])


def ah_identity_check(h: int, p: int, N: int, samples: int = 50,
                      seed: int = 0) -> dict:
    """Check the splitting identities at truncation N.

    (i) AH^1_p is the unit of W_p(Z_(p)); (ii) for random a, the element
    j(AH^h_p * project(a)) equals AH^h_Z * a and its ghosts are
    N^h_{p^d} gh_{p^d}(a) at p-powers, 0 elsewhere; (iii) AH^h_p is a unit.
    """
    R = PLocalRationals(p)
    rng = random.Random(seed)
    ah = artin_hasse(h, p, N)
    ahp = ah.as_p_typical
    L = ahp.length
    checks = []

    def record(name, ok, detail=""):
        checks.append({"name": name, "passed": bool(ok), "detail": detail})

    ah1 = artin_hasse(1, p, N).as_p_typical
    record("AH1_p_is_one", ah1 == PWittVec.one(p, R, L))

    spectrum = ghost_spectrum(h, p, N)
    failures = 0
    for _ in range(samples):
        a = random_big_witt(R, N, rng)
        lhs = section_j(p_mul(ahp, project(a, p, L)), N)
        rhs = ah.as_big_witt * a
        ga = a.ghosts()
        want = [spectrum[n] * ga[n] for n in range(N)]
        if lhs != rhs or [Fraction(g) for g in rhs.ghosts()] != want:
            failures += 1
    record("splitting_square", failures == 0, f"{failures}/{samples} failures")

    try:
        inv = p_invert(ahp)
        ok = p_mul(ahp, inv) == PWittVec.one(p, R, L)
    except Exception as exc:     # reported, not raised
        ok, inv = False, exc
    record("AH_p_invertible", ok)

    first = next((c["name"] for c in checks if not c["passed"]), None)
    return {"h": h, "p": p, "truncation": N, "samples": samples, "seed": seed,
            "checks": checks, "first_failure": first,
            "status": "pass" if first is None else "fail"}


def ah_image_in_padics(h: int, p: int, d: int) -> int:
    """Image of AH^h_p in W_p(F_p) = Z/p^(d+1); verified against N^h_{p^inf}."""
    ah = artin_hasse(h, p, p ** d)
    F = PrimeField(p)
    abar = ah.as_p_typical.truncate(d + 1).map(F)
    residue = to_padic(abar)
    expected = nh_infinity(h, p, d + 1)
    if residue != expected:
        raise VerificationFailure(
            f"AH^{h}_p maps to {residue}, expected {expected} mod {p}^{d + 1}")
    return residue


def ah_coefficient(h: int, p: int, m: int) -> Fraction:
    return Fraction(artin_hasse(h, p, max(m, 1)).as_series[m])
