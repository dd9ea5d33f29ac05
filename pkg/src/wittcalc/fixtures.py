"""Finite presentations of height-2 Lubin-Tate quotients and their invariants.

A presentation describes ``Z[a] / (p^N, r_1, ..., r_k)``.  The relation of
least degree whose leading coefficient is a unit mod p is normalized to a
monic ``f`` of degree e; the quotient is then a quotient of the free
``Z/p^N``-module on ``1, a, ..., a^(e-1)`` and its composition length over
F_p is read off a Smith normal form.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

from .artinhasse import nh_coeffs
from .errors import DomainError, NonTerminatingReduction, NotMonomialIdeal
from .intmat import smith_normal_form
from .rings import is_prime, valuation

SHIPPED = ("I1.json", "I2.json", "I3.json")


def _trim(c: Sequence[int]) -> list[int]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


@dataclass(frozen=True)
class QuotientPresentation:
    p: int
    modulus_exponent: int
    degree_bound: int
    relations: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self):
        if not is_prime(self.p):
            raise DomainError(f"{self.p} is not a prime")
        if self.modulus_exponent < 1 or self.degree_bound < 1:
            raise DomainError("modulus exponent and degree bound must be >= 1")

    @classmethod
    def from_json(cls, doc: dict) -> QuotientPresentation:
        try:
            rels = tuple(tuple(int(c) for c in r) for r in doc["relations"])
            return cls(int(doc["p"]), int(doc["modulus_exponent"]),
                       int(doc["degree_bound"]), rels, str(doc.get("name", "")))
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed presentation: {exc}") from None

    @classmethod
    def load(cls, path: str | os.PathLike) -> QuotientPresentation:
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def to_json(self) -> dict:
        return {"name": self.name, "p": self.p, "modulus_exponent": self.modulus_exponent,
                "degree_bound": self.degree_bound,
                "relations": [list(r) for r in self.relations]}

    @property
    def modulus(self) -> int:
        return self.p ** self.modulus_exponent

    def with_relation(self, rel: Sequence[int]) -> QuotientPresentation:
        return QuotientPresentation(self.p, self.modulus_exponent, self.degree_bound,
                                    self.relations + (tuple(rel),), self.name)

    def replace_relation(self, i: int, rel: Sequence[int]) -> QuotientPresentation:
        rels = list(self.relations)
        rels[i] = tuple(rel)
        return QuotientPresentation(self.p, self.modulus_exponent, self.degree_bound,
                                    tuple(rels), self.name)


def monic_relation(q: QuotientPresentation) -> list[int]:
    """The normalized monic bounding relation, coefficients in ``[0, p^N)``."""
    P = q.modulus
    best = None
    for r in q.relations:
        c = _trim([x % P for x in r])
        if c and c[-1] % q.p and (best is None or len(c) < len(best)):
            best = c
    if best is None:
        raise NonTerminatingReduction("no relation has a unit leading coefficient")
    if len(best) - 1 > q.degree_bound:
        raise NonTerminatingReduction(
            f"monic relation of degree {len(best) - 1} exceeds bound {q.degree_bound}")
    inv = pow(best[-1], -1, P)
    return [x * inv % P for x in best]


def _reduce(poly: Sequence[int], f: Sequence[int], P: int) -> list[int]:
    """Remainder of poly modulo the monic f, coefficients mod P."""
    e = len(f) - 1
    c = [x % P for x in poly]
    for top in range(len(c) - 1, e - 1, -1):
        lead = c[top]
        if lead:
            for i in range(e + 1):
                c[top - e + i] = (c[top - e + i] - lead * f[i]) % P
    c = c[:e] + [0] * max(0, e - len(c))
    return c


def relation_lattice(q: QuotientPresentation) -> list[list[int]]:
    """Integer generators of the relation lattice inside Z^e."""
    f = monic_relation(q)
    e = len(f) - 1
    P = q.modulus
    gens = [[P if i == j else 0 for j in range(e)] for i in range(e)]
    for r in q.relations:
        for shift in range(e):
            v = _reduce([0] * shift + list(r), f, P)
            if any(v):
                gens.append(v)
    return gens


def length_over_fp(q: QuotientPresentation) -> int:
    """Composition length of the quotient as a module over F_p."""
    gens = relation_lattice(q)
    if not gens or not gens[0]:
        return 0
    snf = smith_normal_form(gens)
    return sum(int(valuation(d, q.p)) for d in snf.invariants)


def _fp_trim(c, p):
    return _trim([x % p for x in c])


def _fp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _fp_trim(a, p), _fp_trim(b, p)
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b) and a:
            q = a[-1] * inv % p
            off = len(a) - len(b)
            for i, x in enumerate(b):
                a[off + i] = (a[off + i] - q * x) % p
            a = _trim(a)
        a, b = b, a
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def mod_p_reduction(q: QuotientPresentation) -> int:
    """Exponent n with the ideal generated by the relations mod p equal to (a^n)."""
    g: list[int] = []
    for r in q.relations:
        g = _fp_gcd(g, list(r), q.p)
    if not g:
        raise NotMonomialIdeal("relations vanish mod p; the ideal is zero")
    n = len(g) - 1
    if any(g[:n]):
        raise NotMonomialIdeal(f"reduction mod {q.p} is generated by {g}, not a monomial")
    return n


def data_dir(override: str | os.PathLike | None = None) -> Path | None:
    d = override or os.environ.get("WITTCALC_DATA_DIR")
    return Path(d) if d else None


def shipped_fixtures(directory: str | os.PathLike | None = None) -> list[QuotientPresentation]:
    """The three height-2, p = 2 presentations, from ``<dir>/fixtures`` if given."""
    base = data_dir(directory)
    out = []
    for name in SHIPPED:
        if base is not None and (base / "fixtures" / name).exists():
            out.append(QuotientPresentation.load(base / "fixtures" / name))
        else:
            res = resources.files("wittcalc").joinpath("data").joinpath("fixtures")
            text = res.joinpath(name).read_text()
            out.append(QuotientPresentation.from_json(json.loads(text)))
    return out


@dataclass
class SuiteReport:
    lengths: list[int]
    mod_p_exponents: list[int]
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        doc = {"lengths": self.lengths, "mod_p_exponents": self.mod_p_exponents,
               "status": "pass" if self.passed else "fail"}
        if self.failures:
            doc["failures"] = self.failures
        return doc


def verify_height2_suite(fixtures: Sequence[QuotientPresentation] | None = None,
                         directory=None) -> SuiteReport:
    """Check the d-th presentation against the height-2 subgroup counts.

    Its length must be ``N_1 + ... + N_{p^d}``, its mod-p exponent
    ``N_{p^d}``, and consecutive lengths must differ by ``N_{p^d}``.
    Domain errors inside a fixture are reported as failures.
    """
    fixtures = list(fixtures) if fixtures is not None else shipped_fixtures(directory)
    lengths, exps, failures = [], [], []
    for d, q in enumerate(fixtures):
        counts = nh_coeffs(2, q.p, d)
        label = q.name or f"fixture {d}"
        try:
            L = length_over_fp(q)
        except DomainError as exc:
            failures.append(f"{label}: length failed: {exc}")
            L = None
        try:
            n = mod_p_reduction(q)
        except DomainError as exc:
            failures.append(f"{label}: reduction failed: {exc}")
            n = None
        lengths.append(L)
        exps.append(n)
        want_len = counts.partial_sum(d + 1)
        if L is not None and L != want_len:
            failures.append(f"{label}: length {L}, expected {want_len}")
        if n is not None and n != counts.coeffs[d]:
            failures.append(f"{label}: mod-{q.p} exponent {n}, expected {counts.coeffs[d]}")
        if d and L is not None and lengths[d - 1] is not None \
                and L - lengths[d - 1] != counts.coeffs[d]:
            failures.append(f"{label}: length step {L - lengths[d - 1]}, "
                            f"expected {counts.coeffs[d]}")
    return SuiteReport(lengths, exps, failures)
