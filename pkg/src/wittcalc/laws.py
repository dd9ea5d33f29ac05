"""Universal Witt polynomials: derivation, certification, evaluation, cache.

The addition, multiplication and negation laws are obtained by ghost
inversion over Q: the n-th output coordinate ``z_n`` solves

    n * z_n = (gh_n(x) op gh_n(y)) - sum_{k | n, k < n} k * z_k^(n/k)

and is then checked to have integer coefficients.  The same routine run on
the p-power indices alone gives the p-typical laws, and run on the ghost
tuple "gh_{p^k}(a) at p-powers, 0 elsewhere" gives the section polynomials
of the p-typical summand, whose coefficients are only p-local.

A law is certified (integrality or p-locality, isobaric weights, and the
symbolic ghost identities) both after derivation and after loading it from
the on-disk cache.
"""

from __future__ import annotations

import logging
import os
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from pathlib import Path
from typing import Sequence

from .errors import DomainError, IntegralityFailure, NotPLocal, VerificationFailure
from .poly import PolyRing, SparsePoly

log = logging.getLogger(__name__)

# Largest ghost weight for which p-typical arithmetic goes through the
# symbolic law by default; heavier laws are slow to derive and evaluate.
LAW_MAX_WEIGHT = 27


def p_powers(p: int, length: int) -> list[int]:
    return [p ** k for k in range(length)]


def solve_ghost_system(indices: Sequence[int], targets: dict) -> dict:
    """Ghost inversion over Q for a divisor-closed index list.

    ``targets[n]`` is the desired n-th ghost component (a SparsePoly); the
    result maps each index to the unique rational polynomial z_n with
    ``sum_{k | n} k z_k^(n/k) = targets[n]``.
    """
    z: dict[int, SparsePoly] = {}
    powers: dict[tuple[int, int], SparsePoly] = {}
    for n in indices:
        rhs = targets[n]
        for k in indices:
            if k >= n:
                break
            if n % k:
                continue
            e = n // k
            if (k, e) not in powers:
                prev = powers.get((k, e - 1)) if e > 2 else z[k]
                powers[(k, e)] = prev * z[k] if prev is not None else z[k] ** e
            rhs = rhs - k * powers[(k, e)]
        z[n] = rhs.div_int(n)
    return z


def ghost_poly(indices: Sequence[int], coords: dict, n: int) -> SparsePoly:
    """``gh_n = sum_{k | n, k in indices} k * coords[k]^(n/k)``."""
    terms = [k * coords[k] ** (n // k) for k in indices if k <= n and n % k == 0]
    total = terms[0]
    for t in terms[1:]:
        total = total + t
    return total


class Evaluator:
    """Fast exact evaluation of a family of isobaric polynomials.

    Variables carry integer weights and every output polynomial is isobaric
    of a known weight.  Rational inputs are cleared by a common denominator
    ``D`` (replace ``v`` by ``v * D^weight(v)``), the polynomial is evaluated
    on integers, and the result is divided by ``D^weight(output)``.
    Fractional coefficients are cleared the same way by a per-polynomial
    common denominator.
    """

    def __init__(self, polys: Sequence[SparsePoly], var_weights: Sequence[int],
                 out_weights: Sequence[int]):
        self.var_weights = list(var_weights)
        self.out_weights = list(out_weights)
        self.nvars = len(var_weights)
        self.plans = []
        max_exp = [0] * self.nvars
        for poly in polys:
            den = lcm(*(Fraction(c).denominator for c in poly.terms.values())) \
                if poly.terms else 1
            plan = []
            for key, c in poly.terms.items():
                factors = poly.ring.sparse_exponents(key)
                for i, e in factors:
                    if e > max_exp[i]:
                        max_exp[i] = e
                plan.append((int(Fraction(c) * den), factors))
            self.plans.append((den, plan))
        self.max_exp = max_exp

    def __call__(self, values: Sequence) -> list:
        if len(values) != self.nvars:
            raise DomainError(f"expected {self.nvars} values, got {len(values)}")
        dens = [v.denominator for v in values if isinstance(v, Fraction)
                and v.denominator != 1]
        D = lcm(*dens) if dens else 1
        if D == 1:
            ints = [int(v) for v in values]
        else:
            # v * D^w stays integral: D is a multiple of v's denominator and w >= 1
            ints = [v.numerator * (D // v.denominator) * D ** (w - 1)
                    if isinstance(v, Fraction) else v * D ** w
                    for v, w in zip(values, self.var_weights)]
        tables = []
        for x, m in zip(ints, self.max_exp):
            row = [1]
            for _ in range(m):
                row.append(row[-1] * x)
            tables.append(row)
        out = []
        for (den, plan), w in zip(self.plans, self.out_weights):
            s = 0
            for c, factors in plan:
                t = c
                for i, e in factors:
                    t *= tables[i][e]
                s += t
            scale = den * D ** w
            out.append(s if scale == 1 else Fraction(s, scale))
        return out


@dataclass
class WittLaw:
    """Sum, product and negation laws for big or p-typical Witt vectors.

    ``indices`` are ghost indices (1..N, or 1, p, ..., p^d); variables are
    ``x<i>, y<i>`` where ``<i>`` is the ghost index for big laws and the
    coordinate position for p-typical laws.
    """

    kind: str
    indices: tuple[int, ...]
    prime: int | None
    ring: PolyRing
    sum: tuple[SparsePoly, ...]
    prod: tuple[SparsePoly, ...]
    neg: tuple[SparsePoly, ...]
    certified: bool = False
    _evaluators: dict = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return len(self.indices)

    def var_names(self, letter: str) -> list[str]:
        return _names(self.kind, self.indices, letter)

    def _evaluator(self, op: str) -> Evaluator:
        ev = self._evaluators.get(op)
        if ev is None:
            w = list(self.indices)
            polys = getattr(self, op)
            out = [2 * n if op == "prod" else n for n in self.indices]
            ev = Evaluator(polys, w + w, out)
            self._evaluators[op] = ev
        return ev

    def evaluate(self, op: str, xs: Sequence, ys: Sequence | None = None) -> list:
        if ys is None:
            ys = [0] * self.size
        return self._evaluator(op)(list(xs) + list(ys))

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "indices": list(self.indices),
            "prime": self.prime,
            "certified": self.certified,
            "terms": {op: [len(p.terms) for p in getattr(self, op)]
                      for op in ("sum", "prod", "neg")},
        }


@dataclass
class SectionLaw:
    """Universal coordinates of the section W_p -> W_Z over Z_(p)-algebras.

    ``polys[n-1]`` is the n-th big Witt coordinate as a polynomial in the
    p-typical coordinates ``a0..ad``; coefficients are certified p-local.
    """

    prime: int
    truncation: int
    ring: PolyRing
    polys: tuple[SparsePoly, ...]
    certified: bool = False
    denominators: tuple[int, ...] = ()
    _evaluator: Evaluator | None = field(default=None, repr=False)

    @property
    def length(self) -> int:
        return len(self.ring.names)

    def evaluate(self, coords: Sequence) -> list:
        if self._evaluator is None:
            w = p_powers(self.prime, self.length)
            self._evaluator = Evaluator(self.polys, w,
                                        list(range(1, self.truncation + 1)))
        return self._evaluator(list(coords))


def _names(kind: str, indices, letter: str) -> list[str]:
    if kind == "big":
        return [f"{letter}{n}" for n in indices]
    return [f"{letter}{j}" for j in range(len(indices))]


def _law_ring(kind: str, indices) -> PolyRing:
    return PolyRing(_names(kind, indices, "x") + _names(kind, indices, "y"))


def derive_witt_law(kind: str, indices: Sequence[int], prime: int | None = None) -> WittLaw:
    indices = tuple(indices)
    ring = _law_ring(kind, indices)
    gens = ring.gens
    k = len(indices)
    X = dict(zip(indices, gens[:k]))
    Y = dict(zip(indices, gens[k:]))
    ghx = {n: ghost_poly(indices, X, n) for n in indices}
    ghy = {n: ghost_poly(indices, Y, n) for n in indices}
    laws = {}
    for op, combine in (("sum", lambda a, b: a + b),
                        ("prod", lambda a, b: a * b),
                        ("neg", lambda a, b: -a)):
        targets = {n: combine(ghx[n], ghy[n]) for n in indices}
        z = solve_ghost_system(indices, targets)
        laws[op] = tuple(z[n] for n in indices)
    law = WittLaw(kind, indices, prime, ring, laws["sum"], laws["prod"], laws["neg"])
    certify_witt_law(law)
    return law


def certify_witt_law(law: WittLaw) -> None:
    """Integrality, isobaric weights and symbolic ghost compatibility."""
    for op in ("sum", "prod", "neg"):
        for n, poly in zip(law.indices, getattr(law, op)):
            if not poly.is_integral():
                raise IntegralityFailure(
                    f"{op} law z[{n}] has denominators {sorted(poly.denominators())}")
            expected = 2 * n if op == "prod" else n
            if poly.terms and poly.weighted_degrees(list(law.indices) * 2) != {expected}:
                raise VerificationFailure(f"{op} law z[{n}] is not isobaric")
    gens = law.ring.gens
    k = law.size
    X = dict(zip(law.indices, gens[:k]))
    Y = dict(zip(law.indices, gens[k:]))
    for op in ("sum", "prod", "neg"):
        Z = dict(zip(law.indices, getattr(law, op)))
        for n in law.indices:
            gx, gy = ghost_poly(law.indices, X, n), ghost_poly(law.indices, Y, n)
            want = gx + gy if op == "sum" else gx * gy if op == "prod" else -gx
            if ghost_poly(law.indices, Z, n) != want:
                raise VerificationFailure(f"{op} law fails ghost identity at n={n}")
    law.certified = True


def derive_section_law(p: int, truncation: int) -> SectionLaw:
    length = 0
    while p ** length <= truncation:
        length += 1
    ring = PolyRing([f"a{j}" for j in range(length)])
    a = ring.gens
    indices = list(range(1, truncation + 1))
    targets = {}
    ppow = {p ** k: k for k in range(length)}
    for n in indices:
        if n in ppow:
            k = ppow[n]
            t = ring.zero
            for j in range(k + 1):
                t = t + p ** j * a[j] ** (p ** (k - j))
            targets[n] = t
        else:
            targets[n] = ring.zero
    z = solve_ghost_system(indices, targets)
    law = SectionLaw(p, truncation, ring, tuple(z[n] for n in indices))
    certify_section_law(law)
    return law


def certify_section_law(law: SectionLaw) -> None:
    p = law.prime
    dens: set[int] = set()
    weights = p_powers(p, law.length)
    for n, poly in enumerate(law.polys, start=1):
        for c in poly.terms.values():
            d = Fraction(c).denominator
            if d % p == 0:
                raise NotPLocal(n, c, p)
            if d != 1:
                dens.add(d)
        if poly.terms and poly.weighted_degrees(weights) != {n}:
            raise VerificationFailure(f"section coordinate {n} is not isobaric")
    a = law.ring.gens
    coords = dict(zip(range(1, law.truncation + 1), law.polys))
    indices = list(range(1, law.truncation + 1))
    for n in indices:
        g = ghost_poly(indices, coords, n)
        k = 0
        while p ** k < n:
            k += 1
        if p ** k == n:
            want = law.ring.zero
            for j in range(k + 1):
                want = want + p ** j * a[j] ** (p ** (k - j))
        else:
            want = law.ring.zero
        if g != want:
            raise VerificationFailure(f"section ghost identity fails at n={n}")
    law.denominators = tuple(sorted(dens))
    law.certified = True


# text format


def format_witt_law(law: WittLaw) -> str:
    lines = ["# wittcalc universal law",
             f"# kind {law.kind}",
             f"# indices {' '.join(map(str, law.indices))}"]
    if law.prime is not None:
        lines.append(f"# prime {law.prime}")
    labels = law.indices if law.kind == "big" else range(law.size)
    for op in ("sum", "prod", "neg"):
        lines.append(f"[{op}]")
        for n, poly in zip(labels, getattr(law, op)):
            lines.append(f"z[{n}] = {poly.format()}")
    return "\n".join(lines) + "\n"


def _parse_sections(text: str) -> tuple[dict, dict]:
    header: dict[str, str] = {}
    sections: dict[str, list[str]] = {}
    current = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split(None, 1)
            if len(parts) == 2:
                header[parts[0]] = parts[1]
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1]
            sections[current] = []
            continue
        if current is None:
            raise VerificationFailure(f"law file line outside a section: {line!r}")
        lhs, sep, rhs = line.partition("=")
        if not sep or not lhs.strip().startswith("z["):
            raise VerificationFailure(f"malformed law line: {line!r}")
        sections[current].append(rhs.strip())
    return header, sections


def parse_witt_law(text: str) -> WittLaw:
    header, sections = _parse_sections(text)
    kind = header.get("kind")
    indices = tuple(int(t) for t in header.get("indices", "").split())
    prime = int(header["prime"]) if "prime" in header else None
    if kind not in ("big", "p-typical") or not indices:
        raise VerificationFailure("law file header is incomplete")
    ring = _law_ring(kind, indices)
    polys = {}
    for op in ("sum", "prod", "neg"):
        rows = sections.get(op, [])
        if len(rows) != len(indices):
            raise VerificationFailure(f"law file has {len(rows)} {op} rows")
        polys[op] = tuple(ring.parse(r) for r in rows)
    law = WittLaw(kind, indices, prime, ring, polys["sum"], polys["prod"], polys["neg"])
    certify_witt_law(law)
    return law


def format_section_law(law: SectionLaw) -> str:
    lines = ["# wittcalc universal law",
             "# kind section",
             f"# prime {law.prime}",
             f"# truncation {law.truncation}",
             "[section]"]
    for n, poly in enumerate(law.polys, start=1):
        lines.append(f"z[{n}] = {poly.format()}")
    return "\n".join(lines) + "\n"


def parse_section_law(text: str) -> SectionLaw:
    header, sections = _parse_sections(text)
    p = int(header["prime"])
    N = int(header["truncation"])
    length = 0
    while p ** length <= N:
        length += 1
    ring = PolyRing([f"a{j}" for j in range(length)])
    rows = sections.get("section", [])
    if len(rows) != N:
        raise VerificationFailure("section law file is truncated")
    law = SectionLaw(p, N, ring, tuple(ring.parse(r) for r in rows))
    certify_section_law(law)
    return law


# caches


class LawCache:
    """Write-once cache; concurrent requests for one key derive it once."""

    def __init__(self, directory: str | os.PathLike | None = None):
        self.directory = Path(directory) if directory else None
        self._values: dict = {}
        self._locks: dict = {}
        self._guard = threading.Lock()

    def _lock_for(self, key):
        with self._guard:
            return self._locks.setdefault(key, threading.Lock())

    def get(self, key, filename: str, derive, fmt, parse):
        try:
            return self._values[key]
        except KeyError:
            pass
        with self._lock_for(key):
            if key in self._values:
                return self._values[key]
            value = None
            path = self.directory / filename if self.directory else None
            if path is not None and path.exists():
                value = parse(path.read_text())
                log.debug("loaded and re-certified %s", path)
            if value is None:
                value = derive()
                if path is not None:
                    try:
                        path.parent.mkdir(parents=True, exist_ok=True)
                        tmp = path.with_suffix(".tmp")
                        tmp.write_text(fmt(value))
                        tmp.replace(path)
                    except OSError as exc:
                        log.warning("could not persist law cache %s: %s", path, exc)
            self._values[key] = value
            return value


_cache = LawCache()


def configure_cache(directory: str | os.PathLike | None) -> None:
    """Set (or clear) the on-disk law cache directory; resets memory."""
    global _cache
    _cache = LawCache(directory)


def big_law(N: int) -> WittLaw:
    if N < 1:
        raise DomainError("truncation must be >= 1")
    return _cache.get(("big", N), f"big-N{N}.law",
                      lambda: derive_witt_law("big", range(1, N + 1)),
                      format_witt_law, parse_witt_law)


def ptypical_law(p: int, length: int) -> WittLaw:
    if length < 1:
        raise DomainError("length must be >= 1")
    return _cache.get(("p-typical", p, length), f"ptyp-p{p}-L{length}.law",
                      lambda: derive_witt_law("p-typical", p_powers(p, length), p),
                      format_witt_law, parse_witt_law)


def section_law(p: int, N: int) -> SectionLaw:
    if N < 1:
        raise DomainError("truncation must be >= 1")
    return _cache.get(("section", p, N), f"section-p{p}-N{N}.law",
                      lambda: derive_section_law(p, N),
                      format_section_law, parse_section_law)


def has_cheap_ptypical_law(p: int, length: int) -> bool:
    return p ** (length - 1) <= LAW_MAX_WEIGHT
