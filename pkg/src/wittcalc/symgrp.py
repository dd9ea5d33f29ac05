"""Brute-force and semi-smart oracles over symmetric groups and lattices.

Permutations are tuples ``g`` with ``g[i]`` the image of ``i``.  A
continuous homomorphism Z_p^h -> Sigma_m is an h-tuple of pairwise
commuting permutations of p-power order; passing ``p=None`` drops the order
condition, which describes homomorphisms from the discrete group Z^h.

Subgroups of finite index of Z_p^h (equivalently, finite subgroups of
(Q_p/Z_p)^h by duality) are represented by the Hermite normal form of the
corresponding sublattice of Z^h, which is canonical and so doubles as a
dictionary key.
"""

from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, gcd, prod
from typing import Callable, Iterator, Sequence

from .errors import CapExceeded, DomainError, VerificationFailure
from .intmat import hermite_normal_form, lattice_index
from .poly import PolyRing
from .rings import Rationals, is_prime
from .series import TruncSeries, series_exp

Permutation = tuple  # tuple[int, ...], a bijection of range(len(g))
HNF = tuple          # tuple[tuple[int, ...], ...], upper triangular

HOM_CAPS = {1: 8, 2: 8, 3: 6}
HOM_CAP_DEFAULT = 5
SUBGROUP_CAPS = (4, 6)      # h <= 4, d <= 6
ORDERS_CAP = 9


def _hom_cap(h: int) -> int:
    return HOM_CAPS.get(h, HOM_CAP_DEFAULT)


def _check_group(h: int, p: int | None) -> None:
    if h < 1:
        raise DomainError("rank h must be >= 1")
    if p is not None and not is_prime(p):
        raise DomainError(f"{p} is not a prime")


# permutations


def identity(m: int) -> Permutation:
    return tuple(range(m))


def compose(a: Permutation, b: Permutation) -> Permutation:
    """``a o b`` (apply b first)."""
    return tuple(a[i] for i in b)


def commutes(a: Permutation, b: Permutation) -> bool:
    return all(a[b[i]] == b[a[i]] for i in range(len(a)))


def cycles(g: Permutation) -> list[list[int]]:
    seen = [False] * len(g)
    out = []
    for start in range(len(g)):
        if seen[start]:
            continue
        cyc = []
        i = start
        while not seen[i]:
            seen[i] = True
            cyc.append(i)
            i = g[i]
        out.append(cyc)
    return out


def cycle_type(g: Permutation) -> tuple[int, ...]:
    return tuple(sorted((len(c) for c in cycles(g)), reverse=True))


def order(g: Permutation) -> int:
    out = 1
    for c in cycles(g):
        out = out * len(c) // gcd(out, len(c))
    return out


def is_p_power(n: int, p: int | None) -> bool:
    if p is None:
        return True
    while n % p == 0:
        n //= p
    return n == 1


def has_p_power_order(g: Permutation, p: int | None) -> bool:
    return p is None or all(is_p_power(len(c), p) for c in cycles(g))


def partitions(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of n as non-increasing tuples."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def class_size(shape: Sequence[int]) -> int:
    """Size of the conjugacy class of cycle type ``shape`` in Sigma_n."""
    n = sum(shape)
    z = 1
    for part, mult in Counter(shape).items():
        z *= part ** mult * factorial(mult)
    return factorial(n) // z


def representative(shape: Sequence[int]) -> Permutation:
    img = []
    start = 0
    for part in shape:
        img.extend(start + (j + 1) % part for j in range(part))
        start += part
    return tuple(img)


def centralizer(g: Permutation) -> list[Permutation]:
    """All elements commuting with g, built from its cycle structure.

    An element of the centralizer permutes the cycles of each length and
    rotates each cycle onto its image.
    """
    by_len: dict[int, list[list[int]]] = {}
    for c in cycles(g):
        by_len.setdefault(len(c), []).append(c)
    blocks = []
    for length, cycs in by_len.items():
        options = []
        r = len(cycs)
        for perm in itertools.permutations(range(r)):
            for shifts in itertools.product(range(length), repeat=r):
                pairs = []
                for i in range(r):
                    src, dst = cycs[i], cycs[perm[i]]
                    s = shifts[i]
                    pairs.extend((src[j], dst[(j + s) % length]) for j in range(length))
                options.append(pairs)
        blocks.append(options)
    out = []
    m = len(g)
    for choice in itertools.product(*blocks):
        img = [0] * m
        for pairs in choice:
            for a, b in pairs:
                img[a] = b
        out.append(tuple(img))
    return out


def _count_commuting(h: int, p: int | None, group: list[Permutation],
                     memo: dict | None = None) -> int:
    """Commuting h-tuples of p-power-order elements inside ``group``.

    Distinct prefixes often share a centralizer, so results are memoized on
    the exact element set (a sound key: it determines the count).
    """
    if h == 0:
        return 1
    elems = [g for g in group if has_p_power_order(g, p)]
    if h == 1:
        return len(elems)
    memo = {} if memo is None else memo
    key = (h, frozenset(group))
    if key not in memo:
        memo[key] = sum(
            _count_commuting(h - 1, p, [x for x in group if commutes(x, g)], memo)
            for g in elems)
    return memo[key]


def _class_term(args) -> int:
    h, p, shape = args
    rep = representative(shape)
    if h == 1:
        return class_size(shape)
    return class_size(shape) * _count_commuting(h - 1, p, centralizer(rep))


def _hom_shapes(p: int | None, m: int) -> list[tuple[int, ...]]:
    return [s for s in partitions(m) if all(is_p_power(k, p) for k in s)]


def hom_count(h: int, p: int | None, m: int, workers: int = 1) -> int:
    """|Hom(Z_p^h, Sigma_m)| by the centralizer recursion.

    The first element is taken up to conjugacy (class representative times
    class size); deeper levels enumerate the centralizer exactly.
    ``workers > 1`` fans the conjugacy classes out over processes; the
    partial counts are summed, so the result does not depend on scheduling.
    """
    _check_group(h, p)
    if m < 0:
        raise DomainError("degree must be >= 0")
    if m > _hom_cap(h):
        raise CapExceeded(f"hom_count capped at m <= {_hom_cap(h)} for h = {h}")
    if m == 0:
        return 1
    jobs = [(h, p, s) for s in _hom_shapes(p, m)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return sum(pool.map(_class_term, jobs))
    return sum(_class_term(j) for j in jobs)


def iter_homs(h: int, p: int | None, m: int) -> Iterator[tuple[Permutation, ...]]:
    """Every homomorphism as an h-tuple of commuting permutations."""
    _check_group(h, p)
    if m > _hom_cap(h):
        raise CapExceeded(f"hom enumeration capped at m <= {_hom_cap(h)} for h = {h}")
    if m == 0:
        yield ((),) * h
        return
    firsts = [g for g in itertools.permutations(range(m)) if has_p_power_order(g, p)]

    def extend(prefix, group):
        if len(prefix) == h:
            yield tuple(prefix)
            return
        for g in group:
            if has_p_power_order(g, p):
                yield from extend(prefix + [g], [x for x in group if commutes(x, g)])

    for g in firsts:
        yield from extend([g], centralizer(g))


def elements_of_order_dividing(n: int, m: int, method: str = "classes") -> int:
    """``|{g in Sigma_n : g^m = 1}|``."""
    if n < 0 or m < 1:
        raise DomainError("need n >= 0 and m >= 1")
    if n > ORDERS_CAP:
        raise CapExceeded(f"order counting capped at n <= {ORDERS_CAP}")
    if method == "brute":
        return sum(1 for g in itertools.permutations(range(n)) if m % order(g) == 0)
    if method != "classes":
        raise DomainError(f"unknown method {method!r}")
    return sum(class_size(s) for s in partitions(n) if all(m % k == 0 for k in s))


# sublattices


def _factorizations(n: int, h: int) -> Iterator[tuple[int, ...]]:
    if h == 1:
        yield (n,)
        return
    for d in range(1, n + 1):
        if n % d == 0:
            for rest in _factorizations(n // d, h - 1):
                yield (d,) + rest


def _diagonals(h: int, p: int | None, index: int) -> Iterator[tuple[int, ...]]:
    if p is None:
        yield from _factorizations(index, h)
        return
    d = 0
    while p ** d < index:
        d += 1
    if p ** d != index:
        return
    for exps in itertools.product(range(d + 1), repeat=h):
        if sum(exps) == d:
            yield tuple(p ** e for e in exps)


def iter_sublattices(h: int, p: int | None, index: int) -> Iterator[HNF]:
    """HNF bases of all sublattices of Z^h of the given index (p-power
    indices only when p is given)."""
    for diag in _diagonals(h, p, index):
        free = [(i, j) for j in range(h) for i in range(j)]
        ranges = [range(diag[j]) for i, j in free]
        for vals in itertools.product(*ranges):
            rows = [[0] * h for _ in range(h)]
            for i in range(h):
                rows[i][i] = diag[i]
            for (i, j), v in zip(free, vals):
                rows[i][j] = v
            yield tuple(tuple(r) for r in rows)


def subgroup_count(h: int, p: int, d: int) -> int:
    """Number of subgroups of order p^d in (Q_p/Z_p)^h, via HNF enumeration.

    Diagonals are listed explicitly; the free entries above each pivot
    contribute their number of residues rather than being listed.
    """
    _check_group(h, p)
    if h > SUBGROUP_CAPS[0] or d > SUBGROUP_CAPS[1] or d < 0:
        raise CapExceeded(f"subgroup counting capped at h <= {SUBGROUP_CAPS[0]}, "
                          f"d <= {SUBGROUP_CAPS[1]}")
    total = 0
    for diag in _diagonals(h, p, p ** d):
        total += prod(diag[j] ** j for j in range(h))
    return total


def subgroups_up_to(h: int, p: int | None, max_index: int) -> list[tuple[int, HNF]]:
    """``(index, hnf)`` for every subgroup of index <= max_index, canonical order."""
    out = []
    for n in range(1, max_index + 1):
        if p is not None and not is_p_power(n, p):
            continue
        out.extend((n, H) for H in iter_sublattices(h, p, n))
    return out


def orbit_stabilizers(gens: Sequence[Permutation]) -> list[tuple[list[int], HNF]]:
    """Orbits of the Z^h-action generated by ``gens`` with their stabilizers.

    The stabilizer lattice is spanned by the Schreier vectors
    ``v_y + e_i - v_{g_i y}`` of a breadth-first transversal.
    """
    h = len(gens)
    m = len(gens[0]) if h else 0
    seen: set[int] = set()
    out = []
    for x in range(m):
        if x in seen:
            continue
        coords = {x: (0,) * h}
        queue = [x]
        schreier = []
        for y in queue:
            vy = coords[y]
            for i, g in enumerate(gens):
                z = g[y]
                v = vy[:i] + (vy[i] + 1,) + vy[i + 1:]
                if z not in coords:
                    coords[z] = v
                    queue.append(z)
                else:
                    diff = tuple(a - b for a, b in zip(v, coords[z]))
                    if any(diff):
                        schreier.append(diff)
        seen.update(queue)
        H = hermite_normal_form(schreier, h)
        if lattice_index(H) != len(queue):
            raise VerificationFailure("orbit size differs from stabilizer index")
        out.append((sorted(queue), H))
    return out


# marks


@dataclass
class MarkSpec:
    """A mark on Z_p^h (or Z^h when p is None): subgroup HNF -> ring value."""

    h: int
    p: int | None
    ring: object
    value: Callable[[HNF], object]
    name: str = "mark"
    table: dict = field(default_factory=dict)

    def __call__(self, H: HNF):
        return self.ring(self.value(H))

    def of_hom(self, gens: Sequence[Permutation]):
        """f(gamma): product of f over the orbits of the induced action."""
        R = self.ring
        val = R.one
        if not gens or not gens[0]:
            return val
        for _, H in orbit_stabilizers(gens):
            val = R.mul(val, self(H))
        return val


def constant_mark(h: int, p: int | None) -> MarkSpec:
    return MarkSpec(h, p, Rationals(), lambda H: 1, name="constant")


def formal_mark(h: int, p: int | None, max_index: int) -> MarkSpec:
    """One free variable t<i> per subgroup of index <= max_index."""
    subs = subgroups_up_to(h, p, max_index)
    names = [f"t{i}" for i in range(len(subs))]
    ring = PolyRing(names)
    table = {H: ring.gen(n) for (_, H), n in zip(subs, names)}

    def value(H):
        try:
            return table[H]
        except KeyError:
            raise DomainError(f"mark undefined on subgroup {H}") from None

    return MarkSpec(h, p, ring, value, name="formal", table=table)


def index_power_mark(h: int, p: int, max_index: int) -> MarkSpec:
    """f(G/H) = t^d where [G:H] = p^d."""
    ring = PolyRing(["t"])
    t = ring.gen("t")

    def value(H):
        n = lattice_index(H)
        d = 0
        while p ** d < n:
            d += 1
        return t ** d

    return MarkSpec(h, p, ring, value, name="index-power")


def _check_mark_degree(spec: MarkSpec, M: int) -> None:
    if M < 0:
        raise DomainError("degree bound must be >= 0")


def mark_lhs(spec: MarkSpec, M: int, method: str = "enumerate") -> TruncSeries:
    """``sum_m X^m/m! sum_{gamma: G -> Sigma_m} f(gamma)`` through X^M.

    ``method="enumerate"`` runs over every homomorphism; ``"isoclass"`` sums
    ``f(S) X^|S| / |Aut S|`` over isomorphism classes of finite G-sets
    (multisets of transitive orbits), reaching larger M.
    """
    _check_mark_degree(spec, M)
    R = spec.ring
    if method == "enumerate":
        coeffs = []
        for m in range(M + 1):
            total = R.zero
            for gamma in iter_homs(spec.h, spec.p, m):
                total = R.add(total, spec.of_hom(gamma))
            coeffs.append(R.div_int(total, factorial(m)))
        return TruncSeries(R, tuple(coeffs))
    if method == "isoclass":
        coeffs = [R.zero] * (M + 1)
        types = subgroups_up_to(spec.h, spec.p, M)
        for size, weight, parts in _isoclasses(types, M):
            term = R.one
            for (idx, H), k in parts:
                term = R.mul(term, _pow(R, spec(H), k))
            coeffs[size] = R.add(coeffs[size], R.mul(R(weight), term))
        return TruncSeries(R, tuple(coeffs))
    raise DomainError(f"unknown method {method!r}")


def _pow(R, x, k: int):
    out = R.one
    for _ in range(k):
        out = R.mul(out, x)
    return out


def _isoclasses(types: list[tuple[int, HNF]], M: int):
    """Yield ``(|S|, 1/|Aut S|, [(type, multiplicity), ...])`` for each
    isomorphism class S of G-sets of size <= M.

    A transitive G-set G/H with G abelian has automorphism group G/H, so
    ``|Aut S| = prod_H [G:H]^k_H * k_H!``.
    """
    def rec(i, remaining):
        if i == len(types):
            yield 0, Fraction(1), []
            return
        idx, H = types[i]
        for k in range(remaining // idx + 1):
            w = Fraction(1, idx ** k * factorial(k))
            for size, weight, parts in rec(i + 1, remaining - k * idx):
                yield (size + k * idx, w * weight,
                       ([((idx, H), k)] + parts) if k else parts)

    yield from rec(0, M)


def mark_rhs(spec: MarkSpec, M: int) -> TruncSeries:
    """``exp(sum_H X^[G:H] / [G:H] * f(G/H))`` through X^M."""
    _check_mark_degree(spec, M)
    R = spec.ring
    vals = [R.zero] * (M + 1)
    for idx, H in subgroups_up_to(spec.h, spec.p, M):
        vals[idx] = R.add(vals[idx], R.div_int(spec(H), idx))
    return series_exp(TruncSeries(R, tuple(vals)))


def hom_count_via_isoclasses(h: int, p: int | None, m: int) -> int:
    """``sum_S m!/|Aut S|`` over isomorphism classes of G-sets of size m."""
    _check_group(h, p)
    if m > _hom_cap(h):
        raise CapExceeded(f"isoclass count capped at m <= {_hom_cap(h)} for h = {h}")
    types = subgroups_up_to(h, p, m)
    total = sum(w for size, w, _ in _isoclasses(types, m) if size == m)
    total *= factorial(m)
    if total.denominator != 1:
        raise VerificationFailure("isoclass count is not an integer")
    return total.numerator
