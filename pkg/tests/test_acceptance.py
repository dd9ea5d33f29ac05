"""The ten acceptance criteria, each with its time budget.

Run ``pytest tests/test_acceptance.py`` for a per-criterion PASS/FAIL table
at the end of the session.
"""

import io
import json
import random
import time
from fractions import Fraction
from math import factorial

import pytest

from wittcalc import artinhasse as ah
from wittcalc import laws, ptypical as pt, symgrp as sg
from wittcalc.bigwitt import BigWittVec
from wittcalc.cli import run
from wittcalc.fixtures import (length_over_fp, mod_p_reduction, shipped_fixtures,
                               verify_height2_suite)
from wittcalc.ptypical import PWittVec
from wittcalc.rings import (Integers, ModPrimePower, PLocalRationals, PrimeField, Rationals,
                            valuation)

criterion = pytest.mark.criterion


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.1f}s > {self.seconds}s"


def cli(*argv):
    out = io.StringIO()
    code = run(list(argv), out, io.StringIO())
    return code, json.loads(out.getvalue())


@criterion(1, "universal laws: N = 16 and p = 2 length 5 certified; z_2 exact", 30)
def test_criterion_01_universal_laws():
    laws.configure_cache(None)          # derive from scratch
    with Budget(30):
        code, big = cli("laws", "derive", "--trunc", "16")
        assert code == 0 and big["certified"] and big["integral"]
        assert big["indices"] == [str(n) for n in range(1, 17)]
        code, ptyp = cli("laws", "derive", "--prime", "2", "--length", "5")
        assert code == 0 and ptyp["certified"] and ptyp["integral"]
        assert ptyp["indices"] == ["1", "2", "4", "8", "16"]
        law = laws.big_law(16)
        assert law.certified
        assert all(p.is_integral() for op in ("sum", "prod", "neg") for p in getattr(law, op))
        x1, x2, y1, y2 = (law.ring.gen(n) for n in ("x1", "x2", "y1", "y2"))
        assert law.sum[1] == x2 + y2 - x1 * y1
        assert law.sum[1].format() == "x2 + y2 - x1*y1"


def _axioms(a, b, c, one, zero):
    ab = a * b
    assert ab * c == a * (b * c)
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == ab + a * c
    assert a + b == b + a
    assert a * one == a and a + zero == a
    assert a + (-a) == zero
    s = a + b
    R = a.ring
    for x, y, gs, gp in zip(a.ghosts(), b.ghosts(), s.ghosts(), ab.ghosts()):
        assert gs == R.add(x, y) and gp == R.mul(x, y)


BIG_RINGS = [Integers(), Rationals(), PLocalRationals(3), ModPrimePower(2, 5), PrimeField(3)]
P_RINGS = [(p, R) for p in (2, 3, 5)
           for R in (Integers(), PLocalRationals(p), ModPrimePower(p, 4), PrimeField(p))]
_SUITE_CLOCK = {"elapsed": 0.0}


@criterion(2, "ring axioms and ghost homomorphism, 500 instances per combination", 60)
@pytest.mark.parametrize("R", BIG_RINGS, ids=str)
def test_criterion_02_big_witt_axioms(R):
    rng = random.Random(f"big-{R}")
    t = time.perf_counter()
    one, zero = BigWittVec.one(R, 12), BigWittVec.zero(R, 12)
    for _ in range(500):
        a, b, c = (BigWittVec.of(R, [R.random(rng, 5) for _ in range(12)]) for _ in range(3))
        _axioms(a, b, c, one, zero)
    _SUITE_CLOCK["elapsed"] += time.perf_counter() - t
    assert _SUITE_CLOCK["elapsed"] < 60


@criterion(2, "ring axioms and ghost homomorphism, 500 instances per combination", 60)
@pytest.mark.parametrize("p,R", P_RINGS, ids=[f"p{p}-{R}" for p, R in P_RINGS])
def test_criterion_02_ptypical_axioms(p, R):
    rng = random.Random(f"p-{p}-{R}")
    t = time.perf_counter()
    for length in range(1, 6):
        one, zero = PWittVec.one(p, R, length), PWittVec.zero(p, R, length)
        count = 500 if length == 5 else 50
        for _ in range(count):
            a, b, c = (PWittVec.of(p, R, [R.random(rng, 5) for _ in range(length)])
                       for _ in range(3))
            _axioms(a, b, c, one, zero)
    _SUITE_CLOCK["elapsed"] += time.perf_counter() - t
    assert _SUITE_CLOCK["elapsed"] < 60


@criterion(3, "Artin-Hasse coefficients equal |Hom(Z_p^h, S_m)|/m! and are p-local", 300)
def test_criterion_03_dual_oracle_artin_hasse():
    with Budget(300):
        for h, p in [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3)]:
            M = 6 if h == 3 else 8
            series = ah.artin_hasse(h, p, M).as_series
            for m in range(M + 1):
                homs = sg.hom_count(h, p, m)
                assert Fraction(series[m]) == Fraction(homs, factorial(m)), (h, p, m)
                assert Fraction(series[m]).denominator % p != 0
            if M <= 6:
                assert all(sg.hom_count_via_isoclasses(h, p, m) == sg.hom_count(h, p, m)
                           for m in range(M + 1))


@criterion(4, "HNF subgroup counts equal the 1/prod(1 - p^i T) coefficients", 10)
def test_criterion_04_subgroup_counts():
    with Budget(10):
        for h in (1, 2, 3):
            for p in (2, 3):
                series = ah.nh_coeffs(h, p, 4).coeffs
                for d in range(5):
                    explicit = set(sg.iter_sublattices(h, p, p ** d))
                    assert len(explicit) == sg.subgroup_count(h, p, d) == series[d]
        assert [sg.subgroup_count(2, 2, d) for d in range(4)] == [1, 3, 7, 15]


@criterion(5, "p-adic limit of N^h and the image of AH^h_p in Z/p^(d+1)", 10)
def test_criterion_05_padic_limit():
    with Budget(10):
        for h in (1, 2, 3):
            for p in (2, 3, 5):
                for d in range(7):
                    assert ah.convergence_gap(h, p, d) >= d + 1
        for p, dmax in [(2, 4), (3, 3), (5, 2)]:
            for h in (1, 2, 3):
                for d in range(dmax + 1):
                    prod = 1
                    for i in range(1, h):
                        prod *= 1 - p ** i
                    expected = pow(prod, -1, p ** (d + 1))
                    assert ah.ah_image_in_padics(h, p, d) == expected
        assert ah.ah_image_in_padics(2, 3, 2) == 13
        assert ah.ah_image_in_padics(3, 2, 4) == 11


@criterion(6, "splitting: AH^1_p = 1, e^2 = e, sections, commuting square", 60)
def test_criterion_06_splitting():
    with Budget(60):
        R = PLocalRationals(2)
        assert ah.artin_hasse(1, 2, 16).as_p_typical == PWittVec.one(2, R, 5)
        e = ah.idempotent_e(2, 16)
        assert e * e == e
        rng = random.Random(2024)
        for _ in range(100):
            a = PWittVec.of(2, R, [R.random(rng, 5) for _ in range(5)])
            j = pt.section_j(a, 16)
            assert pt.project(j, 2) == a
            g = j.ghosts()
            assert all(g[n - 1] == 0 for n in range(1, 17) if n not in (1, 2, 4, 8, 16))
        for h, p, N in [(1, 2, 16), (2, 2, 16), (3, 2, 16), (2, 3, 9), (3, 3, 9)]:
            report = ah.ah_identity_check(h, p, N, samples=100, seed=h * 10 + p)
            assert report["status"] == "pass", report


@criterion(7, "tilde ghost is lift-independent; W_p(F_p) = Z/p^(d+1) as rings", 30)
def test_criterion_07_ghost_congruence_and_padics():
    with Budget(30):
        rng = random.Random(7)
        Z = Integers()
        for p in (2, 3):
            Fp = PrimeField(p)
            for d in range(4):
                L = d + 1
                vectors = [pt.from_padic(r, p, L) for r in range(p ** L)]
                assert [pt.to_padic(v) for v in vectors] == list(range(p ** L))
                assert len(set(vectors)) == p ** L
                for v in vectors:
                    want = pt.tilde_ghost(d, v)
                    for _ in range(50):
                        s1, s2 = rng.randrange(-50, 50), rng.randrange(-50, 50)
                        g1 = pt.tilde_ghost(d, v, Z, lambda c: c + p * s1)
                        g2 = pt.tilde_ghost(d, v, Z, lambda c: c + p * s2)
                        assert g1 == g2 == want
                    lifted = pt.tilde_ghost(d, v, PLocalRationals(p),
                                            lambda c: Fraction(c * (1 + p), 1 + p))
                    assert lifted == want
                mod = p ** L
                for x in vectors:
                    for y in vectors:
                        rx, ry = pt.to_padic(x), pt.to_padic(y)
                        assert pt.to_padic(x + y) == (rx + ry) % mod
                        assert pt.to_padic(x * y) == (rx * ry) % mod
                assert pt.to_padic(PWittVec.one(p, Fp, L)) == 1


@criterion(8, "marks identity with formal marks to degree 6; constant mark gives AH", 60)
def test_criterion_08_marks():
    with Budget(60):
        for h, p in [(1, 2), (2, 2), (1, 3)]:
            spec = sg.formal_mark(h, p, 6)
            rhs = sg.mark_rhs(spec, 6)
            assert sg.mark_lhs(spec, 6, "enumerate") == rhs
            assert sg.mark_lhs(spec, 6, "isoclass") == rhs
            const = sg.constant_mark(h, p)
            c_rhs = sg.mark_rhs(const, 6)
            assert sg.mark_lhs(const, 6) == c_rhs
            assert list(c_rhs.coeffs) == [Fraction(c) for c in ah.artin_hasse(h, p, 6).as_series]


@criterion(9, "height-2 fixtures: lengths (1, 4, 11), exponents (1, 3, 7), tamper control", 5)
def test_criterion_09_fixtures():
    with Budget(5):
        fx = shipped_fixtures()
        assert [length_over_fp(q) for q in fx] == [1, 4, 11]
        assert [mod_p_reduction(q) for q in fx] == [1, 3, 7]
        counts = ah.nh_coeffs(2, 2, 2)
        assert [counts.partial_sum(d + 1) for d in range(3)] == [1, 4, 11]
        assert list(counts.coeffs) == [1, 3, 7]
        assert verify_height2_suite(fx).passed
        tampered = fx[1].replace_relation(2, [-2, 0, 1])
        report = verify_height2_suite([fx[0], tampered, fx[2]])
        assert not report.passed and report.lengths[1] != 4


@criterion(10, "m divides |{g in S_n : g^m = 1}| for m <= n <= 8", 30)
def test_criterion_10_frobenius_theorem():
    with Budget(30):
        for n in range(1, 9):
            for m in range(1, n + 1):
                count = sg.elements_of_order_dividing(n, m)
                assert count % m == 0, (n, m, count)
        for m in range(1, 9):
            assert sg.elements_of_order_dividing(8, m, "brute") == \
                sg.elements_of_order_dividing(8, m)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
