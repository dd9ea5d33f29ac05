import random
from fractions import Fraction as F

import pytest

from wittcalc import bigwitt
from wittcalc.bigwitt import BigWittVec, teichmuller
from wittcalc.errors import NonIntegralGhost, NotAUnit, RingMismatch, TruncationError
from wittcalc.rings import Integers, ModPrimePower, PLocalRationals, PrimeField, Rationals
from wittcalc.series import TruncSeries, series_mul

Z = Integers()
RINGS = [Z, Rationals(), PLocalRationals(3), ModPrimePower(2, 5), PrimeField(3)]


def rand(R, N, rng):
    return BigWittVec.of(R, [R.random(rng, 6) for _ in range(N)])


def test_ghost_examples():
    one = BigWittVec.one(Z, 6)
    assert one.ghosts() == [1] * 6
    assert BigWittVec.of(Z, [2, 3]).ghost(2) == 10
    assert teichmuller(2, Z, 3).ghost(3) == 8


def test_basic_sums():
    a = BigWittVec.of(Z, [1, 0])
    assert a + a == BigWittVec.of(Z, [2, -1])
    w = BigWittVec.of(Z, [3, -1, 4, 2])
    assert w + BigWittVec.zero(Z, 4) == w
    assert w * BigWittVec.one(Z, 4) == w
    assert w + (-w) == BigWittVec.zero(Z, 4)


def test_ghost_is_multiplicative_over_z():
    rng = random.Random(11)
    for _ in range(200):
        a, b = rand(Z, 12, rng), rand(Z, 12, rng)
        ab = a * b
        assert ab.ghosts() == [x * y for x, y in zip(a.ghosts(), b.ghosts())]


@pytest.mark.parametrize("R", RINGS, ids=str)
def test_law_route_matches_ghost_route(R):
    rng = random.Random(5)
    for _ in range(40):
        a, b = rand(R, 8, rng), rand(R, 8, rng)
        assert a + b == bigwitt.add_via_ghosts(a, b)
        assert a * b == bigwitt.mul_via_ghosts(a, b)
        assert -a == bigwitt.neg_via_ghosts(a)


def test_series_correspondence():
    rng = random.Random(2)
    assert BigWittVec.zero(Z, 5).to_series() == TruncSeries.one(Z, 5)
    assert teichmuller(3, Z, 4).to_series().coeffs == (1, 3, 9, 27, 81)
    for _ in range(100):
        a, b = rand(Z, 10, rng), rand(Z, 10, rng)
        assert (a + b).to_series() == series_mul(a.to_series(), b.to_series())
        assert bigwitt.from_series(a.to_series()) == a


def test_teichmuller_is_multiplicative():
    for x in range(-3, 4):
        for y in range(-3, 4):
            assert teichmuller(x, Z, 6) * teichmuller(y, Z, 6) == teichmuller(x * y, Z, 6)
    assert teichmuller(0, Z, 3) == BigWittVec.zero(Z, 3)


def test_inverse():
    one = BigWittVec.one(Z, 5)
    assert one.inverse() == one
    R = PLocalRationals(3)
    assert teichmuller(2, R, 6).inverse() == teichmuller(F(1, 2), R, 6)
    with pytest.raises(NotAUnit) as exc:
        BigWittVec.of(PLocalRationals(2), [2, 0, 0]).inverse()
    assert exc.value.index == 1
    rng = random.Random(9)
    S = ModPrimePower(3, 3)
    for _ in range(20):
        a = rand(S, 6, rng)
        if a.is_unit():
            assert a * a.inverse() == BigWittVec.one(S, 6)


def test_from_ghost():
    assert bigwitt.from_ghost([1] * 5, Z) == BigWittVec.one(Z, 5)
    assert bigwitt.from_ghost([3 ** n for n in range(1, 6)], Z) == teichmuller(3, Z, 5)
    with pytest.raises(NonIntegralGhost) as exc:
        bigwitt.from_ghost([0, 1, 0], Z)
    assert exc.value.index == 2


def test_from_int_has_constant_ghosts():
    assert BigWittVec.from_int(5, Z, 6).ghosts() == [5] * 6
    assert BigWittVec.from_int(2, Z, 3) == BigWittVec.one(Z, 3) + BigWittVec.one(Z, 3)


def test_errors_and_json():
    with pytest.raises(RingMismatch):
        BigWittVec.one(Z, 2) + BigWittVec.one(Rationals(), 2)
    with pytest.raises(TruncationError):
        BigWittVec.one(Z, 2) + BigWittVec.one(Z, 3)
    w = BigWittVec.of(Rationals(), [F(1, 2), 3])
    assert BigWittVec.from_json(w.to_json()) == w


@pytest.mark.parametrize("R", RINGS, ids=str)
def test_batched_ghosts_match_single_ghosts(R):
    rng = random.Random(11)
    for _ in range(20):
        a = rand(R, 10, rng)
        assert bigwitt.ghosts(a) == [bigwitt.ghost(a, n) for n in range(1, 11)]


def test_from_ghost_inverts_ghosts_over_torsion_free_rings():
    rng = random.Random(12)
    for R in (Z, Rationals(), PLocalRationals(3)):
        for _ in range(20):
            a = rand(R, 9, rng)
            assert bigwitt.from_ghost(a.ghosts(), R) == a


@pytest.mark.parametrize("R", [Z, ModPrimePower(2, 5), PrimeField(3)], ids=str)
def test_long_vectors_over_integral_lifts_agree_with_laws(R):
    rng = random.Random(13)
    N = bigwitt.GHOST_ROUTE_MIN_TRUNCATION
    for _ in range(10):
        a, b = rand(R, N, rng), rand(R, N, rng)
        assert a + b == bigwitt._apply("sum", a, b)
        assert a * b == bigwitt._apply("prod", a, b)
        assert -a == bigwitt._apply("neg", a)
