import random
from fractions import Fraction as F

import pytest

from wittcalc import ptypical as pt
from wittcalc.artinhasse import artin_hasse
from wittcalc.bigwitt import BigWittVec, teichmuller
from wittcalc.errors import (InsufficientPrecision, NotAUnit, NotPLocalRing,
                             TruncationError)
from wittcalc.ptypical import PWittVec, teich_p
from wittcalc.rings import Integers, ModPrimePower, PLocalRationals, PrimeField, Rationals

Z = Integers()


def rand(p, R, L, rng, bound=6):
    return PWittVec.of(p, R, [R.random(rng, bound) for _ in range(L)])


def test_ghost_components():
    a = PWittVec.of(3, Z, [2, 5])
    assert a.ghosts() == [2, 2 ** 3 + 3 * 5]
    assert PWittVec.of(2, Z, [0, 1, 0]).ghosts() == [0, 2, 2]
    assert teich_p(3, 2, Z, 4).ghosts() == [3, 9, 81, 6561]


def test_length_two_sum():
    a = PWittVec.of(2, Z, [1, 0])
    assert a + a == PWittVec.of(2, Z, [2, -1])
    assert a + PWittVec.zero(2, Z, 2) == a


def test_ghost_oracle_p3():
    rng = random.Random(4)
    for _ in range(200):
        a, b = rand(3, Z, 4, rng), rand(3, Z, 4, rng)
        assert (a + b).ghosts() == [x + y for x, y in zip(a.ghosts(), b.ghosts())]
        assert (a * b).ghosts() == [x * y for x, y in zip(a.ghosts(), b.ghosts())]


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("kind", ["Z", "Q", "Zp", "mod", "Fp"])
def test_routes_agree(p, kind):
    R = {"Z": Z, "Q": Rationals(), "Zp": PLocalRationals(p), "mod": ModPrimePower(p, 4),
         "Fp": PrimeField(p)}[kind]
    L = 3 if p == 5 else 4
    rng = random.Random(p)
    for _ in range(25):
        a, b = rand(p, R, L, rng), rand(p, R, L, rng)
        assert pt.p_add(a, b, "law") == pt.p_add(a, b, "ghost")
        assert pt.p_mul(a, b, "law") == pt.p_mul(a, b, "ghost")
        assert pt.p_neg(a, "law") == pt.p_neg(a, "ghost")


def test_long_vectors_use_ghost_route():
    assert not pt.laws.has_cheap_ptypical_law(5, 5)
    rng = random.Random(0)
    R = ModPrimePower(5, 3)
    a, b, c = (rand(5, R, 5, rng) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


def test_projection():
    for x in range(-2, 4):
        assert pt.project(teichmuller(x, Z, 9), 2) == teich_p(x, 2, Z, 4)
    assert pt.project(BigWittVec.one(Z, 9), 3) == PWittVec.one(3, Z, 3)
    ah = artin_hasse(2, 2, 8)
    assert pt.project(ah.as_big_witt, 2) == ah.as_p_typical


def test_section():
    R = PLocalRationals(2)
    assert pt.section_j(PWittVec.zero(2, R, 5)) == BigWittVec.zero(R, 16)
    assert pt.section_j(PWittVec.one(2, R, 5)) == artin_hasse(1, 2, 16).as_big_witt
    rng = random.Random(8)
    for _ in range(100):
        a = rand(2, R, 4, rng)
        j = pt.section_j(a)
        assert pt.project(j, 2) == a
        g = j.ghosts()
        assert all(g[n - 1] == 0 for n in range(1, 9) if n not in (1, 2, 4, 8))
    with pytest.raises(NotPLocalRing):
        pt.section_j(PWittVec.one(2, Z, 3))
    with pytest.raises(TruncationError):
        pt.section_j(PWittVec.one(2, R, 3), 8)


def test_frobenius_and_verschiebung():
    for x in range(-2, 4):
        assert pt.frobenius(teich_p(x, 3, Z, 4)) == teich_p(x ** 3, 3, Z, 3)
    for p in (2, 3):
        F_p = PrimeField(p)
        v1 = pt.verschiebung(PWittVec.one(p, F_p, 3))
        assert pt.to_padic(v1) == p
    rng = random.Random(6)
    three = PWittVec.from_int(3, 3, Z, 4)
    for _ in range(30):
        a = rand(3, Z, 4, rng)
        assert pt.frobenius(pt.verschiebung(a)) == three * a
        fa = pt.frobenius(a)
        assert fa.ghosts() == a.ghosts()[1:]


def test_frobenius_is_pth_power_mod_p():
    rng = random.Random(12)
    R = PrimeField(3)
    for _ in range(20):
        a = rand(3, R, 4, rng)
        assert pt.frobenius(a) == PWittVec.of(3, R, [c ** 3 for c in a.coords[:3]])


def test_tilde_ghost():
    F2 = PrimeField(2)
    assert pt.tilde_ghost(1, PWittVec.of(2, F2, [1, 0])) == 1
    lift = pt.tilde_ghost(1, PWittVec.of(2, F2, [1, 0]), Z, lambda c: c + 2)
    assert lift == 9 % 4 == 1
    assert all(pt.tilde_ghost(d, PWittVec.zero(3, PrimeField(3), 4)) == 0 for d in range(4))
    with pytest.raises(InsufficientPrecision):
        pt.tilde_ghost(2, PWittVec.one(2, F2, 3), ModPrimePower(2, 2))


def test_padic_examples():
    for p in (2, 3):
        Fp = PrimeField(p)
        assert pt.to_padic(PWittVec.one(p, Fp, 4)) == 1
        assert pt.to_padic(PWittVec.of(p, Fp, [0, 1, 0])) == p
        top = p ** 4 - 1
        assert pt.to_padic(pt.from_padic(top, p, 4)) == top


def test_inverse():
    R = PLocalRationals(2)
    assert PWittVec.one(2, R, 4).inverse() == PWittVec.one(2, R, 4)
    ahp = artin_hasse(2, 2, 8).as_p_typical
    assert ahp * ahp.inverse() == PWittVec.one(2, R, 4)
    with pytest.raises(NotAUnit) as exc:
        teich_p(3, 3, PLocalRationals(3), 3).inverse()
    assert exc.value.index == 0


def test_json_round_trip():
    a = PWittVec.of(3, PLocalRationals(3), [F(1, 2), 4, F(-7, 5)])
    assert PWittVec.from_json(a.to_json()) == a


@pytest.mark.parametrize("p", [2, 3, 5])
def test_batched_ghosts_match_single_ghosts(p):
    rng = random.Random(p)
    for R in (Z, Rationals(), PLocalRationals(p), ModPrimePower(p, 4), PrimeField(p)):
        for _ in range(10):
            a = rand(p, R, 5, rng)
            assert pt.ghosts_p(a) == [pt.ghost_p(a, k) for k in range(5)]


@pytest.mark.parametrize("p", [2, 3, 5])
def test_p_from_ghost_inverts_ghosts(p):
    rng = random.Random(p + 100)
    for R in (Z, Rationals(), PLocalRationals(p)):
        for _ in range(10):
            a = rand(p, R, 5, rng)
            assert pt.p_from_ghost(pt.ghosts_p(a), p, R) == a
