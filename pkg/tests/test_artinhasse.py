from fractions import Fraction as F
from math import factorial

import pytest

from wittcalc import artinhasse as ah
from wittcalc.bigwitt import BigWittVec
from wittcalc.errors import VerificationFailure
from wittcalc.ptypical import PWittVec
from wittcalc.rings import PLocalRationals, valuation
from wittcalc.symgrp import hom_count


def test_nh_coefficients():
    assert ah.nh_coeffs(1, 5, 6).coeffs == (1,) * 7
    assert ah.nh_coeffs(2, 2, 3).coeffs == (1, 3, 7, 15)
    for h in (1, 2, 3):
        for p in (2, 3, 5):
            assert all(c % p == 1 for c in ah.nh_coeffs(h, p, 6).coeffs)


def test_nh_infinity():
    assert ah.nh_infinity(1, 7, 4) == 1
    assert ah.nh_infinity(3, 2, 5) == 11
    assert ah.nh_infinity(2, 3, 3) == 13
    for h in (1, 2, 3):
        for p in (2, 3):
            for d in range(7):
                assert ah.convergence_gap(h, p, d) >= d + 1


def test_low_coefficients():
    for h, p in [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3)]:
        assert ah.ah_coefficient(h, p, 1) == 1
    assert ah.ah_coefficient(1, 2, 2) == 1
    assert ah.ah_coefficient(2, 2, 2) == 2


def test_series_counts_homomorphisms():
    for h, p in [(1, 2), (2, 2), (1, 3)]:
        s = ah.artin_hasse(h, p, 6).as_series
        for m in range(7):
            assert s[m] == F(hom_count(h, p, m), factorial(m))


def test_representations_agree():
    el = ah.artin_hasse(2, 3, 9)
    assert el.as_big_witt.to_series() == el.as_series
    assert [g for g in el.as_big_witt.ghosts()] == ah.ghost_spectrum(2, 3, 9)
    doc = el.to_json()
    assert set(doc) == {"h", "p", "series", "big_witt", "p_typical", "ghosts"}
    assert doc["ghosts"]["3"] == "4"


def test_height_one_is_unit_of_ptypical():
    R = PLocalRationals(2)
    assert ah.artin_hasse(1, 2, 16).as_p_typical == PWittVec.one(2, R, 5)


def test_idempotent():
    e = ah.idempotent_e(2, 16)
    assert e * e == e
    g = e.ghosts()
    assert all(g[n - 1] == 0 for n in (1, 2, 4, 8, 16))
    assert all(g[n - 1] == 1 for n in range(1, 17) if n not in (1, 2, 4, 8, 16))
    assert ah.idempotent_e(5, 6).ghost(6) == 1


@pytest.mark.parametrize("h,p,N", [(1, 2, 16), (2, 2, 16), (3, 3, 9)])
def test_identity_check(h, p, N):
    report = ah.ah_identity_check(h, p, N, samples=20, seed=3)
    assert report["status"] == "pass", report


def test_image_in_padics():
    assert [ah.ah_image_in_padics(1, 3, d) for d in range(4)] == [1, 1, 1, 1]
    assert ah.ah_image_in_padics(2, 3, 2) == 13
    assert ah.ah_image_in_padics(3, 2, 4) == 11


def test_validation():
    from wittcalc.series import rational_series
    s = ah.SubgroupCountSeries(2, 2, (1, 3, 7))
    assert s.partial_sum(2) == 4
    with pytest.raises(VerificationFailure):
        ah.SubgroupCountSeries(2, 2, (1, 2))
