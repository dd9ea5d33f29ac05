import itertools
import random
from math import gcd

import pytest

from wittcalc.intmat import IntMatrix, hermite_normal_form, lattice_index, smith_normal_form


def det(m):
    if not m:
        return 1
    return sum((-1) ** j * m[0][j] * det([r[:j] + r[j + 1:] for r in m[1:]])
               for j in range(len(m)))


def determinantal_invariants(m):
    """Independent oracle: d_k = D_k / D_(k-1), D_k = gcd of k x k minors."""
    R, C = len(m), len(m[0])
    D = [1]
    for k in range(1, min(R, C) + 1):
        g = 0
        for rows in itertools.combinations(range(R), k):
            for cols in itertools.combinations(range(C), k):
                g = gcd(g, det([[m[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        D.append(g)
    return tuple(D[k] // D[k - 1] for k in range(1, len(D)))


def test_examples():
    assert smith_normal_form([[1, 0], [0, 1]]).invariants == (1, 1)
    assert smith_normal_form([[2, 0], [0, 4]]).invariants == (2, 4)
    assert smith_normal_form([[2, 0], [1, 2]]).invariants == (1, 4)


def test_random_against_minors():
    rng = random.Random(7)
    for _ in range(150):
        R, C = rng.randint(1, 4), rng.randint(1, 4)
        m = [[rng.randint(-6, 6) for _ in range(C)] for _ in range(R)]
        snf = smith_normal_form(m)
        assert snf.invariants == determinantal_invariants(m)
        assert (snf.U @ IntMatrix.of(m)) @ snf.V == snf.D
        assert abs(det(snf.U.tolist())) == 1 and abs(det(snf.V.tolist())) == 1


def test_hnf_is_canonical():
    rng = random.Random(3)
    base = [[2, 1, 0], [0, 3, 1], [0, 0, 4]]
    H = hermite_normal_form(base, 3)
    assert lattice_index(H) == 24
    for _ in range(30):
        gens = [row[:] for row in base]
        for _ in range(6):      # unimodular row operations
            i, j = rng.sample(range(3), 2)
            q = rng.randint(-3, 3)
            gens[i] = [a + q * b for a, b in zip(gens[i], gens[j])]
        k = rng.randint(-2, 2)
        gens.append([x * k for x in gens[0]])
        assert hermite_normal_form(gens, 3) == H


def test_hnf_shape():
    H = hermite_normal_form([[4, 6], [0, 2], [2, 0]], 2)
    assert H == ((2, 0), (0, 2))
    for i, row in enumerate(H):
        assert all(x == 0 for x in row[:i]) and row[i] > 0
        for k in range(i):
            assert 0 <= H[k][i] < row[i]
