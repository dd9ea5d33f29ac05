"""Exact integer matrices, Smith normal form with certificates, and
Hermite normal form of integer lattices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, VerificationFailure


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, data: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [tuple(int(x) for x in r) for r in data]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise DomainError("matrix rows have unequal lengths")
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls.of([[int(i == j) for j in range(n)] for i in range(n)], n)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise DomainError("matrix dimensions do not match")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMatrix.of(
            [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in self.entries],
            other.cols)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def is_diagonal(self) -> bool:
        return all(x == 0 for i, r in enumerate(self.entries)
                   for j, x in enumerate(r) if i != j)


@dataclass(frozen=True)
class SmithForm:
    invariants: tuple[int, ...]     # nonzero d_1 | d_2 | ... | d_r
    rank: int
    U: IntMatrix
    V: IntMatrix
    D: IntMatrix


def smith_normal_form(m: IntMatrix | Sequence[Sequence[int]]) -> SmithForm:
    """Return invariant factors and unimodular U, V with ``U m V = D``.

    Pivoting picks the entry of least absolute value in the remaining block;
    the certificate is checked by re-multiplying before returning.
    """
    if not isinstance(m, IntMatrix):
        m = IntMatrix.of(m)
    R, C = m.rows, m.cols
    A = [list(r) for r in m.entries]
    U = [[int(i == j) for j in range(R)] for i in range(R)]
    V = [[int(i == j) for j in range(C)] for i in range(C)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):   # row dst += q * row src
        if q:
            A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):   # col dst += q * col src
        if q:
            for row in A:
                row[dst] += q * row[src]
            for row in V:
                row[dst] += q * row[src]

    t = 0
    while t < min(R, C):
        best = None
        for i in range(t, R):
            for j in range(t, C):
                v = A[i][j]
                if v and (best is None or abs(v) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            piv = A[t][t]
            dirty = False
            for i in range(t + 1, R):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // piv))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, C):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // piv))
                    if A[t][j]:
                        dirty = True
            if not dirty:
                bad = next(((i, j) for i in range(t + 1, R) for j in range(t + 1, C)
                            if A[i][j] % piv), None)
                if bad is None:
                    break
                add_row(t, bad[0], 1)
                dirty = True
            # move the smallest nonzero entry of row/column t onto the pivot
            cand = [(abs(A[i][t]), i, t) for i in range(t, R) if A[i][t]]
            cand += [(abs(A[t][j]), t, j) for j in range(t, C) if A[t][j]]
            _, i, j = min(cand)
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1

    Um, Vm, Dm = IntMatrix.of(U, R), IntMatrix.of(V, C), IntMatrix.of(A, C)
    if (Um @ m) @ Vm != Dm or not Dm.is_diagonal():
        raise VerificationFailure("Smith normal form certificate does not verify")
    invariants = tuple(A[i][i] for i in range(min(R, C)) if A[i][i])
    for a, b in zip(invariants, invariants[1:]):
        if b % a:
            raise VerificationFailure("invariant factors do not form a divisor chain")
    return SmithForm(invariants, len(invariants), Um, Vm, Dm)


def hermite_normal_form(generators: Sequence[Sequence[int]], dim: int) -> tuple[tuple[int, ...], ...]:
    """Row-style HNF of the full-rank lattice spanned by ``generators`` in Z^dim.

    The result is upper triangular with positive diagonal and entries above
    each pivot reduced into ``[0, pivot)``; it is the canonical basis of the
    lattice.
    """
    A = [list(g) for g in generators if any(g)]
    if any(len(r) != dim for r in A):
        raise DomainError("generator has the wrong dimension")
    basis: list[list[int]] = []
    for col in range(dim):
        rows = [r for r in A if r[col]]
        rest = [r for r in A if not r[col]]
        while len(rows) > 1:
            rows.sort(key=lambda r: abs(r[col]))
            piv = rows[0]
            nxt = [piv]
            for r in rows[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            rows = nxt
        if not rows:
            raise DomainError("generators do not span a full-rank lattice")
        piv = rows[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        basis.append(piv)
        A = rest
    for j in range(dim):
        d = basis[j][j]
        for i in range(j):
            q = basis[i][j] // d
            if q:
                basis[i] = [a - q * b for a, b in zip(basis[i], basis[j])]
    return tuple(tuple(r) for r in basis)


def lattice_index(hnf: Sequence[Sequence[int]]) -> int:
    out = 1
    for i, row in enumerate(hnf):
        out *= row[i]
    return out
