"""Abelianization via integer Smith normal form.

All arithmetic is exact Python integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .presentations import Presentation
from .words import AlphabetMismatch, Word

INFINITE = math.inf


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        ent = tuple(int(x) for x in self.entries)
        if len(ent) != self.rows * self.cols:
            raise ValueError("entries length must be rows * cols")
        object.__setattr__(self, "entries", ent)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c : (i + 1) * c]) for i in range(self.rows)]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        a, b = self.to_rows(), other.to_rows()
        out = [
            [sum(a[i][k] * b[k][j] for k in range(self.cols)) for j in range(other.cols)]
            for i in range(self.rows)
        ]
        return IntMatrix.from_rows(out, other.cols)

    def det(self) -> int:
        """Fraction-free (Bareiss) determinant."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        m = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1] if n else 1

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]


def smith_normal_form(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ M @ V == D`` in Smith form.

    Pivot: smallest nonzero absolute value in the active block, ties broken
    by lowest (row, col).  Diagonal entries are made nonnegative.
    """
    m, n = M.rows, M.cols
    A = M.to_rows()
    U = IntMatrix.identity(m).to_rows()
    V = IntMatrix.identity(n).to_rows()

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q:
            A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
            U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        if q:
            for row in A:
                row[dst] += q * row[src]
            for row in V:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                row = A[i]
                for j in range(t, n):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                return _finish(A, U, V, m, n)
            _, pi, pj = best
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = A[t][t]
            for i in range(t + 1, m):
                add_row(i, t, -(A[i][t] // p))
            for j in range(t + 1, n):
                add_col(j, t, -(A[t][j] // p))
            if any(A[i][t] for i in range(t + 1, m)) or any(A[t][j] for j in range(t + 1, n)):
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(A[i][j] % p for j in range(t + 1, n))), None
            )
            if bad is not None:
                add_row(t, bad, 1)
                continue
            break
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return _finish(A, U, V, m, n)


def _finish(A, U, V, m, n):
    for t in range(min(m, n)):
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return IntMatrix.from_rows(U, m), IntMatrix.from_rows(A, n), IntMatrix.from_rows(V, n)


def relator_matrix(P: Presentation) -> IntMatrix:
    return IntMatrix.from_rows([r.exponent_vector() for r in P.relators], len(P.gens))


@dataclass(frozen=True)
class AbelianInvariants:
    """``Z^n / rowspace(M)`` in canonical coordinates.

    A generator-exponent row vector ``x`` maps to ``x @ transform``; coordinate
    ``k`` of that product is reduced mod ``moduli[k]`` (``0`` means free,
    ``1`` means the coordinate is dropped).
    """

    torsion: tuple[int, ...]
    free_rank: int
    transform: IntMatrix
    moduli: tuple[int, ...]

    def coordinates(self, exponents: Sequence[int]) -> tuple[int, ...]:
        n = self.transform.rows
        if len(exponents) != n:
            raise ValueError("exponent vector has the wrong length")
        V = self.transform
        y = [sum(exponents[i] * V[i, j] for i in range(n)) for j in range(V.cols)]
        tors = [y[j] % d for j, d in enumerate(self.moduli) if d > 1]
        free = [y[j] for j, d in enumerate(self.moduli) if d == 0]
        return tuple(tors + free)

    def order(self, coords: Sequence[int]) -> int | float:
        k = len(self.torsion)
        if any(coords[k:]):
            return INFINITE
        out = 1
        for x, d in zip(coords[:k], self.torsion):
            out = math.lcm(out, d // math.gcd(d, x))
        return out

    def describe(self) -> str:
        return f"rank={self.free_rank} torsion=[{','.join(map(str, self.torsion))}]"


def abelian_invariants(M: IntMatrix) -> AbelianInvariants:
    _, D, V = smith_normal_form(M)
    n = M.cols
    diag = D.diagonal() + [0] * (n - min(M.rows, n))
    moduli = tuple(diag[:n])
    torsion = tuple(d for d in moduli if d > 1)
    free_rank = sum(1 for d in moduli if d == 0)
    return AbelianInvariants(torsion, free_rank, V, moduli)


_cache: dict = {}


def abelianize(P: Presentation) -> AbelianInvariants:
    key = (P.alphabet, P.relators)
    inv = _cache.get(key)
    if inv is None:
        inv = _cache[key] = abelian_invariants(relator_matrix(P))
    return inv


def image(P: Presentation, w: Word) -> tuple[int, ...]:
    """Canonical coordinates of ``w`` in H_1: torsion part first, then free part."""
    if w.alphabet != P.alphabet:
        raise AlphabetMismatch("word is not over the presentation's alphabet")
    return abelianize(P).coordinates(w.exponent_vector())


def torsion_order(P: Presentation, w: Word) -> int | float:
    """Additive order of the image of ``w``; ``INFINITE`` when it has a free part."""
    return abelianize(P).order(image(P, w))
