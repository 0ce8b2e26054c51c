"""Exact rational matrices, sparse Gauss-Jordan elimination and determinants."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


@dataclass(frozen=True)
class RationalMatrix:
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.entries)
        if not rows or not rows[0]:
            raise ValueError("matrix dimensions must be positive")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "entries", rows)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RationalMatrix:
        return cls(((0,) * cols,) * rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.entries))
        return RationalMatrix(tuple(
            tuple(sum((x * y for x, y in zip(row, col) if x and y), Fraction(0)) for col in cols)
            for row in self.entries))

    def __add__(self, other: RationalMatrix) -> RationalMatrix:
        return RationalMatrix(tuple(tuple(x + y for x, y in zip(r, s))
                                    for r, s in zip(self.entries, other.entries)))

    def __sub__(self, other: RationalMatrix) -> RationalMatrix:
        return RationalMatrix(tuple(tuple(x - y for x, y in zip(r, s))
                                    for r, s in zip(self.entries, other.entries)))

    def scale(self, k) -> RationalMatrix:
        k = Fraction(k)
        return RationalMatrix(tuple(tuple(k * x for x in r) for r in self.entries))

    def transpose(self) -> RationalMatrix:
        return RationalMatrix(tuple(zip(*self.entries)))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self.entries for x in r)

    def det(self) -> Fraction:
        return determinant(self.entries)

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.det() != 0

    def flat(self) -> tuple[Fraction, ...]:
        return tuple(x for r in self.entries for x in r)

    def to_json(self) -> list[list[str]]:
        return [[_frac_str(x) for x in r] for r in self.entries]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[str]]) -> RationalMatrix:
        return cls(tuple(tuple(Fraction(x) for x in r) for r in data))

    def to_float(self):
        import numpy as np

        return np.array([[float(x) for x in r] for r in self.entries])


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def linear_combination(coeffs: Sequence, mats: Sequence[RationalMatrix]) -> RationalMatrix:
    rows, cols = mats[0].rows, mats[0].cols
    out = [[Fraction(0)] * cols for _ in range(rows)]
    for k, m in zip(coeffs, mats):
        if not k:
            continue
        k = Fraction(k)
        for i, row in enumerate(m.entries):
            o = out[i]
            for j, x in enumerate(row):
                if x:
                    o[j] += k * x
    return RationalMatrix(tuple(map(tuple, out)))


def determinant(rows: Sequence[Sequence]) -> Fraction:
    """Exact determinant; fraction-free Bareiss when every entry is an integer."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    fr = [[Fraction(x) for x in r] for r in rows]
    if all(x.denominator == 1 for r in fr for x in r):
        return Fraction(_bareiss([[int(x) for x in r] for r in fr]))
    sign = 1
    m = fr
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        p = m[k][k]
        det *= p
        for i in range(k + 1, n):
            f = m[i][k]
            if f:
                f /= p
                mi, mk = m[i], m[k]
                for j in range(k, n):
                    mi[j] -= f * mk[j]
    return sign * det


def _bareiss(m: list[list[int]]) -> int:
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        akk = m[k][k]
        for i in range(k + 1, n):
            aik = m[i][k]
            mi, mk = m[i], m[k]
            for j in range(k + 1, n):
                mi[j] = (mi[j] * akk - aik * mk[j]) // prev
        prev = akk
    return sign * m[n - 1][n - 1]


def nullspace(equations: Iterable[Mapping[int, Fraction]], nvars: int) -> list[dict[int, Fraction]]:
    """
    Basis of the solutions of sparse homogeneous equations ``sum c_v x_v = 0``.

    Gauss-Jordan elimination keeping every pivot row fully reduced, so each
    basis vector sets one free variable to 1 and reads the pivots off.
    """
    pivots: dict[int, dict[int, Fraction]] = {}  # pivot var -> row with coefficient 1
    for eq in equations:
        row = {v: Fraction(c) for v, c in eq.items() if c}
        for v in [v for v in row if v in pivots]:
            c = row.pop(v, None)
            if not c:
                continue
            for w, d in pivots[v].items():
                if w == v:
                    continue
                nc = row.get(w, 0) - c * d
                if nc:
                    row[w] = nc
                else:
                    row.pop(w, None)
        row = {v: c for v, c in row.items() if c}
        if not row:
            continue
        p = max(row)
        inv = 1 / row[p]
        row = {v: c * inv for v, c in row.items()}
        for q, prow in pivots.items():
            c = prow.get(p)
            if c:
                for w, d in row.items():
                    nc = prow.get(w, 0) - c * d
                    if nc:
                        prow[w] = nc
                    else:
                        prow.pop(w, None)
        pivots[p] = row
    free = [v for v in range(nvars) if v not in pivots]
    basis = []
    for f in free:
        vec = {f: Fraction(1)}
        for p, prow in pivots.items():
            c = prow.get(f)
            if c:
                vec[p] = -c
        basis.append(vec)
    return basis
