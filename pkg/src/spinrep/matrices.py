"""Small dense matrices over exact cyclotomic scalars."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional

from .cyclotomic import Cyclotomic, ONE, ZERO, rational


def _coerce(x) -> Cyclotomic:
    if isinstance(x, Cyclotomic):
        return x
    return rational(x)


class Matrix:
    """Immutable square matrix with Cyclotomic entries."""

    __slots__ = ("rows", "size")

    def __init__(self, rows: Iterable[Iterable]) -> None:
        self.rows = tuple(tuple(_coerce(x) for x in row) for row in rows)
        self.size = len(self.rows)
        for row in self.rows:
            if len(row) != self.size:
                raise ValueError("matrix must be square")

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, n: int, value) -> "Matrix":
        value = _coerce(value)
        return cls([[value if i == j else ZERO for j in range(n)] for i in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> Cyclotomic:
        i, j = ij
        return self.rows[i][j]

    def __mul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        n = self.size
        if other.size != n:
            raise ValueError("size mismatch")
        out = []
        brows = other.rows
        for arow in self.rows:
            row = [ZERO] * n
            for k, a in enumerate(arow):
                if a.is_zero():
                    continue
                brow = brows[k]
                for j, b in enumerate(brow):
                    if not b.is_zero():
                        row[j] = row[j] + a * b
            out.append(row)
        return Matrix(out)

    def scale(self, value) -> "Matrix":
        value = _coerce(value)
        return Matrix([[value * x for x in row] for row in self.rows])

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def __pow__(self, k: int) -> "Matrix":
        if k < 0:
            raise ValueError("negative matrix power not supported")
        result = Matrix.identity(self.size)
        for _ in range(k):
            result = result * self
        return result

    def kron(self, other: "Matrix") -> "Matrix":
        n, m = self.size, other.size
        out = []
        for i in range(n):
            for p in range(m):
                row = []
                for j in range(n):
                    a = self.rows[i][j]
                    if a.is_zero():
                        row.extend([ZERO] * m)
                    else:
                        row.extend([a * b for b in other.rows[p]])
                out.append(row)
        return Matrix(out)

    def trace(self) -> Cyclotomic:
        t = ZERO
        for i in range(self.size):
            t = t + self.rows[i][i]
        return t

    def is_scalar(self) -> Optional[Cyclotomic]:
        """The scalar c when self == c*I, else None."""
        c = self.rows[0][0]
        for i in range(self.size):
            for j in range(self.size):
                want = c if i == j else ZERO
                if self.rows[i][j] != want:
                    return None
        return c

    def first_nonzero(self) -> Optional[tuple[int, int]]:
        for i in range(self.size):
            for j in range(self.size):
                if not self.rows[i][j].is_zero():
                    return (i, j)
        return None

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(x) for x in row) for row in self.rows)
        return f"[{body}]"


def scalar_ratio(m1: Matrix, m2: Matrix) -> Optional[Cyclotomic]:
    """The scalar c with m1 == c*m2, or None when no such scalar exists."""
    pos = m2.first_nonzero()
    if pos is None:
        return None
    c = m1[pos] / m2[pos]
    return c if m1 == m2.scale(c) else None


def nullspace(rows: list[list[Cyclotomic]], nvars: int) -> list[list[Cyclotomic]]:
    """Basis of the solution space of a homogeneous system, each vector
    scaled so its first nonzero coordinate is 1."""
    mat = [list(row) for row in rows if any(not x.is_zero() for x in row)]
    pivots: list[int] = []
    r = 0
    for col in range(nvars):
        piv = next((i for i in range(r, len(mat)) if not mat[i][col].is_zero()), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = mat[r][col].inverse()
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and not mat[i][col].is_zero():
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(nvars) if c not in pivots]
    basis = []
    for f in free:
        vec = [ZERO] * nvars
        vec[f] = ONE
        for r, col in enumerate(pivots):
            vec[col] = -mat[r][f]
        lead = next(x for x in vec if not x.is_zero())
        inv = lead.inverse()
        basis.append([x * inv for x in vec])
    return basis
