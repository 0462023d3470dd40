"""Dense exact matrices over the rationals.

Entries are :class:`fractions.Fraction`, which keeps every value in lowest
terms with a positive denominator.  Integer matrices are the same type with
integral entries; :meth:`Matrix.to_int_rows` hands them to the integer
routines in :mod:`flatendo.snf`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

from .errors import DimensionError, InputError, SingularMatrixError

Vector = tuple  # tuple[Fraction, ...]


def frac(x) -> Fraction:
    """Coerce ``x`` to a Fraction; floats are rejected unless integral."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InputError(f"not a rational: {x!r}")
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, float):
        if x.is_integer():
            return Fraction(int(x))
        raise InputError(f"refusing inexact float {x!r}; give it as 'p/q'")
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {x!r}") from exc
    raise InputError(f"not a rational: {x!r}")


def vec(xs: Iterable) -> Vector:
    return tuple(frac(x) for x in xs)


def vadd(u: Sequence, v: Sequence) -> Vector:
    if len(u) != len(v):
        raise DimensionError(f"vector lengths {len(u)} and {len(v)} differ")
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> Vector:
    if len(u) != len(v):
        raise DimensionError(f"vector lengths {len(u)} and {len(v)} differ")
    return tuple(a - b for a, b in zip(u, v))


def vneg(u: Sequence) -> Vector:
    return tuple(-a for a in u)


def vscale(c, u: Sequence) -> Vector:
    return tuple(c * a for a in u)


def is_integral(u: Iterable[Fraction]) -> bool:
    return all(x.denominator == 1 for x in u)


class Matrix:
    """Immutable dense rational matrix, row-major."""

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(frac(x) for x in row) for row in data)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise DimensionError("ragged matrix rows")
        else:
            width = cols or 0
        if cols is not None and width != cols:
            raise DimensionError(f"expected {cols} columns, got {width}")
        self._data = rows
        self.rows = len(rows)
        self.cols = width
        self._hash = None

    # construction ----------------------------------------------------------
    @classmethod
    def _raw(cls, rows: tuple, cols: int) -> "Matrix":
        # rows already tuples of Fraction
        m = cls.__new__(cls)
        m._data = rows
        m.rows = len(rows)
        m.cols = cols
        m._hash = None
        return m

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._raw(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, r: int, c: int) -> "Matrix":
        z = Fraction(0)
        return cls._raw(tuple((z,) * c for _ in range(r)), c)

    @classmethod
    def diag(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        ents = [frac(e) for e in entries]
        z = Fraction(0)
        return cls._raw(tuple(tuple(ents[i] if i == j else z for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "Matrix":
        if not columns:
            return cls.zeros(rows or 0, 0)
        return cls(zip(*columns))

    # access -----------------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> Vector:
        return self._data[i]

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def entries(self) -> tuple:
        """Row-major flat tuple; also the canonical ordering key."""
        return tuple(x for r in self._data for x in r)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self._data for x in r)

    def to_int_rows(self) -> list[list[int]]:
        if not self.is_integral():
            raise InputError("matrix has non-integral entries")
        return [[x.numerator for x in r] for r in self._data]

    # algebra ---------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.cols == other.cols and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.cols, self._data))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self._data)
        return f"Matrix([{body}])"

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return Matrix._raw(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)), self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot subtract {other.shape} from {self.shape}")
        return Matrix._raw(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)), self.cols)

    def __neg__(self) -> "Matrix":
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self._data), self.cols)

    def scale(self, c) -> "Matrix":
        c = frac(c)
        return Matrix._raw(tuple(tuple(c * a for a in r) for r in self._data), self.cols)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            ocols = other.col_tuples()
            return Matrix._raw(
                tuple(tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in ocols) for r in self._data),
                other.cols,
            )
        v = tuple(other)
        if len(v) != self.cols:
            raise DimensionError(f"cannot apply {self.shape} matrix to length-{len(v)} vector")
        return tuple(sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in self._data)

    def col_tuples(self) -> tuple:
        if not self._data:
            return tuple(() for _ in range(self.cols))
        return tuple(zip(*self._data))

    @property
    def T(self) -> "Matrix":
        if not self._data:
            return Matrix.zeros(self.cols, 0)
        return Matrix._raw(tuple(zip(*self._data)), self.rows)

    def trace(self) -> Fraction:
        return sum((self._data[i][i] for i in range(min(self.rows, self.cols))), Fraction(0))

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square:
            raise DimensionError("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        result = Matrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def stack(self, other: "Matrix") -> "Matrix":
        """Vertical concatenation."""
        if self.cols != other.cols:
            raise DimensionError("column counts differ")
        return Matrix._raw(self._data + other._data, self.cols)

    def augment(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise DimensionError("row counts differ")
        return Matrix._raw(tuple(r + s for r, s in zip(self._data, other._data)), self.cols + other.cols)

    # elimination -----------------------------------------------------------
    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form and pivot columns."""
        m = [list(r) for r in self._data]
        pivots: list[int] = []
        r = 0
        for c in range(self.cols):
            if r >= self.rows:
                break
            p = next((i for i in range(r, self.rows) if m[i][c] != 0), None)
            if p is None:
                continue
            m[r], m[p] = m[p], m[r]
            inv = 1 / m[r][c]
            m[r] = [x * inv for x in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        return Matrix._raw(tuple(tuple(row) for row in m), self.cols), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def det(self) -> Fraction:
        if not self.is_square:
            raise DimensionError("determinant of a non-square matrix")
        n = self.rows
        m = [list(r) for r in self._data]
        d = Fraction(1)
        for c in range(n):
            p = next((i for i in range(c, n) if m[i][c] != 0), None)
            if p is None:
                return Fraction(0)
            if p != c:
                m[c], m[p] = m[p], m[c]
                d = -d
            piv = m[c][c]
            d *= piv
            for i in range(c + 1, n):
                if m[i][c] != 0:
                    f = m[i][c] / piv
                    m[i] = [a - f * b for a, b in zip(m[i], m[c])]
        return d

    def inverse(self) -> "Matrix":
        if not self.is_square:
            raise DimensionError("inverse of a non-square matrix")
        n = self.rows
        red, piv = self.augment(Matrix.identity(n)).rref()
        if piv[:n] != list(range(n)):
            raise SingularMatrixError("matrix is singular")
        return Matrix._raw(tuple(r[n:] for r in red._data), n)

    def nullspace(self) -> list[Vector]:
        """Basis of the rational kernel, one vector per free column."""
        red, piv = self.rref()
        free = [c for c in range(self.cols) if c not in piv]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.cols
            v[f] = Fraction(1)
            for i, p in enumerate(piv):
                v[p] = -red[i, f]
            basis.append(tuple(v))
        return basis


def identity(n: int) -> Matrix:
    return Matrix.identity(n)


@dataclass(frozen=True)
class LinearSolution:
    """A particular solution plus a basis of the homogeneous solutions."""

    particular: Vector
    kernel: tuple

    def general(self, coeffs: Sequence) -> Vector:
        x = self.particular
        for c, k in zip(coeffs, self.kernel):
            x = vadd(x, vscale(c, k))
        return x


def solve_exact(A: Matrix, b: Sequence) -> LinearSolution | None:
    """Solve ``A x = b`` over the rationals; ``None`` when inconsistent."""
    b = vec(b)
    if A.rows != len(b):
        raise DimensionError(f"{A.rows} equations but right-hand side has {len(b)} entries")
    aug = A.augment(Matrix([[x] for x in b], cols=1) if b else Matrix.zeros(0, 1))
    red, piv = aug.rref()
    if A.cols in piv:
        return None
    x = [Fraction(0)] * A.cols
    for i, p in enumerate(piv):
        x[p] = red[i, A.cols]
    return LinearSolution(tuple(x), tuple(A.nullspace()))


def char_poly(M: Matrix):
    """``det(xI - M)`` by the Faddeev-LeVerrier recurrence (exact over Q)."""
    from .poly import Poly

    if not M.is_square:
        raise DimensionError("characteristic polynomial of a non-square matrix")
    n = M.rows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    I = Matrix.identity(n)
    Mk = Matrix.zeros(n, n)
    for k in range(1, n + 1):
        Mk = M @ Mk + I.scale(coeffs[n - k + 1])
        coeffs[n - k] = -(M @ Mk).trace() / k
    return Poly(coeffs)
