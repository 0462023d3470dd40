"""Integer matrices: Smith and Hermite normal forms, integer solve and kernel.

Everything runs on Python ints (arbitrary precision), so coefficient growth
during elimination is never truncated.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionError, InputError
from .linalg import LinearSolution, Matrix


def _as_int_rows(A) -> list[list[int]]:
    if isinstance(A, Matrix):
        return A.to_int_rows()
    rows = [list(r) for r in A]
    for r in rows:
        for x in r:
            if isinstance(x, bool) or not isinstance(x, int):
                if hasattr(x, "denominator") and x.denominator == 1:
                    continue
                raise InputError(f"non-integer entry {x!r}")
    return [[int(x) for x in r] for r in rows]


def _eye(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class SNFResult:
    """``U @ A @ V == D`` with U, V unimodular and D in Smith form."""

    D: Matrix
    U: Matrix
    V: Matrix

    @property
    def diagonal(self) -> list[int]:
        k = min(self.D.rows, self.D.cols)
        return [self.D[i, i].numerator for i in range(k)]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _snf_ints(a: list[list[int]], m: int, n: int):
    U = _eye(m)
    V = _eye(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        ra, rs = a[dst], a[src]
        for k in range(n):
            ra[k] += q * rs[k]
        ua, us = U[dst], U[src]
        for k in range(m):
            ua[k] += q * us[k]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        dirty = True
            if dirty:
                # move the smallest leftover in row/column t onto the pivot
                cand = [(abs(a[i][t]), i, t) for i in range(t + 1, m) if a[i][t]]
                cand += [(abs(a[t][j]), t, j) for j in range(t + 1, n) if a[t][j]]
                _, i, j = min(cand)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
    return a, U, V


def smith_normal_form(A) -> SNFResult:
    a = _as_int_rows(A)
    m = len(a)
    n = A.cols if isinstance(A, Matrix) else (len(a[0]) if a else 0)
    D, U, V = _snf_ints([r[:] for r in a], m, n)
    return SNFResult(Matrix(D, cols=n), Matrix(U, cols=m), Matrix(V, cols=n))


def int_det(a: Sequence[Sequence[int]]) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        mk = m[k]
        pk = mk[k]
        for i in range(k + 1, n):
            mi = m[i]
            mik = mi[k]
            for j in range(k + 1, n):
                mi[j] = (mi[j] * pk - mik * mk[j]) // prev
        prev = pk
    return sign * m[n - 1][n - 1]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_rows(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns a basis (zero rows dropped) in echelon form with positive pivots
    and entries above each pivot reduced into [0, pivot).
    """
    h = [list(r) for r in rows]
    if not h:
        return []
    ncols = len(h[0])
    r = 0
    for c in range(ncols):
        if r >= len(h):
            break
        # fold all rows below into row r with gcd steps
        for i in range(r + 1, len(h)):
            if h[i][c] == 0:
                continue
            if h[r][c] == 0:
                h[r], h[i] = h[i], h[r]
                continue
            g, s, t = _xgcd(h[r][c], h[i][c])
            u, v = h[r][c] // g, h[i][c] // g
            top = [s * x + t * y for x, y in zip(h[r], h[i])]
            bot = [-v * x + u * y for x, y in zip(h[r], h[i])]
            h[r], h[i] = top, bot
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
        p = h[r][c]
        for i in range(r):
            q = h[i][c] // p
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
        r += 1
    return [row for row in h[:r] if any(row)]


def integer_kernel(A) -> list[tuple[int, ...]]:
    """Basis of {x in Z^k : A x = 0}, returned in Hermite normal form."""
    a = _as_int_rows(A)
    k = A.cols if isinstance(A, Matrix) else (len(a[0]) if a else 0)
    if not a:
        return [tuple(int(i == j) for j in range(k)) for i in range(k)]
    res = smith_normal_form(Matrix(a, cols=k))
    r = res.rank
    V = res.V.to_int_rows()
    basis = [[V[i][j] for i in range(k)] for j in range(r, k)]
    return [tuple(b) for b in hermite_rows(basis)]


def integer_solve(A, b: Sequence[int]) -> LinearSolution | None:
    """Integer solutions of ``A x = b``: particular solution plus kernel basis.

    ``None`` when no integer solution exists.
    """
    a = _as_int_rows(A)
    k = A.cols if isinstance(A, Matrix) else (len(a[0]) if a else 0)
    b = list(b)
    for x in b:
        if hasattr(x, "denominator") and x.denominator != 1:
            raise InputError("right-hand side must be integral")
    b = [int(x) for x in b]
    if len(a) != len(b):
        raise DimensionError(f"{len(a)} equations but right-hand side has {len(b)} entries")
    if not a:
        return LinearSolution(tuple(0 for _ in range(k)), tuple(integer_kernel(Matrix.zeros(0, k))))
    res = smith_normal_form(Matrix(a, cols=k))
    U = res.U.to_int_rows()
    V = res.V.to_int_rows()
    d = res.diagonal
    c = [sum(u * x for u, x in zip(row, b)) for row in U]
    y = [0] * k
    for i, ci in enumerate(c):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if ci != 0:
                return None
        else:
            if ci % di:
                return None
            y[i] = ci // di
    x = tuple(sum(V[i][j] * y[j] for j in range(k)) for i in range(k))
    return LinearSolution(x, tuple(integer_kernel(Matrix(a, cols=k))))
