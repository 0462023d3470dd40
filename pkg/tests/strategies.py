"""Hypothesis strategies and independent oracles shared by the tests."""
from fractions import Fraction

import numpy as np
import sympy as sp
from hypothesis import strategies as st

from flatendo.linalg import Matrix

small_int = st.integers(-5, 5)
rational = st.fractions(min_value=-4, max_value=4, max_denominator=6)


@st.composite
def int_matrices(draw, n=None, lo=-5, hi=5, max_n=4):
    n = n or draw(st.integers(1, max_n))
    return Matrix([[draw(st.integers(lo, hi)) for _ in range(n)] for _ in range(n)])


@st.composite
def rat_matrices(draw, rows=None, cols=None, max_n=4):
    r = rows or draw(st.integers(1, max_n))
    c = cols or draw(st.integers(1, max_n))
    return Matrix([[draw(rational) for _ in range(c)] for _ in range(r)])


@st.composite
def rect_int_matrices(draw, max_n=4, lo=-6, hi=6):
    r = draw(st.integers(1, max_n))
    c = draw(st.integers(1, max_n))
    return [[draw(st.integers(lo, hi)) for _ in range(c)] for _ in range(r)]


@st.composite
def unimodular(draw, n):
    """Product of random elementary integer operations."""
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(draw(st.integers(0, 6))):
        i = draw(st.integers(0, n - 1))
        j = draw(st.integers(0, n - 1))
        if i == j:
            M[i] = [-x for x in M[i]]
        else:
            q = draw(st.integers(-2, 2))
            M[i] = [a + q * b for a, b in zip(M[i], M[j])]
    return Matrix(M)


def to_sympy(M: Matrix) -> sp.Matrix:
    return sp.Matrix([[sp.Rational(x.numerator, x.denominator) for x in M.row(i)] for i in range(M.rows)])


def sympy_charpoly_coeffs(M: Matrix) -> list[Fraction]:
    """Constant-first coefficients from sympy's Berkowitz characteristic polynomial."""
    x = sp.symbols("x")
    coeffs = to_sympy(M).charpoly(x).all_coeffs()[::-1]
    return [Fraction(int(c.p), int(c.q)) for c in coeffs]


def numeric_moduli(M: Matrix) -> np.ndarray:
    A = np.array([[float(x) for x in M.row(i)] for i in range(M.rows)])
    return np.abs(np.linalg.eigvals(A))
