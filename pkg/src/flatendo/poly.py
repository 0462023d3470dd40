"""Univariate polynomials over Q and exact root location.

Coefficients are stored constant term first.  Root questions are answered
without floating point: real roots by Sturm sequences, roots on the unit
circle through the substitution y = x + 1/x, and "all roots strictly inside
the unit disk" by the Schur-Cohn reduction.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError, InvariantViolation
from .linalg import Matrix, frac


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [frac(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(c)

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        p = cls([1])
        for r in roots:
            p = p * cls([-frac(r), 1])
        return p

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = "x" if k == 1 else f"x^{k}"
                body = mono if a == 1 else f"{a}*{mono}"
            terms.append((sign, body))
        head_sign, head = terms[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    # arithmetic ------------------------------------------------------------
    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Poly((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = frac(other)
            return Poly(c * a for a in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = Poly([1])
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        dq = len(r) - len(other.coeffs)
        if dq < 0:
            return Poly(), Poly(r)
        q = [Fraction(0)] * (dq + 1)
        lead = other.lc
        db = other.degree
        for k in range(dq, -1, -1):
            c = r[k + db] / lead
            q[k] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    r[k + i] -= c * b
        return Poly(q), Poly(r[:db])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = Fraction(0)
        x = frac(x)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_matrix(self, M: Matrix) -> Matrix:
        """Horner evaluation at a square matrix (Cayley-Hamilton checks)."""
        n = M.rows
        acc = Matrix.zeros(n, n)
        I = Matrix.identity(n)
        for c in reversed(self.coeffs):
            acc = acc @ M + I.scale(c)
        return acc

    def derivative(self) -> "Poly":
        return Poly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * (1 / self.lc)

    def reciprocal(self) -> "Poly":
        """x^deg * p(1/x): reversed coefficients (drops the degree on roots at 0)."""
        return Poly(reversed(self.coeffs))

    def sign_at(self, x) -> int:
        v = self(x)
        return (v > 0) - (v < 0)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic greatest common divisor."""
    if p.is_zero() and q.is_zero():
        raise InputError("gcd of two zero polynomials")
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_part(p: Poly) -> Poly:
    if p.is_zero():
        raise InputError("squarefree part of the zero polynomial")
    if p.degree <= 0:
        return Poly([1])
    return (p // poly_gcd(p, p.derivative())).monic()


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    return seq[:-1]


def _variations(seq: Sequence[Poly], x) -> int:
    signs = [s for s in (q.sign_at(x) for q in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: Poly, a, b) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval (a, b]."""
    a, b = frac(a), frac(b)
    if p.is_zero():
        raise InputError("Sturm count of the zero polynomial")
    if a >= b:
        raise InputError(f"empty interval ({a}, {b}]")
    sf = squarefree_part(p)
    if sf.degree <= 0:
        return 0
    seq = sturm_sequence(sf)
    return _variations(seq, a) - _variations(seq, b)


def _chebyshev_sum(n: int) -> list[Poly]:
    # P_k(y) = x^k + x^-k written in y = x + 1/x
    out = [Poly([2]), Poly([0, 1])]
    y = Poly.x()
    while len(out) <= n:
        out.append(y * out[-1] - out[-2])
    return out


def palindromic_to_half(g: Poly) -> Poly:
    """For palindromic ``g`` of degree 2m return h with g(x) = x^m h(x + 1/x)."""
    if g.degree % 2:
        raise InputError("palindromic reduction needs even degree")
    if g.coeffs != tuple(reversed(g.coeffs)):
        raise InputError("polynomial is not palindromic")
    m = g.degree // 2
    P = _chebyshev_sum(m)
    h = Poly([g.coeffs[m]])
    for k in range(1, m + 1):
        h = h + P[k] * g.coeffs[m + k]
    return h


def unit_circle_root_count(p: Poly) -> int:
    """Distinct roots of ``p`` on the unit circle.

    Works on the squarefree part, so repeated roots count once.  Only the
    zero/non-zero distinction matters to callers.
    """
    if p.is_zero():
        raise InputError("unit-circle count of the zero polynomial")
    sf = squarefree_part(p)
    if sf.degree <= 0:
        return 0
    g = poly_gcd(sf, sf.reciprocal())
    count = 0
    for r in (1, -1):
        lin = Poly([-r, 1])
        q, rem = divmod(g, lin)
        if rem.is_zero():
            count += 1
            g = q
    if g.degree <= 0:
        return count
    # g: squarefree, root set closed under inversion, no roots at +-1
    g = g.monic()
    if g.coeffs != tuple(reversed(g.coeffs)):
        raise InvariantViolation(f"expected a palindromic factor, got {g}")
    h = palindromic_to_half(g)
    # each real root of h in (-2, 2) is a conjugate pair on the circle;
    # h(2) != 0 since x = 1 was removed
    return count + 2 * sturm_count(h, -2, 2)


def schur_cohn_all_inside(p: Poly) -> bool:
    """True iff every root of ``p`` lies strictly inside the unit circle.

    Schur-Cohn step: with |a_0| < |a_n|, p has all roots inside iff
    (a_n p - a_0 p*) / x does.  If |a_0| >= |a_n| the product of the root
    moduli is at least 1, so the answer is False outright; roots on the
    circle therefore never need a tolerance.
    """
    if p.is_zero():
        raise InputError("Schur-Cohn test of the zero polynomial")
    while p.degree > 0:
        a0, an = p.coeffs[0], p.lc
        if abs(a0) >= abs(an):
            return False
        t = p * an - p.reciprocal() * a0
        # constant term cancels exactly
        p = Poly(t.coeffs[1:])
    return True


def expands(p: Poly) -> bool:
    """All roots strictly outside the closed unit disk (p(0) must be nonzero)."""
    if p.is_zero() or p.coeffs[0] == 0:
        return False
    return schur_cohn_all_inside(p.reciprocal())
