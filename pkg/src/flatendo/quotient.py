"""Abelian quotients of Gamma and the maps induced on them.

Gamma^ab is presented on the source generators t_1..t_n (lattice basis) and
g_mu (one per holonomy element, the stored coset representative).  Relations:

    (mu - 1) t_i            for every mu in F and every i
    g_mu + g_nu - g_{mu nu} = c(mu, nu) . t

Smith normal form U R V = D turns the presentation into a direct sum; a
source vector x (row) has canonical coordinates x V, read modulo the
diagonal.  Coordinates whose factor is 1 are dropped.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import reduce
from itertools import product
from math import gcd, lcm
from typing import Iterator, Sequence

from .affine import AffineMap, compose, inverse
from .errors import InputError, InvariantViolation, PreconditionError
from .group import CrystGroup, GroupElement, center_lattice, cocycle, member
from .linalg import Matrix
from .snf import integer_solve, smith_normal_form


@dataclass(frozen=True)
class QuotientSpec:
    kind: str  # "ab", "mod" or "center"
    modulus: int = 0

    def __str__(self) -> str:
        return f"mod {self.modulus}" if self.kind == "mod" else self.kind


def parse_quotient_spec(spec) -> QuotientSpec:
    """Accepts "ab", "center", "mod k", "mod:k" or "modk"."""
    if isinstance(spec, QuotientSpec):
        return spec
    text = str(spec).strip().lower()
    if text in ("ab", "abelianization", "abelian"):
        return QuotientSpec("ab")
    if text in ("center", "centre"):
        return QuotientSpec("center")
    m = re.fullmatch(r"mod\s*[:\s]?\s*(-?\d+)", text)
    if m:
        k = int(m.group(1))
        if k < 2:
            raise InputError(f"modulus must be at least 2, got {k}")
        return QuotientSpec("mod", k)
    raise InputError(f"unknown quotient {spec!r}; use 'ab', 'center' or 'mod k'")


def source_labels(G: CrystGroup) -> tuple[str, ...]:
    return tuple(f"t{i + 1}" for i in range(G.dim)) + tuple(f"g{i}" for i in range(G.order))


def source_vector(G: CrystGroup, e: GroupElement) -> tuple[int, ...]:
    """Image of e = t^z g_mu in the free abelian group on the source generators."""
    return tuple(e.lattice_part) + tuple(int(i == e.holonomy_index) for i in range(G.order))


def relation_rows(G: CrystGroup) -> list[list[int]]:
    n, m = G.dim, G.order
    rows = []
    for mu in G.holonomy_lattice[1:]:
        for i in range(n):
            rows.append([mu[r][i] - int(r == i) for r in range(n)] + [0] * m)
    for i in range(m):
        for j in range(m):
            k = G.mult[i][j]
            row = [-c for c in cocycle(G, i, j)] + [0] * m
            row[n + i] += 1
            row[n + j] += 1
            row[n + k] -= 1
            rows.append(row)
    return rows


@dataclass(frozen=True)
class FinAbGroup:
    """Z_{d_1} + ... + Z_{d_r} (d = 0 meaning Z), with the source generators
    written in these canonical coordinates."""

    invariant_factors: tuple
    generator_images: tuple
    generator_labels: tuple = ()
    _V: tuple = field(default=(), repr=False, compare=False)
    _Vinv: tuple = field(default=(), repr=False, compare=False)
    _keep: tuple = field(default=(), repr=False, compare=False)
    _relations: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        nz = [d for d in self.invariant_factors if d]
        for a, b in zip(nz, nz[1:]):
            if b % a:
                raise InvariantViolation(f"invariant factors {self.invariant_factors} are not a divisibility chain")

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d == 0)

    @property
    def torsion(self) -> tuple:
        return tuple(d for d in self.invariant_factors if d)

    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int:
        """Number of elements; 0 for an infinite group."""
        if not self.is_finite():
            return 0
        return reduce(lambda a, b: a * b, self.invariant_factors, 1)

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "0"
        return " + ".join("Z" if d == 0 else f"Z{d}" for d in self.invariant_factors)

    def reduce(self, y: Sequence[int]) -> tuple[int, ...]:
        return tuple(x % d if d else x for x, d in zip(y, self.invariant_factors))

    def canonical(self, x: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates of a source vector."""
        V = self._V
        y = [sum(x[r] * V[r][c] for r in range(len(x))) for c in self._keep]
        return self.reduce(y)

    def element(self, G: CrystGroup, e) -> tuple[int, ...]:
        """Canonical coordinates of a group element (GroupElement, affine map or word)."""
        if isinstance(e, str):
            e = G.word(e)
        if isinstance(e, AffineMap):
            m = member(G, e)
            if m is None:
                raise InputError("map is not an element of Gamma")
            e = m
        return self.canonical(source_vector(G, e))

    def preimage(self, i: int) -> tuple[int, ...]:
        """A source vector mapping to the i-th canonical basis element."""
        return tuple(self._Vinv[self._keep[i]])

    def element_order(self, y: Sequence[int]) -> int:
        """Order of an element in canonical coordinates (0 when infinite)."""
        k = 1
        for x, d in zip(self.reduce(y), self.invariant_factors):
            if d == 0:
                if x:
                    return 0
            else:
                k = lcm(k, d // gcd(d, x))
        return k

    def elements(self) -> Iterator[tuple[int, ...]]:
        if not self.is_finite():
            raise PreconditionError("cannot enumerate an infinite group")
        return product(*(range(d) for d in self.invariant_factors))

    def is_zero(self, y: Sequence[int]) -> bool:
        return all(x == 0 for x in self.reduce(y))


def _build(G: CrystGroup, rows: list[list[int]]) -> FinAbGroup:
    k = G.dim + G.order
    res = smith_normal_form(Matrix(rows, cols=k))
    diag = res.diagonal + [0] * (k - len(res.diagonal))
    keep = tuple(i for i, d in enumerate(diag) if d != 1)
    V = tuple(tuple(r) for r in res.V.to_int_rows())
    Vinv = tuple(tuple(r) for r in res.V.inverse().to_int_rows())
    Q = FinAbGroup(tuple(diag[i] for i in keep), (), source_labels(G), V, Vinv, keep, tuple(map(tuple, rows)))
    images = tuple(Q.canonical(tuple(int(i == j) for i in range(k))) for j in range(k))
    Q = FinAbGroup(Q.invariant_factors, images, Q.generator_labels, V, Vinv, keep, Q._relations)
    for r in rows:
        if not Q.is_zero(Q.canonical(r)):
            raise InvariantViolation("relation survives in the Smith coordinates")
    return Q


def abelianization(G: CrystGroup) -> FinAbGroup:
    return _build(G, relation_rows(G))


def center_rows(G: CrystGroup) -> list[list[int]]:
    return [list(z) + [0] * G.order for z in center_lattice(G)]


def quotient(G: CrystGroup, spec="ab") -> FinAbGroup:
    """Gamma^ab ("ab"), Gamma^ab / k Gamma^ab ("mod k") or Gamma^ab / image of the
    center ("center")."""
    s = parse_quotient_spec(spec)
    rows = relation_rows(G)
    k = G.dim + G.order
    if s.kind == "mod":
        rows += [[s.modulus * int(i == j) for j in range(k)] for i in range(k)]
    elif s.kind == "center":
        rows += center_rows(G)
    return _build(G, rows)


def finite_quotient(G: CrystGroup, spec) -> FinAbGroup:
    s = parse_quotient_spec(spec)
    if s.kind == "ab":
        raise InputError("finite_quotient takes 'mod k' or 'center'")
    return quotient(G, s)


@dataclass(frozen=True)
class QuotientMap:
    """Endomorphism of a quotient in its canonical coordinates (acting on
    columns), entries of row i reduced modulo the i-th factor."""

    quotient: FinAbGroup
    matrix: Matrix

    def __post_init__(self):
        Q = self.quotient
        rows = self.matrix.to_int_rows()
        for i, d in enumerate(Q.invariant_factors):
            if d and any(x < 0 or x >= d for x in rows[i]):
                raise InvariantViolation("quotient matrix entries are not reduced")
        # a column j may only carry what the order of e_j allows
        for j, dj in enumerate(Q.invariant_factors):
            col = [rows[i][j] for i in range(len(rows))]
            if dj and not Q.is_zero([c * dj for c in col]):
                raise InvariantViolation("quotient matrix does not respect the factor moduli")

    def int_rows(self) -> list[list[int]]:
        return self.matrix.to_int_rows()

    def apply(self, y: Sequence[int]) -> tuple[int, ...]:
        rows = self.int_rows()
        return self.quotient.reduce([sum(a * b for a, b in zip(r, y)) for r in rows])

    def __matmul__(self, other: "QuotientMap") -> "QuotientMap":
        if self.quotient.invariant_factors != other.quotient.invariant_factors:
            raise InputError("maps live on different quotients")
        M = (self.matrix @ other.matrix).to_int_rows()
        return QuotientMap(self.quotient, Matrix(_reduce_rows(self.quotient, M)))

    def in_basis(self, basis: Sequence[Sequence[int]]) -> Matrix:
        """The matrix with respect to another generating set b_1..b_r of the
        quotient (canonical coordinates), column j giving the image of b_j as a
        combination of the b_i, each coefficient reduced modulo the order of b_i."""
        Q = self.quotient
        r = Q.rank
        basis = [Q.reduce(b) for b in basis]
        orders = [Q.element_order(b) for b in basis]
        B = [[basis[j][i] for j in range(len(basis))] + [int(i == c) * Q.invariant_factors[i] for c in range(r)]
             for i in range(r)]
        cols = []
        for b in basis:
            sol = integer_solve(B, list(self.apply(b)))
            if sol is None:
                raise InputError("the given elements do not generate the image")
            coeffs = sol.particular[: len(basis)]
            cols.append([c % o if o else c for c, o in zip(coeffs, orders)])
        return Matrix.from_columns(cols, rows=len(basis))


def _reduce_rows(Q: FinAbGroup, rows: list[list[int]]) -> list[list[int]]:
    return [[x % d if d else x for x in row] for row, d in zip(rows, Q.invariant_factors)]


def map_from_source_images(Q: FinAbGroup, images: Sequence[Sequence[int]], check: bool = True) -> QuotientMap:
    """The induced map given psi on the source generators (as source vectors).

    With ``check`` it is verified that psi kills every defining relation of Q,
    i.e. that it descends.
    """
    k = len(images)

    def push(x):
        return [sum(x[j] * images[j][c] for j in range(k)) for c in range(k)]

    for rel in Q._relations if check else ():
        if not Q.is_zero(Q.canonical(push(rel))):
            raise PreconditionError("the map does not descend to this quotient")
    cols = [Q.canonical(push(Q.preimage(i))) for i in range(Q.rank)]
    return QuotientMap(Q, Matrix.from_columns(cols, rows=Q.rank) if cols else Matrix.zeros(0, 0))


def conjugation_source_images(G: CrystGroup, alpha: AffineMap) -> list[tuple[int, ...]]:
    """alpha s alpha^-1 for every source generator s, as source vectors."""
    ainv = inverse(alpha)
    gens = G.lattice_basis_maps() + [G.rep(i) for i in range(G.order)]
    out = []
    for g in gens:
        e = member(G, compose(compose(alpha, g), ainv))
        if e is None:
            raise PreconditionError("alpha does not induce an endomorphism")
        out.append(source_vector(G, e))
    return out


def induced_on_quotient(G: CrystGroup, alpha: AffineMap, spec="ab") -> QuotientMap:
    Q = quotient(G, spec)
    images = conjugation_source_images(G, alpha)
    try:
        return map_from_source_images(Q, images)
    except PreconditionError:
        if parse_quotient_spec(spec).kind == "center":
            raise PreconditionError("the center image is not invariant under this map") from None
        raise


def lattice_image(Q: FinAbGroup, G: CrystGroup) -> list[tuple[int, ...]]:
    """Canonical coordinates of the lattice basis translations."""
    return [Q.generator_images[i] for i in range(G.dim)]
