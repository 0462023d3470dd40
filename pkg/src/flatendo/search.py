"""Bounded searches: candidate linear maps and conjugacy obstructions.

A topological conjugacy between the map induced by alpha and one induced by a
linear phi would give an automorphism h of Gamma with h alpha_* = phi_* h.
Passing to a finite abelian quotient Q, that becomes a matrix identity
h alpha_Q = phi_Q h which can be tested exhaustively for every phi up to a
coefficient bound and every automorphism h of Q.  "Nothing found" is a
certificate for exactly those bounds, recorded in the report.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from math import lcm
from typing import Sequence

from .affine import AffineMap
from .endo import conjugation_endo, hirsch_check
from .errors import InputError, InvariantViolation, PreconditionError, QuotientTooLarge
from .group import CrystGroup
from .linalg import Matrix
from .quotient import (
    FinAbGroup,
    QuotientMap,
    induced_on_quotient,
    lattice_image,
    map_from_source_images,
    parse_quotient_spec,
    quotient,
)
from .snf import int_det, integer_kernel

DEFAULT_MAX_QUOTIENT = 4096
DEFAULT_MAX_ENDOMORPHISMS = 1_000_000


def holonomy_generators(G: CrystGroup) -> list[int]:
    """A small generating set of F (greedy over the stored order)."""
    gens: list[int] = []
    span = {0}
    for i in range(1, G.order):
        if i not in span:
            gens.append(i)
            span = _closure(G, gens)
    return gens


def _closure(G: CrystGroup, gens: Sequence[int]) -> set[int]:
    out = {0}
    todo = [0]
    while todo:
        i = todo.pop()
        for g in gens:
            j = G.mult[i][g]
            if j not in out:
                out.add(j)
                todo.append(j)
    return out


def holonomy_automorphisms(G: CrystGroup) -> list[tuple[int, ...]]:
    """All automorphisms of F as permutations of holonomy indices, identity first."""
    gens = holonomy_generators(G)
    m = G.order
    out = []
    for imgs in product(range(m), repeat=len(gens)):
        perm = {0: 0}
        todo = [0]
        ok = True
        while todo and ok:
            i = todo.pop()
            for g, gi in zip(gens, imgs):
                j, pj = G.mult[i][g], G.mult[perm[i]][gi]
                if j in perm:
                    if perm[j] != pj:
                        ok = False
                        break
                else:
                    perm[j] = pj
                    todo.append(j)
        if not ok or len(perm) != m or len(set(perm.values())) != m:
            continue
        p = tuple(perm[i] for i in range(m))
        # homomorphism on all pairs, not only along the spanning tree
        if all(p[G.mult[i][j]] == G.mult[p[i]][p[j]] for i in range(m) for j in range(m)):
            out.append(p)
    out.sort(key=lambda p: (p != tuple(range(m)), p))
    return out


@dataclass
class _Cosets:
    """Representative translations in lattice coordinates over one denominator."""

    q: int
    num: list  # num[i] = q * c_i as ints

    @classmethod
    def of(cls, G: CrystGroup) -> "_Cosets":
        q = lcm(1, *(x.denominator for c in G.rep_coords for x in c))
        return cls(q, [[int(x * q) for x in c] for c in G.rep_coords])


def _intertwiner_kernel(G: CrystGroup, perm: Sequence[int], gens: Sequence[int]) -> list[tuple[int, ...]]:
    """Integer basis of {Phi : Phi mu = perm(mu) Phi for the generators mu}."""
    n = G.dim
    H = G.holonomy_lattice
    rows = []
    for g in gens:
        mu, nu = H[g], H[perm[g]]
        # (Phi mu)_{rc} - (nu Phi)_{rc} = sum_k Phi_rk mu_kc - nu_rk Phi_kc
        for r in range(n):
            for c in range(n):
                row = [0] * (n * n)
                for k in range(n):
                    row[r * n + k] += mu[k][c]
                    row[k * n + c] -= nu[r][k]
                rows.append(row)
    if not rows:
        return [tuple(int(i == j) for j in range(n * n)) for i in range(n * n)]
    return integer_kernel(Matrix(rows, cols=n * n))


def _combine(basis: Sequence[Sequence[int]], coeffs: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(basis[0])
    for c, b in zip(coeffs, basis):
        if c:
            for t, x in enumerate(b):
                out[t] += c * x
    return tuple(out)


@dataclass(frozen=True)
class Candidate:
    lattice_matrix: tuple  # integer matrix in lattice coordinates, as rows
    holonomy_perm: tuple  # mu -> phi mu phi^-1 on holonomy indices
    lattice: Matrix = field(repr=False, compare=False, default=None)

    @cached_property
    def linear(self) -> Matrix:
        """phi in standard coordinates."""
        Phi = Matrix(self.lattice_matrix)
        if self.lattice is None:
            return Phi
        return self.lattice @ Phi @ self.lattice.inverse()

    def is_identity(self) -> bool:
        n = len(self.lattice_matrix)
        return all(self.lattice_matrix[i][j] == int(i == j) for i in range(n) for j in range(n))


def _congruence_ok(flat, n, q, cos: _Cosets, gens, perm) -> bool:
    """phi a_mu - a_{perm mu} must be a lattice vector for the generators mu."""
    for g in gens:
        a, b = cos.num[g], cos.num[perm[g]]
        for r in range(n):
            if (sum(flat[r * n + k] * a[k] for k in range(n)) - b[r]) % q:
                return False
    return True


def _candidates(G: CrystGroup, bound: int) -> list[Candidate]:
    if bound < 1:
        raise InputError("coefficient bound must be at least 1")
    n = G.dim
    gens = holonomy_generators(G)
    cos = _Cosets.of(G)
    q = cos.q
    values = range(-bound, bound + 1)
    lattice = None if G.lattice == Matrix.identity(n) else G.lattice
    found: dict[tuple, Candidate] = {}
    for perm in holonomy_automorphisms(G):
        basis = _intertwiner_kernel(G, perm, gens)
        if not basis:
            continue
        # the congruence only sees the coefficients modulo q
        residues = [r for r in product(range(q), repeat=len(basis))
                    if _congruence_ok(_combine(basis, r), n, q, cos, gens, perm)]
        for r in residues:
            pools = [[v for v in values if (v - ri) % q == 0] for ri in r]
            for coeffs in product(*pools):
                flat = _combine(basis, coeffs)
                rows = tuple(flat[i * n:(i + 1) * n] for i in range(n))
                if rows in found or int_det(rows) == 0:
                    continue
                found[rows] = Candidate(rows, perm, lattice)
    return list(found.values())


def _candidate_order(c: Candidate):
    return (not c.is_identity(), c.lattice_matrix)


def enumerate_candidates(G: CrystGroup, bound: int, verify: bool = True) -> list[Matrix]:
    """Invertible linear phi passing the Hirsch check, given in lattice
    coordinates as integer combinations (coefficients in [-bound, bound]) of
    an integer basis of the solutions of phi mu = pi(mu) phi, pi in Aut(F).

    Identity first, then lexicographic in the lattice-coordinate entries.
    """
    cands = sorted(_candidates(G, bound), key=_candidate_order)
    if verify:
        for c in cands:
            if not hirsch_check(G, c.linear):
                raise InvariantViolation(f"candidate {c.linear} fails the Hirsch check")
    return [c.linear for c in cands]


def _linear_source_images(G: CrystGroup, c: Candidate, cos: _Cosets) -> list[tuple[int, ...]]:
    n, m = G.dim, G.order
    Phi = c.lattice_matrix
    out = []
    for j in range(n):
        out.append(tuple(Phi[r][j] for r in range(n)) + (0,) * m)
    for i in range(m):
        a, b = cos.num[i], cos.num[c.holonomy_perm[i]]
        z = tuple((sum(Phi[r][k] * a[k] for k in range(n)) - b[r]) // cos.q for r in range(n))
        out.append(z + tuple(int(t == c.holonomy_perm[i]) for t in range(m)))
    return out


def _subgroup(Q: FinAbGroup, gens: Sequence[Sequence[int]]) -> set[tuple[int, ...]]:
    zero = Q.reduce([0] * Q.rank)
    out = {zero}
    todo = [zero]
    while todo:
        x = todo.pop()
        for g in gens:
            y = Q.reduce([a + b for a, b in zip(x, g)])
            if y not in out:
                out.add(y)
                todo.append(y)
    return out


def _mat_apply(Q: FinAbGroup, cols: Sequence[Sequence[int]], y: Sequence[int]) -> tuple[int, ...]:
    r = Q.rank
    return Q.reduce([sum(cols[j][i] * y[j] for j in range(r)) for i in range(r)])


def quotient_automorphisms(
    Q: FinAbGroup,
    preserve: Sequence[Sequence[int]] = (),
    max_endomorphisms: int = DEFAULT_MAX_ENDOMORPHISMS,
) -> list[Matrix]:
    """Automorphisms of a finite Q mapping the subgroup generated by
    ``preserve`` onto itself; identity first, then lexicographic."""
    if not Q.is_finite():
        raise InputError(f"quotient {Q} is infinite")
    elems = list(Q.elements())
    d = Q.invariant_factors
    # e_j has order d_j, so its image must be killed by d_j
    choices = [[y for y in elems if Q.is_zero([d[j] * x for x in y])] for j in range(Q.rank)]
    total = 1
    for ch in choices:
        total *= len(ch)
    if total > max_endomorphisms:
        raise QuotientTooLarge(f"{total} endomorphisms of {Q} exceed the cap {max_endomorphisms}")
    H = _subgroup(Q, preserve)
    nonzero = [y for y in elems if any(y)]
    out = []
    for cols in product(*choices):
        if any(_mat_apply(Q, cols, y) not in H for y in preserve):
            continue
        if any(not any(_mat_apply(Q, cols, y)) for y in nonzero):
            continue
        out.append(Matrix.from_columns(cols, rows=Q.rank))
    ident = Matrix.identity(Q.rank)
    out.sort(key=lambda M: (M != ident, M.entries()))
    return out


@dataclass(frozen=True)
class ObstructionReport:
    candidates_tested: int
    intertwiner_found: tuple | None  # (phi, h) or None
    search_bounds: dict = field(default_factory=dict)
    alpha_on_quotient: Matrix | None = None
    quotient: str = ""

    @property
    def found(self) -> bool:
        return self.intertwiner_found is not None


def obstruction_search(
    G: CrystGroup,
    alpha: AffineMap,
    spec="mod 4",
    bound: int = 2,
    max_quotient: int = DEFAULT_MAX_QUOTIENT,
    max_endomorphisms: int = DEFAULT_MAX_ENDOMORPHISMS,
) -> ObstructionReport:
    """Look for phi (bounded candidate) and h in Aut(Q) with h alpha_Q = phi_Q h.

    Candidates are tried identity first, then lexicographically; for each,
    the automorphisms h in the same order.  The first hit is reported.
    """
    if not conjugation_endo(G, alpha).induces:
        raise PreconditionError("alpha does not induce an endomorphism")
    s = parse_quotient_spec(spec)
    Q = quotient(G, s)
    if not Q.is_finite():
        raise InputError(f"quotient {Q} is infinite; use 'mod k' or 'center'")
    if Q.order > max_quotient:
        raise QuotientTooLarge(f"|Q| = {Q.order} exceeds the cap {max_quotient}")
    a_Q = induced_on_quotient(G, alpha, s)
    autos = quotient_automorphisms(Q, lattice_image(Q, G), max_endomorphisms)
    cands = sorted(_candidates(G, bound), key=_candidate_order)
    cos = _Cosets.of(G)

    A = a_Q.matrix
    seen: dict = {}
    hit = None
    for c in cands:
        phi_Q = map_from_source_images(Q, _linear_source_images(G, c, cos), check=False)
        key = phi_Q.matrix
        if key in seen:
            continue
        seen[key] = c
        P = phi_Q.matrix
        for h in autos:
            if _reduced(Q, (h @ A).to_int_rows()) == _reduced(Q, (P @ h).to_int_rows()):
                hit = (c.linear, h)
                break
        if hit:
            break
    bounds = {
        "coefficient_bound": bound,
        "quotient": str(s),
        "quotient_factors": list(Q.invariant_factors),
        "quotient_order": Q.order,
        "quotient_automorphisms": len(autos),
        "distinct_candidate_images": len(seen),
        "automorphisms_preserve_lattice_image": True,
    }
    report = ObstructionReport(len(cands), hit, bounds, a_Q.matrix, str(Q))
    if hit is not None:
        _check_intertwiner(G, s, a_Q, hit)
    return report


def _reduced(Q: FinAbGroup, rows):
    return [[x % d if d else x for x in row] for row, d in zip(rows, Q.invariant_factors)]


def _check_intertwiner(G: CrystGroup, spec, a_Q: QuotientMap, hit) -> None:
    phi, h = hit
    phi_Q = induced_on_quotient(G, AffineMap.linear_map(phi), spec)
    H = QuotientMap(a_Q.quotient, h)
    for y in a_Q.quotient.elements():
        if H.apply(a_Q.apply(y)) != phi_Q.apply(H.apply(y)):
            raise InvariantViolation("reported intertwiner does not satisfy h alpha = phi h")
