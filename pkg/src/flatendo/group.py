"""Crystallographic groups Gamma inside R^n x| F.

A group is stored as its translation lattice L (basis in the columns of
``lattice``) together with the holonomy table: one entry per element mu of
the finite group F, carrying mu and a coset representative translation a_mu
with (a_mu, mu) in Gamma.  Every element of Gamma is then uniquely
(a_mu + L z, mu) for an integer vector z, which is what :class:`GroupElement`
records.
"""
from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

from .affine import AffineMap, compose, inverse
from .errors import DimensionError, GroupBuildError, InputError
from .linalg import Matrix, Vector, frac, is_integral, vadd, vec, vsub
from .snf import integer_kernel, integer_solve

DEFAULT_HOLONOMY_CAP = 1024


@dataclass(frozen=True)
class HolonomyElement:
    linear: Matrix
    rep_translation: Vector


@dataclass(frozen=True)
class GroupElement:
    """(a_mu + L z, mu) with z = ``lattice_part`` and mu = holonomy[``holonomy_index``]."""

    lattice_part: tuple
    holonomy_index: int


@dataclass(frozen=True, eq=False)
class CrystGroup:
    dim: int
    lattice: Matrix
    holonomy: tuple
    generators: tuple = field(default=())
    generator_names: tuple = field(default=())

    def __eq__(self, other) -> bool:
        if not isinstance(other, CrystGroup):
            return NotImplemented
        return (self.dim, self.lattice, self.holonomy) == (other.dim, other.lattice, other.holonomy)

    def __hash__(self) -> int:
        return hash((self.dim, self.lattice, self.holonomy))

    def __repr__(self) -> str:
        return f"CrystGroup(dim={self.dim}, |F|={self.order}, generators={list(self.generator_names)})"

    # derived data -------------------------------------------------------------
    @property
    def order(self) -> int:
        """Order of the holonomy group."""
        return len(self.holonomy)

    @cached_property
    def lattice_inv(self) -> Matrix:
        return self.lattice.inverse()

    @cached_property
    def _index(self) -> dict:
        return {h.linear: i for i, h in enumerate(self.holonomy)}

    def index_of(self, linear: Matrix) -> int | None:
        return self._index.get(linear)

    @cached_property
    def holonomy_lattice(self) -> tuple:
        """Each mu written in lattice coordinates, as integer row lists."""
        L, Li = self.lattice, self.lattice_inv
        return tuple(tuple(tuple(r) for r in (Li @ h.linear @ L).to_int_rows()) for h in self.holonomy)

    @cached_property
    def rep_coords(self) -> tuple:
        """Coset representatives a_mu in lattice coordinates."""
        return tuple(self.lattice_inv @ h.rep_translation for h in self.holonomy)

    @cached_property
    def mult(self) -> tuple:
        """mult[i][j] = index of mu_i mu_j."""
        return tuple(
            tuple(self._index[hi.linear @ hj.linear] for hj in self.holonomy) for hi in self.holonomy
        )

    @cached_property
    def inv_index(self) -> tuple:
        return tuple(row.index(0) for row in self.mult)

    def element_order(self, i: int) -> int:
        k, j = 1, i
        while j != 0:
            j = self.mult[j][i]
            k += 1
        return k

    def to_lattice_coords(self, v: Sequence) -> Vector:
        return self.lattice_inv @ vec(v)

    def from_lattice_coords(self, z: Sequence) -> Vector:
        return self.lattice @ vec(z)

    def lattice_translation(self, z: Sequence[int]) -> AffineMap:
        return AffineMap.translation_by(self.from_lattice_coords(z))

    def lattice_basis_maps(self) -> list[AffineMap]:
        n = self.dim
        return [self.lattice_translation([int(i == j) for j in range(n)]) for i in range(n)]

    def rep(self, i: int) -> AffineMap:
        h = self.holonomy[i]
        return AffineMap(h.rep_translation, h.linear)

    def to_affine(self, e: GroupElement) -> AffineMap:
        h = self.holonomy[e.holonomy_index]
        return AffineMap(vadd(h.rep_translation, self.from_lattice_coords(e.lattice_part)), h.linear)

    def identity_element(self) -> GroupElement:
        return GroupElement((0,) * self.dim, 0)

    def generator(self, name: str) -> AffineMap:
        try:
            return self.generators[self.generator_names.index(name)]
        except ValueError:
            raise InputError(f"unknown generator {name!r}; have {list(self.generator_names)}") from None

    def word(self, text: str) -> AffineMap:
        """Evaluate a word such as ``"a b^3"``, ``"t(0,1,1) A B"`` or ``"f^-1"``.

        ``t(...)`` is a translation in standard coordinates; the empty word is
        the identity.
        """
        result = AffineMap.identity(self.dim)
        for tok in _tokenize_word(text):
            if tok[0] == "t":
                g = AffineMap.translation_by(tok[1])
                if len(g.translation) != self.dim:
                    raise DimensionError(f"translation {tok[1]} has wrong length")
                e = 1
            else:
                _, name, e = tok
                g = self.generator(name)
            if e < 0:
                g, e = inverse(g), -e
            for _ in range(e):
                result = compose(result, g)
        return result

    def describe(self, e: GroupElement) -> str:
        z = ",".join(str(x) for x in e.lattice_part)
        if e.holonomy_index == 0:
            return f"t({z})"
        return f"t({z}) * r{e.holonomy_index}"


_WORD_TOKEN = re.compile(r"\s*(?:t\(([^)]*)\)|([A-Za-z_][A-Za-z_0-9]*)(?:\^\(?(-?\d+)\)?)?)")


def _tokenize_word(text: str):
    pos = 0
    text = text.strip()
    out = []
    while pos < len(text):
        if text[pos] in " *·.":
            pos += 1
            continue
        m = _WORD_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise InputError(f"cannot parse word {text!r} at position {pos}")
        if m.group(1) is not None:
            out.append(("t", [frac(x) for x in m.group(1).split(",")]))
        else:
            out.append(("g", m.group(2), int(m.group(3)) if m.group(3) else 1))
        pos = m.end()
    return out


def _holonomy_key(M: Matrix) -> tuple:
    return M.entries()


def _reduce_mod_lattice(v: Vector, L: Matrix, Li: Matrix) -> Vector:
    c = Li @ v
    c = tuple(x - math.floor(x) for x in c)
    return L @ c


def build_group(
    generators: Sequence[AffineMap],
    lattice: Matrix | None = None,
    names: Sequence[str] | None = None,
    holonomy_cap: int = DEFAULT_HOLONOMY_CAP,
) -> CrystGroup:
    """Close ``generators`` (together with the lattice) into a CrystGroup.

    Raises GroupBuildError when the holonomy does not close within
    ``holonomy_cap`` elements, a linear part does not preserve the lattice,
    two words with equal linear part differ by a non-lattice translation,
    or the cocycle condition fails.
    """
    generators = list(generators)
    if not generators and lattice is None:
        raise GroupBuildError("need at least a lattice or one generator")
    n = generators[0].dim if generators else lattice.rows
    L = Matrix.identity(n) if lattice is None else lattice
    if L.shape != (n, n):
        raise DimensionError(f"lattice has shape {L.shape}, expected {(n, n)}")
    if L.det() == 0:
        raise GroupBuildError("lattice basis is singular")
    Li = L.inverse()
    if names is None:
        names = [f"g{i}" for i in range(len(generators))]
    names = list(names)
    if len(names) != len(generators):
        raise InputError("one name per generator required")
    if len(set(names)) != len(names):
        raise InputError(f"duplicate generator names {names}")

    for name, g in zip(names, generators):
        if g.dim != n:
            raise DimensionError(f"generator {name} has dimension {g.dim}, expected {n}")
        if g.linear.det() == 0:
            raise GroupBuildError(f"generator {name} has a singular linear part")
        if not (Li @ g.linear @ L).is_integral():
            raise GroupBuildError(f"generator {name}: linear part does not preserve the lattice")

    I = Matrix.identity(n)
    reps: dict[Matrix, Vector] = {I: vec([0] * n)}
    queue = deque([I])
    while queue:
        mu = queue.popleft()
        a_mu = reps[mu]
        for name, g in zip(names, generators):
            t = vadd(g.translation, g.linear @ a_mu)
            nu = g.linear @ mu
            if nu in reps:
                if not is_integral(Li @ vsub(t, reps[nu])):
                    raise GroupBuildError(
                        f"inconsistent coset representatives at generator {name}: "
                        f"translation {_fmt(t)} vs {_fmt(reps[nu])} differ by a non-lattice vector"
                    )
                continue
            reps[nu] = t
            queue.append(nu)
            if len(reps) > holonomy_cap:
                raise GroupBuildError(
                    f"holonomy closure exceeded {holonomy_cap} elements; "
                    "linear parts do not generate a finite group"
                )

    order = sorted((mu for mu in reps if mu != I), key=_holonomy_key)
    hol = tuple(
        [HolonomyElement(I, vec([0] * n))]
        + [HolonomyElement(mu, _reduce_mod_lattice(reps[mu], L, Li)) for mu in order]
    )
    G = CrystGroup(n, L, hol, tuple(generators), tuple(names))
    _check_cocycle(G)
    return G


def _fmt(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def _check_cocycle(G: CrystGroup) -> None:
    Li = G.lattice_inv
    for i, hi in enumerate(G.holonomy):
        for j, hj in enumerate(G.holonomy):
            k = G.mult[i][j]
            c = vsub(vadd(hi.rep_translation, hi.linear @ hj.rep_translation), G.holonomy[k].rep_translation)
            if not is_integral(Li @ c):
                raise GroupBuildError(f"cocycle condition fails for holonomy elements {i}, {j}")


def cocycle(G: CrystGroup, i: int, j: int) -> tuple[int, ...]:
    """Lattice coordinates of a_mu + mu a_nu - a_{mu nu}."""
    hi, hj = G.holonomy[i], G.holonomy[j]
    k = G.mult[i][j]
    c = G.lattice_inv @ vsub(vadd(hi.rep_translation, hi.linear @ hj.rep_translation), G.holonomy[k].rep_translation)
    return tuple(x.numerator for x in c)


def member(G: CrystGroup, f: AffineMap) -> GroupElement | None:
    """Decompose ``f`` as an element of Gamma, or None if it is not one."""
    if f.dim != G.dim:
        raise DimensionError(f"map of dimension {f.dim} for a group of dimension {G.dim}")
    i = G.index_of(f.linear)
    if i is None:
        return None
    z = G.lattice_inv @ vsub(f.translation, G.holonomy[i].rep_translation)
    if not is_integral(z):
        return None
    return GroupElement(tuple(x.numerator for x in z), i)


def holonomy_project(G: CrystGroup, e: GroupElement) -> int:
    return e.holonomy_index


def orbit_equal(G: CrystGroup, x: Sequence, y: Sequence) -> GroupElement | None:
    """A group element gamma with x = gamma . y, or None if the orbits differ."""
    x, y = vec(x), vec(y)
    if len(x) != G.dim or len(y) != G.dim:
        raise DimensionError("point dimension does not match the group")
    for i, h in enumerate(G.holonomy):
        z = G.lattice_inv @ vsub(vsub(x, h.rep_translation), h.linear @ y)
        if is_integral(z):
            return GroupElement(tuple(c.numerator for c in z), i)
    return None


def torsion_witness(G: CrystGroup) -> GroupElement | None:
    """A non-trivial element of finite order, or None when Gamma is torsion free.

    For mu of order k and S = 1 + mu + ... + mu^(k-1), the k-th power of
    (a_mu + z, mu) is the translation S (a_mu + z); so torsion in the coset
    of mu is an integer solution of S z = -S a_mu (lattice coordinates).
    """
    n = G.dim
    for i in range(1, G.order):
        k = G.element_order(i)
        mu = [list(r) for r in G.holonomy_lattice[i]]
        S = [[int(r == c) for c in range(n)] for r in range(n)]
        P = [row[:] for row in S]
        for _ in range(k - 1):
            P = [[sum(P[r][t] * mu[t][c] for t in range(n)) for c in range(n)] for r in range(n)]
            S = [[S[r][c] + P[r][c] for c in range(n)] for r in range(n)]
        a = G.rep_coords[i]
        rhs = [-sum(S[r][c] * a[c] for c in range(n)) for r in range(n)]
        if not is_integral(rhs):
            continue
        sol = integer_solve(S, [x.numerator for x in rhs])
        if sol is not None:
            return GroupElement(tuple(sol.particular), i)
    return None


def center_lattice(G: CrystGroup) -> list[tuple[int, ...]]:
    """Lattice-coordinate basis of {z in L : mu z = z for all mu in F}."""
    n = G.dim
    rows = []
    for mu in G.holonomy_lattice[1:]:
        rows += [[mu[r][c] - int(r == c) for c in range(n)] for r in range(n)]
    if not rows:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return integer_kernel(Matrix(rows, cols=n))


def words_up_to(G: CrystGroup, depth: int) -> Iterator[tuple[str, AffineMap]]:
    """Distinct non-identity elements reachable by words of length <= depth.

    Breadth first over the stored generators and their inverses, each
    element reported once with the first word that reaches it.
    """
    letters = []
    for name, g in zip(G.generator_names, G.generators):
        letters.append((name, g))
        letters.append((f"{name}^-1", inverse(g)))
    ident = AffineMap.identity(G.dim)
    seen = {ident}
    frontier = [("", ident)]
    for _ in range(depth):
        nxt = []
        for w, x in frontier:
            for name, g in letters:
                y = compose(x, g)
                if y in seen:
                    continue
                seen.add(y)
                word = f"{w} {name}".strip()
                nxt.append((word, y))
                yield word, y
        frontier = nxt


def holonomy_subgroup(G: CrystGroup, indices: Sequence[int]) -> set[int]:
    """Closure of the given holonomy indices under multiplication."""
    out = {0}
    frontier = [0]
    gens = set(indices)
    while frontier:
        i = frontier.pop()
        for g in gens:
            j = G.mult[i][g]
            if j not in out:
                out.add(j)
                frontier.append(j)
    return out
