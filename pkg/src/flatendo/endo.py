"""Self-maps of flat manifolds induced by affine maps.

An affine map alpha induces a self-map of Gamma\\R^n exactly when
alpha Gamma alpha^-1 is contained in Gamma.  The routines here decide that,
refine it (automorphism, pure-linear "Hirsch" lift), classify the linear part
spectrally, locate fixed points and go the other way: realize an abstract
endomorphism of Gamma as a conjugation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Iterable, Sequence

from .affine import AffineMap, compose, inverse
from .errors import InputError, InvariantViolation, PreconditionError, SingularMatrixError
from .group import (
    CrystGroup,
    GroupElement,
    build_group,
    holonomy_subgroup,
    member,
    orbit_equal,
    words_up_to,
)
from .linalg import LinearSolution, Matrix, Vector, frac, solve_exact, vec, vneg, vsub, char_poly
from .poly import Poly, expands, unit_circle_root_count

DEFAULT_GRID_DENOMINATORS = ("0", "1/2", "1/3", "2/3", "1/4", "3/4", "1/6", "5/6")


def _require_invertible(M: Matrix, what: str = "linear part") -> None:
    if M.det() == 0:
        raise SingularMatrixError(f"{what} is singular")


def _checked_generators(G: CrystGroup) -> list[tuple[str, AffineMap]]:
    """Stored generators followed by the lattice basis translations; together
    they generate Gamma."""
    gens = list(zip(G.generator_names, G.generators))
    gens += [(f"t{i + 1}", t) for i, t in enumerate(G.lattice_basis_maps())]
    return gens


def normalizes_holonomy(G: CrystGroup, M: Matrix) -> bool:
    Mi = M.inverse()
    return {M @ h.linear @ Mi for h in G.holonomy} == {h.linear for h in G.holonomy}


@dataclass(frozen=True)
class EndoStatus:
    induces: bool
    is_automorphism: bool
    is_hirsch: bool
    conjugated_generators: tuple  # GroupElement or None, one per stored generator
    generator_names: tuple = ()

    def __post_init__(self):
        if (self.is_automorphism or self.is_hirsch) and not self.induces:
            raise InvariantViolation("automorphism/Hirsch status without an induced map")


def conjugation_endo(G: CrystGroup, alpha: AffineMap) -> EndoStatus:
    if alpha.dim != G.dim:
        raise InputError(f"map of dimension {alpha.dim} for a group of dimension {G.dim}")
    _require_invertible(alpha.linear)
    ainv = inverse(alpha)
    images = tuple(member(G, compose(compose(alpha, g), ainv)) for g in G.generators)
    lattice_ok = all(member(G, compose(compose(alpha, t), ainv)) is not None for t in G.lattice_basis_maps())
    induces = lattice_ok and all(e is not None for e in images)
    is_aut = induces and all(
        member(G, compose(compose(ainv, g), alpha)) is not None for _, g in _checked_generators(G)
    )
    is_hirsch = induces and alpha.is_linear() and normalizes_holonomy(G, alpha.linear)
    return EndoStatus(induces, is_aut, is_hirsch, images, tuple(G.generator_names))


@dataclass(frozen=True)
class HirschCheck:
    holds: bool
    conjugation_ok: bool
    normalizes_holonomy: bool
    failing_generators: tuple = ()

    def __bool__(self) -> bool:
        return self.holds

    @property
    def detail(self) -> str:
        if self.holds:
            return "phi Gamma phi^-1 is in Gamma and phi F phi^-1 = F"
        parts = []
        if not self.conjugation_ok:
            parts.append("conjugates leave Gamma: " + ", ".join(self.failing_generators))
        if not self.normalizes_holonomy:
            parts.append("phi does not normalize the holonomy group")
        return "; ".join(parts)


def hirsch_check(G: CrystGroup, phi: Matrix) -> HirschCheck:
    """Does the linear map phi induce an infra-nilmanifold endomorphism?"""
    if isinstance(phi, AffineMap):
        phi = phi.linear
    _require_invertible(phi, "phi")
    f = AffineMap.linear_map(phi)
    finv = inverse(f)
    failing = tuple(
        name for name, g in _checked_generators(G) if member(G, compose(compose(f, g), finv)) is None
    )
    norm = normalizes_holonomy(G, phi)
    return HirschCheck(not failing and norm, not failing, norm, failing)


def _grid_key(p: Vector):
    # small common denominator first, then points off the coordinate planes
    return (lcm(*(x.denominator for x in p)), -sum(1 for x in p if x), p)


def default_grid(dim: int, denominators: Sequence = DEFAULT_GRID_DENOMINATORS) -> list[Vector]:
    """All points with coordinates from ``denominators``, in search order."""
    coords = sorted({frac(x) for x in denominators})
    return sorted((tuple(p) for p in product(coords, repeat=dim)), key=_grid_key)


@dataclass(frozen=True)
class Witness:
    point: Vector
    element_word: str
    element: AffineMap
    moved_point: Vector  # gamma . n
    image: Vector  # phi(n)
    image_of_moved: Vector  # phi(gamma . n)


def well_defined_witness(
    G: CrystGroup,
    phi: AffineMap,
    samples: Iterable[Sequence] | None = None,
    depth: int = 2,
) -> Witness | None:
    """Search for n, gamma with phi(gamma . n) outside the orbit Gamma . phi(n).

    Sample points are tried in order (the default grid is sorted by common
    denominator, then by how many coordinates are nonzero); for each point the
    group elements are words of length <= ``depth`` in the stored generators
    and their inverses, shortest first.  A returned witness has been
    confirmed by :func:`orbit_equal`.
    """
    if phi.dim != G.dim:
        raise InputError("map dimension does not match the group")
    pts = default_grid(G.dim) if samples is None else [vec(p) for p in samples]
    for p in pts:
        if len(p) != G.dim:
            raise InputError(f"sample point {p} has the wrong dimension")
    words = list(words_up_to(G, depth))
    for p in pts:
        fp = phi(p)
        for word, gamma in words:
            moved = gamma(p)
            fmoved = phi(moved)
            if orbit_equal(G, fmoved, fp) is None:
                return Witness(p, word, gamma, moved, fp, fmoved)
    return None


@dataclass(frozen=True)
class SpectralClass:
    has_eigenvalue_one: bool
    unit_circle_count: int
    expanding: bool
    hyperbolic: bool
    char_poly: Poly

    def __post_init__(self):
        if self.expanding and not self.hyperbolic:
            raise InvariantViolation("expanding but not hyperbolic")
        if self.hyperbolic != (self.unit_circle_count == 0):
            raise InvariantViolation("hyperbolic flag disagrees with unit-circle count")
        if self.has_eigenvalue_one and self.hyperbolic:
            raise InvariantViolation("eigenvalue 1 on a hyperbolic map")


def classify_spectrum(alpha) -> SpectralClass:
    """Spectral type of the linear part; the translation plays no role."""
    M = alpha.linear if isinstance(alpha, AffineMap) else alpha
    _require_invertible(M)
    p = char_poly(M)
    one = p(1) == 0
    k = unit_circle_root_count(p)
    return SpectralClass(one, k, expands(p) and k == 0, k == 0, p)


@dataclass(frozen=True)
class FixedPoint:
    point: Vector | None  # the unique fixed point when 1 is not an eigenvalue
    eigenvalue_one: bool
    solutions: LinearSolution | None = None  # affine solution set when 1 is an eigenvalue


def fixed_point(alpha: AffineMap) -> FixedPoint:
    n = alpha.dim
    A = Matrix.identity(n) - alpha.linear
    sol = solve_exact(A, alpha.translation)
    if char_poly(alpha.linear)(1) != 0:
        if sol is None or sol.kernel:
            raise InvariantViolation("1 - delta is invertible but the fixed-point system is not uniquely solvable")
        if alpha(sol.particular) != sol.particular:
            raise InvariantViolation("computed fixed point is not fixed")
        return FixedPoint(sol.particular, False, sol)
    return FixedPoint(None, True, sol)


def linearize_at_fixed_point(G: CrystGroup, alpha: AffineMap) -> tuple[CrystGroup, Matrix]:
    """Move the fixed point x0 of alpha to the origin.

    Returns Gamma' = t(-x0) Gamma t(x0) and the linear part delta of alpha;
    delta Gamma' delta^-1 is contained in Gamma', so delta induces a Hirsch
    endomorphism of Gamma'\\R^n conjugate to the map induced by alpha.
    """
    if not conjugation_endo(G, alpha).induces:
        raise PreconditionError("alpha does not induce an endomorphism")
    fp = fixed_point(alpha)
    if fp.point is None:
        raise PreconditionError("alpha has eigenvalue 1, so no unique fixed point")
    x0 = fp.point
    shift = AffineMap.translation_by(vneg(x0))
    back = AffineMap.translation_by(x0)
    gens = [compose(compose(shift, g), back) for g in G.generators]
    G2 = build_group(gens, lattice=G.lattice, names=G.generator_names)
    delta = alpha.linear
    d = AffineMap.linear_map(delta)
    dinv = inverse(d)
    for name, g in _checked_generators(G2):
        if member(G2, compose(compose(d, g), dinv)) is None:
            raise InvariantViolation(f"delta conjugate of {name} left the shifted group")
    return G2, delta


def _independent_translations(G: CrystGroup, limit: int = 50000) -> list[tuple[str, AffineMap]]:
    """Words in the stored generators evaluating to n independent translations."""
    found: list[tuple[str, AffineMap]] = []
    span = Matrix.zeros(0, G.dim)
    for k, (word, g) in enumerate(words_up_to(G, depth=64)):
        if k > limit:
            break
        if g.is_translation():
            cand = span.stack(Matrix([g.translation]))
            if cand.rank() > span.rank():
                span = cand
                found.append((word, g))
                if len(found) == G.dim:
                    return found
    raise PreconditionError("stored generators do not reach a full-rank set of translations")


def _evaluate_word(word: str, images: dict[str, AffineMap], dim: int) -> AffineMap:
    out = AffineMap.identity(dim)
    for tok in word.split():
        name, inv = (tok[:-3], True) if tok.endswith("^-1") else (tok, False)
        g = images[name]
        out = compose(out, inverse(g) if inv else g)
    return out


def realize_endo(G: CrystGroup, images: Sequence) -> AffineMap | None:
    """An affine alpha with alpha g alpha^-1 = psi(g) for every stored generator.

    ``images`` lists psi(g) per stored generator, as GroupElements or affine
    maps.  Returns None when the data is not realizable (psi is not a
    homomorphism); raises when the lattice images are not translations or the
    holonomy does not transform compatibly.
    """
    if len(images) != len(G.generators):
        raise InputError(f"{len(images)} images for {len(G.generators)} generators")
    imgs = [G.to_affine(e) if isinstance(e, GroupElement) else e for e in images]
    for name, im in zip(G.generator_names, imgs):
        if member(G, im) is None:
            raise InputError(f"image of {name} is not an element of Gamma")
    table = dict(zip(G.generator_names, imgs))

    # linear part from the action on a full-rank set of translations
    src, dst = [], []
    for word, t in _independent_translations(G):
        im = _evaluate_word(word, table, G.dim)
        if not im.is_translation():
            raise InputError(f"image of the translation {word!r} is not a translation")
        src.append(t.translation)
        dst.append(im.translation)
    S = Matrix.from_columns(src)
    delta = Matrix.from_columns(dst) @ S.inverse()
    if delta.det() == 0:
        return None
    dinv = delta.inverse()

    rows: list[Vector] = []
    rhs: list[Fraction] = []
    n = G.dim
    for name, g, im in zip(G.generator_names, G.generators, imgs):
        if delta @ g.linear @ dinv != im.linear:
            raise InputError(f"holonomy of psi({name}) is not delta mu delta^-1")
        A = Matrix.identity(n) - im.linear
        rows += [A.row(i) for i in range(n)]
        rhs += list(vsub(im.translation, delta @ g.translation))
    sol = solve_exact(Matrix(rows, cols=n), rhs)
    if sol is None:
        return None
    alpha = AffineMap(sol.particular, delta)
    for g, im in zip(G.generators, imgs):
        if compose(compose(alpha, g), inverse(alpha)) != im:
            return None
    return alpha


def holonomy_image_check(G: CrystGroup, alpha: AffineMap) -> bool:
    """Do the holonomies of the conjugated generators generate all of F?"""
    status = conjugation_endo(G, alpha)
    if not status.induces:
        raise PreconditionError("alpha does not induce an endomorphism")
    idx = [e.holonomy_index for e in status.conjugated_generators]
    return len(holonomy_subgroup(G, idx)) == G.order


def fixed_subgroup_lattice(G: CrystGroup, alpha: AffineMap) -> list[tuple[int, ...]]:
    """Lattice vectors z with delta z = z (the abelian case of the fixed subgroup
    that exists whenever 1 is an eigenvalue)."""
    from .snf import integer_kernel

    M = G.lattice_inv @ alpha.linear @ G.lattice
    if not M.is_integral():
        raise PreconditionError("linear part does not preserve the lattice")
    return integer_kernel(M - Matrix.identity(G.dim))
