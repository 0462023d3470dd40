"""Replay the worked examples stored in a corpus manifest.

``manifest.json`` lists checks; each names a kind, its inputs (file names
relative to the corpus directory, words, points) and the expected values,
plus a free-text ``locus`` saying where the claim comes from.  Every check
yields a :class:`CheckResult`; nothing is skipped silently.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .affine import AffineMap, compose, inverse
from .endo import (
    classify_spectrum,
    conjugation_endo,
    fixed_point,
    hirsch_check,
    holonomy_image_check,
    linearize_at_fixed_point,
    realize_endo,
    well_defined_witness,
)
from .errors import FlatendoError, InputError
from .group import CrystGroup, center_lattice, member, orbit_equal, torsion_witness
from .io import format_matrix, format_vector, load_group, load_json, load_map, parse_matrix, to_jsonable
from .linalg import Matrix, vec
from .poly import Poly
from .quotient import abelianization, induced_on_quotient, quotient
from .search import enumerate_candidates, obstruction_search

DEFAULT_CORPUS = Path(__file__).parent / "corpus"


@dataclass(frozen=True)
class CheckResult:
    id: str
    kind: str
    locus: str
    passed: bool
    expected: object = None
    got: object = None
    detail: str = ""
    seconds: float = 0.0


class _Ctx:
    def __init__(self, root: Path):
        self.root = Path(root)
        self._groups: dict = {}

    def group(self, name: str) -> CrystGroup:
        if name not in self._groups:
            self._groups[name] = load_group(self.root / name)
        return self._groups[name]

    def map(self, name: str) -> AffineMap:
        return load_map(self.root / name)


def _mat(x) -> Matrix:
    return parse_matrix(x)


def _same_element(G, f: AffineMap, word: str) -> bool:
    return member(G, f) == member(G, G.word(word))


def _check_auslander(ctx, c):
    A, B = _mat(c["A"]), _mat(c["B"])
    Bp = A @ B @ A.inverse()
    orth = Bp.T @ Bp == Matrix.identity(Bp.rows)
    got = {"conjugate": format_matrix(Bp), "orthogonal": orth}
    exp = {"conjugate": c["expected"]["conjugate"], "orthogonal": c["expected"]["orthogonal"]}
    return got == exp, exp, got


def _check_word(ctx, c):
    G = ctx.group(c["group"])
    f = G.word(c["word"])
    got = {"translation": format_vector(f.translation), "linear": format_matrix(f.linear)}
    exp = c["expected"]
    return got == exp, exp, got


def _check_apply(ctx, c):
    G = ctx.group(c["group"])
    got = format_vector(G.word(c["word"])(vec(c["point"])))
    return got == c["expected"], c["expected"], got


def _check_holonomy_order(ctx, c):
    got = ctx.group(c["group"]).order
    return got == c["expected"], c["expected"], got


def _check_holonomy_project(ctx, c):
    G = ctx.group(c["group"])
    e = member(G, G.word(c["word"]))
    got = format_matrix(G.holonomy[e.holonomy_index].linear)
    return got == c["expected"], c["expected"], got


def _check_torsion(ctx, c):
    w = torsion_witness(ctx.group(c["group"]))
    got = "torsion-free" if w is None else "torsion"
    return got == c["expected"], c["expected"], got


def _check_center(ctx, c):
    got = [list(z) for z in center_lattice(ctx.group(c["group"]))]
    return got == c["expected"], c["expected"], got


def _check_conjugation(ctx, c):
    """alpha g alpha^-1 equals the listed word for each generator."""
    G = ctx.group(c["group"])
    alpha = ctx.map(c["map"])
    ainv = inverse(alpha)
    got, ok = {}, True
    for name, word in c["expected"].items():
        img = compose(compose(alpha, G.generator(name)), ainv)
        same = _same_element(G, img, word)
        ok &= same
        got[name] = word if same else to_jsonable(img)
    for name, t in c.get("expected_translations", {}).items():
        img = compose(compose(alpha, G.generator(name)), ainv)
        tr = format_vector(img.translation)
        ok &= tr == t
        got[f"{name}:translation"] = tr
    return ok, {**c["expected"], **{f"{k}:translation": v for k, v in c.get("expected_translations", {}).items()}}, got


def _check_endo_status(ctx, c):
    st = conjugation_endo(ctx.group(c["group"]), ctx.map(c["map"]))
    got = {k: getattr(st, k) for k in c["expected"]}
    return got == c["expected"], c["expected"], got


def _check_hirsch(ctx, c):
    got = bool(hirsch_check(ctx.group(c["group"]), _mat(c["linear"])))
    return got == c["expected"], c["expected"], got


def _check_orbit(ctx, c):
    G = ctx.group(c["group"])
    got = orbit_equal(G, vec(c["x"]), vec(c["y"])) is not None
    return got == c["expected"], c["expected"], got


def _check_witness(ctx, c):
    """The stated (n, gamma) breaks well-definedness, the default search finds
    exactly it, and the listed orbit representatives are reproduced."""
    G = ctx.group(c["group"])
    phi = ctx.map(c["map"])
    n = vec(c["point"])
    gamma = G.word(c["word"])
    img, img_moved = phi(n), phi(gamma(n))
    got = {
        "image": format_vector(img),
        "image_of_moved": format_vector(img_moved),
        "orbits_differ": orbit_equal(G, img_moved, img) is None,
    }
    w = well_defined_witness(G, phi)
    got["search"] = None if w is None else {"point": format_vector(w.point), "word": w.element_word}
    got["candidate_forms"] = {word: format_vector(G.word(word)(img)) for word in c["candidate_forms"]}
    exp = {
        "image": c["expected"]["image"],
        "image_of_moved": c["expected"]["image_of_moved"],
        "orbits_differ": True,
        "search": {"point": c["point"], "word": c["word"]},
        "candidate_forms": c["candidate_forms"],
    }
    return got == exp, exp, got


def _check_spectrum(ctx, c):
    sc = classify_spectrum(ctx.map(c["map"]))
    exp = dict(c["expected"])
    factor = exp.pop("char_poly_factor", None)
    got = {k: getattr(sc, k) for k in exp}
    ok = got == exp
    if factor is not None:
        f = Poly([int(x) if isinstance(x, int) else x for x in factor])
        divides = (sc.char_poly % f).degree < 0
        got["char_poly_factor"] = str(f) if divides else f"char poly {sc.char_poly} not divisible by {f}"
        exp["char_poly_factor"] = str(f)
        ok &= divides
    return ok, exp, got


def _check_fixed_point(ctx, c):
    fp = fixed_point(ctx.map(c["map"]))
    got = None if fp.point is None else format_vector(fp.point)
    return got == c["expected"], c["expected"], got


def _check_linearize(ctx, c):
    G = ctx.group(c["group"])
    G2, delta = linearize_at_fixed_point(G, ctx.map(c["map"]))
    got = {"delta": format_matrix(delta), "hirsch": bool(hirsch_check(G2, delta))}
    return got == c["expected"], c["expected"], got


def _check_realize(ctx, c):
    G = ctx.group(c["group"])
    imgs = [G.word(w) for w in c["images"]]
    alpha = realize_endo(G, imgs)
    if alpha is None:
        return c["expected"] is None, c["expected"], None
    back = all(
        member(G, compose(compose(alpha, g), inverse(alpha))) == member(G, im)
        for g, im in zip(G.generators, imgs)
    )
    got = {"translation": format_vector(alpha.translation), "linear": format_matrix(alpha.linear), "round_trip": back}
    exp = {**c["expected"], "round_trip": True}
    return got == exp, exp, got


def _check_holonomy_image(ctx, c):
    got = holonomy_image_check(ctx.group(c["group"]), ctx.map(c["map"]))
    return got == c["expected"], c["expected"], got


def _check_abelianization(ctx, c):
    G = ctx.group(c["group"])
    Q = abelianization(G)
    exp = c["expected"]
    got = {"factors": list(Q.invariant_factors)}
    if "element_orders" in exp:
        got["element_orders"] = {w: Q.element_order(Q.element(G, w)) for w in exp["element_orders"]}
    return got == exp, exp, got


def _check_quotient(ctx, c):
    got = list(quotient(ctx.group(c["group"]), c["quotient"]).invariant_factors)
    return got == c["expected"], c["expected"], got


def _check_induced(ctx, c):
    G = ctx.group(c["group"])
    M = induced_on_quotient(G, ctx.map(c["map"]), c["quotient"])
    basis = [M.quotient.element(G, w) for w in c["basis"]]
    got = [[int(x) for x in row] for row in M.in_basis(basis).to_int_rows()]
    return got == c["expected"], c["expected"], got


def _check_candidates(ctx, c):
    G = ctx.group(c["group"])
    cands = enumerate_candidates(G, c["bound"])
    exp = c["expected"]
    got = {}
    if "diagonal_set" in exp:
        diag = all(M[i, j] == 0 for M in cands for i in range(G.dim) for j in range(G.dim) if i != j)
        got["diagonal_set"] = sorted([int(M[i, i]) for i in range(G.dim)] for M in cands) if diag else "off-diagonal entries"
    if "block_sizes" in exp:
        sizes = exp["block_sizes"]
        got["block_sizes"] = sizes if all(_is_block_diagonal(M, sizes) for M in cands) else "not block diagonal"
    if "contains_identity" in exp:
        got["contains_identity"] = Matrix.identity(G.dim) in cands
    if "min_count" in exp:
        got["min_count"] = exp["min_count"] if len(cands) >= exp["min_count"] else len(cands)
    return got == exp, exp, got


def _is_block_diagonal(M: Matrix, sizes) -> bool:
    block = []
    for b, s in enumerate(sizes):
        block += [b] * s
    return all(M[i, j] == 0 for i in range(M.rows) for j in range(M.cols) if block[i] != block[j])


def _check_obstruction(ctx, c):
    r = obstruction_search(ctx.group(c["group"]), ctx.map(c["map"]), c["quotient"], c["bound"])
    got = "none" if r.intertwiner_found is None else "found"
    return got == c["expected"], c["expected"], got


CHECKS: dict[str, Callable] = {
    "auslander": _check_auslander,
    "word": _check_word,
    "apply": _check_apply,
    "holonomy_order": _check_holonomy_order,
    "holonomy_project": _check_holonomy_project,
    "torsion": _check_torsion,
    "center": _check_center,
    "conjugation": _check_conjugation,
    "endo_status": _check_endo_status,
    "hirsch": _check_hirsch,
    "orbit": _check_orbit,
    "witness": _check_witness,
    "spectrum": _check_spectrum,
    "fixed_point": _check_fixed_point,
    "linearize": _check_linearize,
    "realize": _check_realize,
    "holonomy_image": _check_holonomy_image,
    "abelianization": _check_abelianization,
    "quotient": _check_quotient,
    "induced": _check_induced,
    "candidates": _check_candidates,
    "obstruction": _check_obstruction,
}


def run_check(ctx: _Ctx, c: dict) -> CheckResult:
    cid, kind, locus = c.get("id", "?"), c.get("kind", "?"), c.get("locus", "")
    fn = CHECKS.get(kind)
    if fn is None:
        return CheckResult(cid, kind, locus, False, detail=f"unknown check kind {kind!r}")
    t0 = time.perf_counter()
    try:
        ok, exp, got = fn(ctx, c)
        detail = ""
    except (FlatendoError, KeyError, TypeError, ValueError) as exc:
        ok, exp, got, detail = False, c.get("expected"), None, f"{type(exc).__name__}: {exc}"
    return CheckResult(cid, kind, locus, bool(ok), to_jsonable(exp), to_jsonable(got), detail, time.perf_counter() - t0)


def run_manifest(corpus=None, only=None) -> list[CheckResult]:
    root = Path(corpus) if corpus is not None else DEFAULT_CORPUS
    manifest = load_json(root / "manifest.json")
    checks = manifest.get("checks") if isinstance(manifest, dict) else None
    if not isinstance(checks, list):
        raise InputError(f"{root / 'manifest.json'} has no 'checks' list")
    ctx = _Ctx(root)
    return [run_check(ctx, c) for c in checks if only is None or c.get("id") in only]
