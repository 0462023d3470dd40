"""Command-line front end.

Exit codes: 0 the command ran and answered, 1 paper-verify found a failing
check, 2 bad input, 3 an internal invariant was violated.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import endo, group, io, quotient, search, verify
from .errors import InputError, InvariantViolation
from .group import DEFAULT_HOLONOMY_CAP

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3


def _emit(args, payload, text: str) -> None:
    if args.json:
        print(io.dumps(payload))
    else:
        print(text)


def _load_group(args, path=None):
    return io.load_group(path or args.group, holonomy_cap=args.holonomy_cap)


def _bool(b: bool) -> str:
    return "yes" if b else "no"


def _matrix_text(M, indent: str = "  ") -> str:
    rows = io.format_matrix(M)
    width = max((len(x) for r in rows for x in r), default=1)
    return "\n".join(indent + "[" + " ".join(x.rjust(width) for x in r) + "]" for r in rows)


def _vec_text(v) -> str:
    return "(" + ", ".join(io.format_vector(v)) + ")"


def cmd_validate(args) -> int:
    G = _load_group(args)
    w = group.torsion_witness(G)
    payload = {
        "dimension": G.dim,
        "holonomy_order": G.order,
        "torsion_free": w is None,
        "torsion_witness": None if w is None else G.to_affine(w),
        "cocycle_check": "passed",
        "group": G,
    }
    lines = [f"dimension {G.dim}, |F| = {G.order}, cocycle check passed"]
    if w is None:
        lines.append("torsion-free")
    else:
        f = G.to_affine(w)
        lines.append(f"torsion element: translation {_vec_text(f.translation)}, linear part")
        lines.append(_matrix_text(f.linear))
    lines.append("holonomy (representatives reduced into the unit box):")
    for i, h in enumerate(G.holonomy):
        lines.append(f" r{i}: translation {_vec_text(h.rep_translation)}")
        lines.append(_matrix_text(h.linear, "   "))
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_check_endo(args) -> int:
    G = _load_group(args)
    alpha = io.load_map(args.map)
    st = endo.conjugation_endo(G, alpha)
    himg = endo.holonomy_image_check(G, alpha) if st.induces else None
    payload = {"status": st, "holonomy_image_full": himg}
    lines = [
        f"induces endomorphism: {_bool(st.induces)}",
        f"automorphism: {_bool(st.is_automorphism)}",
        f"Hirsch (linear, normalizes F): {_bool(st.is_hirsch)}",
    ]
    for name, e in zip(G.generator_names, st.conjugated_generators):
        lines.append(f"  alpha {name} alpha^-1 = " + ("not in Gamma" if e is None else G.describe(e)))
    if himg is not None:
        lines.append(f"holonomy image is all of F: {_bool(himg)}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_classify(args) -> int:
    sc = endo.classify_spectrum(io.load_map(args.map))
    text = "\n".join([
        f"characteristic polynomial: {sc.char_poly}",
        f"eigenvalue 1: {_bool(sc.has_eigenvalue_one)}",
        f"eigenvalues on the unit circle: {sc.unit_circle_count}",
        f"hyperbolic: {_bool(sc.hyperbolic)}",
        f"expanding: {_bool(sc.expanding)}",
    ])
    _emit(args, sc, text)
    return EXIT_OK


def cmd_fixed_point(args) -> int:
    fp = endo.fixed_point(io.load_map(args.map))
    if fp.point is not None:
        text = f"unique fixed point {_vec_text(fp.point)}"
    elif fp.solutions is None:
        text = "eigenvalue 1 present; no fixed point"
    else:
        text = (f"eigenvalue 1 present; fixed points {_vec_text(fp.solutions.particular)}"
                f" + span of {len(fp.solutions.kernel)} direction(s)")
    _emit(args, fp, text)
    return EXIT_OK


def cmd_orbit_eq(args) -> int:
    G = _load_group(args)
    x, y = io.parse_point(args.x), io.parse_point(args.y)
    w = group.orbit_equal(G, x, y)
    payload = {"same_orbit": w is not None, "witness": w}
    text = "different orbits" if w is None else f"same orbit: x = gamma . y with gamma = {G.describe(w)}"
    _emit(args, payload, text)
    return EXIT_OK


def _quotient_text(G, Q) -> str:
    lines = [str(Q)]
    for label, img in zip(Q.generator_labels, Q.generator_images):
        lines.append(f"  {label} -> {list(img)}")
    return "\n".join(lines)


def cmd_abelianize(args) -> int:
    G = _load_group(args)
    Q = quotient.abelianization(G)
    _emit(args, Q, _quotient_text(G, Q))
    return EXIT_OK


def cmd_quotient(args) -> int:
    G = _load_group(args)
    Q = quotient.finite_quotient(G, args.quotient)
    _emit(args, Q, _quotient_text(G, Q))
    return EXIT_OK


def cmd_induced(args) -> int:
    G = _load_group(args)
    M = quotient.induced_on_quotient(G, io.load_map(args.map), args.quotient)
    payload = {"quotient": M.quotient, "matrix": M.matrix}
    lines = [f"quotient {M.quotient}", "matrix on canonical coordinates:", _matrix_text(M.matrix)]
    if args.basis:
        words = [w.strip() for w in args.basis.split(",")]
        B = M.in_basis([M.quotient.element(G, w) for w in words])
        payload["basis"] = words
        payload["matrix_in_basis"] = B
        lines += [f"matrix in basis {', '.join(words)}:", _matrix_text(B)]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_realize(args) -> int:
    G = _load_group(args)
    imgs = io.load_images(args.images, G)
    alpha = endo.realize_endo(G, imgs)
    if alpha is None:
        _emit(args, {"realizable": False}, "not realizable (the images do not define a homomorphism)")
        return EXIT_OK
    text = f"alpha: translation {_vec_text(alpha.translation)}, linear part\n{_matrix_text(alpha.linear)}"
    _emit(args, {"realizable": True, "alpha": alpha}, text)
    return EXIT_OK


def cmd_linearize(args) -> int:
    G = _load_group(args)
    alpha = io.load_map(args.map)
    G2, delta = endo.linearize_at_fixed_point(G, alpha)
    x0 = endo.fixed_point(alpha).point
    ok = bool(endo.hirsch_check(G2, delta))
    payload = {"fixed_point": x0, "delta": delta, "hirsch": ok, "group": G2}
    lines = [f"fixed point {_vec_text(x0)}", "delta:", _matrix_text(delta), f"Hirsch check on the shifted group: {_bool(ok)}",
             "shifted generators:"]
    for name, g in zip(G2.generator_names, G2.generators):
        lines.append(f"  {name}: translation {_vec_text(g.translation)}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_obstruct(args) -> int:
    G = _load_group(args)
    r = search.obstruction_search(G, io.load_map(args.map), args.quotient, args.bound)
    lines = [f"quotient {r.quotient} ({r.search_bounds['quotient']})",
             "alpha on the quotient:", _matrix_text(r.alpha_on_quotient),
             f"candidates tested: {r.candidates_tested} "
             f"({r.search_bounds['distinct_candidate_images']} distinct images on the quotient)",
             f"quotient automorphisms preserving the lattice image: {r.search_bounds['quotient_automorphisms']}"]
    if r.intertwiner_found is None:
        lines.append(f"no intertwiner found within coefficient bound {args.bound}")
    else:
        phi, h = r.intertwiner_found
        lines += ["intertwiner found: phi =", _matrix_text(phi), "h =", _matrix_text(h)]
    _emit(args, r, "\n".join(lines))
    return EXIT_OK


def cmd_check_witness(args) -> int:
    G = _load_group(args)
    phi = io.load_map(args.map)
    samples = None
    if args.grid_denominators:
        samples = endo.default_grid(G.dim, [x.strip() for x in args.grid_denominators.split(",")])
    w = endo.well_defined_witness(G, phi, samples, args.depth)
    if w is None:
        _emit(args, {"witness": None}, "no witness found")
        return EXIT_OK
    text = "\n".join([
        f"n = {_vec_text(w.point)}, gamma = {w.element_word}",
        f"phi(n) = {_vec_text(w.image)}",
        f"phi(gamma . n) = {_vec_text(w.image_of_moved)} is not in Gamma . phi(n)",
    ])
    _emit(args, {"witness": w}, text)
    return EXIT_OK


def cmd_paper_verify(args) -> int:
    results = verify.run_manifest(args.corpus)
    failed = [r for r in results if not r.passed]
    if args.json:
        # timings are left out so that reports stay byte-identical between runs
        checks = [{k: v for k, v in io.to_jsonable(r).items() if k != "seconds"} for r in results]
        print(io.dumps({"passed": len(results) - len(failed), "failed": len(failed), "checks": checks}))
    else:
        for r in results:
            print(f"{'PASS' if r.passed else 'FAIL'}  {r.id:28s} {r.locus}")
            if not r.passed:
                print(f"      expected: {json.dumps(r.expected)}")
                print(f"      got:      {json.dumps(r.got)}")
                if r.detail:
                    print(f"      {r.detail}")
        print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="flatendo", description="Exact computations with affine maps of flat manifolds.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--holonomy-cap", type=int, default=DEFAULT_HOLONOMY_CAP, help="closure bound on |F|")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, *positionals):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        for pos in positionals:
            sp.add_argument(pos)
        sp.set_defaults(func=fn)
        return sp

    add("validate", cmd_validate, "build a group, check torsion-freeness", "group")
    add("check-endo", cmd_check_endo, "does alpha induce an endomorphism?", "group", "map")
    add("classify", cmd_classify, "spectral type of the linear part", "map")
    add("fixed-point", cmd_fixed_point, "fixed point of an affine map", "map")
    add("orbit-eq", cmd_orbit_eq, "are x and y in the same orbit?", "group", "x", "y")
    add("abelianize", cmd_abelianize, "Gamma/[Gamma, Gamma]", "group")
    q = add("quotient", cmd_quotient, "finite abelian quotient", "group")
    q.add_argument("--quotient", default="center", help="mod:k or center")
    ind = add("induced", cmd_induced, "map induced on an abelian quotient", "group", "map")
    ind.add_argument("--quotient", default="ab", help="ab, mod:k or center")
    ind.add_argument("--basis", help="comma separated words giving the basis, e.g. 'a,b,f'")
    add("realize", cmd_realize, "realize generator images as a conjugation", "group", "images")
    add("linearize", cmd_linearize, "move the fixed point to the origin", "group", "map")
    ob = add("obstruct", cmd_obstruct, "bounded search for a conjugacy to a linear model", "group", "map")
    ob.add_argument("--quotient", default="mod:4", help="mod:k or center")
    ob.add_argument("--bound", type=int, default=2, help="candidate coefficient bound")
    w = add("witness", cmd_check_witness, "search points where a point map is not well defined", "group", "map")
    w.add_argument("--grid-denominators", help="comma separated coordinate values, e.g. '0,1/2,1/3'")
    w.add_argument("--depth", type=int, default=2, help="word length bound")
    pv = add("paper-verify", cmd_paper_verify, "replay every worked example in the corpus")
    pv.add_argument("--corpus", help="corpus directory (defaults to the bundled one)")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
