"""How the conjugacy-obstruction search scales with the coefficient bound and
the choice of finite quotient.

    python3 scripts/obstruction_sweep.py --group klein.json --map klein_alpha.json \
        --quotients "mod 2,mod 4,mod 8,center" --bounds 1,2,3,5
"""
from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from flatendo.errors import InputError
from flatendo.io import load_group, load_map
from flatendo.search import obstruction_search
from flatendo.verify import DEFAULT_CORPUS


@dataclass
class SweepConfig:
    group: Path = DEFAULT_CORPUS / "klein.json"
    map: Path = DEFAULT_CORPUS / "klein_alpha.json"
    quotients: list[str] = field(default_factory=lambda: ["mod 2", "mod 4", "mod 8", "center"])
    bounds: list[int] = field(default_factory=lambda: [1, 2, 3, 5])
    out: Path | None = None


def _resolve(p: str) -> Path:
    path = Path(p)
    return path if path.exists() else DEFAULT_CORPUS / p


def parse_args() -> SweepConfig:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--group", default="klein.json")
    p.add_argument("--map", default="klein_alpha.json")
    p.add_argument("--quotients", default="mod 2,mod 4,mod 8,center")
    p.add_argument("--bounds", default="1,2,3,5")
    p.add_argument("--out", type=Path, help="write the rows as CSV")
    a = p.parse_args()
    return SweepConfig(
        _resolve(a.group), _resolve(a.map),
        [q.strip() for q in a.quotients.split(",")],
        [int(b) for b in a.bounds.split(",")],
        a.out,
    )


def main() -> int:
    cfg = parse_args()
    G, alpha = load_group(cfg.group), load_map(cfg.map)
    rows = []
    for spec in cfg.quotients:
        for bound in cfg.bounds:
            t0 = time.perf_counter()
            try:
                r = obstruction_search(G, alpha, spec, bound)
            except InputError as exc:
                print(f"{spec:>8}  bound {bound}: skipped ({exc})")
                break
            dt = time.perf_counter() - t0
            row = {
                "quotient": spec,
                "factors": r.quotient,
                "bound": bound,
                "candidates": r.candidates_tested,
                "distinct_images": r.search_bounds["distinct_candidate_images"],
                "automorphisms": r.search_bounds["quotient_automorphisms"],
                "intertwiner": "found" if r.found else "none",
                "seconds": round(dt, 3),
            }
            rows.append(row)
            print(f"{spec:>8}  {r.quotient:<14} bound {bound}: {r.candidates_tested:6d} candidates, "
                  f"{row['distinct_images']:3d} images, {row['automorphisms']:3d} autos -> "
                  f"{row['intertwiner']} ({dt:.2f} s)")
    if cfg.out and rows:
        with open(cfg.out, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
