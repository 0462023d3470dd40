"""Census of spectral types among random integer matrices.

Draws invertible integer matrices with small entries and tallies how many
are hyperbolic, expanding, or have 1 as an eigenvalue.  Exact throughout.

    python3 scripts/spectral_census.py --dim 3 --samples 2000 --entry 3
"""
from __future__ import annotations

import argparse
import random
from collections import Counter
from dataclasses import dataclass

from flatendo.endo import classify_spectrum
from flatendo.linalg import Matrix


@dataclass
class CensusConfig:
    dim: int = 2
    samples: int = 1000
    entry: int = 3
    seed: int = 0
    unimodular_only: bool = False


def parse_args() -> CensusConfig:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--entry", type=int, default=3, help="entries drawn from [-entry, entry]")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--unimodular-only", action="store_true", help="keep only det = +-1 (toral automorphisms)")
    a = p.parse_args()
    return CensusConfig(a.dim, a.samples, a.entry, a.seed, a.unimodular_only)


def main() -> None:
    cfg = parse_args()
    rng = random.Random(cfg.seed)
    tally: Counter = Counter()
    drawn = 0
    while drawn < cfg.samples:
        M = Matrix([[rng.randint(-cfg.entry, cfg.entry) for _ in range(cfg.dim)] for _ in range(cfg.dim)])
        det = M.det()
        if det == 0 or (cfg.unimodular_only and abs(det) != 1):
            continue
        drawn += 1
        s = classify_spectrum(M)
        tally["hyperbolic"] += s.hyperbolic
        tally["expanding"] += s.expanding
        tally["eigenvalue one"] += s.has_eigenvalue_one
        tally["unit-circle roots"] += s.unit_circle_count > 0
    print(f"{cfg.samples} invertible {cfg.dim}x{cfg.dim} matrices, entries in [-{cfg.entry}, {cfg.entry}]"
          + (", det = +-1" if cfg.unimodular_only else ""))
    for key in ("hyperbolic", "expanding", "eigenvalue one", "unit-circle roots"):
        print(f"  {key:<18} {tally[key]:6d}  ({100 * tally[key] / cfg.samples:5.1f}%)")


if __name__ == "__main__":
    main()
