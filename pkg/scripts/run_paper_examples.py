"""Replay the bundled worked examples and print a table of results.

    python3 scripts/run_paper_examples.py [--corpus DIR] [--out results.json]
"""
from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass
from pathlib import Path

from flatendo.verify import DEFAULT_CORPUS, run_manifest


@dataclass
class Config:
    corpus: Path = DEFAULT_CORPUS
    out: Path | None = None


def parse_args() -> Config:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--corpus", type=Path, default=DEFAULT_CORPUS)
    p.add_argument("--out", type=Path)
    a = p.parse_args()
    return Config(a.corpus, a.out)


def main() -> int:
    cfg = parse_args()
    results = run_manifest(cfg.corpus)
    width = max(len(r.id) for r in results)
    for r in results:
        print(f"{'ok  ' if r.passed else 'FAIL'} {r.id:<{width}}  {r.seconds * 1000:9.1f} ms  {r.locus}")
    failed = sum(not r.passed for r in results)
    print(f"\n{len(results) - failed}/{len(results)} passed, {sum(r.seconds for r in results):.1f} s total")
    if cfg.out:
        cfg.out.write_text(json.dumps([asdict(r) for r in results], indent=2, default=str))
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
