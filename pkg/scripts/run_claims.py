"""Evaluate every example claim and print one line per claim instance."""

import argparse
import json
from dataclasses import dataclass, field
from pathlib import Path

from dichotomy.gallery import load_preset, run_claims


@dataclass
class Config:
    examples: list = field(default_factory=lambda: ["EX1", "EX2", "EX3", "EX4", "EX5"])
    depth: int = 8
    out: Path | None = None


def run(cfg: Config) -> int:
    rows = []
    for ex in cfg.examples:
        for rep in run_claims(load_preset(ex, cfg.depth)):
            rows.append(rep.to_json())
            mark = "pass" if rep.passed else "FAIL"
            shown = rep.error or f"{rep.computed!r} {rep.relation} {rep.bound!r}"
            print(f"{mark} {rep.claim:28} {json.dumps(rep.params):18} {shown}")
    failed = sum(not r["pass"] for r in rows)
    print(f"{len(rows) - failed}/{len(rows)} claim instances hold")
    if cfg.out:
        cfg.out.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
    return 1 if failed else 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("examples", nargs="*", default=Config().examples)
    p.add_argument("--depth", type=int, default=Config.depth)
    p.add_argument("--out", type=Path, help="write JSON lines here")
    a = p.parse_args()
    raise SystemExit(run(Config([e.upper() for e in a.examples], a.depth, a.out)))
