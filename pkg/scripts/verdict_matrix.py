"""Sampled dichotomy verdicts for the four line and lattice examples."""

import argparse
import json
from dataclasses import asdict, dataclass
from pathlib import Path

from dichotomy.gallery import summarize_verdicts
from dichotomy.quadrature import QuadratureSpec


@dataclass
class Config:
    threshold: float = 1e3
    rel_tol: float = 1e-10
    out: Path | None = None


def run(cfg: Config) -> int:
    table = summarize_verdicts(QuadratureSpec(rel_tol=cfg.rel_tol), cfg.threshold)
    print(table.to_table())
    for cell in table.cells:
        print(f"  {cell.example:4} {cell.operator:3} verdicts {''.join(cell.verdicts)}")
    print(f"elapsed {table.seconds:.1f} s")
    if cfg.out:
        payload = {"config": {k: str(v) for k, v in asdict(cfg).items()}, **table.to_json()}
        cfg.out.write_text(json.dumps(payload, indent=2) + "\n")
    return 0 if table.matches else 1


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--threshold", type=float, default=Config.threshold)
    p.add_argument("--rel-tol", type=float, default=Config.rel_tol)
    p.add_argument("--out", type=Path)
    a = p.parse_args()
    raise SystemExit(run(Config(a.threshold, a.rel_tol, a.out)))
