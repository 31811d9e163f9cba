"""Wall-clock time of solve, minmargin and factor as n grows (m = density * n, strict)."""

import argparse
import json
import time
from dataclasses import dataclass

from popbranch.factor import low_factor_arborescence
from popbranch.generators import random_instance
from popbranch.instance import augment_root
from popbranch.solver import min_margin_arborescence, popular_arborescence


@dataclass
class Config:
    sizes: tuple = (25, 50, 100, 200, 400)
    density: int = 10
    repeats: int = 3
    seed: int = 0


def timed(fn, *args):
    t = time.perf_counter()
    fn(*args)
    return time.perf_counter() - t


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=Config.repeats)
    ap.add_argument("--density", type=int, default=Config.density)
    args = ap.parse_args()
    cfg = Config(repeats=args.repeats, density=args.density)
    for n in cfg.sizes:
        m = min(n * (n - 1), cfg.density * n)
        cols = {"solve": [], "minmargin": [], "factor": []}
        for r in range(cfg.repeats):
            rooted = augment_root(random_instance(n, m, "strict", seed=cfg.seed + r))
            cols["solve"].append(timed(popular_arborescence, rooted))
            cols["minmargin"].append(timed(min_margin_arborescence, rooted))
            cols["factor"].append(timed(low_factor_arborescence, rooted))
        print(json.dumps({"n": n, "m": m, **{k: round(max(v), 4) for k, v in cols.items()}}), flush=True)


if __name__ == "__main__":
    main()
