"""Rounds used by the low-factor algorithm against floor(log2 n).

Runs the tight family G_k and random strict instances; for small n the
exact unpopularity factor of the output is reported too.
"""

import argparse
import json
import math
from dataclasses import dataclass

from popbranch.factor import low_factor_arborescence
from popbranch.generators import random_instance, tight_factor_instance
from popbranch.instance import augment_root
from popbranch.popularity import unpopularity_factor


@dataclass
class Config:
    max_k: int = 6
    sizes: tuple = (8, 16, 32, 64, 128)
    trials: int = 50
    exact_up_to: int = 16  # exact factor is one min-cost arborescence per candidate ratio
    seed: int = 0


def _row(name, rooted, exact_up_to):
    a, t, fam = low_factor_arborescence(rooted)
    row = {"instance": name, "n": rooted.n, "t_bound": t, "log2_n": math.floor(math.log2(rooted.n)), "depth": fam.depth()}
    if rooted.n <= exact_up_to:
        u = unpopularity_factor(rooted, a)
        row["factor"] = "inf" if u == math.inf else str(u)
    return row


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=Config.trials)
    ap.add_argument("--seed", type=int, default=Config.seed)
    args = ap.parse_args()
    cfg = Config(trials=args.trials, seed=args.seed)
    for k in range(1, cfg.max_k + 1):
        print(json.dumps(_row(f"G_{k}", augment_root(tight_factor_instance(k)), cfg.exact_up_to)))
    for n in cfg.sizes:
        worst = None
        for t in range(cfg.trials):
            rooted = augment_root(random_instance(n, 3 * n, "strict", seed=cfg.seed * 10**6 + n * 1000 + t))
            row = _row(f"random_{n}", rooted, cfg.exact_up_to)
            if worst is None or row["t_bound"] > worst["t_bound"]:
                worst = row
        print(json.dumps(dict(worst, trials=cfg.trials)), flush=True)


if __name__ == "__main__":
    main()
