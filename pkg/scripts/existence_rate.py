"""How often do random instances admit a popular branching?

Prints one JSON row per (n, model): instances tried, how many have a
popular branching, and the mean minimum unpopularity margin (weak models).
"""

import argparse
import json
import random
from dataclasses import asdict, dataclass

from popbranch.generators import random_instance
from popbranch.instance import augment_root
from popbranch.solver import min_margin_arborescence, popular_arborescence


@dataclass
class Config:
    sizes: tuple = (5, 10, 20, 40)
    models: tuple = ("strict", "weak:2", "partial:0.5")
    density: float = 3.0  # edges per node
    trials: int = 200
    seed: int = 0


def run(cfg: Config):
    for n in cfg.sizes:
        m = min(n * (n - 1), int(cfg.density * n))
        for model in cfg.models:
            hits, margins = 0, []
            for t in range(cfg.trials):
                rooted = augment_root(random_instance(n, m, model, seed=random.Random(f"{cfg.seed}/{n}/{model}/{t}").randrange(2**32)))
                hits += popular_arborescence(rooted) is not None
                if not model.startswith("partial"):
                    margins.append(min_margin_arborescence(rooted)[1])
            row = {"n": n, "m": m, "model": model, "trials": cfg.trials, "popular": hits}
            if margins:
                row["mean_min_margin"] = round(sum(margins) / len(margins), 4)
            yield row


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=Config.trials)
    ap.add_argument("--density", type=float, default=Config.density)
    ap.add_argument("--seed", type=int, default=Config.seed)
    args = ap.parse_args()
    cfg = Config(trials=args.trials, density=args.density, seed=args.seed)
    print(json.dumps({"config": asdict(cfg)}))
    for row in run(cfg):
        print(json.dumps(row), flush=True)


if __name__ == "__main__":
    main()
