"""Fiber test vs. Gibbs witnesses over every map on a small set and every
heat assignment from a grid. Prints a one-line tally per domain size."""
import argparse
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from thermotm.thermo import (
    FiniteFunction,
    HeatFunction,
    check_kraft_condition,
    entropy_production,
    gibbs_witness,
    sample_entropy_productions,
)


@dataclass
class Config:
    max_domain: int = 4
    grid: tuple = (-1, 0, 1, 2)
    samples: int = 1000
    seed: int = 0


def main(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    print("n  instances  violating  max|sigma+log2 Z|  min sampled sigma")
    for n in range(1, cfg.max_domain + 1):
        xs = list(range(n))
        count = bad = 0
        err, low = 0.0, math.inf
        for images in itertools.product(xs, repeat=n):
            f = FiniteFunction(dict(zip(xs, images)))
            for heats in itertools.product(cfg.grid, repeat=n):
                Q = HeatFunction(dict(zip(xs, heats)))
                count += 1
                verdict = check_kraft_condition(f, Q)
                if verdict.realizable:
                    low = min(low, float(sample_entropy_productions(f, Q, cfg.samples, rng).min()))
                    continue
                bad += 1
                for y, z in verdict.per_fiber.items():
                    if z > 1:
                        sigma = entropy_production(f, Q, gibbs_witness(f, Q, y))
                        err = max(err, abs(sigma + math.log2(z)))
        print(f"{n}  {count:9}  {bad:9}  {err:17.3g}  {low:.3g}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-domain", type=int, default=4)
    p.add_argument("--grid", type=Fraction, nargs="+", default=[-1, 0, 1, 2])
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    a = p.parse_args()
    main(Config(a.max_domain, tuple(a.grid), a.samples, a.seed))
