"""Per-fiber sums of 2^-Q_U for growing code-length caps."""
import argparse
import itertools
from dataclasses import dataclass

from thermotm.tutm import tutm_kraft_audit


@dataclass
class Config:
    code_bits: tuple = (0, 1, 18, 20)
    max_input_length: int = 3
    budget: int = 1000
    jobs: int = 1


def main(cfg: Config):
    inputs = ["".join(p) for n in range(cfg.max_input_length + 1) for p in itertools.product("01", repeat=n)]
    print("bits  codes  code_kraft  admitted_pairs  fibers  max_sum  chain")
    for bits in cfg.code_bits:
        r = tutm_kraft_audit(bits, inputs, cfg.budget, jobs=cfg.jobs)
        top = max((fa.sum for fa in r.fibers.values()), default=0)
        print(f"{bits:4}  {r.code_count:5}  {float(r.code_kraft):10.6f}  {r.admitted_pairs:14}  "
              f"{len(r.fibers):6}  {float(top):7.4f}  {r.chain_holds()}")
    print("skipped:", r.skipped)


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--code-bits", type=int, nargs="+", default=[0, 1, 18, 20])
    p.add_argument("--max-input-length", type=int, default=3)
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--jobs", type=int, default=1)
    a = p.parse_args()
    main(Config(tuple(a.code_bits), a.max_input_length, a.budget, a.jobs))
