"""Dominating-heat upper bound next to the heat the universal machine assigns."""
import argparse
import itertools
from dataclasses import dataclass

from thermotm.ait import EnumerationBudget
from thermotm.tutm import constant_heat_program, gap_report
from thermotm.zoo import ZOO


@dataclass
class Config:
    machine: str = "erasure"
    heat: int = 5
    max_input_length: int = 4
    max_bits: int = 16
    steps: int = 200


def main(cfg: Config):
    inputs = ["".join(p) for n in range(cfg.max_input_length + 1) for p in itertools.product("01", repeat=n)]
    rows = gap_report(ZOO[cfg.machine](), constant_heat_program(cfg.heat), inputs,
                      EnumerationBudget(cfg.max_bits, cfg.steps))
    print("x       y       dom_upper  heat  l(e)  l(i)  replicated  gap")
    for r in rows:
        print(f"{r.input or '-':7} {r.output or '-':7} {r.dominating_upper:9}  {str(r.heat):4}  "
              f"{r.machine_bits:4}  {r.heat_bits:4}  {str(r.replicated):10}  {r.gap}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--machine", choices=sorted(ZOO), default="erasure")
    p.add_argument("--heat", type=int, default=5)
    p.add_argument("--max-input-length", type=int, default=4)
    p.add_argument("--max-bits", type=int, default=16)
    p.add_argument("--steps", type=int, default=200)
    a = p.parse_args()
    main(Config(a.machine, a.heat, a.max_input_length, a.max_bits, a.steps))
