"""Complexity upper bounds along a budget ladder, as CSV on stdout."""
import argparse
import csv
import sys
from dataclasses import dataclass

from thermotm.ait import EnumerationBudget, Flavor, bound_sequence, literal_ceiling


@dataclass
class Config:
    strings: tuple = ("", "0", "0101", "000000", "010101", "100110")
    condition: str = ""
    max_bits: int = 24
    stride: int = 2
    steps_per_bit: int = 20
    jobs: int = 1


def main(cfg: Config):
    ladder = [EnumerationBudget(n, cfg.steps_per_bit * (n + 1)) for n in range(0, cfg.max_bits + 1, cfg.stride)]
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["x", "flavor", "max_program_length", "max_steps_per_program", "value_bits", "literal_ceiling"])
    for x in cfg.strings:
        for flavor in (Flavor.PREFIX, Flavor.PLAIN):
            for budget, bound in zip(ladder, bound_sequence(x, cfg.condition, ladder, flavor, jobs=cfg.jobs)):
                out.writerow([x or "-", flavor.value, budget.max_program_length, budget.max_steps_per_program,
                              "" if bound is None else bound.value_bits, literal_ceiling(x)])


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("strings", nargs="*", help="bit strings ('-' = empty)")
    p.add_argument("--condition", default="")
    p.add_argument("--max-bits", type=int, default=24)
    p.add_argument("--stride", type=int, default=2)
    p.add_argument("--steps-per-bit", type=int, default=20)
    p.add_argument("--jobs", type=int, default=1)
    a = p.parse_args()
    cfg = Config(condition=a.condition, max_bits=a.max_bits, stride=a.stride,
                 steps_per_bit=a.steps_per_bit, jobs=a.jobs)
    if a.strings:
        cfg.strings = tuple("" if s == "-" else s for s in a.strings)
    main(cfg)
