"""Exhaustive universality / codec sweep over every machine with N states.

Shard the work with --shard I --shards K (machine index mod K == I) and run
the shards in separate processes or hosts. A full 3-state sweep is about
387 million machines, so expect hours per core.

    python3 scripts/exhaustive_universality.py --states 3 --shard 0 --shards 8
"""
import argparse
import itertools
import sys
import time
from dataclasses import dataclass, fields

from thermotm.codec import encode_machine, iter_machines, machine_count
from thermotm.machine import run
from thermotm.tutm import TutmTriple, tutm_run
from thermotm.utm import universal_run
from thermotm.zoo import halt_machine


@dataclass
class Config:
    states: int = 2
    max_input_length: int = 4
    steps: int = 1000
    shard: int = 0
    shards: int = 1
    codec_only: bool = False
    report_every: int = 1_000_000


def parse_args() -> Config:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    for f in fields(Config):
        flag = "--" + f.name.replace("_", "-")
        if f.type is bool:
            parser.add_argument(flag, action="store_true")
        else:
            parser.add_argument(flag, type=int, default=f.default)
    return Config(**vars(parser.parse_args()))


def main(cfg: Config) -> int:
    inputs = ["".join(p) for n in range(cfg.max_input_length + 1) for p in itertools.product("01", repeat=n)]
    heat = encode_machine(halt_machine())
    total = machine_count(cfg.states)
    prev = ""
    checked = 0
    start = time.time()
    for index, spec in enumerate(iter_machines(cfg.states)):
        code = encode_machine(spec)
        # enumeration order is code order, so every code must exceed the last
        if code <= prev:
            print(f"codec order broken at machine {index}: {code}", file=sys.stderr)
            return 1
        prev = code
        if index % cfg.shards != cfg.shard:
            continue
        if not cfg.codec_only:
            for x in inputs:
                direct = run(spec, x, cfg.steps)
                if universal_run(code, x, cfg.steps) != direct or tutm_run(TutmTriple(code, heat, x), cfg.steps) != direct:
                    print(f"mismatch: machine {index} code {code} input {x!r}", file=sys.stderr)
                    return 1
        checked += 1
        if checked % cfg.report_every == 0:
            print(f"{index + 1}/{total} scanned, {checked} checked, {time.time() - start:.0f}s", flush=True)
    print(f"ok: states={cfg.states} shard={cfg.shard}/{cfg.shards} checked={checked} "
          f"inputs={len(inputs)} seconds={time.time() - start:.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main(parse_args()))
