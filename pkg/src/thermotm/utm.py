"""Universal simulation and the self-delimiting reference machine.

A prefix program is ``code + gamma(len(payload) + 1) + payload``; a plain
program is ``code + payload`` with the payload running to the end. The
simulated machine starts on ``condition + Blank + payload``, or on the bare
payload when the condition is empty.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .codec import (
    MachineCode,
    decode_gamma,
    decode_machine,
    elias_gamma,
    encode_machine,
    gamma_length,
    iter_machines,
    machine_code_length,
)
from .errors import MalformedCode, MalformedProgram
from .machine import BLANK, MachineSpec, RunResult, bits_to_cells, run_cells


def program_tape(condition: str, payload: str) -> list[int]:
    if not condition:
        return bits_to_cells(payload)
    return bits_to_cells(condition) + [BLANK] + bits_to_cells(payload)


def universal_run(code: MachineCode, input: str, budget: int) -> RunResult:
    spec, used = decode_machine(code)
    if used != len(code):
        raise MalformedCode(f"{len(code) - used} trailing bits after machine code")
    return run_cells(spec, bits_to_cells(input), budget)


@dataclass(frozen=True)
class PrefixProgram:
    spec: MachineSpec
    code: MachineCode
    payload: str

    @property
    def bits(self) -> str:
        return self.code + elias_gamma(len(self.payload) + 1) + self.payload


def make_prefix_program(spec: MachineSpec, payload: str = "") -> str:
    return encode_machine(spec) + elias_gamma(len(payload) + 1) + payload


def parse_prefix_program(bits: str) -> tuple[PrefixProgram, int]:
    """Self-delimiting parse; returns the program and the bits consumed."""
    try:
        spec, used = decode_machine(bits)
        m, pos = decode_gamma(bits, used)
    except MalformedCode as exc:
        raise MalformedProgram(str(exc)) from None
    end = pos + m - 1
    if end > len(bits):
        raise MalformedProgram("truncated payload")
    return PrefixProgram(spec, bits[:used], bits[pos:end]), end


def prefix_universal_run(program: str, condition: str, budget: int) -> tuple[RunResult, int]:
    parsed, consumed = parse_prefix_program(program)
    return run_cells(parsed.spec, program_tape(condition, parsed.payload), budget), consumed


def plain_universal_run(program: str, condition: str, budget: int) -> RunResult:
    try:
        spec, used = decode_machine(program)
    except MalformedCode as exc:
        raise MalformedProgram(str(exc)) from None
    return run_cells(spec, program_tape(condition, program[used:]), budget)


# -- enumeration ------------------------------------------------------------


@lru_cache(maxsize=None)
def _codes_for(state_count: int) -> tuple[tuple[str, MachineSpec], ...]:
    return tuple((encode_machine(m), m) for m in iter_machines(state_count))


def _codes_upto(max_bits: int) -> Iterator[tuple[str, MachineSpec]]:
    n = 1
    while machine_code_length(n) <= max_bits:
        yield from _codes_for(n)
        n += 1


def _payloads(n: int) -> Iterator[str]:
    return ("".join(p) for p in itertools.product("01", repeat=n))


def prefix_programs_of_length(length: int) -> list[tuple[str, MachineSpec, str]]:
    """All syntactically valid prefix programs of exactly ``length`` bits,
    as ``(bits, spec, payload)`` sorted by ``bits``."""
    out = []
    for code, spec in _codes_upto(length):
        rest = length - len(code)
        # gamma_length(L + 1) + L grows strictly with L, so at most one L fits
        L = 0
        while gamma_length(L + 1) + L < rest:
            L += 1
        if gamma_length(L + 1) + L != rest:
            continue
        head = code + elias_gamma(L + 1)
        out.extend((head + p, spec, p) for p in _payloads(L))
    out.sort(key=lambda item: item[0])
    return out


def plain_programs_of_length(length: int) -> list[tuple[str, MachineSpec, str]]:
    out = []
    for code, spec in _codes_upto(length):
        out.extend((code + p, spec, p) for p in _payloads(length - len(code)))
    out.sort(key=lambda item: item[0])
    return out
