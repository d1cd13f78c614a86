"""Bit strings, self-delimiting integer and machine codes, Kraft sums.

Bit strings are plain ``str`` objects over ``'0'``/``'1'``.

Machine code layout: ``gamma(n)`` followed by one fixed-width field per
(state, symbol) pair in lexicographic order, each field being the next state
in ``ceil(log2 n)`` bits, then the written symbol and the move in 2 bits each.
The header fixes the total length, so the code set is prefix-free.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import MalformedCode, ZeroNotEncodable
from .machine import MachineSpec, Move, Symbol, Transition

MachineCode = str

_SYMBOL_BITS = {Symbol.ZERO: "00", Symbol.ONE: "01", Symbol.BLANK: "10"}
_MOVE_BITS = {Move.LEFT: "00", Move.RIGHT: "01", Move.STAY: "10"}
_BITS_SYMBOL = {v: k for k, v in _SYMBOL_BITS.items()}
_BITS_MOVE = {v: k for k, v in _MOVE_BITS.items()}


def nat_to_string(n: int) -> str:
    """Length-lexicographic bijection: 0 -> '', 1 -> '0', 2 -> '1', 3 -> '00', ..."""
    if n < 0:
        raise ValueError("n must be a natural number")
    return bin(n + 1)[3:]


def string_to_nat(x: str) -> int:
    return int("1" + x, 2) - 1


def elias_gamma(n: int) -> str:
    if n < 1:
        raise ZeroNotEncodable(f"gamma code is defined for n >= 1, got {n}")
    b = bin(n)[2:]
    return "0" * (len(b) - 1) + b


def gamma_length(n: int) -> int:
    if n < 1:
        raise ZeroNotEncodable(f"gamma code is defined for n >= 1, got {n}")
    return 2 * n.bit_length() - 1


def decode_gamma(bits: str, offset: int = 0) -> tuple[int, int]:
    """Read one gamma code starting at ``offset``; returns (value, new offset)."""
    zeros = 0
    i = offset
    while i < len(bits) and bits[i] == "0":
        zeros += 1
        i += 1
    end = i + zeros + 1
    if end > len(bits):
        raise MalformedCode("truncated gamma code")
    return int(bits[i:end], 2), end


def ceil_log2(n: int) -> int:
    return (n - 1).bit_length()


def machine_code_length(state_count: int) -> int:
    return gamma_length(state_count) + 3 * (state_count - 1) * (ceil_log2(state_count) + 4)


def encode_machine(spec: MachineSpec) -> MachineCode:
    width = ceil_log2(spec.state_count)
    parts = [elias_gamma(spec.state_count)]
    for t in spec.transitions:
        if width:
            parts.append(format(t.next_state, f"0{width}b"))
        parts.append(_SYMBOL_BITS[t.write])
        parts.append(_MOVE_BITS[t.move])
    return "".join(parts)


def decode_machine(bits: str, offset: int = 0) -> tuple[MachineSpec, int]:
    """Decode the machine code starting at ``offset``.

    Returns the spec and the number of bits consumed. Trailing bits are left
    alone; raises ``MalformedCode`` on truncation or out-of-range fields.
    """
    n, pos = decode_gamma(bits, offset)
    width = ceil_log2(n)
    end = offset + machine_code_length(n)
    if end > len(bits):
        raise MalformedCode(f"truncated body for a {n}-state machine")
    rules = []
    for _ in range(3 * (n - 1)):
        nxt = int(bits[pos : pos + width], 2) if width else 0
        pos += width
        if nxt >= n:
            raise MalformedCode(f"next state {nxt} out of range for {n} states")
        sym = _BITS_SYMBOL.get(bits[pos : pos + 2])
        mv = _BITS_MOVE.get(bits[pos + 2 : pos + 4])
        if sym is None or mv is None:
            raise MalformedCode(f"invalid symbol/move field at bit {pos}")
        pos += 4
        rules.append(Transition(nxt, sym, mv))
    return MachineSpec(n, tuple(rules)), end - offset


def machine_count(state_count: int) -> int:
    return (9 * state_count) ** (3 * (state_count - 1))


def iter_machines(state_count: int) -> Iterator[MachineSpec]:
    """Every machine with ``state_count`` states, in lexicographic order of code."""
    choices = [
        Transition(q, s, m)
        for q in range(state_count)
        for s in (Symbol.ZERO, Symbol.ONE, Symbol.BLANK)
        for m in (Move.LEFT, Move.RIGHT, Move.STAY)
    ]
    for rules in itertools.product(choices, repeat=3 * (state_count - 1)):
        yield MachineSpec(state_count, rules)


def iter_machine_codes(max_bits: int) -> Iterator[tuple[MachineCode, MachineSpec]]:
    """All valid machine codes of length <= ``max_bits``, shortest first."""
    n = 1
    while machine_code_length(n) <= max_bits:
        for spec in iter_machines(n):
            yield encode_machine(spec), spec
        n += 1


# -- prefix sets and Kraft sums ---------------------------------------------


@dataclass(frozen=True)
class KraftReport:
    sum: Fraction
    member_count: int
    is_prefix: bool


def is_prefix_set(strings: Iterable[str]) -> bool:
    # after sorting, any prefix pair shows up between neighbours
    ordered = sorted(set(strings))
    return all(not b.startswith(a) for a, b in zip(ordered, ordered[1:]))


def kraft_sum(strings: Iterable[str]) -> Fraction:
    lengths = [len(s) for s in set(strings)]
    if not lengths:
        return Fraction(0)
    top = max(lengths)
    return Fraction(sum(1 << (top - l) for l in lengths), 1 << top)


def kraft_report(strings: Iterable[str]) -> KraftReport:
    members = set(strings)
    return KraftReport(kraft_sum(members), len(members), is_prefix_set(members))


# -- serialisation ----------------------------------------------------------


def bits_to_hex(bits: str) -> tuple[str, int]:
    """Hex dump, zero-padded on the right to whole nibbles, plus the true bit length."""
    if not bits:
        return "", 0
    padded = bits + "0" * (-len(bits) % 4)
    return format(int(padded, 2), f"0{len(padded) // 4}x"), len(bits)


def hex_to_bits(hexstr: str, nbits: int) -> str:
    if nbits == 0:
        return ""
    value = int(hexstr, 16)
    width = 4 * len(hexstr)
    if width < nbits:
        raise ValueError("hex string shorter than the stated bit length")
    return format(value, f"0{width}b")[:nbits]
