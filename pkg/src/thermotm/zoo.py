"""Small hand-written machines used throughout tests, scripts and the CLI."""
from __future__ import annotations

from .machine import MachineSpec, Move, Symbol, Transition, SYMBOLS

L, R, S = Move.LEFT, Move.RIGHT, Move.STAY


def _uniform(next_state: int, write, move) -> list[Transition]:
    """Same rule for every read symbol; ``write=None`` rewrites what was read."""
    return [
        Transition(next_state, s if write is None else write, move) for s in SYMBOLS
    ]


def halt_machine() -> MachineSpec:
    """One state that is both start and halt: output = initial tape up to the first Blank."""
    return MachineSpec(1, ())


def identity_machine() -> MachineSpec:
    return MachineSpec(2, tuple(_uniform(1, None, S)))


def erasure_machine() -> MachineSpec:
    """Blank out cell 0 and halt, so every input maps to the empty string."""
    return MachineSpec(2, tuple(_uniform(1, Symbol.BLANK, S)))


def bit_flip_machine() -> MachineSpec:
    return MachineSpec(
        2,
        (
            Transition(1, Symbol.ONE, S),
            Transition(1, Symbol.ZERO, S),
            Transition(1, Symbol.BLANK, S),
        ),
    )


def flip_all_machine() -> MachineSpec:
    return MachineSpec(
        2,
        (
            Transition(0, Symbol.ONE, R),
            Transition(0, Symbol.ZERO, R),
            Transition(1, Symbol.BLANK, S),
        ),
    )


def oscillator_machine() -> MachineSpec:
    """Two working states bouncing right/left; never reaches the halt state."""
    return MachineSpec(3, tuple(_uniform(1, None, R) + _uniform(0, None, L)))


def writer_machine(bits: str) -> MachineSpec:
    """Overwrite the tape with ``bits`` followed by a Blank, whatever the input."""
    n = len(bits) + 2
    rules = []
    for k, c in enumerate(bits):
        rules += _uniform(k + 1, Symbol.from_char(c), R)
    rules += _uniform(n - 1, Symbol.BLANK, S)
    return MachineSpec(n, tuple(rules))


ZOO = {
    "halt": halt_machine,
    "identity": identity_machine,
    "erasure": erasure_machine,
    "bit-flip": bit_flip_machine,
    "flip-all": flip_all_machine,
    "oscillator": oscillator_machine,
}
