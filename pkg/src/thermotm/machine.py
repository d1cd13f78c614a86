"""Single-tape Turing machines over {0, 1, Blank} on a semi-infinite tape.

States are plain indices: 0 is the start state and ``state_count - 1`` the
halt state. A Left move at cell 0 leaves the pointer at 0. On halting, the
output is the tape up to (excluding) the first Blank cell.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property
from typing import Iterable, Mapping, Union

from .errors import HaltedMachineStepped, MachineParseError, NotHalted


class Symbol(IntEnum):
    ZERO = 0
    ONE = 1
    BLANK = 2

    @property
    def char(self) -> str:
        return "01B"[self]

    @classmethod
    def from_char(cls, c: str) -> Symbol:
        try:
            return cls("01B".index(c))
        except ValueError:
            raise ValueError(f"unknown tape symbol {c!r}") from None


class Move(IntEnum):
    LEFT = 0
    RIGHT = 1
    STAY = 2

    @property
    def char(self) -> str:
        return "LRS"[self]

    @property
    def delta(self) -> int:
        return (-1, 1, 0)[self]

    @classmethod
    def from_char(cls, c: str) -> Move:
        try:
            return cls("LRS".index(c))
        except ValueError:
            raise ValueError(f"unknown move {c!r}") from None


BLANK = int(Symbol.BLANK)
SYMBOLS = (Symbol.ZERO, Symbol.ONE, Symbol.BLANK)


@dataclass(frozen=True)
class Transition:
    next_state: int
    write: Symbol
    move: Move


@dataclass(frozen=True)
class MachineSpec:
    """Transition table; ``transitions[3 * q + s]`` is the rule for (q, s)."""

    state_count: int
    transitions: tuple[Transition, ...]

    def __post_init__(self):
        if self.state_count < 1:
            raise ValueError("state_count must be positive")
        expected = 3 * (self.state_count - 1)
        if len(self.transitions) != expected:
            raise ValueError(
                f"{self.state_count}-state machine needs {expected} transitions, "
                f"got {len(self.transitions)}"
            )
        for t in self.transitions:
            if not 0 <= t.next_state < self.state_count:
                raise ValueError(f"next state {t.next_state} out of range")
        # normalise plain ints into the enums so equal tables compare equal
        object.__setattr__(
            self,
            "transitions",
            tuple(
                Transition(t.next_state, Symbol(t.write), Move(t.move))
                for t in self.transitions
            ),
        )

    @property
    def start_state(self) -> int:
        return 0

    @property
    def halt_state(self) -> int:
        return self.state_count - 1

    def transition(self, state: int, symbol: int) -> Transition:
        if state == self.halt_state:
            raise HaltedMachineStepped("no transitions out of the halt state")
        if not 0 <= state < self.halt_state:
            raise ValueError(f"state {state} out of range")
        return self.transitions[3 * state + symbol]

    @classmethod
    def from_table(
        cls, state_count: int, table: Mapping[tuple[int, int], tuple[int, int, int]]
    ) -> MachineSpec:
        """Build from ``{(q, symbol): (next, write, move)}``; must be total."""
        rules = []
        for q in range(state_count - 1):
            for s in SYMBOLS:
                if (q, s) not in table:
                    raise ValueError(f"missing transition for ({q}, {s.char})")
                nxt, w, m = table[q, s]
                rules.append(Transition(nxt, Symbol(w), Move(m)))
        return cls(state_count, tuple(rules))

    @cached_property
    def _fast_table(self) -> tuple[tuple[int, int, int], ...]:
        return tuple((t.next_state, int(t.write), t.move.delta) for t in self.transitions)

    @cached_property
    def _runaway(self) -> tuple[bool, ...]:
        # True if, standing on an all-Blank suffix, the machine marches right forever.
        halt = self.halt_state
        flags = []
        for q in range(self.state_count):
            seen = set()
            cur = q
            result = False
            while cur != halt:
                if cur in seen:
                    result = True
                    break
                seen.add(cur)
                t = self.transitions[3 * cur + BLANK]
                if t.move != Move.RIGHT:
                    break
                cur = t.next_state
            flags.append(result)
        return tuple(flags)


@dataclass(frozen=True)
class Configuration:
    tape: tuple[int, ...]
    pointer: int
    head: int

    def __post_init__(self):
        if self.pointer < 0:
            raise ValueError("pointer must be nonnegative")
        tape = tuple(int(s) for s in self.tape)
        if len(tape) < self.pointer + 1:
            tape = tape + (BLANK,) * (self.pointer + 1 - len(tape))
        object.__setattr__(self, "tape", tape)


@dataclass(frozen=True)
class Halted:
    output: str
    steps: int


@dataclass(frozen=True)
class StillRunning:
    steps_executed: int


RunResult = Union[Halted, StillRunning]


def bits_to_cells(bits: str) -> list[int]:
    try:
        return [(0, 1)["01".index(c)] for c in bits]
    except ValueError:
        raise ValueError(f"not a bit string: {bits!r}") from None


def decode_output(tape: Iterable[int]) -> str:
    """Tape contents up to the first Blank."""
    out = []
    for s in tape:
        if s == BLANK:
            break
        out.append("1" if s else "0")
    return "".join(out)


def initial_configuration(input: str) -> Configuration:
    return Configuration(tuple(bits_to_cells(input)), 0, 0)


def step(spec: MachineSpec, config: Configuration) -> Configuration:
    if config.head == spec.halt_state:
        raise HaltedMachineStepped("machine is already halted")
    t = spec.transition(config.head, config.tape[config.pointer])
    tape = list(config.tape)
    tape[config.pointer] = int(t.write)
    pointer = max(0, config.pointer + t.move.delta)
    return Configuration(tuple(tape), pointer, t.next_state)


def output_of(config: Configuration, spec: MachineSpec) -> str:
    if config.head != spec.halt_state:
        raise NotHalted(f"head is in state {config.head}, not the halt state")
    return decode_output(config.tape)


def _trim(tape: list[int]) -> list[int]:
    end = len(tape)
    while end and tape[end - 1] == BLANK:
        end -= 1
    return tape[:end]


def run_cells(spec: MachineSpec, cells: Iterable[int], max_steps: int) -> RunResult:
    """Run from the start configuration on an explicit tape prefix.

    Provably non-halting runs (a repeated configuration, or a march to the
    right over blank tape) are cut short; the result is the same
    ``StillRunning(max_steps)`` the full loop would return.
    """
    if max_steps < 0:
        raise ValueError("max_steps must be nonnegative")
    halt = spec.halt_state
    tape = list(cells)
    if halt == 0:
        return Halted(decode_output(tape), 0)
    table = spec._fast_table
    runaway = spec._runaway
    state = pos = steps = 0
    snap_state, snap_pos, snap_tape = 0, 0, _trim(tape)
    next_snap = 1
    while steps < max_steps:
        if pos < len(tape):
            sym = tape[pos]
        else:
            if runaway[state]:
                return StillRunning(max_steps)
            tape.append(BLANK)
            sym = BLANK
        state, tape[pos], delta = table[3 * state + sym]
        pos += delta
        if pos < 0:
            pos = 0
        steps += 1
        if state == halt:
            return Halted(decode_output(tape), steps)
        if state == snap_state and pos == snap_pos and _trim(tape) == snap_tape:
            return StillRunning(max_steps)
        if steps == next_snap:
            snap_state, snap_pos, snap_tape = state, pos, _trim(tape)
            next_snap *= 2
    return StillRunning(max_steps)


def run(spec: MachineSpec, input: str, max_steps: int) -> RunResult:
    return run_cells(spec, bits_to_cells(input), max_steps)


# -- text format ------------------------------------------------------------


def format_machine(spec: MachineSpec) -> str:
    lines = [f"states: {spec.state_count}"]
    for q in range(spec.state_count - 1):
        for s in SYMBOLS:
            t = spec.transition(q, s)
            lines.append(f"{q} {s.char} -> {t.next_state} {t.write.char} {t.move.char}")
    return "\n".join(lines) + "\n"


def parse_machine(text: str) -> MachineSpec:
    """Parse the ``states: n`` / ``q s -> q' s' M`` format.

    Blank lines and ``#`` comments are ignored.
    """
    state_count = None
    table: dict[tuple[int, Symbol], tuple[int, Symbol, Move]] = {}
    header_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if state_count is None:
            key, _, value = line.partition(":")
            if key.strip() != "states" or not _:
                raise MachineParseError("expected 'states: <n>' header", lineno)
            try:
                state_count = int(value)
            except ValueError:
                raise MachineParseError(f"bad state count {value.strip()!r}", lineno) from None
            if state_count < 1:
                raise MachineParseError("state count must be positive", lineno)
            header_line = lineno
            continue
        parts = line.split()
        if len(parts) != 6 or parts[2] != "->":
            raise MachineParseError(f"expected 'q s -> q' s' M', got {line!r}", lineno)
        try:
            q, nq = int(parts[0]), int(parts[3])
            s, ns = Symbol.from_char(parts[1]), Symbol.from_char(parts[4])
            mv = Move.from_char(parts[5])
        except ValueError as exc:
            raise MachineParseError(str(exc), lineno) from None
        if not 0 <= q < state_count - 1:
            raise MachineParseError(f"state {q} has no transitions (halt or out of range)", lineno)
        if not 0 <= nq < state_count:
            raise MachineParseError(f"next state {nq} out of range", lineno)
        if (q, s) in table:
            raise MachineParseError(f"duplicate transition for ({q}, {s.char})", lineno)
        table[q, s] = (nq, ns, mv)
    if state_count is None:
        raise MachineParseError("empty machine file")
    missing = [
        f"({q}, {s.char})"
        for q in range(state_count - 1)
        for s in SYMBOLS
        if (q, s) not in table
    ]
    if missing:
        raise MachineParseError("missing transitions " + ", ".join(missing), header_line)
    return MachineSpec.from_table(state_count, table)
