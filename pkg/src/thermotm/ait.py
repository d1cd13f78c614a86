"""Anytime upper bounds on plain and prefix (conditional) complexity.

Bounds come from an exhaustive scan of the reference machine's programs in
length-lexicographic order, each run for a fixed number of steps. The result
is a pure function of the budget, so raising the budget can only lower the
bound.
"""
from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .codec import elias_gamma, encode_machine, gamma_length
from .errors import BudgetTooSmall
from .machine import Halted, run_cells
from .utm import (
    plain_programs_of_length,
    plain_universal_run,
    prefix_programs_of_length,
    prefix_universal_run,
    program_tape,
)
from .zoo import halt_machine


class Flavor(enum.Enum):
    PLAIN = "plain"
    PLAIN_CONDITIONAL = "plain-conditional"
    PREFIX = "prefix"
    PREFIX_CONDITIONAL = "prefix-conditional"

    @property
    def is_prefix(self) -> bool:
        return self in (Flavor.PREFIX, Flavor.PREFIX_CONDITIONAL)


@dataclass(frozen=True)
class EnumerationBudget:
    max_program_length: int
    max_steps_per_program: int

    def __post_init__(self):
        if self.max_program_length < 0 or self.max_steps_per_program < 0:
            raise ValueError("budget fields must be nonnegative")

    def __le__(self, other):
        # componentwise partial order
        return (
            self.max_program_length <= other.max_program_length
            and self.max_steps_per_program <= other.max_steps_per_program
        )


@dataclass(frozen=True)
class ComplexityBound:
    value_bits: int
    budget: EnumerationBudget
    witness: str
    flavor: Flavor
    target: str
    condition: str


# The one-state machine halts at once, so its output is the initial tape up
# to the first Blank: the condition when there is one, else the payload.
COPY_PROGRAM = encode_machine(halt_machine()) + "1"  # payload-free prefix program
C_COPY = len(COPY_PROGRAM)
C_LIT = len(encode_machine(halt_machine())) + 1


def literal_program(x: str) -> str:
    return encode_machine(halt_machine()) + elias_gamma(len(x) + 1) + x


def literal_ceiling(x: str) -> int:
    """Length of the literal program: l(x) + 2*floor(log2(l(x)+1)) + C_LIT."""
    return len(encode_machine(halt_machine())) + gamma_length(len(x) + 1) + len(x)


def _first_hit(args) -> Optional[int]:
    candidates, x, y, steps = args
    for idx, (bits, spec, payload) in candidates:
        result = run_cells(spec, program_tape(y, payload), steps)
        if isinstance(result, Halted) and result.output == x:
            return idx
    return None


def _scan(
    generate: Callable[[int], list],
    x: str,
    y: str,
    budget: EnumerationBudget,
    flavor: Flavor,
    jobs: int,
) -> ComplexityBound:
    steps = budget.max_steps_per_program
    pool = ProcessPoolExecutor(jobs) if jobs > 1 else None
    try:
        for length in range(budget.max_program_length + 1):
            candidates = list(enumerate(generate(length)))
            if not candidates:
                continue
            if pool is None:
                hit = _first_hit((candidates, x, y, steps))
            else:
                size = -(-len(candidates) // jobs)
                chunks = [candidates[i : i + size] for i in range(0, len(candidates), size)]
                hits = [
                    h
                    for h in pool.map(_first_hit, [(c, x, y, steps) for c in chunks])
                    if h is not None
                ]
                # lowest index = lexicographically first, same as the serial scan
                hit = min(hits) if hits else None
            if hit is not None:
                witness = candidates[hit][1][0]
                return ComplexityBound(length, budget, witness, flavor, x, y)
    finally:
        if pool is not None:
            pool.shutdown()
    raise BudgetTooSmall(
        f"no {flavor.value} program of <= {budget.max_program_length} bits "
        f"outputs {x!r} within {steps} steps"
    )


def k_upper(x: str, y: str, budget: EnumerationBudget, jobs: int = 1) -> ComplexityBound:
    """Shortest self-delimiting program (within budget) printing x given y."""
    flavor = Flavor.PREFIX_CONDITIONAL if y else Flavor.PREFIX
    return _scan(prefix_programs_of_length, x, y, budget, flavor, jobs)


def c_upper(x: str, y: str, budget: EnumerationBudget, jobs: int = 1) -> ComplexityBound:
    """As ``k_upper`` but over plain programs (no payload length prefix)."""
    flavor = Flavor.PLAIN_CONDITIONAL if y else Flavor.PLAIN
    return _scan(plain_programs_of_length, x, y, budget, flavor, jobs)


def bound_sequence(
    x: str,
    y: str,
    budgets: Sequence[EnumerationBudget],
    flavor: Flavor = Flavor.PREFIX,
    jobs: int = 1,
) -> list[Optional[ComplexityBound]]:
    """Bounds along a budget ladder; ``None`` marks a budget too small to find any."""
    for a, b in zip(budgets, budgets[1:]):
        if not a <= b:
            raise ValueError("budgets must be ascending in both fields")
    search = k_upper if flavor.is_prefix else c_upper
    out = []
    for budget in budgets:
        try:
            out.append(search(x, y, budget, jobs=jobs))
        except BudgetTooSmall:
            out.append(None)
    return out


def revalidate(bound: ComplexityBound) -> bool:
    """Re-run the witness and confirm it prints the target within the budget."""
    steps = bound.budget.max_steps_per_program
    if len(bound.witness) != bound.value_bits:
        return False
    if bound.flavor.is_prefix:
        result, used = prefix_universal_run(bound.witness, bound.condition, steps)
        if used != len(bound.witness):
            return False
    else:
        result = plain_universal_run(bound.witness, bound.condition, steps)
    return isinstance(result, Halted) and result.output == bound.target
