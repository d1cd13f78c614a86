"""A universal machine that also reproduces heat functions.

The universal machine takes a machine code e, a heat-program code i and an
input x. Its output is M_e(x); the heat argument does not affect it. Its heat
is

    Q_U(e, i, x) = Q_i(x) + l(e) + l(i)

where Q_i(x) is the dyadic rational printed by heat program i on x. The
code lengths l(e), l(i) stand in for K(M), K(Q). Both code sets are
prefix-free, so summing 2^-Q_U over any output fiber stays <= 1 as long as
every simulated pair (M_e, Q_i) is itself realizable. ``tutm_kraft_audit``
checks exactly that sum.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .ait import EnumerationBudget
from .codec import (
    MachineCode,
    decode_gamma,
    decode_machine,
    elias_gamma,
    encode_machine,
    kraft_sum,
)
from .errors import (
    HeatOutputUnparseable,
    HeatProgramDidNotHalt,
    MachineDidNotHalt,
    MalformedCode,
)
from .machine import Halted, MachineSpec, RunResult, run
from .thermo import FiniteFunction, HeatFunction, check_kraft_condition, dominating_heat
from .utm import _codes_upto, universal_run
from .zoo import writer_machine

# -- heat values on tape ----------------------------------------------------


def encode_heat_value(q: Fraction) -> str:
    """sign bit, gamma(k + 1), gamma(|a| + 1) for q = a / 2^k in lowest terms."""
    q = Fraction(q)
    den = q.denominator
    if den & (den - 1):
        raise ValueError(f"{q} is not dyadic")
    k = den.bit_length() - 1
    sign = "1" if q < 0 else "0"
    return sign + elias_gamma(k + 1) + elias_gamma(abs(q.numerator) + 1)


def decode_heat_value(bits: str) -> Fraction:
    if not bits:
        raise HeatOutputUnparseable("empty heat output")
    try:
        k1, pos = decode_gamma(bits, 1)
        a1, pos = decode_gamma(bits, pos)
    except MalformedCode as exc:
        raise HeatOutputUnparseable(str(exc)) from None
    if pos != len(bits):
        raise HeatOutputUnparseable(f"{len(bits) - pos} trailing bits in heat output")
    value = Fraction(a1 - 1, 1 << (k1 - 1))
    return -value if bits[0] == "1" else value


def constant_heat_program(q: Fraction) -> MachineSpec:
    """Heat program printing the constant ``q`` on every input."""
    return writer_machine(encode_heat_value(q))


def evaluate_heat(heat_spec: MachineSpec, x: str, budget: int) -> Fraction:
    result = run(heat_spec, x, budget)
    if not isinstance(result, Halted):
        raise HeatProgramDidNotHalt(f"heat program did not halt on {x!r}")
    return decode_heat_value(result.output)


# -- triples ----------------------------------------------------------------


@dataclass(frozen=True)
class TutmTriple:
    machine_code: MachineCode
    heat_code: MachineCode
    input: str

    @classmethod
    def from_specs(cls, machine: MachineSpec, heat: MachineSpec, x: str) -> TutmTriple:
        return cls(encode_machine(machine), encode_machine(heat), x)

    def encode(self) -> str:
        """Self-delimiting concatenation e . i . gamma(l(x)+1) . x"""
        return self.machine_code + self.heat_code + elias_gamma(len(self.input) + 1) + self.input

    @classmethod
    def decode(cls, bits: str) -> tuple[TutmTriple, int]:
        _, ne = decode_machine(bits)
        _, ni = decode_machine(bits, ne)
        m, pos = decode_gamma(bits, ne + ni)
        end = pos + m - 1
        if end > len(bits):
            raise MalformedCode("truncated input field")
        return cls(bits[:ne], bits[ne : ne + ni], bits[pos:end]), end


def _parse_code(code: str) -> MachineSpec:
    spec, used = decode_machine(code)
    if used != len(code):
        raise MalformedCode(f"{len(code) - used} trailing bits after machine code")
    return spec


@dataclass(frozen=True)
class TutmHeatValue:
    total_bits: Fraction
    heat: Fraction
    machine_bits: int
    heat_bits: int


def tutm_run(triple: TutmTriple, budget: int) -> RunResult:
    _parse_code(triple.machine_code)
    _parse_code(triple.heat_code)
    return universal_run(triple.machine_code, triple.input, budget)


def tutm_heat(triple: TutmTriple, budget: int) -> TutmHeatValue:
    machine = _parse_code(triple.machine_code)
    heat_spec = _parse_code(triple.heat_code)
    if not isinstance(run(machine, triple.input, budget), Halted):
        raise MachineDidNotHalt(f"machine did not halt on {triple.input!r}")
    q = evaluate_heat(heat_spec, triple.input, budget)
    le, li = len(triple.machine_code), len(triple.heat_code)
    return TutmHeatValue(q + le + li, q, le, li)


# -- the Kraft audit --------------------------------------------------------

SKIP_REASONS = ("machine-did-not-halt", "heat-did-not-halt", "heat-unparseable", "not-realizable")


@dataclass(frozen=True)
class FiberAudit:
    sum: Fraction  # sum of 2^-Q_U over admitted triples landing in the fiber
    member_count: int  # admitted triples
    pair_weight: Fraction  # sum of 2^-(l(e)+l(i)) over admitted pairs reaching the fiber
    pair_count: int
    max_pair_fiber_sum: Fraction  # largest single-pair sum of 2^-Q over the fiber
    exact: bool = True


@dataclass
class AuditReport:
    max_code_bits: int
    inputs: tuple[str, ...]
    budget: int
    fibers: dict[str, FiberAudit] = field(default_factory=dict)
    code_count: int = 0
    code_kraft: Fraction = Fraction(0)
    admitted_pairs: int = 0
    skipped: dict[str, int] = field(default_factory=lambda: dict.fromkeys(SKIP_REASONS, 0))

    def chain_holds(self) -> bool:
        """sum <= pair weight <= (machine Kraft)(heat Kraft) <= 1 on every fiber,
        with each admitted pair's own fiber sum <= 1."""
        cap = self.code_kraft * self.code_kraft
        return cap <= 1 and all(
            fa.sum <= fa.pair_weight <= cap and fa.max_pair_fiber_sum <= 1
            for fa in self.fibers.values()
        )


def _signature(args):
    specs, inputs, budget = args
    out = []
    for spec in specs:
        outputs, heats = [], []
        for x in inputs:
            r = run(spec, x, budget)
            if isinstance(r, Halted):
                outputs.append(r.output)
                try:
                    heats.append(decode_heat_value(r.output))
                except HeatOutputUnparseable:
                    heats.append("heat-unparseable")
            else:
                outputs.append(None)
                heats.append("heat-did-not-halt")
        out.append((tuple(outputs), tuple(heats)))
    return out


def _signatures(specs, inputs, budget, jobs):
    if jobs <= 1 or len(specs) < 2:
        return _signature((specs, inputs, budget))
    size = -(-len(specs) // jobs)
    chunks = [specs[i : i + size] for i in range(0, len(specs), size)]
    with ProcessPoolExecutor(jobs) as pool:
        return [sig for part in pool.map(_signature, [(c, inputs, budget) for c in chunks]) for sig in part]


def _length_lex(s: str):
    return (len(s), s)


def tutm_kraft_audit(
    max_code_bits: int, inputs: Iterable[str], budget: int, jobs: int = 1
) -> AuditReport:
    """Sum 2^-Q_U(e, i, x) per output fiber over all codes e, i of at most
    ``max_code_bits`` bits and all given inputs.

    Only triples where M_e halts, heat program i halts with a parseable value,
    and (M_e, Q_i) passes the fiber test on the probed inputs are admitted;
    everything else is counted in ``skipped``. Codes are grouped by their
    behaviour on the inputs, which leaves the exact sums unchanged.
    """
    inputs = tuple(sorted(set(inputs), key=_length_lex))
    if not inputs:
        return AuditReport(max_code_bits, inputs, budget)
    return audit_codes(list(_codes_upto(max_code_bits)), inputs, budget, jobs, max_code_bits)


def audit_codes(
    codes: list[tuple[str, MachineSpec]],
    inputs: Iterable[str],
    budget: int,
    jobs: int = 1,
    max_code_bits: int = -1,
) -> AuditReport:
    """The audit over an explicit list of ``(code, spec)`` pairs, used both as
    machine codes and as heat-program codes."""
    inputs = tuple(sorted(set(inputs), key=_length_lex))
    report = AuditReport(max_code_bits, inputs, budget)
    if not inputs:
        return report
    report.code_count = len(codes)
    report.code_kraft = kraft_sum(c for c, _ in codes)
    if not codes:
        return report

    sigs = _signatures([s for _, s in codes], inputs, budget, jobs)
    machine_groups: dict[tuple, int] = {}
    heat_groups: dict[tuple, int] = {}
    for (code, _), (outputs, heats) in zip(codes, sigs):
        machine_groups[outputs, len(code)] = machine_groups.get((outputs, len(code)), 0) + 1
        heat_groups[heats, len(code)] = heat_groups.get((heats, len(code)), 0) + 1

    totals: dict[str, list] = {}
    for (outputs, le), ce in machine_groups.items():
        for (heats, li), ci in heat_groups.items():
            pairs = ce * ci
            mapping, values = {}, {}
            for x, y, q in zip(inputs, outputs, heats):
                if y is None:
                    report.skipped["machine-did-not-halt"] += pairs
                elif isinstance(q, str):
                    report.skipped[q] += pairs
                else:
                    mapping[x], values[x] = y, q
            if not mapping:
                continue
            f, Q = FiniteFunction(mapping), HeatFunction(values)
            verdict = check_kraft_condition(f, Q)
            if not verdict.realizable:
                report.skipped["not-realizable"] += pairs * len(mapping)
                continue
            report.admitted_pairs += pairs
            weight = Fraction(pairs, 1 << (le + li))
            for y, xs in f.fibers().items():
                fiber_sum = verdict.per_fiber[y]
                acc = totals.setdefault(y, [Fraction(0), 0, Fraction(0), 0, Fraction(0), True])
                acc[0] += weight * fiber_sum
                acc[1] += pairs * len(xs)
                acc[2] += weight
                acc[3] += pairs
                acc[4] = max(acc[4], fiber_sum)
                acc[5] = acc[5] and verdict.exact
    for y in sorted(totals, key=_length_lex):
        report.fibers[y] = FiberAudit(*totals[y])
    return report


def audit_pair(
    machine: MachineSpec, heat_program: MachineSpec, inputs: Iterable[str], budget: int
) -> tuple[bool, dict[str, Fraction]]:
    """Fiber sums of 2^-Q_U for one (machine, heat program) pair.

    Returns the pair's realizability on the inputs where both halt, and the
    per-fiber sums over those inputs.
    """
    le, li = len(encode_machine(machine)), len(encode_machine(heat_program))
    mapping, values = {}, {}
    for x in sorted(set(inputs), key=_length_lex):
        r = run(machine, x, budget)
        if not isinstance(r, Halted):
            continue
        try:
            values[x] = evaluate_heat(heat_program, x, budget)
        except (HeatProgramDidNotHalt, HeatOutputUnparseable):
            continue
        mapping[x] = r.output
    verdict = check_kraft_condition(FiniteFunction(mapping), HeatFunction(values))
    scale = Fraction(1, 1 << (le + li))
    return verdict.realizable, {y: scale * z for y, z in verdict.per_fiber.items()}


# -- dominating heat vs. replicated heat ------------------------------------


@dataclass(frozen=True)
class GapRow:
    input: str
    output: str
    dominating_upper: int
    heat: Fraction
    machine_bits: int
    heat_bits: int

    @property
    def replicated(self) -> Fraction:
        return self.heat + self.machine_bits + self.heat_bits

    @property
    def gap(self) -> Fraction:
        return self.replicated - self.dominating_upper


def gap_report(
    machine: MachineSpec,
    heat_program: MachineSpec,
    inputs: Iterable[str],
    budget: EnumerationBudget,
) -> list[GapRow]:
    """Dominating-heat upper bound next to Q(x) + l(e) + l(i), per input.

    Reported only: the two sides differ by machine-dependent constants.
    """
    rows = []
    steps = budget.max_steps_per_program
    for x in sorted(set(inputs), key=_length_lex):
        bound = dominating_heat(machine, x, budget)
        value = tutm_heat(TutmTriple.from_specs(machine, heat_program, x), steps)
        rows.append(
            GapRow(x, bound.condition, bound.value_bits, value.heat, value.machine_bits, value.heat_bits)
        )
    return rows
