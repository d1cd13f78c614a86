"""Command-line workbench.

Every command prints either JSON records (one per line, the default) or a
plain table. Output depends only on the arguments.

Exit codes: 0 success, 3 timeout / machine did not halt, 4 bad input
(parse errors, violated preconditions), 5 I/O failure.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import ait, codec, machine, thermo, tutm, utm
from .ait import EnumerationBudget
from .errors import (
    BudgetTooSmall,
    FiberNotViolating,
    FunctionParseError,
    MachineDidNotHalt,
    MachineParseError,
    MalformedCode,
)

EXIT_OK = 0
EXIT_TIMEOUT = 3
EXIT_INPUT = 4
EXIT_IO = 5


class Abort(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def frac(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def real(v: float) -> str:
    return format(v, ".12g")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise Abort(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None


def _load_machine(path: str) -> machine.MachineSpec:
    try:
        return machine.parse_machine(_read(path))
    except MachineParseError as exc:
        raise Abort(EXIT_INPUT, f"{path}: {exc}") from None


def _check_bits(value: str, what: str) -> str:
    if any(c not in "01" for c in value):
        raise Abort(EXIT_INPUT, f"{what} must be a bit string, got {value!r}")
    return value


def _result_record(result) -> dict:
    if isinstance(result, machine.Halted):
        return {"status": "halted", "output": result.output, "steps": result.steps}
    return {"status": "still-running", "steps": result.steps_executed}


def _code_record(bits: str) -> dict:
    hexstr, nbits = codec.bits_to_hex(bits)
    return {"hex": hexstr, "nbits": nbits}


def _table(rows: list[dict]) -> list[str]:
    if not rows:
        return []
    keys = list(rows[0])
    cells = [[str(r.get(k, "")) for k in keys] for r in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    lines = ["  ".join(k.ljust(w) for k, w in zip(keys, widths)).rstrip()]
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    return lines


def _flatten(record: dict) -> dict:
    return {k: (json.dumps(v, separators=(",", ":")) if isinstance(v, (dict, list)) else v) for k, v in record.items()}


class Emitter:
    def __init__(self, fmt: str, output: str | None):
        self.fmt = fmt
        self.output = output
        self.records: list[dict] = []
        self.raw: str | None = None

    def add(self, record: dict):
        self.records.append(record)

    def finish(self):
        if self.raw is not None:
            text = self.raw
        elif self.fmt == "table":
            text = "".join(line + "\n" for line in _table([_flatten(r) for r in self.records]))
        else:
            text = "".join(json.dumps(r, separators=(", ", ": ")) + "\n" for r in self.records)
        if self.output:
            try:
                Path(self.output).write_text(text)
            except OSError as exc:
                raise Abort(EXIT_IO, f"cannot write {self.output}: {exc.strerror or exc}") from None
        else:
            click.echo(text, nl=False)


def _common(f):
    f = click.option("--format", "fmt", type=click.Choice(["records", "table"]), default="records",
                     show_default=True, help="Structured JSON lines or a readable table.")(f)
    f = click.option("--output", "-o", type=str, default=None, help="Write to this file instead of stdout.")(f)
    return f


def _jobs(f):
    return click.option("--jobs", "-j", type=click.IntRange(min=1), default=1, show_default=True,
                        help="Worker processes; results do not depend on it.")(f)


def _budget(f):
    f = click.option("--max-bits", type=click.IntRange(min=0), default=20, show_default=True,
                     help="Longest program (bits) to enumerate.")(f)
    f = click.option("--max-steps", type=click.IntRange(min=0), default=10_000, show_default=True,
                     help="Step budget per program.")(f)
    return f


def _execute(fmt, output, body):
    emitter = Emitter(fmt, output)
    try:
        code = body(emitter) or EXIT_OK
        emitter.finish()
    except Abort as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.code)
    sys.exit(code)


@click.group()
def main():
    """Turing machines, complexity bounds and thermodynamic realizability."""


@main.command("run")
@click.argument("machine_file")
@click.argument("input", default="")
@click.option("--max-steps", type=click.IntRange(min=0), default=10_000, show_default=True)
@_common
def cmd_run(machine_file, input, max_steps, fmt, output):
    """Run MACHINE_FILE on INPUT."""

    def body(out):
        spec = _load_machine(machine_file)
        result = machine.run(spec, _check_bits(input, "input"), max_steps)
        out.add({"command": "run", "input": input, "max_steps": max_steps, **_result_record(result)})
        return EXIT_OK if isinstance(result, machine.Halted) else EXIT_TIMEOUT

    _execute(fmt, output, body)


@main.command("utm")
@click.argument("input", default="")
@click.option("--machine", "machine_file", help="Machine file to encode and simulate.")
@click.option("--code", help="Machine code as ASCII bits.")
@click.option("--hex", "hexcode", help="Machine code as hex (needs --nbits).")
@click.option("--nbits", type=click.IntRange(min=0), help="Bit length of --hex.")
@click.option("--max-steps", type=click.IntRange(min=0), default=10_000, show_default=True)
@_common
def cmd_utm(input, machine_file, code, hexcode, nbits, max_steps, fmt, output):
    """Simulate a machine given by its code on INPUT."""

    def body(out):
        sources = [s for s in (machine_file, code, hexcode) if s is not None]
        if len(sources) != 1:
            raise Abort(EXIT_INPUT, "give exactly one of --machine, --code, --hex")
        if machine_file is not None:
            bits = codec.encode_machine(_load_machine(machine_file))
        elif code is not None:
            bits = _check_bits(code, "--code")
        else:
            if nbits is None:
                raise Abort(EXIT_INPUT, "--hex needs --nbits")
            try:
                bits = codec.hex_to_bits(hexcode, nbits)
            except ValueError as exc:
                raise Abort(EXIT_INPUT, str(exc)) from None
        try:
            result = utm.universal_run(bits, _check_bits(input, "input"), max_steps)
        except MalformedCode as exc:
            raise Abort(EXIT_INPUT, f"malformed machine code: {exc}") from None
        out.add({"command": "utm", "code": _code_record(bits), "input": input,
                 "max_steps": max_steps, **_result_record(result)})
        return EXIT_OK if isinstance(result, machine.Halted) else EXIT_TIMEOUT

    _execute(fmt, output, body)


def _bound_record(bound: ait.ComplexityBound) -> dict:
    return {
        "flavor": bound.flavor.value,
        "x": bound.target,
        "y": bound.condition,
        "max_program_length": bound.budget.max_program_length,
        "max_steps_per_program": bound.budget.max_steps_per_program,
        "value_bits": bound.value_bits,
        "witness": _code_record(bound.witness),
    }


@main.command("kolmo")
@click.argument("x")
@click.option("--condition", "-y", default="", help="Conditioning string (default empty).")
@click.option("--flavor", type=click.Choice(["prefix", "plain"]), default="prefix", show_default=True)
@click.option("--sweep", is_flag=True, help="CSV of bounds for program lengths 0..max-bits.")
@_budget
@_jobs
@_common
def cmd_kolmo(x, condition, flavor, sweep, max_bits, max_steps, jobs, fmt, output):
    """Upper-bound the complexity of X given --condition."""

    def body(out):
        _check_bits(x, "x")
        _check_bits(condition, "condition")
        search = ait.k_upper if flavor == "prefix" else ait.c_upper
        if sweep:
            budgets = [EnumerationBudget(n, max_steps) for n in range(max_bits + 1)]
            kind = ait.Flavor.PREFIX if flavor == "prefix" else ait.Flavor.PLAIN
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["max_program_length", "max_steps_per_program", "value_bits", "witness_hex", "witness_nbits"])
            for budget, bound in zip(budgets, ait.bound_sequence(x, condition, budgets, kind, jobs=jobs)):
                if bound is None:
                    writer.writerow([budget.max_program_length, max_steps, "", "", ""])
                else:
                    hexstr, n = codec.bits_to_hex(bound.witness)
                    writer.writerow([budget.max_program_length, max_steps, bound.value_bits, hexstr, n])
            out.raw = buf.getvalue()
            return EXIT_OK
        budget = EnumerationBudget(max_bits, max_steps)
        try:
            bound = search(x, condition, budget, jobs=jobs)
        except BudgetTooSmall:
            out.add({"flavor": flavor, "x": x, "y": condition, "max_program_length": max_bits,
                     "max_steps_per_program": max_steps, "error": "budget-too-small"})
            return EXIT_OK
        out.add(_bound_record(bound))

    _execute(fmt, output, body)


def _load_function(path):
    try:
        return thermo.parse_function(_read(path))
    except FunctionParseError as exc:
        raise Abort(EXIT_INPUT, f"{path}: {exc}") from None


def _witness_record(f, Q, w: thermo.Witness) -> dict:
    return {
        "fiber": w.fiber,
        "distribution": {str(x): frac(p) for x, p in w.distribution.probabilities.items()},
        "entropy_production": real(w.entropy_production),
    }


@main.command("check")
@click.argument("function_file")
@_common
def cmd_check(function_file, fmt, output):
    """Decide realizability of the map and heat function in FUNCTION_FILE."""

    def body(out):
        f, Q = _load_function(function_file)
        verdict = thermo.check_kraft_condition(f, Q)
        record = {
            "command": "check",
            "realizable": verdict.realizable,
            "exact": verdict.exact,
            "decided": verdict.decided,
            "fibers": [{"fiber": y, "kraft_sum": frac(z)} for y, z in verdict.per_fiber.items()],
        }
        if verdict.witness is not None:
            record["witness"] = _witness_record(f, Q, verdict.witness)
        out.add(record)

    _execute(fmt, output, body)


@main.command("witness")
@click.argument("function_file")
@click.option("--fiber", "fibers", multiple=True, help="Output label; default: every violating fiber.")
@_common
def cmd_witness(function_file, fibers, fmt, output):
    """Gibbs distributions with negative entropy production."""

    def body(out):
        f, Q = _load_function(function_file)
        labels = list(fibers)
        if not labels:
            verdict = thermo.check_kraft_condition(f, Q)
            labels = [y for y, z in verdict.per_fiber.items() if z > 1]
        for y in labels:
            try:
                p = thermo.gibbs_witness(f, Q, y)
            except (FiberNotViolating, thermo.DomainMismatch) as exc:
                raise Abort(EXIT_INPUT, str(exc)) from None
            w = thermo.Witness(y, p, thermo.entropy_production(f, Q, p))
            out.add({"command": "witness", **_witness_record(f, Q, w)})

    _execute(fmt, output, body)


@main.command("domheat")
@click.argument("machine_file")
@click.argument("inputs", nargs=-1)
@click.option("--all-up-to", type=click.IntRange(min=0), default=None,
              help="Also use every input of at most this length.")
@click.option("--audit", is_flag=True, help="Emit per-fiber Kraft sums of the bounds.")
@click.option("--heat", "heat_file", default=None,
              help="Heat-program machine file; emit the gap against Q(x) + l(e) + l(i).")
@_budget
@_jobs
@_common
def cmd_domheat(machine_file, inputs, all_up_to, audit, heat_file, max_bits, max_steps, jobs, fmt, output):
    """Upper bounds on the dominating heat K(x | M(x))."""

    def body(out):
        spec = _load_machine(machine_file)
        xs = [_check_bits(x, "input") for x in inputs]
        if all_up_to is not None:
            xs += _all_strings(all_up_to)
        xs = sorted(set(xs), key=lambda s: (len(s), s))
        budget = EnumerationBudget(max_bits, max_steps)
        try:
            if heat_file is not None:
                heat_spec = _load_machine(heat_file)
                for row in tutm.gap_report(spec, heat_spec, xs, budget):
                    out.add({"command": "domheat-gap", "x": row.input, "y": row.output,
                             "dominating_upper": row.dominating_upper, "heat": frac(row.heat),
                             "machine_bits": row.machine_bits, "heat_bits": row.heat_bits,
                             "replicated": frac(row.replicated), "gap": frac(row.gap)})
            elif audit:
                report = thermo.audit_dominating_kraft(spec, xs, budget, jobs=jobs)
                for y, kr in report.items():
                    out.add({"command": "domheat-audit", "fiber": y, "kraft_sum": frac(kr.sum),
                             "member_count": kr.member_count, "is_prefix": kr.is_prefix})
            else:
                for x in xs:
                    bound = thermo.dominating_heat(spec, x, budget, jobs=jobs)
                    out.add({"command": "domheat", **_bound_record(bound)})
        except MachineDidNotHalt as exc:
            raise Abort(EXIT_TIMEOUT, str(exc)) from None
        except BudgetTooSmall as exc:
            raise Abort(EXIT_TIMEOUT, str(exc)) from None
        except (tutm.HeatProgramDidNotHalt,) as exc:
            raise Abort(EXIT_TIMEOUT, str(exc)) from None
        except tutm.HeatOutputUnparseable as exc:
            raise Abort(EXIT_INPUT, f"heat output unparseable: {exc}") from None

    _execute(fmt, output, body)


def _all_strings(max_len: int) -> list[str]:
    return ["".join(p) for n in range(max_len + 1) for p in itertools.product("01", repeat=n)]


def read_inputs_file(text: str) -> list[str]:
    """One bit string per line; ``-`` stands for the empty string."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "-":
            line = ""
        if any(c not in "01" for c in line):
            raise Abort(EXIT_INPUT, f"line {lineno}: not a bit string: {line!r}")
        out.append(line)
    return out


@main.command("tutm-audit")
@click.option("--max-code-bits", type=click.IntRange(min=0), required=True)
@click.option("--inputs", "inputs_file", default=None, help="File of inputs, one per line ('-' = empty).")
@click.option("--max-input-length", type=click.IntRange(min=0), default=None,
              help="Use every input of at most this length.")
@click.option("--budget", type=click.IntRange(min=0), default=1000, show_default=True,
              help="Step budget for machines and heat programs.")
@_jobs
@_common
def cmd_tutm_audit(max_code_bits, inputs_file, max_input_length, budget, jobs, fmt, output):
    """Per-fiber sums of 2^-Q_U over all small (machine, heat program, input) triples."""

    def body(out):
        xs: list[str] = []
        if inputs_file is not None:
            xs += read_inputs_file(_read(inputs_file))
        if max_input_length is not None:
            xs += _all_strings(max_input_length)
        report = tutm.tutm_kraft_audit(max_code_bits, xs, budget, jobs=jobs)
        for y, fa in report.fibers.items():
            out.add({"command": "tutm-audit", "fiber": y, "sum": frac(fa.sum),
                     "triple_count": fa.member_count, "pair_count": fa.pair_count,
                     "pair_weight": frac(fa.pair_weight), "max_pair_fiber_sum": frac(fa.max_pair_fiber_sum),
                     "exact": fa.exact})
        out.add({"command": "tutm-audit-summary", "max_code_bits": max_code_bits,
                 "inputs": len(report.inputs), "budget": budget, "codes": report.code_count,
                 "code_kraft": frac(report.code_kraft), "admitted_pairs": report.admitted_pairs,
                 "skipped": report.skipped, "chain_holds": report.chain_holds()})

    _execute(fmt, output, body)


if __name__ == "__main__":
    main()
