"""End-to-end acceptance checks, one recorded line per criterion."""
import itertools
import json
import math
import os
import random
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from thermotm.ait import (
    C_COPY,
    C_LIT,
    EnumerationBudget,
    Flavor,
    bound_sequence,
    literal_ceiling,
    revalidate,
)
from thermotm.codec import (
    elias_gamma,
    encode_machine,
    is_prefix_set,
    iter_machine_codes,
    iter_machines,
    kraft_sum,
    machine_code_length,
    machine_count,
    nat_to_string,
    string_to_nat,
)
from thermotm.errors import FiberNotViolating
from thermotm.machine import MachineSpec, Move, Symbol, Transition, run
from thermotm.thermo import (
    Distribution,
    FiniteFunction,
    HeatFunction,
    audit_dominating_kraft,
    check_kraft_condition,
    dominating_heat,
    entropy_production,
    gibbs_witness,
    sample_entropy_productions,
)
from thermotm.tutm import TutmTriple, constant_heat_program, gap_report, tutm_kraft_audit, tutm_run
from thermotm.utm import universal_run
from thermotm.zoo import ZOO, erasure_machine, halt_machine, identity_machine

from test_codec import random_machine

ROOT = Path(__file__).resolve().parent.parent
STEPS = 1000


def strings_upto(n):
    return ["".join(p) for k in range(n + 1) for p in itertools.product("01", repeat=k)]


# -- 1. universality --------------------------------------------------------

INPUTS4 = strings_upto(4)
HEAT_CODES = [encode_machine(halt_machine()), encode_machine(constant_heat_program(0))]


def check_universal(specs):
    count = 0
    for spec in specs:
        code = encode_machine(spec)
        heat = HEAT_CODES[count % len(HEAT_CODES)]
        for x in INPUTS4:
            direct = run(spec, x, STEPS)
            assert universal_run(code, x, STEPS) == direct, (code, x)
            assert tutm_run(TutmTriple(code, heat, x), STEPS) == direct, (code, x)
        count += 1
    return count


@pytest.mark.criterion("1-universality")
def test_universality_small(criterion):
    n1 = check_universal(iter_machines(1))
    n2 = check_universal(iter_machines(2))
    assert n1 + n2 == machine_count(1) + machine_count(2)
    rng = random.Random(20240611)
    sample = list(itertools.islice(iter_machines(3), 2000))
    sample += [random_machine(rng, 3) for _ in range(5000)]
    n3 = check_universal(sample)
    criterion(
        f"exhaustive n<=2 ({n1 + n2} machines) and {n3} of {machine_count(3)} 3-state machines "
        f"x {len(INPUTS4)} inputs; full 3-state sweep is the slow variant"
    )


@pytest.mark.slow
@pytest.mark.criterion("1-universality-exhaustive-n3")
def test_universality_exhaustive(criterion):
    n = check_universal(iter_machines(3))
    assert n == machine_count(3)
    criterion(f"all {n} 3-state machines x {len(INPUTS4)} inputs")


# -- 2. fiber test vs. Gibbs witness ----------------------------------------

GRID = (-1, 0, 1, 2)


@pytest.mark.criterion("2-fiber-test-equivalence")
def test_fiber_test_equivalence(criterion):
    rng = np.random.default_rng(11)
    instances = failing = 0
    worst = math.inf
    for n in range(1, 5):
        xs = list(range(n))
        for images in itertools.product(xs, repeat=n):
            f = FiniteFunction(dict(zip(xs, images)))
            for heats in itertools.product(GRID, repeat=n):
                Q = HeatFunction(dict(zip(xs, heats)))
                instances += 1
                z = {}
                for x, y in zip(xs, images):
                    z[y] = z.get(y, Fraction(0)) + Fraction(2) ** -heats[x]
                verdict = check_kraft_condition(f, Q)
                assert verdict.per_fiber == z
                bad = [y for y, v in z.items() if v > 1]
                assert verdict.realizable == (not bad)
                if bad:
                    failing += 1
                    for y in bad:
                        p = gibbs_witness(f, Q, y)
                        assert all(
                            p.probabilities[x] == Fraction(2) ** -heats[x] / z[y] for x in f.fibers()[y]
                        )
                        sigma = entropy_production(f, Q, p)
                        assert sigma < 0
                        assert abs(sigma + math.log2(z[y])) <= 1e-9
                else:
                    for y in z:
                        with pytest.raises(FiberNotViolating):
                            gibbs_witness(f, Q, y)
                    sigma = sample_entropy_productions(f, Q, 1000, rng)
                    worst = min(worst, float(sigma.min()))
                    assert sigma.min() >= -1e-9
    criterion(
        f"{instances} instances, {failing} violating with exact witnesses; "
        f"min sampled production on realizable ones {worst:.3g}"
    )


# -- 3. Landauer ------------------------------------------------------------


@pytest.mark.criterion("3-landauer")
def test_landauer(criterion):
    f = FiniteFunction({"0": "", "1": ""})
    v = check_kraft_condition(f, HeatFunction({"0": 1, "1": 1}))
    assert v.realizable and v.per_fiber == {"": 1}
    uniform = Distribution({"0": Fraction(1, 2), "1": Fraction(1, 2)})
    sigma = entropy_production(f, HeatFunction({"0": 1, "1": 1}), uniform)
    assert abs(sigma) <= 1e-9
    v0 = check_kraft_condition(f, HeatFunction({"0": 0, "1": 0}))
    assert not v0.realizable
    assert v0.witness.entropy_production == -1.0
    criterion(f"Q=1: sum {v.per_fiber['']}, production {sigma:g}; Q=0: production {v0.witness.entropy_production:g}")


# -- 4. anytime complexity --------------------------------------------------

FIXED = [
    "", "0", "1", "00", "01", "10", "11", "000", "010", "101", "0000", "0101",
    "1111", "0110", "00000", "10101", "000000", "010101", "111000", "100110",
]
LADDER = [EnumerationBudget(n, 20 * (n + 1)) for n in range(0, 25, 2)]


@pytest.mark.criterion("4-anytime-complexity")
def test_anytime_complexity(criterion):
    assert len(FIXED) == 20 and all(len(x) <= 6 for x in FIXED)
    checked = 0
    for x in FIXED:
        for flavor in (Flavor.PREFIX, Flavor.PLAIN):
            seq = bound_sequence(x, "", LADDER, flavor)
            values = [b.value_bits for b in seq if b is not None]
            assert values, x
            # once found, never lost and never rising
            first = next(i for i, b in enumerate(seq) if b is not None)
            assert all(b is not None for b in seq[first:])
            assert all(a >= b for a, b in zip(values, values[1:]))
            for b in seq[first:]:
                assert revalidate(b)
                checked += 1
            ceiling = len(x) + 2 * int(math.floor(math.log2(len(x) + 1))) + C_LIT
            assert ceiling == literal_ceiling(x)
            assert values[-1] <= ceiling
    criterion(f"20 strings x 2 flavors over {len(LADDER)} budgets; {checked} witnesses revalidated; c_lit={C_LIT}")


# -- 5. dominating heat -----------------------------------------------------

DOM_BUDGET = EnumerationBudget(16, 200)


@pytest.mark.criterion("5-dominating-heat")
def test_dominating_heat(criterion):
    worst = max(dominating_heat(identity_machine(), x, DOM_BUDGET).value_bits for x in INPUTS4)
    assert worst <= C_COPY
    report = audit_dominating_kraft(erasure_machine(), INPUTS4, DOM_BUDGET)
    assert list(report) == [""]
    r = report[""]
    assert r.member_count == len(INPUTS4) and r.is_prefix and r.sum <= 1

    gaps = {}
    for name, machine, q in [("identity", identity_machine(), 0), ("erasure", erasure_machine(), 5)]:
        rows = gap_report(machine, constant_heat_program(q), INPUTS4, DOM_BUDGET)
        print(f"\ngap report: {name}, Q={q}")
        print("x       y       dom_upper  replicated  gap")
        for row in rows:
            print(f"{row.input or '-':7} {row.output or '-':7} {row.dominating_upper:9}  {str(row.replicated):10}  {row.gap}")
        gaps[name] = (min(r.gap for r in rows), max(r.gap for r in rows))
    criterion(
        f"identity max bound {worst} <= c_copy={C_COPY}; erasure fiber sum {r.sum} over {r.member_count} inputs; "
        + "; ".join(f"{k} gap {lo}..{hi}" for k, (lo, hi) in gaps.items())
    )


# -- 6. TUTM audit ----------------------------------------------------------


@pytest.mark.criterion("6-tutm-audit")
def test_tutm_audit(criterion):
    inputs = strings_upto(3)
    previous = {}
    for bits in (0, 1, 18, 20):
        report = tutm_kraft_audit(bits, inputs, STEPS)
        sums = {y: fa.sum for y, fa in report.fibers.items()}
        assert all(fa.exact for fa in report.fibers.values())
        assert all(s <= 1 for s in sums.values())
        assert all(sums.get(y, 0) >= s for y, s in previous.items())
        assert report.chain_holds()
        for fa in report.fibers.values():
            assert fa.sum <= fa.pair_weight <= report.code_kraft**2 <= 1
            assert fa.max_pair_fiber_sum <= 1
        previous = sums
    largest = max(sums.values())
    criterion(
        f"B=20: {report.code_count} codes (Kraft {report.code_kraft}), {report.admitted_pairs} admitted pairs, "
        f"{len(sums)} fibers, largest sum {float(largest):.3g}; chain holds"
    )


# -- 7. codec ---------------------------------------------------------------


@pytest.mark.criterion("7-codec")
def test_codec_soundness(criterion):
    codes = [c for c, _ in iter_machine_codes(18)]
    assert len(codes) == machine_count(1) + machine_count(2)
    rng = random.Random(5)
    sample = {encode_machine(random_machine(rng, 3)) for _ in range(20_000)}
    sample |= {encode_machine(m) for m in itertools.islice(iter_machines(3), 5000)}
    assert is_prefix_set(codes + sorted(sample))
    assert all(len(c) == machine_code_length(3) for c in sample)
    # each 3-state transition field occupies a fixed window: varying one slot
    # changes exactly that window, so distinct machines get distinct codes
    base = random_machine(rng, 3)
    base_code = encode_machine(base)
    width = 2 + 2 + 2  # next state, symbol, move
    header = len(elias_gamma(3))
    for slot in range(6):
        seen = set()
        for q, sym, move in itertools.product(range(3), Symbol, Move):
            transitions = list(base.transitions)
            transitions[slot] = Transition(q, sym, move)
            code = encode_machine(MachineSpec(3, tuple(transitions)))
            lo, hi = header + slot * width, header + (slot + 1) * width
            assert code[:lo] == base_code[:lo] and code[hi:] == base_code[hi:]
            seen.add(code[lo:hi])
        assert len(seen) == 27

    prev = None
    for n in range(1_000_000):
        s = nat_to_string(n)
        assert string_to_nat(s) == n
        if prev is not None:
            assert (len(prev), prev) < (len(s), s)
        prev = s
    assert nat_to_string(0) == "" and len(prev) == 19

    assert kraft_sum(codes) == Fraction(1, 2) + Fraction(machine_count(2), 2**18) <= 1
    total = sum(Fraction(machine_count(n), 2 ** machine_code_length(n)) for n in (1, 2, 3))
    assert total <= 1
    gammas = [elias_gamma(n) for n in range(1, 5000)]
    assert is_prefix_set(gammas) and kraft_sum(gammas) <= 1
    criterion(
        f"prefix-free: exhaustive n<=2, {len(sample)} sampled 3-state codes, per-field injectivity n=3; "
        f"nat bijection 10^6; Kraft n<=3 = {float(total):.6f}"
    )


@pytest.mark.slow
@pytest.mark.criterion("7-codec-exhaustive-n3")
def test_codec_exhaustive(criterion):
    prev = ""
    count = 0
    for spec in iter_machines(3):
        code = encode_machine(spec)
        assert code > prev  # fixed width and strictly increasing: distinct, prefix-free
        prev = code
        count += 1
    assert count == machine_count(3)
    criterion(f"all {count} 3-state codes distinct and equal-length")


# -- 8. reproducibility -----------------------------------------------------

M = ROOT / "data" / "machines"
F = ROOT / "data" / "functions"
COMMANDS = [
    (["run", M / "flip-all.tm", "0110"], False),
    (["run", M / "oscillator.tm", "0", "--max-steps", "200"], False),
    (["utm", "0101", "--machine", M / "bit-flip.tm"], False),
    (["kolmo", "0101", "--max-bits", "12", "--max-steps", "200"], True),
    (["kolmo", "1001", "-y", "0110", "--max-bits", "20", "--max-steps", "200"], True),
    (["kolmo", "011", "--sweep", "--max-bits", "10", "--flavor", "plain"], True),
    (["check", F / "erasure3-violating.txt"], False),
    (["witness", F / "erasure2-free.txt"], False),
    (["domheat", M / "erasure.tm", "--all-up-to", "2", "--max-bits", "12"], True),
    (["domheat", M / "erasure.tm", "--all-up-to", "2", "--audit", "--max-bits", "12"], True),
    (["domheat", M / "identity.tm", "01", "--heat", M / "heat-const-0.tm"], True),
    (["tutm-audit", "--max-code-bits", "18", "--max-input-length", "2", "--budget", "200"], True),
    (["tutm-audit", "--max-code-bits", "1", "--max-input-length", "3", "--format", "table"], True),
]


def cli(args, seed):
    env = dict(os.environ, PYTHONHASHSEED=str(seed))
    proc = subprocess.run(
        [sys.executable, "-m", "thermotm.cli", *map(str, args)], capture_output=True, env=env, cwd=ROOT
    )
    return proc.returncode, proc.stdout, proc.stderr


@pytest.mark.criterion("8-reproducibility")
def test_cli_byte_determinism(criterion):
    runs = 0
    for args, parallel in COMMANDS:
        first = cli(args, 0)
        assert first[0] in (0, 3), (args, first[2])
        assert first[1]
        variants = [cli(args, 12345)]
        if parallel:
            variants.append(cli([*args, "--jobs", "2"], 777))
        for v in variants:
            assert v == first, args
        runs += 1 + len(variants)
    criterion(f"{len(COMMANDS)} commands, {runs} runs; identical bytes across hash seeds and --jobs 1/2")
