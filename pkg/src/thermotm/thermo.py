"""Heat functions of deterministic maps and their realizability.

Heat is measured in bits (k_B T = 1, logarithms base 2). A pair (f, Q) is
realizable iff every output fiber satisfies sum_{x: f(x)=y} 2^-Q(x) <= 1;
equivalently, no initial distribution makes

    <Q>_p + S(f_* p) - S(p)

negative. A violating fiber yields the Gibbs distribution p ~ 2^-Q on that
fiber, whose entropy production is exactly -log2 Z.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Optional

import numpy as np

from .ait import ComplexityBound, EnumerationBudget, k_upper
from .codec import KraftReport, is_prefix_set
from .errors import DomainMismatch, FiberNotViolating, FunctionParseError, MachineDidNotHalt
from .machine import Halted, MachineSpec, run

State = Hashable

# precisions (bits) tried when a fiber sum involves irrational powers of two
PRECISION_LADDER = (64, 256, 1024, 4096)


@dataclass(frozen=True)
class FiniteFunction:
    mapping: Mapping[State, State]

    @property
    def domain(self) -> list[State]:
        return list(self.mapping)

    def fibers(self) -> dict[State, list[State]]:
        """Preimages keyed by output, in order of first appearance."""
        out: dict[State, list[State]] = {}
        for x, y in self.mapping.items():
            out.setdefault(y, []).append(x)
        return out


@dataclass(frozen=True)
class HeatFunction:
    values: Mapping[State, Fraction]

    def __post_init__(self):
        object.__setattr__(
            self, "values", {x: Fraction(q) for x, q in self.values.items()}
        )

    def __getitem__(self, x):
        return self.values[x]

    @property
    def is_integral(self) -> bool:
        return all(q.denominator == 1 for q in self.values.values())


@dataclass(frozen=True)
class Distribution:
    probabilities: Mapping[State, Fraction]

    def __post_init__(self):
        probs = {x: Fraction(p) for x, p in self.probabilities.items()}
        if any(p < 0 for p in probs.values()):
            raise ValueError("probabilities must be nonnegative")
        if sum(probs.values()) != 1:
            raise ValueError("probabilities must sum to exactly 1")
        object.__setattr__(self, "probabilities", probs)

    @property
    def support(self) -> list[State]:
        return [x for x, p in self.probabilities.items() if p]


@dataclass(frozen=True)
class Witness:
    fiber: State
    distribution: Distribution
    entropy_production: float


@dataclass(frozen=True)
class RealizabilityVerdict:
    realizable: bool
    per_fiber: dict = field(default_factory=dict)
    witness: Optional[Witness] = None
    # False when some heat value is non-integral: per_fiber then holds
    # certified upper bounds rather than exact sums
    exact: bool = True
    decided: bool = True


# -- powers of two ----------------------------------------------------------


def _iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0."""
    if n < 2 or k == 1:
        return n
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def pow2_neg(q: Fraction) -> Fraction:
    """2^-q exactly; only defined for integral q."""
    q = Fraction(q)
    if q.denominator != 1:
        raise ValueError(f"2^-({q}) is irrational")
    n = int(q)
    return Fraction(1, 1 << n) if n >= 0 else Fraction(1 << -n)


def pow2_neg_bounds(q: Fraction, precision: int = 64) -> tuple[Fraction, Fraction]:
    """Rational (lo, hi) with lo <= 2^-q <= hi and hi - lo <= 2^-precision."""
    q = Fraction(q)
    if q.denominator == 1:
        v = pow2_neg(q)
        return v, v
    a, b = q.numerator, q.denominator
    scale = max(0, -(-a // b)) + precision
    # (2^scale * 2^(-a/b))^b = 2^(scale*b - a)
    n = _iroot(1 << (scale * b - a), b)
    return Fraction(n, 1 << scale), Fraction(n + 1, 1 << scale)


def _check_domains(f: FiniteFunction, Q: HeatFunction):
    if set(f.mapping) != set(Q.values):
        raise DomainMismatch("heat function and map must share a domain of definition")


def _fiber_bounds(f, Q, precision):
    return {
        y: (
            sum((pow2_neg_bounds(Q[x], precision)[0] for x in xs), Fraction(0)),
            sum((pow2_neg_bounds(Q[x], precision)[1] for x in xs), Fraction(0)),
        )
        for y, xs in f.fibers().items()
    }


# -- the fiber test ---------------------------------------------------------


def check_kraft_condition(f: FiniteFunction, Q: HeatFunction) -> RealizabilityVerdict:
    _check_domains(f, Q)
    if Q.is_integral:
        sums = {
            y: sum((pow2_neg(Q[x]) for x in xs), Fraction(0))
            for y, xs in f.fibers().items()
        }
        bad = [y for y, z in sums.items() if z > 1]
        if not bad:
            return RealizabilityVerdict(True, sums)
        return RealizabilityVerdict(False, sums, _witness(f, Q, bad[0]))

    for precision in PRECISION_LADDER:
        bounds = _fiber_bounds(f, Q, precision)
        upper = {y: hi for y, (lo, hi) in bounds.items()}
        if all(hi <= 1 for hi in upper.values()):
            return RealizabilityVerdict(True, upper, exact=False)
        bad = [y for y, (lo, hi) in bounds.items() if lo > 1]
        if bad:
            return RealizabilityVerdict(False, upper, _witness(f, Q, bad[0]), exact=False)
    # some fiber sum sits within 2^-4096 of 1: refuse to certify
    return RealizabilityVerdict(False, upper, exact=False, decided=False)


def _witness(f, Q, y) -> Witness:
    p = gibbs_witness(f, Q, y)
    return Witness(y, p, entropy_production(f, Q, p))


def gibbs_witness(f: FiniteFunction, Q: HeatFunction, y: State) -> Distribution:
    """p(x) = 2^-Q(x) / Z on the fiber of ``y``; requires Z > 1.

    With non-integral heat values the weights are rational upper bounds of
    2^-Q(x), so p is a rational approximation of the Gibbs distribution.
    """
    _check_domains(f, Q)
    fibers = f.fibers()
    if y not in fibers:
        raise DomainMismatch(f"{y!r} is not in the image of f")
    xs = fibers[y]
    for precision in PRECISION_LADDER:
        weights = {x: pow2_neg_bounds(Q[x], precision) for x in xs}
        lo = sum((w[0] for w in weights.values()), Fraction(0))
        hi = sum((w[1] for w in weights.values()), Fraction(0))
        if hi <= 1:
            raise FiberNotViolating(f"fiber {y!r} has Kraft sum {hi} <= 1")
        if lo > 1:
            break
    else:
        raise FiberNotViolating(f"fiber {y!r} has Kraft sum within 2^-4096 of 1")
    z = hi
    return Distribution({x: w[1] / z for x, w in weights.items()})


# -- entropy production -----------------------------------------------------


def _log2(v: Fraction) -> float:
    return math.log2(v.numerator) - math.log2(v.denominator)


def shannon_entropy(probs: Iterable[Fraction]) -> float:
    return -sum(float(p) * _log2(p) for p in probs if p)


def pushforward(f: FiniteFunction, p: Distribution) -> dict[State, Fraction]:
    out: dict[State, Fraction] = {}
    for x, px in p.probabilities.items():
        y = f.mapping[x]
        out[y] = out.get(y, Fraction(0)) + px
    return out


def entropy_production(f: FiniteFunction, Q: HeatFunction, p: Distribution) -> float:
    """<Q>_p + S(f_* p) - S(p), in bits."""
    missing = [x for x in p.probabilities if x not in f.mapping or x not in Q.values]
    if missing:
        raise DomainMismatch(f"distribution puts mass outside the domain: {missing!r}")
    mean_heat = sum((px * Q[x] for x, px in p.probabilities.items()), Fraction(0))
    s_out = shannon_entropy(pushforward(f, p).values())
    s_in = shannon_entropy(p.probabilities.values())
    return float(mean_heat) + s_out - s_in


def sample_entropy_productions(
    f: FiniteFunction, Q: HeatFunction, count: int, rng: np.random.Generator
) -> np.ndarray:
    """Entropy production for ``count`` random rational distributions.

    Weights are random integers (about a quarter of them zeroed, to hit
    boundary faces of the simplex); evaluated in float64 for speed.
    """
    _check_domains(f, Q)
    xs = f.domain
    fibers = list(f.fibers())
    index = {y: j for j, y in enumerate(fibers)}
    lump = np.zeros((len(xs), len(fibers)))
    for i, x in enumerate(xs):
        lump[i, index[f.mapping[x]]] = 1.0
    heat = np.array([float(Q[x]) for x in xs])

    w = rng.integers(1, 1 << 16, size=(count, len(xs))).astype(float)
    w[rng.random(w.shape) < 0.25] = 0.0
    empty = w.sum(axis=1) == 0
    w[empty, rng.integers(0, len(xs), size=int(empty.sum()))] = 1.0
    p = w / w.sum(axis=1, keepdims=True)

    def entropy(m):
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(m > 0, -m * np.log2(m), 0.0)
        return terms.sum(axis=1)

    return p @ heat + entropy(p @ lump) - entropy(p)


# -- dominating heat --------------------------------------------------------


def dominating_heat(
    M: MachineSpec, x: str, budget: EnumerationBudget, jobs: int = 1
) -> ComplexityBound:
    """Anytime upper bound on K(x | M(x)); M gets the per-program step budget."""
    result = run(M, x, budget.max_steps_per_program)
    if not isinstance(result, Halted):
        raise MachineDidNotHalt(f"machine did not halt on {x!r} within {result.steps_executed} steps")
    return k_upper(x, result.output, budget, jobs=jobs)


def audit_dominating_kraft(
    M: MachineSpec, inputs: Iterable[str], budget: EnumerationBudget, jobs: int = 1
) -> dict[str, KraftReport]:
    """Per output fiber, the Kraft sum of 2^-bound over the given inputs."""
    witnesses: dict[str, list] = {}
    for x in sorted(set(inputs), key=lambda s: (len(s), s)):
        bound = dominating_heat(M, x, budget, jobs=jobs)
        witnesses.setdefault(bound.condition, []).append(bound)
    report = {}
    for y in sorted(witnesses, key=lambda s: (len(s), s)):
        bounds = witnesses[y]
        report[y] = KraftReport(
            sum((pow2_neg(b.value_bits) for b in bounds), Fraction(0)),
            len(bounds),
            is_prefix_set(b.witness for b in bounds),
        )
    return report


# -- text format ------------------------------------------------------------


def parse_function(text: str) -> tuple[FiniteFunction, HeatFunction]:
    """Parse ``x -> y : Q=<rational>`` records, one per line."""
    mapping: dict[str, str] = {}
    heat: dict[str, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        lhs, arrow, rest = line.partition("->")
        target, colon, q = rest.partition(":")
        q = q.strip()
        x, y = lhs.strip(), target.strip()
        if not arrow or not colon or not q.startswith("Q=") or not x or not y:
            raise FunctionParseError(f"expected 'x -> y : Q=<rational>', got {line!r}", lineno)
        if x in mapping:
            raise FunctionParseError(f"duplicate record for {x!r}", lineno)
        try:
            value = Fraction(q[2:].strip())
        except (ValueError, ZeroDivisionError):
            raise FunctionParseError(f"bad heat value {q[2:]!r}", lineno) from None
        mapping[x] = y
        heat[x] = value
    return FiniteFunction(mapping), HeatFunction(heat)


def format_function(f: FiniteFunction, Q: HeatFunction) -> str:
    return "".join(f"{x} -> {y} : Q={Q[x]}\n" for x, y in f.mapping.items())
