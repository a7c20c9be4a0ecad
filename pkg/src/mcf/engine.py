"""The Jacobi (m = 2) and Jacobi-Perron (general m) expansion engine.

One step maps a tuple of complete quotients (x1, ..., xm) to the integer
partial quotients a_i = floor(x_i) and the next tuple

    x1' = 1 / (xm - am),    xi' = (x_{i-1} - a_{i-1}) / (xm - am)   (i >= 2).

If the trailing coordinate is an integer the step is impossible: the
expansion records an interruption and continues on the leading (m-1)-tuple
at the same index; at dimension 1 an integral value ends the run (a rational
input, classical continued-fraction termination).

All arithmetic is exact for rational and algebraic inputs.  Oracle inputs
run in certified interval arithmetic: every emitted floor is tagged with the
enclosure width that certified it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    FieldMismatch,
    InputError,
    Interruption,
    NonTerminating,
)
from .exact_reals import (
    AlgebraicValue,
    FieldElement,
    IntervalOracle,
    OracleValue,
    RationalValue,
    RealValue,
    as_real,
    refinement_budget,
)
from .intervals import RationalInterval


# ---------------------------------------------------------------------------
# Partial quotients and admissibility
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PartialQuotients:
    """m integer sequences a^(1), ..., a^(m); lengths may differ after interruptions."""

    m: int
    seqs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.m < 1:
            raise InputError("dimension m must be >= 1")
        if len(self.seqs) != self.m:
            raise InputError(f"expected {self.m} sequences, got {len(self.seqs)}")
        object.__setattr__(self, "seqs", tuple(tuple(int(x) for x in s) for s in self.seqs))

    @staticmethod
    def from_lists(*seqs) -> "PartialQuotients":
        return PartialQuotients(len(seqs), tuple(tuple(s) for s in seqs))

    def entry(self, dim: int, n: int) -> int | None:
        """Quotient a_n^(dim), 1-based dim, or None past the end of that sequence."""
        s = self.seqs[dim - 1]
        return s[n] if 0 <= n < len(s) else None

    @property
    def rect_len(self) -> int:
        """Number of indices at which all m sequences are defined."""
        return min(len(s) for s in self.seqs)

    @property
    def is_rectangular(self) -> bool:
        return len({len(s) for s in self.seqs}) == 1


@dataclass(frozen=True)
class Violation:
    index: int
    dim: int | None
    rule: str
    message: str


@dataclass(frozen=True)
class AdmissibilityReport:
    m: int
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_admissible(pq: PartialQuotients) -> AdmissibilityReport:
    """Validate the Perron admissibility conditions for n >= 1.

    For every n >= 1: all entries are >= 0 and the leading quotient a_n^(1)
    is >= 1.  For each index n and coordinate i in 2..d(n) (d(n) = number of
    sequences still running at n), the comparison chain

        a_{n+t}^(i+t) <= a_{n+t}^(1+t),   t = 0, 1, ...

    must not fail; when the chain ties up to the step whose trailing active
    coordinate is reached, the entry after it must be >= 1.  For a
    rectangular m-dimensional prefix this is the standard lexicographic
    family (for m = 2: a_n >= b_n, and b_{n+1} >= 1 whenever a_n = b_n).
    Across an interruption the dimension shrinks and any chain that would
    propagate through the dropped coordinate's fractional part is void,
    since the algorithm never divides by it.  Index 0 is unconstrained,
    references past a sequence end are skipped, and an empty report
    certifies realizability by some real input.
    """
    m = pq.m
    found: dict[tuple[int, int | None, str], Violation] = {}

    def add(index: int, dim: int | None, rule: str, message: str) -> None:
        key = (index, dim, rule)
        if key not in found:
            found[key] = Violation(index, dim, rule, message)

    max_len = max(len(s) for s in pq.seqs)

    def active(n: int) -> int:
        return sum(1 for s in pq.seqs if n < len(s))

    for n in range(1, max_len):
        for j in range(1, m + 1):
            e = pq.entry(j, n)
            if e is not None and e < 0:
                add(n, j, "negative-entry", f"a_{n}^({j}) = {e} < 0")
        head = pq.entry(1, n)
        if head is not None and head < 1:
            add(n, 1, "head-not-positive", f"a_{n}^(1) = {head} < 1")
        for i in range(2, active(n) + 1):
            p, q, k = i, 1, n
            while True:
                left = pq.entry(p, k)
                right = pq.entry(q, k)
                if left is None or right is None or p > active(k):
                    break
                if left > right:
                    add(
                        k,
                        p,
                        "lex-order",
                        f"a_{k}^({p}) = {left} > a_{k}^({q}) = {right}"
                        f" (chain started at index {n}, coordinate {i})",
                    )
                    break
                if left < right:
                    break
                # tie: propagate through the step k -> k+1, whose active
                # trailing coordinate is r; a pair beyond r is unconstrained
                r = active(k + 1)
                if r == 0 or p > r:
                    break
                if p == r:
                    term = pq.entry(q + 1, k + 1)
                    if term is not None and term < 1:
                        add(
                            k + 1,
                            q + 1,
                            "lex-terminal",
                            f"a_{k+1}^({q+1}) = {term} < 1 after an all-tied chain"
                            f" from index {n}, coordinate {i}",
                        )
                    break
                p, q, k = p + 1, q + 1, k + 1
    violations = tuple(sorted(found.values(), key=lambda v: (v.index, v.dim or 0, v.rule)))
    return AdmissibilityReport(m=m, violations=violations)


def is_admissible(pq: PartialQuotients) -> bool:
    return check_admissible(pq).ok


# ---------------------------------------------------------------------------
# Computation modes (exact rational / exact algebraic / certified interval)
# ---------------------------------------------------------------------------


class _NeedsPrecision(Exception):
    """Internal: an interval operation straddled zero; retry at a deeper level."""


def _tidy(iv: RationalInterval) -> RationalInterval:
    """Outward-round to precision proportional to the interval's own width.

    Exact endpoint sizes double with every chained interval operation; this
    caps them near 2 log2(1/width) bits while adding rounding slack far
    below the genuine width, so soundness and level-nesting are preserved.
    """
    w = iv.width
    if w == 0:
        return iv
    bits = max(64, 2 * (w.denominator // w.numerator).bit_length() + 64)
    return iv.outward(bits)


class _IvVal:
    """Lazily refined interval value: at(level) is inclusion-monotone in level."""

    __slots__ = ("_fn", "_memo", "_tightest")

    def __init__(self, fn):
        self._fn = fn
        self._memo: dict[int, RationalInterval] = {}
        self._tightest: RationalInterval | None = None

    def at(self, level: int) -> RationalInterval:
        if level in self._memo:
            return self._memo[level]
        iv = self._fn(level)
        if self._tightest is not None:
            iv = iv.intersect(self._tightest)
        self._memo[level] = iv
        self._tightest = iv
        return iv

    @staticmethod
    def constant(v: Fraction) -> "_IvVal":
        point = RationalInterval.point(v)
        return _IvVal(lambda level: point)

    @staticmethod
    def from_oracle(oracle: IntervalOracle) -> "_IvVal":
        return _IvVal(lambda level: oracle.enclosure(level))

    @staticmethod
    def from_element(element: FieldElement) -> "_IvVal":
        def fn(level: int) -> RationalInterval:
            bits = 8 << min(level, 20)
            return element.interval(Fraction(1, 1 << bits))

        return _IvVal(fn)

    def sub_int(self, k: int) -> "_IvVal":
        return _IvVal(lambda level: self.at(level) - k)

    def recip(self) -> "_IvVal":
        def fn(level: int) -> RationalInterval:
            iv = self.at(level)
            if iv.lo <= 0 <= iv.hi:
                raise _NeedsPrecision
            return _tidy(iv.reciprocal())

        return _IvVal(fn)

    def mul(self, other: "_IvVal") -> "_IvVal":
        return _IvVal(lambda level: _tidy(self.at(level) * other.at(level)))


class _IvOracleAdapter(IntervalOracle):
    """Expose a derived _IvVal as a public oracle (for traces and step results)."""

    def __init__(self, val: _IvVal):
        super().__init__()
        self._val = val

    def _compute(self, level: int) -> RationalInterval:
        budget = refinement_budget()
        for probe in range(level, level + budget):
            try:
                return self._val.at(probe)
            except _NeedsPrecision:
                continue
        raise NonTerminating("interval enclosure not computable within budget")


class _RationalMode:
    def floor(self, v: Fraction):
        z = v.numerator // v.denominator
        return z, None

    def is_int(self, v: Fraction) -> bool | None:
        return v.denominator == 1

    def to_int(self, v: Fraction) -> int:
        return int(v)

    def sub_int(self, v: Fraction, k: int) -> Fraction:
        return v - k

    def recip(self, v: Fraction) -> Fraction:
        return 1 / v

    def mul(self, u: Fraction, v: Fraction) -> Fraction:
        return u * v

    def wrap(self, v: Fraction) -> RealValue:
        return RationalValue(v)


class _AlgebraicMode:
    def floor(self, v: FieldElement):
        return v.floor(), None

    def is_int(self, v: FieldElement) -> bool | None:
        return v.is_rational() and v.as_fraction().denominator == 1

    def to_int(self, v: FieldElement) -> int:
        return int(v.as_fraction())

    def sub_int(self, v: FieldElement, k: int) -> FieldElement:
        return v - k

    def recip(self, v: FieldElement) -> FieldElement:
        return v.inverse()

    def mul(self, u: FieldElement, v: FieldElement) -> FieldElement:
        return u * v

    def wrap(self, v: FieldElement) -> RealValue:
        return AlgebraicValue(v)


class _OracleMode:
    def floor(self, v: _IvVal):
        budget = refinement_budget()
        for level in range(budget):
            try:
                iv = v.at(level)
            except _NeedsPrecision:
                continue
            z = iv.floor_certified()
            if z is not None:
                return z, iv.width
        raise NonTerminating(f"oracle floor not certified within budget {budget}")

    def is_int(self, v: _IvVal) -> bool | None:
        return None  # undecidable; the floor/reciprocal machinery handles it

    def to_int(self, v: _IvVal) -> int:
        raise NonTerminating("exact integer extraction is impossible for oracles")

    def sub_int(self, v: _IvVal, k: int) -> _IvVal:
        return v.sub_int(k)

    def recip(self, v: _IvVal) -> _IvVal:
        return v.recip()

    def mul(self, u: _IvVal, v: _IvVal) -> _IvVal:
        return u.mul(v)

    def wrap(self, v: _IvVal) -> RealValue:
        return OracleValue(_IvOracleAdapter(v))


def _lower(values: list[RealValue]):
    """Choose the computation mode and convert inputs to its internal numbers."""
    if any(isinstance(v, OracleValue) for v in values):
        mode = _OracleMode()
        lowered = []
        for v in values:
            if isinstance(v, OracleValue):
                lowered.append(_IvVal.from_oracle(v.oracle))
            elif isinstance(v, AlgebraicValue):
                lowered.append(_IvVal.from_element(v.element))
            else:
                lowered.append(_IvVal.constant(v.value))
        return mode, lowered
    algebraics = [v for v in values if isinstance(v, AlgebraicValue)]
    if algebraics:
        fld = algebraics[0].element.field
        for v in algebraics[1:]:
            if not fld._same(v.element.field):
                raise FieldMismatch("all algebraic inputs must live in one number field")
        lowered = [
            v.element if isinstance(v, AlgebraicValue) else fld.element([v.value])
            for v in values
        ]
        return _AlgebraicMode(), lowered
    return _RationalMode(), [v.value for v in values]


# ---------------------------------------------------------------------------
# Expansion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InterruptionEvent:
    """Trailing complete quotient was the integer `value` at index `index`."""

    index: int
    dimension_after: int
    value: int


@dataclass(frozen=True)
class ExpansionRecord:
    pq: PartialQuotients
    interruptions: tuple[InterruptionEvent, ...]
    steps_requested: int
    terminated: bool
    trace: tuple[tuple[RealValue, ...], ...] | None = None
    floor_widths: tuple[tuple[Fraction | None, ...], ...] = field(default=None)


def jacobi_step(alpha, beta):
    """One exact Jacobi step: (a, b, alpha', beta') with a = floor(alpha), b = floor(beta).

    Raises Interruption when beta is an integer (decidable kinds); oracle
    inputs instead exhaust their budget if beta is secretly integral.
    """
    mode, (va, vb) = _lower([as_real(alpha), as_real(beta)])
    if mode.is_int(vb):
        raise Interruption(mode.to_int(vb))
    a, _ = mode.floor(va)
    b, _ = mode.floor(vb)
    den = mode.sub_int(vb, b)
    inv = mode.recip(den)
    alpha_next = inv
    beta_next = mode.mul(mode.sub_int(va, a), inv)
    return a, b, mode.wrap(alpha_next), mode.wrap(beta_next)


def expand(inputs, steps: int, keep_trace: bool = False) -> ExpansionRecord:
    """Run the Jacobi-Perron algorithm for up to `steps` indices.

    On an integral trailing complete quotient the value is stored as the
    final entry of its sequence, an interruption is recorded, and the run
    continues on the remaining coordinates at the same index.  The run ends
    early when the dimension reaches zero (fully rational input).
    """
    if steps < 0:
        raise InputError("steps must be >= 0")
    values = [as_real(x) for x in (inputs if isinstance(inputs, (list, tuple)) else [inputs])]
    m = len(values)
    if m < 1:
        raise InputError("at least one input value is required")
    mode, state = _lower(values)

    seqs: list[list[int]] = [[] for _ in range(m)]
    widths: list[list[Fraction | None]] = [[] for _ in range(m)]
    interruptions: list[InterruptionEvent] = []
    trace: list[tuple[RealValue, ...]] = []
    dim = m
    n = 0
    terminated = False

    while n < steps and dim >= 1:
        # integral trailing coordinate: emit it and drop a dimension
        while dim >= 1 and mode.is_int(state[dim - 1]):
            value = mode.to_int(state[dim - 1])
            seqs[dim - 1].append(value)
            widths[dim - 1].append(None)
            if dim == 1:
                terminated = True
            else:
                interruptions.append(InterruptionEvent(n, dim - 1, value))
            dim -= 1
            state = state[:dim]
        if terminated or dim == 0:
            terminated = True
            break

        if keep_trace:
            trace.append(tuple(mode.wrap(v) for v in state))

        floors = []
        for j in range(dim):
            a_j, w_j = mode.floor(state[j])
            floors.append(a_j)
            seqs[j].append(a_j)
            widths[j].append(w_j)

        den = mode.sub_int(state[dim - 1], floors[dim - 1])
        inv = mode.recip(den)
        new_state = [inv]
        for j in range(1, dim):
            new_state.append(mode.mul(mode.sub_int(state[j - 1], floors[j - 1]), inv))
        state = new_state
        n += 1

    pq = PartialQuotients(m, tuple(tuple(s) for s in seqs))
    return ExpansionRecord(
        pq=pq,
        interruptions=tuple(interruptions),
        steps_requested=steps,
        terminated=terminated,
        trace=tuple(trace) if keep_trace else None,
        floor_widths=tuple(tuple(w) for w in widths),
    )
