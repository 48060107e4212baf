"""Iteration of the slope map: orbits, fixed slopes, monotonicity, attractors."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .complex import corner_spec
from .pullback import _as_pillow, slope_map
from .slopes import (
    PERIPHERAL,
    ExtendedSlope,
    Peripheral,
    Slope,
    complexity,
    enumerate_slopes,
    format_slope,
    normalize_slope,
)

__all__ = [
    "FixedPoint",
    "PeripheralEnd",
    "Cycle",
    "BudgetExceeded",
    "OrbitRecord",
    "Violation",
    "AttractorReport",
    "RelationReport",
    "orbit",
    "fixed_slopes",
    "monotonicity_scan",
    "attractor",
    "relation_check_3x3",
    "certified_mode",
]


@dataclass(frozen=True)
class FixedPoint:
    slope: Slope

    def __str__(self):
        return f"fixed point {format_slope(self.slope)}"


@dataclass(frozen=True)
class PeripheralEnd:
    def __str__(self):
        return "peripheral"


@dataclass(frozen=True)
class Cycle:
    period: int
    slopes: tuple = ()

    def __str__(self):
        return f"cycle of period {self.period}"


@dataclass(frozen=True)
class BudgetExceeded:
    def __str__(self):
        return "budget exceeded"


Terminal = Union[FixedPoint, PeripheralEnd, Cycle, BudgetExceeded]


@dataclass(frozen=True)
class OrbitRecord:
    start: ExtendedSlope
    states: tuple
    terminal: Terminal

    def lines(self):
        return [f"{k}\t{format_slope(x)}" for k, x in enumerate(self.states)]


def orbit(pillow, x: ExtendedSlope, max_steps: int = 100, offset: Optional[Fraction] = None) -> OrbitRecord:
    """Iterate the slope map from ``x`` until a state repeats or the symbol is hit.

    ``states`` ends with the first repeated state (so a fixed point appears
    twice), or with the peripheral symbol.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    pillow = _as_pillow(pillow)
    states = [x]
    if isinstance(x, Peripheral):
        return OrbitRecord(x, tuple(states), PeripheralEnd())
    seen = {x: 0}
    cur = x
    for _ in range(max_steps):
        cur = slope_map(pillow, cur, offset)
        states.append(cur)
        if isinstance(cur, Peripheral):
            return OrbitRecord(x, tuple(states), PeripheralEnd())
        if cur in seen:
            period = len(states) - 1 - seen[cur]
            if period == 1:
                return OrbitRecord(x, tuple(states), FixedPoint(cur))
            return OrbitRecord(x, tuple(states), Cycle(period, tuple(states[seen[cur]:-1])))
        seen[cur] = len(states) - 1
    return OrbitRecord(x, tuple(states), BudgetExceeded())


def fixed_slopes(pillow, max_complexity: int, offset: Optional[Fraction] = None) -> list:
    """Rational slopes of complexity at most ``max_complexity`` fixed by the slope map."""
    pillow = _as_pillow(pillow)
    return [x for x in enumerate_slopes(max_complexity) if slope_map(pillow, x, offset) == x]


def certified_mode(pillow) -> bool:
    spec = _as_pillow(pillow).spec
    return spec.n == 2 and spec.n_h >= 1 and spec.n_v >= 1


@dataclass(frozen=True)
class Violation:
    slope: Slope
    image: ExtendedSlope
    kind: str  # "increase", "no-decrease" or "equal-not-fixed"

    def __str__(self):
        return f"{format_slope(self.slope)} -> {format_slope(self.image)} ({self.kind})"


def monotonicity_scan(pillow, max_complexity: int) -> list:
    """Complexity obligations that fail on the scanned range.

    Records every increase, every non-decrease above complexity 8, and
    every non-fixed slope whose image has the same complexity.
    """
    pillow = _as_pillow(pillow)
    out = []
    for x in enumerate_slopes(max_complexity):
        y = slope_map(pillow, x)
        cx, cy = complexity(x), complexity(y)
        if cy > cx:
            out.append(Violation(x, y, "increase"))
        elif cy == cx and cx > 8:
            out.append(Violation(x, y, "no-decrease"))
        elif cy == cx and y != x:
            out.append(Violation(x, y, "equal-not-fixed"))
    return out


@dataclass
class AttractorReport:
    fixed_slopes: list
    scanned_bound: int
    monotonicity_violations: list
    attractor_certified: bool
    certified_mode: bool
    orbit_targets: dict = field(default_factory=dict)  # terminal description -> count
    escaped: list = field(default_factory=list)  # sampled starts that missed the set

    @property
    def attractor(self) -> list:
        return list(self.fixed_slopes) + [PERIPHERAL]

    def to_dict(self) -> dict:
        return {
            "certified": self.attractor_certified,
            "certified_mode": self.certified_mode,
            "scanned_bound": self.scanned_bound,
            "attractor": [format_slope(x) for x in self.attractor],
            "violations": [str(v) for v in self.monotonicity_violations],
            "orbit_targets": dict(sorted(self.orbit_targets.items())),
            "escaped": [format_slope(x) for x in self.escaped],
        }


def _sample(sample_bound: int, samples: Optional[int], seed: int):
    pool = enumerate_slopes(sample_bound)
    if samples is None or samples >= len(pool):
        return pool
    return random.Random(seed).sample(pool, samples)


def attractor(pillow, max_complexity: int = 30, sample_bound: int = 20,
              samples: Optional[int] = 100, seed: int = 0) -> AttractorReport:
    """Attractor candidates and, for ``n = 2`` with both flap kinds, a certificate.

    Certified mode takes the fixed slopes of complexity at most 8 plus the
    peripheral symbol; the certificate needs a clean monotonicity scan up
    to ``max_complexity`` and every sampled orbit ending in that set.
    Otherwise only the observed orbit targets are reported.
    """
    pillow = _as_pillow(pillow)
    certified_ok = certified_mode(pillow)
    starts = _sample(sample_bound, samples, seed)
    targets = {}
    finals = []
    for x in starts:
        rec = orbit(pillow, x, max_steps=complexity(x) + 10)
        key = str(rec.terminal) if not isinstance(rec.terminal, FixedPoint) else format_slope(rec.terminal.slope)
        targets[key] = targets.get(key, 0) + 1
        finals.append((x, rec))
    if not certified_ok:
        return AttractorReport([], max_complexity, [], False, False, targets, [])
    fixed = fixed_slopes(pillow, 8)
    violations = monotonicity_scan(pillow, max_complexity)
    allowed = set(fixed)
    escaped = [
        x for x, rec in finals
        if not (isinstance(rec.terminal, PeripheralEnd) or
                (isinstance(rec.terminal, FixedPoint) and rec.terminal.slope in allowed))
    ]
    certified = not violations and not escaped
    return AttractorReport(fixed, max_complexity, violations, certified, True, targets, escaped)


@dataclass
class RelationReport:
    passed: bool
    checked: int
    skipped: int
    counterexamples: list  # (x, mu(x), x', predicted, actual)

    def __bool__(self):
        return self.passed


def relation_check_3x3(pillow=None, bound: int = 40) -> RelationReport:
    """Check ``mu(r/s) = r'/s'  =>  mu(r/(s+24r)) = r'/(s'+22r')`` up to ``bound``.

    Slopes whose image is peripheral are skipped and counted.
    """
    pillow = _as_pillow(corner_spec(3) if pillow is None else pillow)
    if pillow.spec != corner_spec(3):
        raise ValueError("the relation is stated for the 3x3 map with flaps at B only")
    checked = skipped = 0
    bad = []
    for x in enumerate_slopes(bound):
        y = slope_map(pillow, x)
        if isinstance(y, Peripheral):
            skipped += 1
            continue
        x2 = normalize_slope(x.r, x.s + 24 * x.r)
        want = normalize_slope(y.r, y.s + 22 * y.r)
        got = slope_map(pillow, x2)
        checked += 1
        if got != want:
            bad.append((x, y, x2, want, got))
    return RelationReport(not bad, checked, skipped, bad)
