"""Extended slopes r/s (plus the peripheral symbol) and their arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Union

__all__ = [
    "Slope",
    "Peripheral",
    "PERIPHERAL",
    "ExtendedSlope",
    "normalize_slope",
    "complexity",
    "intersection_curves",
    "intersection_curve_arc",
    "enumerate_slopes",
    "parse_slope",
    "format_slope",
]


@dataclass(frozen=True, order=True)
class Slope:
    """A reduced rational slope ``r/s`` with ``s >= 0`` (``1/0`` is infinity).

    Construct through :func:`normalize_slope` unless the pair is already
    reduced; the constructor validates but never rewrites.
    """

    r: int
    s: int

    def __post_init__(self):
        if self.s < 0:
            raise ValueError(f"denominator must be nonnegative, got {self.s}")
        if self.s == 0 and self.r != 1:
            raise ValueError("the slope with s = 0 is written 1/0")
        if gcd(abs(self.r), self.s) != 1:
            raise ValueError(f"{self.r}/{self.s} is not reduced")

    @property
    def is_infinite(self) -> bool:
        return self.s == 0

    def __str__(self) -> str:
        return format_slope(self)


class Peripheral:
    """The peripheral symbol. There is exactly one instance, ``PERIPHERAL``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "PERIPHERAL"

    def __str__(self) -> str:
        return "peripheral"

    def __reduce__(self):
        return (Peripheral, ())


PERIPHERAL = Peripheral()

ExtendedSlope = Union[Slope, Peripheral]


def normalize_slope(r: int, s: int) -> Slope:
    """Reduce ``(r, s)`` to the normal form with ``s >= 0``.

    >>> normalize_slope(4, 6)
    Slope(r=2, s=3)
    >>> normalize_slope(-3, 0)
    Slope(r=1, s=0)
    """
    r, s = int(r), int(s)
    if r == 0 and s == 0:
        raise ValueError("(0, 0) is not a slope")
    if s == 0:
        return Slope(1, 0)
    g = gcd(r, s)
    r, s = r // g, s // g
    if s < 0:
        r, s = -r, -s
    return Slope(r, s)


def complexity(x: ExtendedSlope) -> int:
    """``|r| + s`` for a rational slope and 0 for the peripheral symbol."""
    if isinstance(x, Peripheral):
        return 0
    return abs(x.r) + x.s


def _require_rational(*xs):
    for x in xs:
        if not isinstance(x, Slope):
            raise ValueError("intersection numbers need rational slopes")


def _det(x: Slope, y: Slope) -> int:
    return abs(x.r * y.s - x.s * y.r)


def intersection_curves(x: Slope, y: Slope) -> int:
    """Geometric intersection number of two essential curves."""
    _require_rational(x, y)
    return 2 * _det(x, y)


def intersection_curve_arc(x: Slope, y: Slope) -> int:
    """Intersection of the curve of slope ``x`` with a core arc of slope ``y``."""
    _require_rational(x, y)
    return _det(x, y)


def enumerate_slopes(max_complexity: int, include_peripheral: bool = False) -> list:
    """All reduced slopes of complexity at most ``max_complexity``.

    Ordered by complexity, then by ``r``. The peripheral symbol goes last
    when requested.
    """
    if max_complexity < 1:
        raise ValueError("max_complexity must be at least 1")
    out: list = []
    for k in range(1, max_complexity + 1):
        # s = k - |r|; r runs over -k..k
        for r in range(-k, k + 1):
            s = k - abs(r)
            if s == 0:
                if r == 1:
                    out.append(Slope(1, 0))
                continue
            if gcd(abs(r), s) == 1:
                out.append(Slope(r, s))
    if include_peripheral:
        out.append(PERIPHERAL)
    return out


def parse_slope(text: str) -> ExtendedSlope:
    """Parse ``"r/s"``, ``"r"``, ``"inf"`` or ``"o"`` (also ``"peripheral"``)."""
    t = text.strip().lower().replace("−", "-")
    if t in ("o", "peripheral", "⊙"):
        return PERIPHERAL
    if t in ("inf", "infinity", "∞", "1/0"):
        return Slope(1, 0)
    try:
        if "/" in t:
            a, b = t.split("/")
            return normalize_slope(int(a), int(b))
        return normalize_slope(int(t), 1)
    except ValueError as exc:
        raise ValueError(f"malformed slope {text!r}") from exc


def format_slope(x: ExtendedSlope) -> str:
    if isinstance(x, Peripheral):
        return "peripheral"
    return f"{x.r}/{x.s}"
