"""Preimages of simple closed geodesics under a flapped Lattes map.

A slope ``r/s`` is represented by the straight line ``r*u - s*v = c`` in the
plane (``c`` a small positive offset) pushed down to the pillow.  Its pieces
inside the two 0-tiles are the *base chords*.  Every 1-tile receives a copy
of the base chords of its colour through its chart; matching chord ends
across glued sides assembles the pullback components.

A component is classified by collapsing its flap excursions onto the
underlying pillow and lifting the result to the plane: the deck
transformation relating the two ends of the lift is a translation for an
essential curve and a point reflection (or the identity) otherwise.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import NamedTuple, Optional, Union

from .complex import (
    CORNER_XY,
    VERTEX_LABELS,
    Color,
    EdgeAddress,
    FlappedPillow,
    PillowSpec,
    Side,
    SpecError,
    Sym,
    build_pillow,
    orbifold_signature,
    side_point,
)
from .slopes import PERIPHERAL, ExtendedSlope, Peripheral, Slope, normalize_slope

__all__ = [
    "BaseChordSets",
    "Chord",
    "Essential",
    "AroundVertex",
    "NullHomotopic",
    "DeckHolonomy",
    "SheetFrame",
    "PullbackComponent",
    "Crossing",
    "canonical_geodesic",
    "default_offset",
    "pullback_components",
    "collapse_flap_excursions",
    "holonomy_of_loop",
    "classify_holonomy",
    "classify_component",
    "slope_map",
    "thurston_coefficient",
    "is_obstruction",
    "ObstructionReport",
    "eliminate_obstruction",
    "PullbackError",
    "side_count_oracle",
    "oracle_classification",
    "classify_loop",
    "geodesic_edge_sequence",
    "alternation_holds",
    "touches_every_horizontal_edge",
    "geodesic_crossings",
]


class PullbackError(RuntimeError):
    """Chord ends failed to match across a gluing (an internal bug)."""


def default_offset(n: int) -> Fraction:
    return Fraction(1, 2 * n + 1)


# ---------------------------------------------------------------- base chords


@dataclass(frozen=True)
class BaseChordSets:
    """Pieces of the geodesic of slope ``slope`` inside the two 0-tiles.

    Each chord is a pair of ends ``(side, t)`` in pillow coordinates.
    """

    slope: Slope
    offset: Fraction
    white: tuple
    black: tuple
    reference_chord: int = 0

    def chords(self, color: Color):
        return self.white if color is Color.WHITE else self.black

    def endpoints_on(self, edge: str):
        """All chord ends (as parameters) on the pillow edge ``a``, ``b``, ``c`` or ``d``."""
        side = {"a": Side.S, "b": Side.E, "c": Side.N, "d": Side.W}[edge]
        out = set()
        for chords in (self.white, self.black):
            for end0, end1 in chords:
                for s, t in (end0, end1):
                    if s == side:
                        out.add(t)
        return sorted(out)


def _line_ends(r, s, sign, vn, vd):
    """Boundary points of ``r x + sign*s y = vn/vd`` on the unit square."""
    pts = []

    def add(side, num, den):
        if den < 0:
            num, den = -num, -den
        if 0 < num < den:
            pts.append((side, Fraction(num, den)))

    if r:
        add(Side.S, vn, vd * r)
        add(Side.N, vn - sign * s * vd, vd * r)
    if s:
        add(Side.W, vn, vd * sign * s)
        add(Side.E, vn - r * vd, vd * sign * s)
    if len(pts) != 2:
        raise PullbackError(f"line r={r} s={s} v={vn}/{vd} meets the square in {len(pts)} points")
    return tuple(sorted(pts))


def _values(lo, hi, cn, cd):
    """Numerators ``v`` (over ``cd``) of ``+-c + 2k`` strictly between ``lo`` and ``hi``."""
    out = []
    for base in (cn, -cn):
        # smallest k with base + 2k*cd > lo*cd
        k = (lo * cd - base) // (2 * cd) + 1
        v = base + 2 * k * cd
        while v < hi * cd:
            out.append(v)
            v += 2 * cd
    return sorted(out)


@lru_cache(maxsize=4096)
def canonical_geodesic(x: Slope, n: int = 2, offset: Optional[Fraction] = None) -> BaseChordSets:
    """Base chords of the geodesic ``r u - s v = offset`` (default ``1/(2n+1)``)."""
    if not isinstance(x, Slope):
        raise ValueError("canonical_geodesic needs a rational slope")
    c = default_offset(n) if offset is None else Fraction(offset)
    if not 0 < c < 1:
        raise ValueError("offset must lie strictly between 0 and 1")
    r, s = x.r, x.s
    sets = []
    for sign in (-1, 1):  # white: r x - s y ; black: r x + s y
        corner_vals = [r * px + sign * s * py for px, py in CORNER_XY.values()]
        vals = _values(min(corner_vals), max(corner_vals), c.numerator, c.denominator)
        sets.append(tuple(sorted(_line_ends(r, s, sign, v, c.denominator) for v in vals)))
    return BaseChordSets(x, c, sets[0], sets[1])


# ---------------------------------------------------------------- holonomy


@dataclass(frozen=True)
class DeckHolonomy:
    """The deck transformation ``z -> sign*z + w``."""

    sign: int
    w: tuple

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.w[0] % 2 or self.w[1] % 2:
            raise ValueError(f"translation {self.w} is not in 2Z^2")

    def __call__(self, z):
        return (self.sign * z[0] + self.w[0], self.sign * z[1] + self.w[1])

    def compose(self, other: "DeckHolonomy") -> "DeckHolonomy":
        """``self o other``."""
        a, b = other.w
        return DeckHolonomy(self.sign * other.sign, (self.sign * a + self.w[0], self.sign * b + self.w[1]))

    @classmethod
    def identity(cls) -> "DeckHolonomy":
        return cls(1, (0, 0))


@dataclass(frozen=True)
class SheetFrame:
    """Plane isometry ``z -> sign * sigma(z) + t``, sigma optionally conjugation.

    Written as the diagonal matrix ``diag(sign, sign * (-1 if conjugate))``.
    """

    conjugate: bool = False
    sign: int = 1
    t: tuple = (0, 0)

    @property
    def diag(self):
        return (self.sign, -self.sign if self.conjugate else self.sign)

    def __call__(self, z):
        mx, my = self.diag
        return (mx * z[0] + self.t[0], my * z[1] + self.t[1])

    @classmethod
    def from_diag(cls, mx, my, t):
        return cls(mx != my, mx, tuple(t))

    def then_reflect(self, edge: str) -> "SheetFrame":
        """``self o R`` for the reflection of the unit square across ``edge``."""
        rx, ry, ox, oy = _REFLECTIONS[edge]
        mx, my = self.diag
        return SheetFrame.from_diag(mx * rx, my * ry, (mx * ox + self.t[0], my * oy + self.t[1]))

    def inverse(self) -> "SheetFrame":
        mx, my = self.diag
        return SheetFrame.from_diag(mx, my, (-mx * self.t[0], -my * self.t[1]))

    def compose(self, other: "SheetFrame") -> "SheetFrame":
        mx, my = self.diag
        nx, ny = other.diag
        return SheetFrame.from_diag(mx * nx, my * ny, (mx * other.t[0] + self.t[0], my * other.t[1] + self.t[1]))


# reflection z -> (rx*x + ox, ry*y + oy) across the pillow edge
_REFLECTIONS = {"a": (1, -1, 0, 0), "c": (1, -1, 0, 2), "d": (-1, 1, 0, 0), "b": (-1, 1, 2, 0)}
FRONT_FRAME = SheetFrame()
BACK_FRAME = SheetFrame.from_diag(-1, 1, (0, 0))


class Crossing(NamedTuple):
    """Passage from ``tile`` through ``side`` into ``to_tile`` (entering at ``to_side``)."""

    tile: int
    side: Side
    to_tile: int
    to_side: Side


def holonomy_of_loop(pillow: FlappedPillow, trace, start_tile: int) -> DeckHolonomy:
    """Deck element of a closed base trace starting in base tile ``start_tile``.

    Only crossings of the pillow edges change the frame; the trace must be
    cyclically closed and use base tiles only.
    """
    side = pillow.tiles[start_tile].kind.side
    frame = FRONT_FRAME if side == 0 else BACK_FRAME
    start = frame
    cur = start_tile
    equator = pillow.equator_slots
    for cr in trace:
        if cr.tile != cur:
            raise PullbackError("trace is not contiguous")
        edge = equator.get((cr.tile, cr.side))
        if edge is not None:
            frame = frame.then_reflect(edge)
            side = 1 - side
        cur = cr.to_tile
    if cur != start_tile:
        raise PullbackError("trace does not close")
    if side != pillow.tiles[start_tile].kind.side:
        raise PullbackError("trace returns on the wrong sheet")
    g = frame.compose(start.inverse())
    mx, my = g.diag
    if mx != my:
        raise PullbackError("holonomy is orientation reversing")
    return DeckHolonomy(mx, g.t)


@dataclass(frozen=True)
class Essential:
    slope: Slope

    def __str__(self):
        return f"essential {self.slope}"


@dataclass(frozen=True)
class AroundVertex:
    vertex: str

    def __str__(self):
        return f"peripheral around {self.vertex}"


@dataclass(frozen=True)
class NullHomotopic:
    def __str__(self):
        return "peripheral null-homotopic"


Classification = Union[Essential, AroundVertex, NullHomotopic]


def classify_holonomy(h: DeckHolonomy) -> Classification:
    a, b = h.w[0] // 2, h.w[1] // 2
    if h.sign == -1:
        return AroundVertex(VERTEX_LABELS[(a % 2, b % 2)])
    if a == 0 and b == 0:
        return NullHomotopic()
    if gcd(a, b) != 1:
        raise PullbackError(f"translation {h.w} is not twice a primitive vector")
    return Essential(normalize_slope(b, a))


# ---------------------------------------------------------------- components


@dataclass(frozen=True)
class Chord:
    tile: int
    entry: tuple  # (Side, Fraction)
    exit: tuple
    source_chord_id: int


class PullbackComponent:
    """One connected component of the preimage, as a closed chord cycle."""

    def __init__(self, pillow, tiles, srcs, ends, scale, classification, degree, crossings, excursions):
        self._pillow = pillow
        self.tile_ids = tiles  # per chord
        self._srcs = srcs
        self._ends = ends  # per chord: ((side, tnum), (side, tnum)) in travel order
        self._scale = scale
        self.classification = classification
        self.degree = degree
        self.crossings = crossings  # Crossing after each chord
        self.flap_excursions = excursions

    @property
    def chords(self):
        d = self._scale
        return [
            Chord(t, (a[0], Fraction(a[1], d)), (b[0], Fraction(b[1], d)), src)
            for t, src, (a, b) in zip(self.tile_ids, self._srcs, self._ends)
        ]

    def __len__(self):
        return len(self.tile_ids)

    @property
    def essential(self) -> bool:
        return isinstance(self.classification, Essential)

    @property
    def slope(self) -> Optional[Slope]:
        return self.classification.slope if self.essential else None

    def flap_layers(self, pillow=None):
        """Set of ``(flap_id, layer)`` pairs whose lower tile the curve visits."""
        p = pillow or self._pillow
        out = set()
        for t in self.tile_ids:
            kind = p.tiles[t].kind
            if not p.tiles[t].is_base:
                out.add((kind.flap_id, kind.layer))
        return out

    def record(self) -> dict:
        return {
            "classification": str(self.classification),
            "degree": self.degree,
            "chords": len(self),
            "flap_excursions": self.flap_excursions,
        }

    def __repr__(self):
        return f"<PullbackComponent {self.classification} degree={self.degree} chords={len(self)}>"


def _side_maps(sym: Sym):
    """For each 0-tile side: (local side, reversed?) of its preimage under ``sym``."""
    out = {}
    for side in Side:
        a = sym(*side_point(side, 0))
        b = sym(*side_point(side, 1))
        for s0 in Side:
            if side_point(s0, 0) == a and side_point(s0, 1) == b:
                out[s0] = (side, False)
            elif side_point(s0, 0) == b and side_point(s0, 1) == a:
                out[s0] = (side, True)
    return out


_SIDE_MAPS = {sym: _side_maps(sym) for sym in Sym.all()}


def _instantiate(pillow: FlappedPillow, base: BaseChordSets):
    """Copies of the base chords in every tile, with integer side parameters."""
    scale = 1
    for chords in (base.white, base.black):
        for end0, end1 in chords:
            scale = lcm(scale, end0[1].denominator, end1[1].denominator)
    num = {}
    for color in (Color.WHITE, Color.BLACK):
        num[color] = [
            ((a[0], int(a[1] * scale)), (b[0], int(b[1] * scale))) for a, b in base.chords(color)
        ]
    tiles, srcs, ends = [], [], []
    for tile in pillow.tiles:
        smap = _SIDE_MAPS[tile.chart]
        for k, (a, b) in enumerate(num[tile.color]):
            sa, ra = smap[a[0]]
            sb, rb = smap[b[0]]
            tiles.append(tile.id)
            srcs.append(k)
            ends.append(((sa, scale - a[1] if ra else a[1]), (sb, scale - b[1] if rb else b[1])))
    return scale, tiles, srcs, ends


def _trace(pillow: FlappedPillow, scale, tiles, srcs, ends):
    """Group chord instances into closed cycles.  Yields (order, crossings)."""
    at = {}
    for idx, (t, e) in enumerate(zip(tiles, ends)):
        for k in (0, 1):
            side, tn = e[k]
            key = (t, side, tn)
            if key in at:
                raise PullbackError("two chords share an endpoint")
            at[key] = (idx, k)
    gluing = pillow.gluing
    seen = bytearray(len(tiles))
    cycles = []
    for start in range(len(tiles)):
        if seen[start]:
            continue
        order, flips, crossings = [], [], []
        idx, k_in = start, 0
        while True:
            seen[idx] = 1
            order.append(idx)
            flips.append(k_in)
            t = tiles[idx]
            side, tn = ends[idx][1 - k_in]
            u, side2, flip = gluing[(t, side)]
            key = (u, side2, scale - tn if flip else tn)
            try:
                nxt, k_nxt = at[key]
            except KeyError:
                raise PullbackError(f"no chord continues at tile {u} side {side2.name}") from None
            crossings.append(Crossing(t, side, u, side2))
            if nxt == start:
                if k_nxt != 0:
                    raise PullbackError("cycle closes with the wrong orientation")
                break
            if seen[nxt]:
                raise PullbackError("chord cycles merge")
            idx, k_in = nxt, k_nxt
        cycles.append((order, flips, crossings))
    return cycles


def collapse_flap_excursions(pillow: FlappedPillow, crossings):
    """Replace flap excursions of a closed crossing sequence by base crossings.

    Returns ``(start_tile, base_trace, excursion_count)``.  Raises
    ``ValueError`` when the loop never visits a base tile.
    """
    tiles = pillow.tiles
    m = len(crossings)
    first = None
    for k, cr in enumerate(crossings):
        if tiles[cr.tile].is_base:
            first = k
            break
    if first is None:
        raise ValueError("loop lies inside a flap stack")
    rotated = crossings[first:] + crossings[:first]
    out = []
    entry = None
    excursions = 0
    for cr in rotated:
        src_base = tiles[cr.tile].is_base
        dst_base = tiles[cr.to_tile].is_base
        if src_base and dst_base:
            out.append(cr)
        elif src_base:
            entry = cr
            excursions += 1
        elif dst_base:
            if (cr.to_tile, cr.to_side) != (entry.tile, entry.side):
                out.append(Crossing(entry.tile, entry.side, cr.to_tile, cr.to_side))
            entry = None
    if entry is not None or len(rotated) != m:
        raise PullbackError("unterminated flap excursion")
    return rotated[0].tile, out, excursions


def classify_loop(pillow: FlappedPillow, crossings):
    """Classification and excursion count of a closed crossing sequence."""
    try:
        start, base_trace, exc = collapse_flap_excursions(pillow, crossings)
    except ValueError:
        return NullHomotopic(), 0
    return classify_holonomy(holonomy_of_loop(pillow, base_trace, start)), exc


def classify_component(pillow: FlappedPillow, component: PullbackComponent) -> Classification:
    return classify_loop(pillow, component.crossings)[0]


_PILLOW_CACHE: dict = {}


def _as_pillow(p) -> FlappedPillow:
    if isinstance(p, FlappedPillow):
        return p
    if isinstance(p, PillowSpec):
        if p not in _PILLOW_CACHE:
            _PILLOW_CACHE[p] = build_pillow(p)
        return _PILLOW_CACHE[p]
    raise TypeError("expected a FlappedPillow or PillowSpec")


def pullback_components(pillow, x: Slope, offset: Optional[Fraction] = None, checks: bool = True):
    """All components of the preimage of the geodesic of slope ``x``.

    With ``checks`` on, degree conservation, the black reference count and
    the slope agreement of essential components are asserted.
    """
    pillow = _as_pillow(pillow)
    if not isinstance(x, Slope):
        raise ValueError("pullback_components needs a rational slope")
    base = canonical_geodesic(x, pillow.n, offset)
    scale, tiles, srcs, ends = _instantiate(pillow, base)
    color_of = [pillow.tiles[t].color for t in tiles]
    out = []
    for order, flips, crossings in _trace(pillow, scale, tiles, srcs, ends):
        ctiles = [tiles[i] for i in order]
        csrcs = [srcs[i] for i in order]
        cends = [ends[i] if k == 0 else (ends[i][1], ends[i][0]) for i, k in zip(order, flips)]
        white = sum(1 for i in order if srcs[i] == base.reference_chord and color_of[i] is Color.WHITE)
        black = sum(1 for i in order if srcs[i] == base.reference_chord and color_of[i] is Color.BLACK)
        if white != black:
            raise PullbackError(f"reference chords disagree on the degree ({white} vs {black})")
        cls, exc = classify_loop(pillow, crossings)
        out.append(PullbackComponent(pillow, ctiles, csrcs, cends, scale, cls, white, crossings, exc))
    if checks:
        _check_components(pillow, x, out)
    return out


def _check_components(pillow, x, comps):
    total = sum(c.degree for c in comps)
    if total != pillow.spec.degree:
        raise PullbackError(f"degrees sum to {total}, expected {pillow.spec.degree}")
    slopes = {c.slope for c in comps if c.essential}
    if len(slopes) > 1:
        raise PullbackError(f"essential pullbacks of {x} disagree: {sorted(map(str, slopes))}")
    spec = pillow.spec
    if spec.n_h >= 1 and spec.n_v >= 1 and abs(x.r) + x.s > 4 * spec.n:
        for c in comps:
            if c.essential and not _goes_over_flap(pillow, c):
                raise PullbackError(f"essential pullback of {x} never crosses a flap top edge")


def _goes_over_flap(pillow, comp) -> bool:
    tiles = pillow.tiles
    return any(
        not tiles[cr.tile].is_base and cr.side == Side.N and cr.to_side == Side.N for cr in comp.crossings
    )


# ---------------------------------------------------------------- derived maps


_MU_CACHE: dict = {}


def slope_map(pillow, x: ExtendedSlope, offset: Optional[Fraction] = None) -> ExtendedSlope:
    """The slope map: slope of any essential pullback, else the peripheral symbol."""
    if isinstance(x, Peripheral):
        return PERIPHERAL
    pillow = _as_pillow(pillow)
    key = (pillow.spec, x, offset)
    if key not in _MU_CACHE:
        comps = pullback_components(pillow, x, offset)
        ess = [c.slope for c in comps if c.essential]
        _MU_CACHE[key] = ess[0] if ess else PERIPHERAL
    return _MU_CACHE[key]


def thurston_coefficient(pillow, x: Slope, offset: Optional[Fraction] = None) -> Fraction:
    comps = pullback_components(_as_pillow(pillow), x, offset)
    return sum((Fraction(1, c.degree) for c in comps if c.essential), Fraction(0))


@dataclass(frozen=True)
class ObstructionReport:
    slope: Slope
    obstruction: bool
    invariant: bool
    lam: Fraction
    hyperbolic: bool

    def __bool__(self):
        return self.obstruction


def is_obstruction(pillow, x: Slope, offset: Optional[Fraction] = None) -> ObstructionReport:
    """Whether the curve of slope ``x`` is invariant with coefficient at least 1."""
    pillow = _as_pillow(pillow)
    hyperbolic = not orbifold_signature(pillow).parabolic
    if not hyperbolic:
        warnings.warn("the orbifold is parabolic; obstructions only matter for hyperbolic maps", stacklevel=2)
    comps = pullback_components(pillow, x, offset)
    ess = [c for c in comps if c.essential]
    lam = sum((Fraction(1, c.degree) for c in ess), Fraction(0))
    invariant = bool(ess) and ess[0].slope == x
    return ObstructionReport(x, invariant and lam >= 1, invariant, lam, hyperbolic)


def eliminate_obstruction(pillow, x: Slope) -> PillowSpec:
    """Add one single flap across each essential pullback of an obstruction.

    ``x`` must be ``0/1`` (vertical flaps are added) or ``1/0`` (horizontal).
    """
    pillow = _as_pillow(pillow)
    if x not in (Slope(0, 1), Slope(1, 0)):
        raise SpecError("only the slopes 0/1 and 1/0 can be eliminated here")
    if orbifold_signature(pillow).parabolic:
        raise SpecError("the plain pillow is parabolic; there is nothing to eliminate")
    if not is_obstruction(pillow, x):
        raise SpecError(f"slope {x} is not an obstruction of this map")
    want = "v" if x == Slope(0, 1) else "h"
    taken = {e for e, _ in pillow.spec.flaps}
    spec = pillow.spec
    for comp in pullback_components(pillow, x):
        if not comp.essential:
            continue
        cands = set()
        for cr in comp.crossings:
            if pillow.tiles[cr.tile].is_base and pillow.tiles[cr.to_tile].is_base:
                e = pillow.base_edge_address(cr.tile, cr.side)
                if e.orient == want and e not in taken:
                    cands.add(e)
        if not cands:
            raise SpecError("no free transverse 1-edge meets an essential pullback")
        edge = min(cands)
        taken.add(edge)
        spec = spec.with_flap(edge, 1)
    # each added edge meets the curve once (the single-crossing condition)
    base = canonical_geodesic(x, pillow.n)
    for e, _ in spec.flaps[len(pillow.spec.flaps):]:
        hits = _edge_hits(base, e, pillow.n)
        if hits != 1:
            raise PullbackError(f"added edge {e} meets the curve {hits} times")
    return spec


def _edge_hits(base: BaseChordSets, edge: EdgeAddress, n: int) -> int:
    """How many times the geodesic's image crosses the interior of a 1-edge under ``L_n``.

    The 1-edge maps homeomorphically onto a pillow edge; we count chord ends
    on that edge, once per geodesic crossing.
    """
    pe = {"h": ("a", "c"), "v": ("d", "b")}[edge.orient]
    # L_n carries a horizontal 1-edge onto a or c according to the parity of j
    name = pe[edge.j % 2]
    return len(base.endpoints_on(name))


# ---------------------------------------------------------------- flood-fill oracle


def _perimeter(side: Side, tn: int, scale: int) -> int:
    """Counter-clockwise perimeter position of a side point (doubled units)."""
    if side == Side.S:
        return tn
    if side == Side.E:
        return scale + tn
    if side == Side.N:
        return 2 * scale + (scale - tn)
    return 3 * scale + (scale - tn)


def side_count_oracle(pillow, component: PullbackComponent):
    """Split the marked points by cutting the sphere along ``component``.

    Independent of the holonomy classifier: the tiles are cut into cells by
    the component's chords, cells are merged across uncut side segments, and
    the two resulting regions are inspected for marked points.  Returns the
    two label sets, smaller first.
    """
    from bisect import bisect_right

    pillow = _as_pillow(pillow)
    scale = 2 * component._scale  # doubled so that midpoints stay integral
    cuts = {}  # tile -> sorted perimeter positions
    chords_in = {}
    side_cuts = {}
    for t, (a, b) in zip(component.tile_ids, component._ends):
        pa = _perimeter(a[0], 2 * a[1], scale)
        pb = _perimeter(b[0], 2 * b[1], scale)
        cuts.setdefault(t, []).extend([pa, pb])
        chords_in.setdefault(t, []).append((pa, pb))
        side_cuts.setdefault((t, a[0]), []).append(2 * a[1])
        side_cuts.setdefault((t, b[0]), []).append(2 * b[1])
    for t in cuts:
        cuts[t].sort()
    parent = {}

    def find(a):
        parent.setdefault(a, a)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    def cell(t, pos):
        ps = cuts.get(t)
        if not ps:
            return (t, 0)
        i = bisect_right(ps, pos) - 1
        return (t, i % len(ps))

    for t, chords in chords_in.items():
        ps = cuts[t]
        m = len(ps)
        index = {p: i for i, p in enumerate(ps)}
        for pa, pb in chords:
            a, b = index[pa], index[pb]
            union((t, (a - 1) % m), (t, b))
            union((t, (b - 1) % m), (t, a))
    for (t, side), (u, side2, flip) in pillow.gluing.items():
        ts = sorted(set(side_cuts.get((t, side), [])) | {0, scale})
        for lo, hi in zip(ts, ts[1:]):
            mid = (lo + hi) // 2
            mid2 = scale - mid if flip else mid
            union(cell(t, _perimeter(side, mid, scale)), cell(u, _perimeter(side2, mid2, scale)))
    for tile in pillow.tiles:
        find(cell(tile.id, 0))
    regions = {find(c) for c in list(parent)}
    if len(regions) != 2:
        raise PullbackError(f"cutting along a simple closed curve left {len(regions)} regions")
    label_region = {}
    for lab, v in pillow.marked_vertices.items():
        t, k = pillow.vertex_corners[v][0]
        label_region[lab] = find(cell(t, k * scale))
    groups = {}
    for lab, reg in label_region.items():
        groups.setdefault(reg, set()).add(lab)
    sides = [frozenset(groups.get(r, ())) for r in regions]
    sides.sort(key=lambda s: (len(s), sorted(s)))
    return tuple(sides)


def oracle_classification(pillow, component: PullbackComponent):
    """Essential / AroundVertex / NullHomotopic from the side count alone."""
    small, _ = side_count_oracle(pillow, component)
    if len(small) == 2:
        return "essential"
    if len(small) == 1:
        return AroundVertex(next(iter(small)))
    return NullHomotopic()


# ---------------------------------------------------------------- geodesic geometry


def _chord_value(x: Slope, color: Color, end) -> Fraction:
    px, py = side_point(*end)
    sign = -1 if color is Color.WHITE else 1
    return x.r * Fraction(px) + sign * x.s * Fraction(py)


def geodesic_edge_sequence(base: BaseChordSets):
    """Pillow edges (a, b, c, d) crossed by the closed geodesic, in order."""
    name = {Side.S: "a", Side.E: "b", Side.N: "c", Side.W: "d"}
    at = {}
    for color in (Color.WHITE, Color.BLACK):
        for idx, (e0, e1) in enumerate(base.chords(color)):
            at[(color, e0)] = (idx, 1)
            at[(color, e1)] = (idx, 0)
    total = len(base.white) + len(base.black)
    color, idx, out_end = Color.WHITE, 0, 1
    seq = []
    for _ in range(total):
        end = base.chords(color)[idx][out_end]
        seq.append(name[end[0]])
        color = color.other
        idx, out_end = at[(color, end)]
        if (color, idx) == (Color.WHITE, 0):
            break
    if len(seq) != total:
        raise PullbackError("the geodesic is not a single closed curve")
    return seq


def alternation_holds(base: BaseChordSets) -> bool:
    """Crossings with ``a`` and ``c`` alternate along the geodesic."""
    hv = [e for e in geodesic_edge_sequence(base) if e in "ac"]
    return all(p != q for p, q in zip(hv, hv[1:] + hv[:1]))


def touches_every_horizontal_edge(x: Slope, n: int, offset: Optional[Fraction] = None) -> bool:
    """Whether the geodesic meets the interior of each horizontal 1-edge."""
    base = canonical_geodesic(x, n, offset)
    for color in (Color.WHITE, Color.BLACK):
        hit = set()
        for e0, e1 in base.chords(color):
            (x0, y0), (x1, y1) = (tuple(map(Fraction, side_point(*e))) for e in (e0, e1))
            for j in range(n + 1):
                yy = Fraction(j, n)
                if (y0 - yy) * (y1 - yy) > 0 or y0 == y1:
                    continue
                xx = x0 + (x1 - x0) * (yy - y0) / (y1 - y0)
                i = int(xx * n)
                if xx * n != i:
                    hit.add((i, j))
        if len(hit) != n * (n + 1):
            return False
    return True


def geodesic_crossings(x: Slope, y: Slope, n: int = 2) -> int:
    """Points where the canonical geodesics of ``x`` and ``y`` meet.

    The two curves use different offsets (``1/(2n+1)`` and ``1/(2n+3)``) so
    that equal slopes give disjoint parallel curves.
    """
    bx = canonical_geodesic(x, n, Fraction(1, 2 * n + 1))
    by = canonical_geodesic(y, n, Fraction(1, 2 * n + 3))
    points = set()
    for color, sign in ((Color.WHITE, -1), (Color.BLACK, 1)):
        a1, b1 = x.r, sign * x.s
        a2, b2 = y.r, sign * y.s
        det = a1 * b2 - a2 * b1
        if det == 0:
            continue
        vs1 = [_chord_value(x, color, c[0]) for c in bx.chords(color)]
        vs2 = [_chord_value(y, color, c[0]) for c in by.chords(color)]
        for v1 in vs1:
            for v2 in vs2:
                px = (v1 * b2 - v2 * b1) / det
                py = (a1 * v2 - a2 * v1) / det
                if 0 <= px <= 1 and 0 <= py <= 1:
                    on_edge = px in (0, 1) or py in (0, 1)
                    points.add(("edge" if on_edge else color.value, px, py))
    return len(points)
