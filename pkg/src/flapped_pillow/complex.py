"""The flapped pillow as an exact square complex.

Each 1-tile carries a local unit-square chart ``(p, q)`` and a square
symmetry (its *chart*) that carries it onto the 0-tile of its colour.  The
white 0-tile is the front square of the pillow, the black one the back
square; both use the pillow coordinates ``(x, y)`` in ``[0, 1]^2``, which
agree on the common boundary.

Corners of a square are numbered counter-clockwise in local coordinates::

    3 --N-- 2
    |       |
    W       E
    |       |
    0 --S-- 1

Every side is parametrised by ``t`` in ``[0, 1]``: ``t = p`` on S and N,
``t = q`` on W and E.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum, IntEnum
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional

__all__ = [
    "Side",
    "Color",
    "Sym",
    "EdgeAddress",
    "PillowSpec",
    "BaseTile",
    "FlapTile",
    "Tile",
    "Flap",
    "FlappedPillow",
    "OrbifoldSignature",
    "JuliaType",
    "SpecError",
    "ComplexError",
    "build_pillow",
    "orbifold_signature",
    "julia_type",
    "list_edges",
    "load_spec",
    "spec_from_dict",
    "side_point",
    "point_side",
]


class SpecError(ValueError):
    """Raised for malformed or inconsistent pillow specifications."""


class ComplexError(RuntimeError):
    """An internal consistency check on a built complex failed."""


class Side(IntEnum):
    S = 0
    E = 1
    N = 2
    W = 3


class Color(Enum):
    WHITE = "white"
    BLACK = "black"

    @property
    def other(self) -> "Color":
        return Color.BLACK if self is Color.WHITE else Color.WHITE


# (side at t=0, side at t=1) corner indices, and ccw sense of t on each side
SIDE_CORNERS = {Side.S: (0, 1), Side.E: (1, 2), Side.N: (3, 2), Side.W: (0, 3)}
SIDE_CCW = {Side.S: 1, Side.E: 1, Side.N: -1, Side.W: -1}
CORNER_XY = {0: (0, 0), 1: (1, 0), 2: (1, 1), 3: (0, 1)}
# counter-clockwise sweep around a corner, in local coordinates: (from, to)
CORNER_SWEEP = {0: (Side.S, Side.W), 1: (Side.E, Side.S), 2: (Side.N, Side.E), 3: (Side.W, Side.N)}
VERTEX_LABELS = {(0, 0): "A", (1, 0): "B", (1, 1): "C", (0, 1): "D"}


def side_point(side: Side, t):
    """Local coordinates of the point with parameter ``t`` on ``side``."""
    if side == Side.S:
        return (t, 0)
    if side == Side.E:
        return (1, t)
    if side == Side.N:
        return (t, 1)
    return (0, t)


def point_side(p, q):
    """Inverse of :func:`side_point` for a boundary point that is not a corner."""
    if q == 0 and 0 < p < 1:
        return Side.S, p
    if q == 1 and 0 < p < 1:
        return Side.N, p
    if p == 0 and 0 < q < 1:
        return Side.W, q
    if p == 1 and 0 < q < 1:
        return Side.E, q
    raise ValueError(f"({p}, {q}) is not an interior side point")


@dataclass(frozen=True)
class Sym:
    """A symmetry of the unit square: optional swap of the axes, then flips.

    ``(p, q) -> (u, v) = (q, p) if swap else (p, q)``, then
    ``x = 1 - u if fx else u`` and ``y = 1 - v if fy else v``.
    """

    swap: bool = False
    fx: bool = False
    fy: bool = False

    def __call__(self, p, q):
        u, v = (q, p) if self.swap else (p, q)
        return (1 - u if self.fx else u, 1 - v if self.fy else v)

    def inverse(self) -> "Sym":
        if not self.swap:
            return self
        return Sym(True, self.fy, self.fx)

    @property
    def det(self) -> int:
        d = -1 if self.swap else 1
        if self.fx:
            d = -d
        if self.fy:
            d = -d
        return d

    @classmethod
    def all(cls):
        return [cls(a, b, c) for a in (False, True) for b in (False, True) for c in (False, True)]

    def code(self) -> str:
        return "".join(ch for ch, on in zip("sxy", (self.swap, self.fx, self.fy)) if on) or "id"


# ---------------------------------------------------------------- specs


@dataclass(frozen=True, order=True)
class EdgeAddress:
    """A 1-edge of the n-subdivided pillow.

    Horizontal edges lie on the line ``y = j/n`` with ``x`` in
    ``[i/n, (i+1)/n]``; vertical edges on ``x = j/n`` with ``y`` in
    ``[i/n, (i+1)/n]``.  Sheets ``F``/``B`` use ``0 < j < n``; the equator
    sheet ``E`` uses ``j`` in ``{0, n}`` (``E:h:i:0`` lies on ``a``,
    ``E:h:i:n`` on ``c``, ``E:v:i:0`` on ``d``, ``E:v:i:n`` on ``b``).
    """

    sheet: str
    orient: str
    i: int
    j: int

    @classmethod
    def parse(cls, text: str) -> "EdgeAddress":
        parts = text.strip().split(":")
        if len(parts) != 4:
            raise SpecError(f"malformed edge address {text!r}")
        sheet, orient, i, j = parts
        sheet, orient = sheet.upper(), orient.lower()
        if sheet not in ("F", "B", "E") or orient not in ("h", "v"):
            raise SpecError(f"malformed edge address {text!r}")
        try:
            return cls(sheet, orient, int(i), int(j))
        except ValueError:
            raise SpecError(f"malformed edge address {text!r}") from None

    def __str__(self) -> str:
        return f"{self.sheet}:{self.orient}:{self.i}:{self.j}"

    @property
    def horizontal(self) -> bool:
        return self.orient == "h"

    def check(self, n: int) -> None:
        if not 0 <= self.i < n:
            raise SpecError(f"edge {self}: index i out of range for n={n}")
        if self.sheet == "E":
            if self.j not in (0, n):
                raise SpecError(f"equator edge {self} needs j in {{0, {n}}}")
        elif not 0 < self.j < n:
            raise SpecError(f"interior edge {self} needs 0 < j < {n}")

    def endpoints(self, n: int):
        """The two endpoints in pillow coordinates (sheet is ignored)."""
        a, b = Fraction(self.i, n), Fraction(self.i + 1, n)
        c = Fraction(self.j, n)
        return ((a, c), (b, c)) if self.horizontal else ((c, a), (c, b))

    def pillow_edge(self) -> Optional[str]:
        """Name of the pillow edge (a, b, c, d) containing an equator 1-edge."""
        if self.sheet != "E":
            return None
        if self.horizontal:
            return "a" if self.j == 0 else "c"
        return "d" if self.j == 0 else "b"


@dataclass(frozen=True)
class PillowSpec:
    n: int
    flaps: tuple = ()  # tuple of (EdgeAddress, multiplicity)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise SpecError(f"n must be an integer >= 2, got {self.n!r}")
        seen = set()
        for edge, mult in self.flaps:
            edge.check(self.n)
            if edge in seen:
                raise SpecError(f"edge {edge} appears twice")
            if not isinstance(mult, int) or mult < 1:
                raise SpecError(f"multiplicity of {edge} must be a positive integer")
            seen.add(edge)

    @property
    def n_h(self) -> int:
        return sum(m for e, m in self.flaps if e.horizontal)

    @property
    def n_v(self) -> int:
        return sum(m for e, m in self.flaps if not e.horizontal)

    @property
    def total_mult(self) -> int:
        return sum(m for _, m in self.flaps)

    @property
    def degree(self) -> int:
        return self.n * self.n + self.total_mult

    def with_flap(self, edge: EdgeAddress, mult: int = 1) -> "PillowSpec":
        return PillowSpec(self.n, self.flaps + ((edge, mult),))

    def to_dict(self) -> dict:
        return {"n": self.n, "flaps": [{"edge": str(e), "mult": m} for e, m in self.flaps]}

    def __str__(self) -> str:
        if not self.flaps:
            return f"n={self.n}"
        body = ",".join(f"{e}x{m}" if m > 1 else str(e) for e, m in self.flaps)
        return f"n={self.n}[{body}]"


def spec_from_dict(data: dict) -> PillowSpec:
    if not isinstance(data, dict) or "n" not in data:
        raise SpecError("spec needs a field 'n'")
    flaps = []
    for item in data.get("flaps", []):
        try:
            edge = EdgeAddress.parse(item["edge"])
            mult = item.get("mult", 1)
        except (KeyError, TypeError, AttributeError):
            raise SpecError(f"malformed flap entry {item!r}") from None
        flaps.append((edge, mult))
    return PillowSpec(data["n"], tuple(flaps))


def load_spec(path) -> PillowSpec:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: not valid JSON ({exc})") from None
    return spec_from_dict(data)


def list_edges(n: int) -> list:
    """Every 1-edge address of the n-subdivided pillow, each exactly once."""
    if n < 2:
        raise SpecError("n must be at least 2")
    out = []
    for orient in ("h", "v"):
        for j in (0, n):
            out.extend(EdgeAddress("E", orient, i, j) for i in range(n))
        for sheet in ("F", "B"):
            for j in range(1, n):
                out.extend(EdgeAddress(sheet, orient, i, j) for i in range(n))
    return out


# ---------------------------------------------------------------- tiles


@dataclass(frozen=True)
class BaseTile:
    side: int  # 0 front, 1 back
    i: int
    j: int


@dataclass(frozen=True)
class FlapTile:
    flap_id: int
    layer: int  # 1..m
    half: str  # "lower" or "upper"


@dataclass(frozen=True)
class Tile:
    id: int
    color: Color
    kind: object  # BaseTile | FlapTile
    chart: Sym
    orientation: int  # +1 if the local frame is positively oriented on the sphere

    @property
    def is_base(self) -> bool:
        return isinstance(self.kind, BaseTile)


@dataclass(frozen=True)
class Flap:
    id: int
    edge: EdgeAddress
    mult: int
    slots: tuple  # ((T1, side1), (T2, side2)) base slots of the slit
    tiles: tuple  # flap tile ids, in stacking order


class OrbifoldKind(Enum):
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class OrbifoldSignature:
    kind: OrbifoldKind
    nu: dict  # marked label -> ramification weight (None for infinity)
    euler_characteristic: Fraction
    local_degrees: dict  # vertex id -> k_v / 2

    @property
    def parabolic(self) -> bool:
        return self.kind is OrbifoldKind.PARABOLIC


class JuliaType(Enum):
    WHOLE_SPHERE = "whole sphere"
    SIERPINSKI_CARPET = "Sierpinski carpet"


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        parent = self.parent
        parent.setdefault(x, x)
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


class FlappedPillow:
    """A validated flapped pillow complex.  Build with :func:`build_pillow`."""

    def __init__(self, spec: PillowSpec, tiles, gluing, flaps, base_index):
        self.spec = spec
        self.n = spec.n
        self.tiles = tiles
        self.gluing = gluing  # (tile, Side) -> (tile, Side, flip)
        self.flaps = flaps
        self.base_index = base_index  # (side, i, j) -> tile id
        self.flap_of_tile = {t: f.id for f in flaps for t in f.tiles}
        self.equator_slots = {}
        for t in tiles:
            for side in Side:
                e = self.equator_edge(t.id, side)
                if e is not None:
                    self.equator_slots[(t.id, side)] = e
        self._build_vertices()

    # -- vertices

    def _build_vertices(self):
        uf = _UnionFind()
        for tile in self.tiles:
            for k in range(4):
                uf.find((tile.id, k))
        for (t, side), (u, side2, flip) in self.gluing.items():
            c0, c1 = SIDE_CORNERS[side]
            d0, d1 = SIDE_CORNERS[side2]
            if flip:
                d0, d1 = d1, d0
            uf.union((t, c0), (u, d0))
            uf.union((t, c1), (u, d1))
        classes = {}
        for tile in self.tiles:
            for k in range(4):
                classes.setdefault(uf.find((tile.id, k)), []).append((tile.id, k))
        roots = sorted(classes, key=lambda r: min(classes[r]))
        self.vertex_of = {}
        self.vertex_corners = []
        for vid, root in enumerate(roots):
            corners = sorted(classes[root])
            self.vertex_corners.append(corners)
            for c in corners:
                self.vertex_of[c] = vid
        self.vertex_valence = [len(c) for c in self.vertex_corners]
        n = self.n
        anchors = {
            "A": (self.base_index[(0, 0, 0)], 0),
            "B": (self.base_index[(0, n - 1, 0)], 1),
            "C": (self.base_index[(0, n - 1, n - 1)], 2),
            "D": (self.base_index[(0, 0, n - 1)], 3),
        }
        self.marked_vertices = {lab: self.vertex_of[c] for lab, c in anchors.items()}
        self.marked_label = {v: lab for lab, v in self.marked_vertices.items()}
        # image of each vertex under the map, read off any incident corner
        self.vertex_image = []
        for corners in self.vertex_corners:
            labels = {self.corner_image(t, k) for t, k in corners}
            if len(labels) != 1:
                raise ComplexError("a vertex maps to two different marked points")
            self.vertex_image.append(labels.pop())

    def corner_image(self, tile_id: int, corner: int) -> str:
        tile = self.tiles[tile_id]
        return VERTEX_LABELS[tile.chart(*CORNER_XY[corner])]

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_corners)

    @property
    def num_edges(self) -> int:
        return len(self.gluing) // 2

    @property
    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + len(self.tiles)

    def local_degree(self, vid: int) -> int:
        return self.vertex_valence[vid] // 2

    def corner_cycle(self, vid: int):
        """Corners around a vertex in counter-clockwise order on the sphere.

        Returns ``(tile, corner, enter_side, exit_side)`` tuples; the sweep
        leaves each tile through ``exit_side`` into the next entry.
        """
        start = self.vertex_corners[vid][0]
        out = []
        t, k = start
        enter = self._sweep(t, k)[0]
        while True:
            first, second = self._sweep(t, k)
            if first != enter:
                raise ComplexError("corner cycle is not orientation coherent")
            out.append((t, k, first, second))
            u, side2, flip = self.gluing[(t, second)]
            c0, c1 = SIDE_CORNERS[second]
            pos = 0 if k == c0 else 1
            if flip:
                pos = 1 - pos
            t, k, enter = u, SIDE_CORNERS[side2][pos], side2
            if (t, k) == start:
                break
            if len(out) > len(self.vertex_corners[vid]):
                raise ComplexError("corner cycle does not close")
        if len(out) != self.vertex_valence[vid]:
            raise ComplexError("corner cycle misses corners of its vertex")
        return out

    def _sweep(self, t, k):
        first, second = CORNER_SWEEP[k]
        if self.tiles[t].orientation < 0:
            first, second = second, first
        return first, second

    # -- edges of the underlying pillow

    def equator_edge(self, tile_id: int, side: Side) -> Optional[str]:
        """Pillow edge (a, b, c, d) under a base-tile side, else ``None``."""
        kind = self.tiles[tile_id].kind
        if not isinstance(kind, BaseTile):
            return None
        n = self.n
        if side == Side.S and kind.j == 0:
            return "a"
        if side == Side.N and kind.j == n - 1:
            return "c"
        if side == Side.W and kind.i == 0:
            return "d"
        if side == Side.E and kind.i == n - 1:
            return "b"
        return None

    def base_edge_address(self, tile_id: int, side: Side) -> EdgeAddress:
        """Address of the 1-edge of the plain pillow under a base-tile side."""
        kind = self.tiles[tile_id].kind
        if not isinstance(kind, BaseTile):
            raise ValueError("not a base tile")
        sheet = "FB"[kind.side]
        n = self.n
        if side in (Side.S, Side.N):
            j = kind.j + (1 if side == Side.N else 0)
            return EdgeAddress("E" if j in (0, n) else sheet, "h", kind.i, j)
        j = kind.i + (1 if side == Side.E else 0)
        return EdgeAddress("E" if j in (0, n) else sheet, "v", kind.j, j)

    def to_dict(self) -> dict:
        tiles = []
        for tile in self.tiles:
            rec = {"id": tile.id, "color": tile.color.value, "chart": tile.chart.code(),
                   "orientation": tile.orientation}
            if isinstance(tile.kind, BaseTile):
                rec["base"] = ["front", "back"][tile.kind.side] + f":{tile.kind.i}:{tile.kind.j}"
            else:
                rec["flap"] = f"{tile.kind.flap_id}:{tile.kind.layer}:{tile.kind.half}"
            tiles.append(rec)
        gluings = []
        for (t, s), (u, s2, flip) in sorted(self.gluing.items()):
            if (t, s) < (u, s2):
                gluings.append([t, s.name, u, s2.name, flip])
        return {"spec": self.spec.to_dict(), "tiles": tiles, "gluings": gluings,
                "vertices": len(self.vertex_corners), "valence": self.vertex_valence,
                "marked": self.marked_vertices}


# ---------------------------------------------------------------- construction


def _edge_slots(edge: EdgeAddress, n: int, base_index):
    """The two base slots that a 1-edge separates, ordered (lower id first)."""
    if edge.sheet == "E":
        side = {"a": Side.S, "c": Side.N, "d": Side.W, "b": Side.E}[edge.pillow_edge()]
        if edge.horizontal:
            j = 0 if side == Side.S else n - 1
            key0, key1 = (0, edge.i, j), (1, edge.i, j)
        else:
            i = 0 if side == Side.W else n - 1
            key0, key1 = (0, i, edge.i), (1, i, edge.i)
        slots = [(base_index[key0], side), (base_index[key1], side)]
    else:
        s = 0 if edge.sheet == "F" else 1
        if edge.horizontal:
            slots = [(base_index[(s, edge.i, edge.j - 1)], Side.N), (base_index[(s, edge.i, edge.j)], Side.S)]
        else:
            slots = [(base_index[(s, edge.j - 1, edge.i)], Side.E), (base_index[(s, edge.j, edge.i)], Side.W)]
    return tuple(sorted(slots))


def _propagate_chart(chart: Sym, side: Side, side2: Side, flip: bool) -> Sym:
    """The unique chart on a neighbour that agrees along the glued side."""
    for cand in Sym.all():
        ok = True
        for t in (0, 1):
            t2 = 1 - t if flip else t
            if chart(*side_point(side, t)) != cand(*side_point(side2, t2)):
                ok = False
                break
        if ok:
            return cand
    raise ComplexError("no chart continues across the glued side")


def _orientation_across(o1: int, side: Side, side2: Side, flip: bool) -> int:
    return -o1 * SIDE_CCW[side] * SIDE_CCW[side2] * (-1 if flip else 1)


def build_pillow(spec: PillowSpec) -> FlappedPillow:
    """Build and validate the flapped pillow for ``spec``."""
    n = spec.n
    tiles = []
    base_index = {}
    for side in (0, 1):
        for j in range(n):
            for i in range(n):
                tid = len(tiles)
                color = Color.WHITE if (side + i + j) % 2 == 0 else Color.BLACK
                chart = Sym(False, i % 2 == 1, j % 2 == 1)
                tiles.append(Tile(tid, color, BaseTile(side, i, j), chart, 1 if side == 0 else -1))
                base_index[(side, i, j)] = tid

    gluing = {}

    def glue(a, sa, b, sb, flip=False):
        for slot in ((a, sa), (b, sb)):
            if slot in gluing:
                raise ComplexError(f"slot {slot} glued twice")
        gluing[(a, sa)] = (b, sb, flip)
        gluing[(b, sb)] = (a, sa, flip)

    for side in (0, 1):
        for j in range(n):
            for i in range(n):
                t = base_index[(side, i, j)]
                if i + 1 < n:
                    glue(t, Side.E, base_index[(side, i + 1, j)], Side.W)
                if j + 1 < n:
                    glue(t, Side.N, base_index[(side, i, j + 1)], Side.S)
    for k in range(n):
        glue(base_index[(0, k, 0)], Side.S, base_index[(1, k, 0)], Side.S)
        glue(base_index[(0, k, n - 1)], Side.N, base_index[(1, k, n - 1)], Side.N)
        glue(base_index[(0, 0, k)], Side.W, base_index[(1, 0, k)], Side.W)
        glue(base_index[(0, n - 1, k)], Side.E, base_index[(1, n - 1, k)], Side.E)

    flaps = []
    for fid, (edge, mult) in enumerate(spec.flaps):
        (t1, s1), (t2, s2) = _edge_slots(edge, n, base_index)
        u, us, flip12 = gluing.pop((t1, s1))
        if (u, us) != (t2, s2):
            raise ComplexError(f"edge {edge} does not separate the expected tiles")
        del gluing[(t2, s2)]
        chart = _propagate_chart(tiles[t1].chart, s1, Side.S, False)
        orient = _orientation_across(tiles[t1].orientation, s1, Side.S, False)
        color = tiles[t1].color.other
        ids = []
        prev = (t1, s1)
        for layer in range(1, mult + 1):
            lo = len(tiles)
            tiles.append(Tile(lo, color, FlapTile(fid, layer, "lower"), chart, orient))
            hi = len(tiles)
            tiles.append(Tile(hi, color.other, FlapTile(fid, layer, "upper"), chart, -orient))
            ids += [lo, hi]
            glue(prev[0], prev[1], lo, Side.S)
            for s in (Side.W, Side.N, Side.E):
                glue(lo, s, hi, s)
            prev = (hi, Side.S)
        glue(prev[0], prev[1], t2, s2, flip12)
        flaps.append(Flap(fid, edge, mult, ((t1, s1), (t2, s2)), tuple(ids)))

    pillow = FlappedPillow(spec, tiles, gluing, flaps, base_index)
    _validate(pillow)
    return pillow


def _validate(p: FlappedPillow) -> None:
    spec = p.spec
    if len(p.tiles) != 2 * spec.n ** 2 + 2 * spec.total_mult:
        raise ComplexError("tile count formula fails")
    whites = sum(1 for t in p.tiles if t.color is Color.WHITE)
    if whites != spec.degree:
        raise ComplexError("white tile count differs from the degree")
    if len(p.gluing) != 4 * len(p.tiles):
        raise ComplexError("some slot is unpaired")
    for (t, s), (u, s2, flip) in p.gluing.items():
        if (t, s) == (u, s2):
            raise ComplexError("slot glued to itself")
        back = p.gluing[(u, s2)]
        if back != (t, s, flip):
            raise ComplexError("gluing is not an involution")
        a, b = p.tiles[t], p.tiles[u]
        if a.color is b.color:
            raise ComplexError(f"tiles {t} and {u} share a colour across a glued side")
        if _orientation_across(a.orientation, s, s2, flip) != b.orientation:
            raise ComplexError(f"orientation flips across tiles {t}/{u}")
        for tt in (0, 1):
            t2 = 1 - tt if flip else tt
            if a.chart(*side_point(s, tt)) != b.chart(*side_point(s2, t2)):
                raise ComplexError(f"charts of tiles {t}/{u} disagree on the shared side")
    for tile in p.tiles:
        sign = 1 if tile.color is Color.WHITE else -1
        if tile.orientation * tile.chart.det != sign:
            raise ComplexError(f"tile {tile.id} maps with the wrong orientation")
    if p.euler_characteristic != 2:
        raise ComplexError(f"Euler characteristic {p.euler_characteristic}, expected 2")
    for vid, k in enumerate(p.vertex_valence):
        if k % 2:
            raise ComplexError(f"vertex {vid} has odd valence {k}")
        p.corner_cycle(vid)


# ---------------------------------------------------------------- static queries


_NU_CAP = 10 ** 6


def orbifold_signature(pillow: FlappedPillow) -> OrbifoldSignature:
    """Ramification weights on the marked points and the orbifold type.

    ``nu(p)`` is the least common multiple of ``deg(f, x) * nu(x)`` over the
    preimages ``x`` of ``p``, iterated to a fixed point; ``None`` encodes an
    infinite weight (a periodic critical point).
    """
    deg = {v: pillow.local_degree(v) for v in range(pillow.num_vertices)}
    marked = pillow.marked_label
    nu = {lab: 1 for lab in "ABCD"}
    while True:
        new = {}
        for lab in "ABCD":
            acc = 1
            for v in range(pillow.num_vertices):
                if pillow.vertex_image[v] != lab:
                    continue
                w = nu[marked[v]] if v in marked else 1
                acc = None if acc is None or w is None else lcm(acc, deg[v] * w)
            if acc is not None and acc > _NU_CAP:
                acc = None
            new[lab] = acc
        if new == nu:
            break
        nu = new
    chi = Fraction(2)
    for lab in "ABCD":
        chi -= 1 if nu[lab] is None else 1 - Fraction(1, nu[lab])
    kind = OrbifoldKind.PARABOLIC if chi == 0 else OrbifoldKind.HYPERBOLIC
    return OrbifoldSignature(kind, nu, chi, deg)


def julia_type(spec: PillowSpec) -> JuliaType:
    """Julia set of a flapped Lattes map with ``n_h, n_v >= 1``."""
    if spec.n_h < 1 or spec.n_v < 1:
        raise SpecError("julia_type needs at least one horizontal and one vertical flap")
    n = spec.n
    corners = {(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)),
               (Fraction(1), Fraction(1)), (Fraction(0), Fraction(1))}
    ends = {pt for e, _ in spec.flaps for pt in e.endpoints(n)}
    if n % 2 == 0:
        hit = (Fraction(0), Fraction(0)) in ends
    else:
        hit = bool(ends & corners)
    return JuliaType.SIERPINSKI_CARPET if hit else JuliaType.WHOLE_SPHERE


def corner_spec(n: int, horizontal: bool = True, vertical: bool = True) -> PillowSpec:
    """Flaps on the horizontal and/or vertical 1-edge incident to ``B``."""
    flaps = []
    if horizontal:
        flaps.append((EdgeAddress("E", "h", n - 1, 0), 1))
    if vertical:
        flaps.append((EdgeAddress("E", "v", 0, n), 1))
    return PillowSpec(n, tuple(flaps))


def plain_spec(n: int) -> PillowSpec:
    return PillowSpec(n, ())


def iter_specs(n: int, flaps: Iterable) -> PillowSpec:
    """Convenience: ``iter_specs(2, ["E:h:1:0", ("F:v:0:1", 2)])``."""
    out = []
    for item in flaps:
        if isinstance(item, str):
            out.append((EdgeAddress.parse(item), 1))
        else:
            out.append((EdgeAddress.parse(item[0]), item[1]))
    return PillowSpec(n, tuple(out))
