"""Annulus decomposition along the preimage of a pair of core arcs.

For a slope ``r/s`` the lines ``r u - s v = k`` (``k`` an integer) project
onto two disjoint arcs of the pillow: ``xi`` (``k`` even, through ``A``) and
``xi'`` (``k`` odd).  Their complement is an annulus around the geodesic of
slope ``r/s``.  The preimage of the two arcs is a planar graph whose faces
are annuli, one around each curve pullback.

Orientation conventions: rotations around a vertex are counter-clockwise on
the sphere, and a face walk keeps its face on the left, so it leaves each
vertex by the first edge clockwise from the one it arrived on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional

from .complex import (
    CORNER_XY,
    SIDE_CORNERS,
    VERTEX_LABELS,
    Color,
    FlappedPillow,
    Side,
    side_point,
)
from .pullback import (
    Crossing,
    Essential,
    _SIDE_MAPS,
    _as_pillow,
    canonical_geodesic,
    classify_loop,
    pullback_components,
)
from .slopes import Slope

__all__ = [
    "ArcPiece",
    "CoreArcPair",
    "Lift",
    "PreimageGraph",
    "AnnulusComponent",
    "BudgetExceeded",
    "AnnulusError",
    "core_arc_pair",
    "preimage_graph",
    "annulus_components",
    "essential_circuit_length",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 10 ** 6


class AnnulusError(RuntimeError):
    """The face structure of the preimage graph is inconsistent."""


class BudgetExceeded(RuntimeError):
    """The circuit search ran past its extension budget."""


# ---------------------------------------------------------------- core arcs


@dataclass(frozen=True)
class ArcPiece:
    """A piece of a core arc inside one 0-tile.

    ``ends`` are ``("corner", k)`` or ``(Side, t)``; ``value`` is the integer
    ``k`` of the line ``r x -+ s y = k`` carrying the piece (``None`` when the
    piece lies on the boundary of the tile).
    """

    color: Color
    ends: tuple
    value: Optional[int]


@dataclass(frozen=True)
class CoreArcPair:
    slope: Slope
    xi: tuple  # ArcPiece tuple
    xi_prime: tuple
    xi_ends: tuple  # vertex labels
    xi_prime_ends: tuple

    @property
    def axis(self) -> bool:
        return self.slope.r == 0 or self.slope.s == 0


def _square_hits(r, s, sign, k):
    """Distinct boundary points of ``r x + sign*s y = k`` on the unit square."""
    pts = set()
    if r:
        for y in (0, 1):
            x = Fraction(k - sign * s * y, r)
            if 0 <= x <= 1:
                pts.add((x, Fraction(y)))
    if s:
        for x in (0, 1):
            y = Fraction(k - r * x, sign * s)
            if 0 <= y <= 1:
                pts.add((Fraction(x), y))
    return sorted(pts)


def _end_of(pt):
    x, y = pt
    for k, xy in CORNER_XY.items():
        if (x, y) == xy:
            return ("corner", k)
    if y == 0:
        return (Side.S, x)
    if y == 1:
        return (Side.N, x)
    if x == 0:
        return (Side.W, y)
    return (Side.E, y)


def core_arc_pair(x: Slope, n: int = 2) -> CoreArcPair:
    """The two core arcs of slope ``x``, cut into 0-tile pieces."""
    if not isinstance(x, Slope):
        raise ValueError("core arcs need a rational slope")
    r, s = x.r, x.s
    xi, xi2 = [], []
    if r == 0 or s == 0:
        # horizontal: xi = a, xi' = c;  vertical: xi = d, xi' = b
        first, second = (Side.S, Side.N) if r == 0 else (Side.W, Side.E)
        for color in (Color.WHITE, Color.BLACK):
            xi.append(ArcPiece(color, (("side", first),), None))
            xi2.append(ArcPiece(color, (("side", second),), None))
    else:
        for color, sign in ((Color.WHITE, -1), (Color.BLACK, 1)):
            vals = [r * px + sign * s * py for px, py in CORNER_XY.values()]
            for k in range(min(vals) + 1, max(vals)):
                pts = _square_hits(r, s, sign, k)
                if len(pts) != 2:
                    raise AnnulusError(f"arc line {k} meets the square in {len(pts)} points")
                piece = ArcPiece(color, tuple(_end_of(p) for p in pts), k)
                (xi if k % 2 == 0 else xi2).append(piece)
    ends = []
    for pieces in (xi, xi2):
        labels = set()
        for piece in pieces:
            for e in piece.ends:
                if e[0] == "corner":
                    labels.add(VERTEX_LABELS[CORNER_XY[e[1]]])
                elif e[0] == "side":
                    a, b = SIDE_CORNERS[e[1]]
                    labels.update(VERTEX_LABELS[CORNER_XY[a]] + VERTEX_LABELS[CORNER_XY[b]])
        ends.append(tuple(sorted(labels)))
    if len(ends[0]) != 2 or len(ends[1]) != 2 or set(ends[0]) & set(ends[1]):
        raise AnnulusError(f"core arcs of {x} do not split the marked points 2-2")
    return CoreArcPair(x, tuple(xi), tuple(xi2), ends[0], ends[1])


# ---------------------------------------------------------------- preimage graph


@dataclass
class Lift:
    """An edge of the preimage graph: one lift of ``xi`` or ``xi'``."""

    id: int
    kind: str  # "xi" or "xi'"
    ends: tuple  # ((vertex, tile, corner), (vertex, tile, corner))
    pieces: list  # [(tile, piece_index, reversed)] from ends[0] to ends[1]
    crossings: list  # Crossing list from ends[0] to ends[1]
    slots: Optional[tuple] = None  # for edges lying on tile sides: ((tile, side), (tile, side))
    stick: bool = False

    @property
    def length(self) -> int:
        return 1


def _reverse_crossings(crs):
    return [Crossing(c.to_tile, c.to_side, c.tile, c.side) for c in reversed(crs)]


class PreimageGraph:
    """Lifts of the core arcs with a rotation system around every vertex."""

    def __init__(self, pillow: FlappedPillow, arcs: CoreArcPair, lifts):
        self.pillow = pillow
        self.arcs = arcs
        self.lifts = lifts
        self._rotation()

    # darts are (lift id, direction); direction 0 runs ends[0] -> ends[1]
    def tail(self, dart):
        e, d = dart
        return self.lifts[e].ends[d][0]

    def head(self, dart):
        e, d = dart
        return self.lifts[e].ends[1 - d][0]

    @staticmethod
    def reverse(dart):
        return (dart[0], 1 - dart[1])

    def dart_crossings(self, dart):
        e, d = dart
        crs = self.lifts[e].crossings
        return list(crs) if d == 0 else _reverse_crossings(crs)

    def _rotation(self):
        p = self.pillow
        corner_dart = {}
        slot_dart = {}
        for lift in self.lifts:
            for d in (0, 1):
                v, t, k = lift.ends[d]
                if lift.slots is None:
                    corner_dart[(t, k)] = (lift.id, d)
                else:
                    # the dart leaves v along a tile side; register both slots
                    for slot in lift.slots:
                        slot_dart[(slot, v)] = (lift.id, d)
        self.tokens = {}
        self.position = {}
        for v in range(p.num_vertices):
            toks = []
            for t, k, enter, exit_ in p.corner_cycle(v):
                dart = corner_dart.get((t, k))
                if dart is None:
                    toks.append(("tile", t))
                else:
                    toks += [("tile", t), ("dart", dart), ("tile", t)]
                u, side2, _ = p.gluing[(t, exit_)]
                cross = Crossing(t, exit_, u, side2)
                dart = slot_dart.get(((t, exit_), v))
                toks.append(("dart", dart, cross) if dart is not None else ("cross", cross))
            self.tokens[v] = toks
            for idx, tok in enumerate(toks):
                if tok[0] == "dart":
                    if tok[1] in self.position:
                        raise AnnulusError("a dart appears twice in the rotation system")
                    self.position[tok[1]] = (v, idx)
        for lift in self.lifts:
            for d in (0, 1):
                if self.position[(lift.id, d)][0] != lift.ends[d][0]:
                    raise AnnulusError("rotation system disagrees with the lift ends")

    def darts_at(self, v):
        return [tok[1] for tok in self.tokens[v] if tok[0] == "dart"]

    def sweep(self, dart_in, allowed=None):
        """Clockwise sweep at the head of ``dart_in``.

        Yields ``(dart, crossings_so_far)`` for successive darts met in
        clockwise order from the reverse of ``dart_in``, ending with that
        reverse dart itself.  ``allowed`` restricts which darts are reported;
        others are crossed like ordinary sides.
        """
        v, idx = self.position[self.reverse(dart_in)]
        toks = self.tokens[v]
        m = len(toks)
        crossed = []
        for step in range(1, m + 1):
            tok = toks[(idx - step) % m]
            if tok[0] == "dart":
                dart = tok[1]
                if allowed is None or dart[0] in allowed or step == m:
                    yield dart, list(crossed)
                if len(tok) == 3:
                    c = tok[2]
                    crossed.append(Crossing(c.to_tile, c.to_side, c.tile, c.side))
            elif tok[0] == "cross":
                c = tok[1]
                crossed.append(Crossing(c.to_tile, c.to_side, c.tile, c.side))

    def face_walks(self):
        """Boundary walks of all faces, each a list of darts."""
        seen = set()
        walks = []
        for lift in self.lifts:
            for d in (0, 1):
                start = (lift.id, d)
                if start in seen:
                    continue
                walk = []
                dart = start
                while dart not in seen:
                    seen.add(dart)
                    walk.append(dart)
                    dart = next(self.sweep(dart))[0]
                if dart != start:
                    raise AnnulusError("face walk does not close")
                walks.append(walk)
        return walks

    def components(self) -> int:
        parent = list(range(self.pillow.num_vertices))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for lift in self.lifts:
            a, b = find(lift.ends[0][0]), find(lift.ends[1][0])
            parent[a] = b
        used = {v for lift in self.lifts for v in (lift.ends[0][0], lift.ends[1][0])}
        return len({find(v) for v in used})

    def is_bipartite(self) -> bool:
        """Every lift joins an endpoint class of its arc to the other one."""
        p = self.pillow
        for lift in self.lifts:
            ends = self.arcs.xi_ends if lift.kind == "xi" else self.arcs.xi_prime_ends
            a, b = (p.vertex_image[lift.ends[k][0]] for k in (0, 1))
            if {a, b} != set(ends):
                return False
        return True

    def push_off(self, walk):
        """Crossing sequence of a loop parallel to ``walk`` on its left."""
        crs = []
        for i, dart in enumerate(walk):
            crs += self.dart_crossings(dart)
            nxt = walk[(i + 1) % len(walk)]
            for cand, crossed in self.sweep(dart):
                if cand == nxt:
                    crs += crossed
                    break
            else:
                raise AnnulusError("walk turns onto a dart that is not at its vertex")
        for a, b in zip(crs, crs[1:] + crs[:1]):
            if a.to_tile != b.tile:
                raise AnnulusError("push-off is not contiguous")
        return crs


def _axis_lifts(pillow: FlappedPillow, x: Slope):
    first, second = (Side.S, Side.N) if x.r == 0 else (Side.W, Side.E)
    lifts = []
    done = set()
    for (t, side), (u, side2, flip) in sorted(pillow.gluing.items()):
        if (t, side) in done:
            continue
        tile = pillow.tiles[t]
        # image side of a local side: invert the 0-tile -> local side table
        s0 = next(s for s, (loc, _) in _SIDE_MAPS[tile.chart].items() if loc == side)
        if s0 not in (first, second):
            continue
        done.update({(t, side), (u, side2)})
        c0, c1 = SIDE_CORNERS[side]
        ends = tuple((pillow.vertex_of[(t, c)], t, c) for c in (c0, c1))
        stick = not (tile.is_base and pillow.tiles[u].is_base)
        lifts.append(Lift(len(lifts), "xi" if s0 == first else "xi'", ends, [], [], ((t, side), (u, side2)), stick))
    return lifts


def _chord_lifts(pillow: FlappedPillow, arcs: CoreArcPair):
    pieces = list(arcs.xi) + list(arcs.xi_prime)
    scale = 1
    for piece in pieces:
        for e in piece.ends:
            if e[0] != "corner":
                scale = lcm(scale, e[1].denominator)
    inst = []  # (tile, piece index, (end0, end1)) with ends ("corner", k) or (side, tnum)
    by_color = {Color.WHITE: [], Color.BLACK: []}
    for idx, piece in enumerate(pieces):
        by_color[piece.color].append(idx)
    for tile in pillow.tiles:
        smap = _SIDE_MAPS[tile.chart]
        inv = tile.chart.inverse()
        for idx in by_color[tile.color]:
            ends = []
            for e in pieces[idx].ends:
                if e[0] == "corner":
                    xy = inv(*CORNER_XY[e[1]])
                    ends.append(("corner", next(k for k, c in CORNER_XY.items() if c == xy)))
                else:
                    loc, rev = smap[e[0]]
                    tn = int(e[1] * scale)
                    ends.append((loc, scale - tn if rev else tn))
            inst.append((tile.id, idx, tuple(ends)))
    at = {}
    for i, (t, _, ends) in enumerate(inst):
        for k, e in enumerate(ends):
            if e[0] != "corner":
                at[(t, e[0], e[1])] = (i, k)
    lifts = []
    used = set()
    for i, (t, idx, ends) in enumerate(inst):
        for k0 in (0, 1):
            if ends[k0][0] != "corner" or (i, k0) in used:
                continue
            chain, crossings = [], []
            j, k_in = i, k0
            while True:
                tj, idxj, ej = inst[j]
                chain.append((tj, idxj, k_in == 1))
                used.update({(j, k_in), (j, 1 - k_in)})
                out = ej[1 - k_in]
                if out[0] == "corner":
                    break
                u, side2, flip = pillow.gluing[(tj, out[0])]
                key = (u, side2, scale - out[1] if flip else out[1])
                crossings.append(Crossing(tj, out[0], u, side2))
                j, k_in = at[key]
            start = (pillow.vertex_of[(t, ends[k0][1])], t, ends[k0][1])
            tl, _, el = inst[j]
            stop = (pillow.vertex_of[(tl, el[1 - k_in][1])], tl, el[1 - k_in][1])
            kind = "xi" if pieces[idx].value % 2 == 0 else "xi'"
            stick = any(not pillow.tiles[c[0]].is_base for c in chain)
            lifts.append(Lift(len(lifts), kind, (start, stop), chain, crossings, None, stick))
    if len(used) != 2 * len(inst):
        raise AnnulusError("some arc piece is not on a lift (closed lift?)")
    return lifts, pieces


def preimage_graph(pillow, x: Slope) -> PreimageGraph:
    pillow = _as_pillow(pillow)
    arcs = core_arc_pair(x, pillow.n)
    if arcs.axis:
        lifts = _axis_lifts(pillow, x)
        g = PreimageGraph(pillow, arcs, lifts)
        g.pieces = []
    else:
        lifts, pieces = _chord_lifts(pillow, arcs)
        g = PreimageGraph(pillow, arcs, lifts)
        g.pieces = pieces
    return g


# ---------------------------------------------------------------- annuli


@dataclass
class AnnulusComponent:
    id: int
    component: int  # index into the pullback component list
    xi_walk: list
    xi_prime_walk: list
    degree: int
    circuit_length: int
    essential: bool
    slope: Optional[Slope]
    essential_circuit_length: Optional[int] = None
    sticks: int = 0

    def record(self) -> dict:
        return {
            "annulus": self.id,
            "essential": self.essential,
            "degree": self.degree,
            "circuit_length": self.circuit_length,
            "essential_circuit_length": self.essential_circuit_length,
        }


def _left_value(piece: ArcPiece, reversed_, x: Slope, offset: Fraction):
    """Offset value of the geodesic line lying just left of a traversed arc piece."""
    pts = []
    for e in piece.ends:
        pts.append(CORNER_XY[e[1]] if e[0] == "corner" else side_point(e[0], e[1]))
    (px, py), (qx, qy) = pts[::-1] if reversed_ else pts
    dx, dy = qx - px, qy - py
    sign = -1 if piece.color is Color.WHITE else 1
    grad = (x.r, sign * x.s)
    up = grad[0] * -dy + grad[1] * dx > 0
    if piece.color is Color.BLACK:
        up = not up  # the back chart is orientation reversing
    k = piece.value
    if up:
        return k + offset if k % 2 == 0 else k + 1 - offset
    return k - offset if k % 2 == 0 else k - 1 + offset


def _tau_lookup(base, x: Slope):
    """Map (colour, line value) -> index of the base geodesic chord."""
    out = {}
    for color, chords in ((Color.WHITE, base.white), (Color.BLACK, base.black)):
        sign = -1 if color is Color.WHITE else 1
        for idx, (a, _) in enumerate(chords):
            px, py = side_point(*a)
            out[(color, x.r * px + sign * x.s * py)] = idx
    return out


def annulus_components(pillow, x: Slope, budget: Optional[int] = DEFAULT_BUDGET, with_essential: bool = True):
    """Annuli of the complement of the preimage graph of the core arcs of ``x``.

    ``with_essential`` also runs the essential circuit search (bounded by
    ``budget`` walk extensions per annulus).
    """
    pillow = _as_pillow(pillow)
    comps = pullback_components(pillow, x)
    owner = {}
    for ci, comp in enumerate(comps):
        for t, src in zip(comp.tile_ids, comp._srcs):
            owner[(t, src)] = ci
    base = canonical_geodesic(x, pillow.n)
    graph = preimage_graph(pillow, x)
    lookup = _tau_lookup(base, x)

    def left_component(dart):
        lift = graph.lifts[dart[0]]
        if lift.slots is not None:
            v = lift.ends[dart[1]][0]
            # tile just counter-clockwise of the dart at its tail
            _, idx = graph.position[dart]
            toks = graph.tokens[v]
            tok = toks[(idx + 1) % len(toks)]
            tile = tok[1] if tok[0] == "tile" else tok[1].tile
            if tok[0] != "tile":
                raise AnnulusError("no tile beside an edge dart")
            return owner[(tile, 0)]
        chain = lift.pieces if dart[1] == 0 else [(t, i, not r) for t, i, r in reversed(lift.pieces)]
        t, idx, rev = chain[0]
        piece = graph.pieces[idx]
        val = _left_value(piece, rev, x, base.offset)
        return owner[(t, lookup[(piece.color, val)])]

    walks = graph.face_walks()
    by_comp = {}
    for walk in walks:
        owners = {left_component(d) for d in walk}
        kinds = {graph.lifts[d[0]].kind for d in walk}
        if len(owners) != 1 or len(kinds) != 1:
            raise AnnulusError("a face walk borders two annuli or two arc types")
        by_comp.setdefault(owners.pop(), {})[kinds.pop()] = walk
    if sorted(by_comp) != list(range(len(comps))):
        raise AnnulusError("some pullback lies in no face")
    # Euler count on the sphere: V - E + F = 1 + (#components of the graph)
    faces = len(by_comp)
    if any(len(w) != 2 for w in by_comp.values()):
        raise AnnulusError("a face is not an annulus (needs exactly two boundary walks)")
    if pillow.num_vertices - len(graph.lifts) + faces != 1 + graph.components():
        raise AnnulusError("Euler count of the face decomposition fails")
    out = []
    for ci in range(len(comps)):
        w = by_comp[ci]
        xi_walk, xi2_walk = w["xi"], w["xi'"]
        if len(xi_walk) != len(xi2_walk):
            raise AnnulusError("the two boundary walks of an annulus differ in length")
        comp = comps[ci]
        sticks = sum(1 for d in xi_walk + xi2_walk if graph.lifts[d[0]].stick)
        ann = AnnulusComponent(ci, ci, xi_walk, xi2_walk, comp.degree, len(xi_walk),
                               comp.essential, comp.slope, None, sticks)
        if with_essential and ann.essential:
            ann.essential_circuit_length = essential_circuit_length(graph, ann, budget)
        out.append(ann)
    return out


def _search_side(graph: PreimageGraph, walk, target: Slope, bound: int, budget: Optional[int]):
    """Shortest closed face walk of a subgraph of ``walk``'s edges whose
    left push-off has slope ``target``; ``None`` if none is at most ``bound``."""
    edges = {d[0] for d in walk}
    best = [bound + 1]
    counter = [0]

    def check(cycle):
        cls, _ = classify_loop(graph.pillow, graph.push_off(cycle))
        return isinstance(cls, Essential) and cls.slope == target

    def extend(path, used_edges, excluded, used_darts):
        counter[0] += 1
        if budget is not None and counter[0] > budget:
            raise BudgetExceeded(f"circuit search exceeded {budget} extensions")
        if len(path) >= best[0]:
            return
        last = path[-1]
        passed = []
        for cand, _ in graph.sweep(last, allowed=edges):
            e = cand[0]
            if e in edges:
                if cand == path[0]:
                    if e not in excluded and check(path):
                        best[0] = min(best[0], len(path))
                elif e not in excluded and cand not in used_darts:
                    new_excl = set(passed)
                    if not (new_excl & used_edges):
                        used_darts.add(cand)
                        added = e not in used_edges
                        used_edges.add(e)
                        extend(path + [cand], used_edges, excluded | new_excl, used_darts)
                        if added:
                            used_edges.discard(e)
                        used_darts.discard(cand)
                if e in used_edges:
                    return  # the face walk of H cannot skip past a used edge
                passed.append(e)

    for start in walk:
        extend([start], {start[0]}, frozenset(), {start})
    return None if best[0] > bound else best[0]


def essential_circuit_length(graph: PreimageGraph, annulus: AnnulusComponent, budget: Optional[int] = DEFAULT_BUDGET) -> int:
    """Length of the shortest boundary circuit whose push-off is the core curve."""
    if not annulus.essential:
        raise ValueError("essential circuit length is defined for essential annuli only")
    best = None
    for walk in (annulus.xi_walk, annulus.xi_prime_walk):
        found = _search_side(graph, walk, annulus.slope, annulus.circuit_length, budget)
        if found is not None and (best is None or found < best):
            best = found
    if best is None:
        raise AnnulusError("no boundary circuit is isotopic to the core curve")
    return best
