import random
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from flapped_pillow.complex import Color, SpecError, build_pillow, corner_spec, iter_specs, plain_spec
from flapped_pillow.pullback import (
    AroundVertex,
    DeckHolonomy,
    Essential,
    NullHomotopic,
    PullbackError,
    canonical_geodesic,
    classify_holonomy,
    collapse_flap_excursions,
    eliminate_obstruction,
    geodesic_crossings,
    geodesic_edge_sequence,
    alternation_holds,
    holonomy_of_loop,
    is_obstruction,
    oracle_classification,
    pullback_components,
    slope_map,
    thurston_coefficient,
    touches_every_horizontal_edge,
)
from flapped_pillow.slopes import PERIPHERAL, Slope, enumerate_slopes, intersection_curves, normalize_slope
from sweep import horizontal_oracle, random_spec, sweep

small_slopes = st.tuples(st.integers(-15, 15), st.integers(0, 15)).filter(
    lambda p: p != (0, 0)).map(lambda p: normalize_slope(*p))


# ---------------------------------------------------------------- geodesics

def test_geodesic_horizontal():
    base = canonical_geodesic(Slope(0, 1), 2)
    assert base.offset == Fraction(1, 5)
    assert len(base.white) == len(base.black) == 1


def test_geodesic_vertical():
    base = canonical_geodesic(Slope(1, 0), 2)
    assert len(base.white) == len(base.black) == 1


def test_geodesic_two_over_one_meets_a_twice():
    seq = geodesic_edge_sequence(canonical_geodesic(Slope(2, 1), 2))
    assert seq.count("a") == 2
    assert seq.count("c") == 2


def test_geodesic_rejects():
    with pytest.raises(ValueError):
        canonical_geodesic(PERIPHERAL)
    with pytest.raises(ValueError):
        canonical_geodesic(Slope(1, 2), 2, Fraction(1))


@given(small_slopes)
def test_edge_counts_match_intersections(x):
    seq = geodesic_edge_sequence(canonical_geodesic(x, 2))
    # crossings with a and c equal |r|, with b and d equal s
    assert seq.count("a") == seq.count("c") == abs(x.r)
    assert seq.count("b") == seq.count("d") == x.s


@given(small_slopes)
def test_alternation(x):
    assert alternation_holds(canonical_geodesic(x, 3))


@given(small_slopes, small_slopes)
def test_crossing_formula(x, y):
    assert geodesic_crossings(x, y, 2) == intersection_curves(x, y)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_long_geodesics_touch_every_horizontal_edge(n):
    for x in enumerate_slopes(18):
        if abs(x.r) > 2 * n:
            assert touches_every_horizontal_edge(x, n)


# ---------------------------------------------------------------- holonomy

def test_classify_holonomy():
    assert classify_holonomy(DeckHolonomy(1, (2, 4))) == Essential(Slope(2, 1))
    assert classify_holonomy(DeckHolonomy(1, (0, 0))) == NullHomotopic()
    assert classify_holonomy(DeckHolonomy(-1, (0, 0))) == AroundVertex("A")
    with pytest.raises(PullbackError):
        classify_holonomy(DeckHolonomy(1, (4, 0)))
    with pytest.raises(ValueError):
        DeckHolonomy(1, (1, 0))


def test_holonomy_composition():
    g = DeckHolonomy(-1, (2, 0))
    assert g.compose(g) == DeckHolonomy.identity()
    assert g((1, 1)) == (1, -1)


@given(small_slopes)
def test_plain_translation_is_twice_slope(x):
    # a plain pullback is a full lift of the geodesic
    p = build_pillow(plain_spec(2))
    comp = pullback_components(p, x)[0]
    start, trace, exc = collapse_flap_excursions(p, comp.crossings)
    assert exc == 0
    h = holonomy_of_loop(p, trace, start)
    assert h.sign == 1
    assert h.w in ((2 * x.s, 2 * x.r), (-2 * x.s, -2 * x.r))


def test_flap_only_loop_is_null():
    p = build_pillow(iter_specs(4, ["F:h:1:1"]))
    comps = pullback_components(p, Slope(0, 1))
    inside = [c for c in comps if not c.essential]
    assert len(inside) == 1
    assert inside[0].classification == NullHomotopic()
    with pytest.raises(ValueError):
        collapse_flap_excursions(p, inside[0].crossings)


# ---------------------------------------------------------------- pullbacks

@pytest.mark.parametrize("n", [2, 3, 4])
def test_plain_pullbacks(n):
    for x in enumerate_slopes(6):
        comps = pullback_components(plain_spec(n), x)
        assert len(comps) == n
        assert all(c.classification == Essential(x) and c.degree == n for c in comps)
        assert thurston_coefficient(plain_spec(n), x) == 1
        assert slope_map(plain_spec(n), x) == x


def test_horizontal_flap_n4():
    comps = pullback_components(iter_specs(4, ["F:h:1:1"]), Slope(0, 1))
    ess = [c for c in comps if c.essential]
    assert len(comps) == 5 and len(ess) == 4
    assert all(c.slope == Slope(0, 1) and c.degree == 4 for c in ess)


def test_vertical_flap_raises_degree():
    spec = iter_specs(4, ["F:h:0:1", "F:v:2:1"])
    comps = pullback_components(spec, Slope(0, 1))
    assert sorted(c.degree for c in comps if c.essential) == [4, 4, 4, 5]
    assert thurston_coefficient(spec, Slope(0, 1)) == Fraction(19, 20)


def test_known_images():
    assert slope_map(corner_spec(3), Slope(1, 9)) == Slope(3, 25)
    assert slope_map(plain_spec(2), Slope(2, 1)) == Slope(2, 1)
    assert slope_map(corner_spec(2), Slope(1, 1)) == Slope(1, 1)
    assert slope_map(corner_spec(2), PERIPHERAL) is PERIPHERAL


def test_corner2_three_thirteenths():
    comps = pullback_components(corner_spec(2), Slope(3, 13))
    ess = sorted((c.degree, c.slope) for c in comps if c.essential)
    assert ess == [(1, Slope(1, 3)), (2, Slope(1, 3))]
    per = {c.classification for c in comps if not c.essential}
    assert per == {AroundVertex("D")}
    assert sum(c.degree for c in comps) == 6


def test_record_field_order():
    rec = pullback_components(corner_spec(2), Slope(0, 1))[0].record()
    assert list(rec) == ["classification", "degree", "chords", "flap_excursions"]


def test_pullback_rejects_peripheral():
    with pytest.raises(ValueError):
        pullback_components(plain_spec(2), PERIPHERAL)


@pytest.mark.parametrize("spec", sweep()[:30], ids=str)
def test_horizontal_pullbacks_match_row_count(spec):
    comps = pullback_components(spec, Slope(0, 1))
    degrees, n_per, lam = horizontal_oracle(spec)
    assert sorted(c.degree for c in comps if c.essential) == degrees
    assert all(c.slope == Slope(0, 1) for c in comps if c.essential)
    assert sum(not c.essential for c in comps) == n_per
    assert thurston_coefficient(spec, Slope(0, 1)) == lam


@given(st.integers(0, 10**9), small_slopes)
def test_oracle_agrees_with_holonomy(seed, x):
    spec = random_spec(random.Random(seed))
    p = build_pillow(spec)
    for comp in pullback_components(p, x):
        got = oracle_classification(p, comp)
        if comp.essential:
            assert got == "essential"
        else:
            assert got == comp.classification


@given(st.integers(0, 10**9), small_slopes)
def test_degree_conservation_and_reference_chords(seed, x):
    spec = random_spec(random.Random(seed))
    comps = pullback_components(spec, x)
    assert sum(c.degree for c in comps) == spec.degree
    p = build_pillow(spec)
    for c in comps:
        ref = [ch for ch in c.chords if ch.source_chord_id == 0]
        white = sum(p.tiles[ch.tile].color is Color.WHITE for ch in ref)
        assert 2 * white == len(ref) == 2 * c.degree


@given(small_slopes)
def test_offset_independence(x):
    spec = corner_spec(2)
    assert slope_map(spec, x) == slope_map(spec, x, Fraction(1, 7))


# ---------------------------------------------------------------- obstructions

def test_obstruction_plain_warns():
    with pytest.warns(UserWarning):
        rep = is_obstruction(plain_spec(2), Slope(1, 2))
    assert rep.obstruction and rep.lam == 1 and not rep.hyperbolic


def test_obstruction_examples():
    hspec = corner_spec(2, vertical=False)
    rep = is_obstruction(hspec, Slope(0, 1))
    assert rep and rep.lam == 1 and rep.hyperbolic
    assert not is_obstruction(corner_spec(2), Slope(0, 1))
    assert not is_obstruction(corner_spec(2), Slope(1, 0))


def test_eliminate():
    hspec = corner_spec(2, vertical=False)
    new = eliminate_obstruction(hspec, Slope(0, 1))
    assert new.n_v >= 1 and new.n_h == hspec.n_h
    assert thurston_coefficient(new, Slope(0, 1)) < 1
    for x in enumerate_slopes(12):
        assert not is_obstruction(new, x)


def test_eliminate_rejects():
    with pytest.raises(SpecError):
        eliminate_obstruction(corner_spec(2), Slope(0, 1))
    with pytest.raises(SpecError):
        eliminate_obstruction(corner_spec(2, vertical=False), Slope(1, 2))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(SpecError):
            eliminate_obstruction(plain_spec(2), Slope(0, 1))


@pytest.mark.parametrize("spec", [s for s in sweep() if s.n_h == 0 or s.n_v == 0][:8], ids=str)
def test_eliminate_sweep(spec):
    for x in (Slope(0, 1), Slope(1, 0)):
        if is_obstruction(spec, x):
            new = eliminate_obstruction(spec, x)
            assert thurston_coefficient(new, x) < 1
