"""End-to-end acceptance criteria.

Each test records one PASS/FAIL line; the lines are printed in the pytest
terminal summary and when this file is run as a script.
"""

import random
import time
from fractions import Fraction

from flapped_pillow import annuli, pullback
from flapped_pillow.complex import Color, PillowSpec, build_pillow, corner_spec, iter_specs, plain_spec
from flapped_pillow.dynamics import FixedPoint, attractor, fixed_slopes, monotonicity_scan, orbit, relation_check_3x3
from flapped_pillow.pullback import (
    is_obstruction,
    oracle_classification,
    pullback_components,
    slope_map,
    thurston_coefficient,
)
from flapped_pillow.slopes import PERIPHERAL, Slope, complexity, enumerate_slopes, intersection_curves
from sweep import horizontal_oracle, random_spec, sweep

RESULTS = {}

ORBIT_1_9 = [Slope(1, 9), Slope(3, 25), Slope(3, 23), Slope(1, 7), Slope(3, 19), Slope(3, 17),
                   Slope(1, 5), Slope(1, 5)]
INVARIANT_2X2 = {Slope(0, 1), Slope(1, 0), Slope(1, 1), Slope(-1, 1)}
VERTICAL_ONLY = iter_specs(2, ["F:v:0:1", "F:v:1:1", "B:v:0:1", "B:v:1:1"])
H, V, D = Slope(0, 1), Slope(1, 0), Slope(1, 1)


def record(k, title, ok, detail=""):
    RESULTS[k] = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {title}" + (f" ({detail})" if detail else "")
    assert ok, RESULTS[k]


def clear_caches():
    pullback._MU_CACHE.clear()
    pullback._PILLOW_CACHE.clear()
    pullback.canonical_geodesic.cache_clear()


def both_flap_kinds_n2(count, seed=7):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        spec = random_spec(rng, n=2)
        if spec.n_h and spec.n_v and spec not in out:
            out.append(spec)
    return out


def test_c01_orbit_of_one_ninth():
    clear_caches()
    t = time.perf_counter()
    rec = orbit(corner_spec(3), Slope(1, 9), 20)
    dt = time.perf_counter() - t
    ok = list(rec.states) == ORBIT_1_9 and rec.terminal == FixedPoint(Slope(1, 5)) and dt < 10
    record(1, "3x3 orbit of 1/9", ok, f"{dt:.2f}s")


def test_c02_invariant_slopes():
    fixed = fixed_slopes(corner_spec(2), 8)
    rep = attractor(corner_spec(2), 30, 20, 100)
    ok = set(fixed) == INVARIANT_2X2 and len(fixed) == 4 and rep.attractor_certified
    record(2, "2x2 corner map fixed slopes and certified attractor", ok)


def test_c03_horizontal_pullbacks():
    specs = sweep()
    bad = []
    for spec in specs:
        comps = pullback_components(spec, H)
        degrees, n_per, lam = horizontal_oracle(spec)
        ess = [c for c in comps if c.essential]
        ok = (len(ess) == spec.n and all(c.slope == H for c in ess)
              and sorted(c.degree for c in ess) == degrees
              and sum(not c.essential for c in comps) == n_per
              and thurston_coefficient(spec, H) == lam)
        if not ok:
            bad.append(str(spec))
    record(3, "pullbacks of the horizontal curve", len(specs) >= 50 and not bad,
           f"{len(specs)} configs, {len(bad)} bad")


def test_c04_axis_obstructions():
    specs = sweep()
    bad = [str(s) for s in specs
           if bool(is_obstruction(s, H)) != (s.n_v == 0) or bool(is_obstruction(s, V)) != (s.n_h == 0)]
    record(4, "axis obstructions exactly when a flap kind is missing", not bad, f"{len(bad)} bad")


def test_c05_no_other_obstructions():
    t = time.perf_counter()
    specs = [s for s in sweep() if s.n_h and s.n_v]
    bad = [(str(s), str(x)) for s in specs for x in enumerate_slopes(12) if is_obstruction(s, x)]
    dt = time.perf_counter() - t
    record(5, "no obstruction up to complexity 12 with both flap kinds", not bad and dt < 120,
           f"{len(specs)} configs, {dt:.1f}s")


def test_c06_monotonicity():
    specs = both_flap_kinds_n2(12)
    bad = []
    for spec in specs:
        if monotonicity_scan(spec, 30):
            bad.append(str(spec))
            continue
        for x in enumerate_slopes(30):
            y = slope_map(spec, x)
            if (complexity(y) == complexity(x)) != (y == x):
                bad.append(str(spec))
                break
    record(6, "complexity monotonicity on n = 2 maps", len(specs) >= 10 and not bad,
           f"{len(specs)} configs")


def test_c07_plain_baseline():
    bad = []
    for n in (2, 3, 4):
        for x in enumerate_slopes(10):
            comps = pullback_components(plain_spec(n), x)
            if not (len(comps) == n and all(c.classification == pullback.Essential(x) and c.degree == n
                                            for c in comps)
                    and thurston_coefficient(plain_spec(n), x) == 1 and slope_map(plain_spec(n), x) == x):
                bad.append((n, str(x)))
    record(7, "plain Lattes maps fix every slope", not bad)


def test_c08_circuit_lengths():
    bad = []
    lengths = {}
    for spec in sweep():
        for x in (H, V, D):
            anns = annuli.annulus_components(spec, x)
            for a in anns:
                if a.circuit_length != 2 * a.degree:
                    bad.append(("circuit", str(spec), str(x)))
                if a.essential and not a.essential_circuit_length <= a.circuit_length:
                    bad.append(("essential", str(spec), str(x)))
            lengths[(spec, x)] = sorted(a.essential_circuit_length for a in anns if a.essential)
    pairs = 0
    for spec in sweep():
        partner = PillowSpec(spec.n, spec.flaps[:-1])
        for x in (H, V, D):
            other = sorted(a.essential_circuit_length for a in annuli.annulus_components(partner, x)
                           if a.essential)
            if other != lengths[(spec, x)]:
                bad.append(("partner", str(spec), str(x)))
        pairs += 1
    record(8, "circuit lengths and partner annuli", pairs >= 10 and not bad,
           f"{pairs} partner pairs, {len(bad)} bad")


def test_c09_crossing_formula():
    rng = random.Random(9)
    pool = enumerate_slopes(30)
    bad = 0
    for _ in range(200):
        x, y = rng.choice(pool), rng.choice(pool)
        if pullback.geodesic_crossings(x, y, rng.choice((2, 3))) != intersection_curves(x, y):
            bad += 1
    record(9, "intersection formula against traced geodesics", bad == 0, "200 pairs")


def test_c10_relation():
    rep = relation_check_3x3(corner_spec(3), 40)
    record(10, "3x3 shift relation up to complexity 40", rep.passed,
           f"{rep.checked} checked, {rep.skipped} skipped, {len(rep.counterexamples)} counterexamples")


def test_c11_vertical_only():
    ints = [Slope(k, 1) for k in range(-10, 11)] + [Slope(1, 0)]
    fixed_ok = all(slope_map(VERTICAL_ONLY, x) == x for x in ints)
    rng = random.Random(11)
    starts = rng.sample(enumerate_slopes(20), 100)
    landed = 0
    for x in starts:
        last = orbit(VERTICAL_ONLY, x, 40).states[-1]
        if last is PERIPHERAL or last.s in (0, 1):
            landed += 1
    record(11, "vertical-only 2x2 map", fixed_ok and landed == 100, f"{landed}/100 orbits land")


def test_c12_oracle():
    rng = random.Random(12)
    pool = enumerate_slopes(15)
    bad = 0
    checked = 0
    for _ in range(100):
        spec = random_spec(rng)
        x = rng.choice(pool)
        p = build_pillow(spec)
        for comp in pullback_components(p, x):
            checked += 1
            got = oracle_classification(p, comp)
            if got != ("essential" if comp.essential else comp.classification):
                bad += 1
            ref = [ch for ch in comp.chords if ch.source_chord_id == 0]
            white = sum(p.tiles[ch.tile].color is Color.WHITE for ch in ref)
            if white != len(ref) - white or white != comp.degree:
                bad += 1
    record(12, "holonomy classification against the side-count oracle", bad == 0,
           f"{checked} components")


def test_c13_offset_independence():
    rec = orbit(corner_spec(3), Slope(1, 9), 20, offset=Fraction(1, 9))
    fixed = fixed_slopes(corner_spec(2), 8, offset=Fraction(1, 7))
    ok = list(rec.states) == ORBIT_1_9 and set(fixed) == INVARIANT_2X2
    record(13, "results unchanged with offset 1/(2n+3)", ok)


if __name__ == "__main__":
    import sys

    for name, fn in sorted(globals().items()):
        if name.startswith("test_c") and callable(fn):
            try:
                fn()
            except AssertionError:
                pass
    for k in sorted(RESULTS):
        print(RESULTS[k])
    sys.exit(0 if all("PASS" in v for v in RESULTS.values()) else 1)
