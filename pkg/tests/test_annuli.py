import random

import pytest
from hypothesis import given, strategies as st

from flapped_pillow.annuli import (
    BudgetExceeded,
    annulus_components,
    core_arc_pair,
    essential_circuit_length,
    preimage_graph,
)
from flapped_pillow.complex import build_pillow, corner_spec, iter_specs, plain_spec
from flapped_pillow.pullback import pullback_components
from flapped_pillow.slopes import PERIPHERAL, Slope, enumerate_slopes
from sweep import random_spec

tiny_slopes = st.sampled_from(enumerate_slopes(5))


def test_core_arcs_axis():
    h = core_arc_pair(Slope(0, 1))
    assert h.axis and h.xi_ends == ("A", "B") and h.xi_prime_ends == ("C", "D")
    v = core_arc_pair(Slope(1, 0))
    assert v.axis and v.xi_ends == ("A", "D") and v.xi_prime_ends == ("B", "C")


@given(st.sampled_from(enumerate_slopes(12)))
def test_core_arcs_split_marked_points(x):
    arcs = core_arc_pair(x)
    assert sorted(arcs.xi_ends + arcs.xi_prime_ends) == ["A", "B", "C", "D"]


def test_core_arcs_reject_peripheral():
    with pytest.raises(ValueError):
        core_arc_pair(PERIPHERAL)


@pytest.mark.parametrize("n", [2, 3])
def test_plain_annuli(n):
    for x in enumerate_slopes(4):
        anns = annulus_components(plain_spec(n), x)
        assert len(anns) == n
        for a in anns:
            assert a.essential and a.slope == x and a.degree == n
            assert a.circuit_length == 2 * n
            assert a.sticks == 0
            assert a.essential_circuit_length == a.circuit_length


def test_corner_annuli_one_one():
    anns = annulus_components(corner_spec(2), Slope(1, 1))
    assert sorted((a.degree, a.circuit_length, a.essential_circuit_length) for a in anns) == [
        (2, 4, 4), (4, 8, 4)]


def test_flap_annulus_is_peripheral():
    anns = annulus_components(iter_specs(4, ["F:h:1:1"]), Slope(0, 1))
    per = [a for a in anns if not a.essential]
    assert len(per) == 1 and per[0].essential_circuit_length is None
    assert per[0].circuit_length == 2 * per[0].degree


def test_one_annulus_per_pullback():
    spec = corner_spec(3)
    for x in (Slope(1, 2), Slope(-2, 3)):
        anns = annulus_components(spec, x)
        comps = pullback_components(spec, x)
        assert [a.degree for a in anns] == [c.degree for c in comps]


def test_budget():
    spec = corner_spec(2)
    with pytest.raises(BudgetExceeded):
        annulus_components(spec, Slope(1, 1), budget=1)
    # no budget means no cap
    assert annulus_components(spec, Slope(1, 1), budget=None)


def test_essential_length_needs_essential_annulus():
    spec = iter_specs(4, ["F:h:1:1"])
    graph = preimage_graph(build_pillow(spec), Slope(0, 1))
    per = [a for a in annulus_components(spec, Slope(0, 1)) if not a.essential][0]
    with pytest.raises(ValueError):
        essential_circuit_length(graph, per)


def test_preimage_graph_shape():
    p = build_pillow(corner_spec(2))
    g = preimage_graph(p, Slope(1, 2))
    assert g.is_bipartite()
    # each lift has both ends at vertices over the arc's end labels
    for lift in g.lifts:
        labels = {p.vertex_image[v] for v, _, _ in lift.ends}
        want = g.arcs.xi_ends if lift.kind == "xi" else g.arcs.xi_prime_ends
        assert labels <= set(want)


def test_record_fields():
    rec = annulus_components(corner_spec(2), Slope(0, 1))[0].record()
    assert list(rec) == ["annulus", "essential", "degree", "circuit_length", "essential_circuit_length"]


@given(st.integers(0, 10**9), tiny_slopes)
def test_circuit_length_is_twice_degree(seed, x):
    spec = random_spec(random.Random(seed))
    for a in annulus_components(spec, x):
        assert a.circuit_length == 2 * a.degree
        if a.essential:
            assert a.essential_circuit_length <= a.circuit_length
            assert a.essential_circuit_length % 2 == 0


@given(st.integers(0, 10**9), st.sampled_from([Slope(0, 1), Slope(1, 0), Slope(1, 1)]))
def test_adding_a_flap_keeps_essential_lengths(seed, x):
    spec = random_spec(random.Random(seed))
    smaller = type(spec)(spec.n, spec.flaps[:-1])
    big = sorted(a.essential_circuit_length for a in annulus_components(spec, x) if a.essential)
    small = sorted(a.essential_circuit_length for a in annulus_components(smaller, x) if a.essential)
    assert big == small
