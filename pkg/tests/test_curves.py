"""
Tests for slopes, normal curves, intersection numbers and curve-graph slices.
"""

from fractions import Fraction
from itertools import combinations

import pytest

from effcurves.curves import (
    Slope, SporadicSurface, brute_force_intersection, curve_from_word, enumerate_curve_graph,
    farey_distance, farey_exact_distance, format_record, hempel_bound, hempel_distance_cap,
    length_intersection_bound, normal_intersection, normal_is_valid, normal_to_slope,
    parse_record, punctured_torus, push_across_vertex, random_curves, read_edge_list, read_records,
    slope_intersection, slope_to_normal, slopes_up_to, trace, write_edge_list, write_records,
)
from effcurves.curves.normal import NormalCurve
from effcurves.errors import ComplexityExceeded, InvalidSurface, ParseError


# ============================================================================
# SLOPES AND THE FAREY GRAPH
# ============================================================================

def test_slope_normalization():
    """Slopes are reduced with a positive denominator; 1/0 is the only infinite slope."""
    assert Slope(2, -4) == Slope(-1, 2)
    assert str(Slope.parse(" 6 / 4 ")) == "3/2"
    assert Slope(-3, 0) == Slope(1, 0)
    assert Slope(1, 0).is_infinite()
    assert Slope(-7, 3).height == 7


@pytest.mark.parametrize("text", ["", "1/", "a/b", "0/0", "1.5/2"])
def test_slope_parse_errors(text):
    with pytest.raises(ParseError):
        Slope.parse(text)


def test_slope_intersection():
    """|p q' - q p'|, doubled on the four-holed sphere."""
    assert slope_intersection("0/1", "1/0") == 1
    assert slope_intersection("1/2", "3/5") == 1
    assert slope_intersection("1/2", "1/2") == 0
    assert slope_intersection("1/0", "1/3") == 3
    assert slope_intersection("1/2", "3/5", SporadicSurface.FOUR_HOLED_SPHERE) == 2
    assert slope_intersection("0/1", "1/0", "s04") == 2


def test_farey_distance_examples():
    assert farey_distance("0/1", "1/0").distance == 1
    assert farey_distance("3/7", "3/7").distance == 0
    assert farey_distance("0/1", "1/2").distance == 1  # |0*2 - 1*1| = 1
    assert farey_distance("1/0", "1/2").distance == 2
    assert farey_distance("1/0", "2/5").distance == 3
    assert farey_distance("1/0", "1/3").distance == 2


def test_farey_distance_large_denominators():
    """Long continued-fraction rims are crossed through the pivot."""
    assert farey_distance("1/0", "1/5000", radius=10).distance == 2
    assert farey_exact_distance("1/0", "5000/10001") == 3  # [0; 2, 5000]
    assert farey_exact_distance("0/1", f"1/{10 ** 40}") == 1
    assert farey_exact_distance("1/0", f"{10 ** 40 + 1}/{10 ** 40}") == 2
    # consecutive Fibonacci ratios [0; 1, 1, ..., 1, 2]
    a, b = 1, 2
    for _ in range(3000):
        a, b = b, a + b
    assert farey_exact_distance("1/0", f"{a}/{b}") > 100


def test_farey_distance_is_symmetric():
    slopes = slopes_up_to(5)
    for a, b in combinations(slopes, 2):
        assert farey_exact_distance(a, b) == farey_exact_distance(b, a)


def test_farey_distance_unresolved_beyond_radius():
    result = farey_distance("1/0", "1/2", radius=1)
    assert not result.resolved
    assert result.to_dict() == {"status": "Unresolved", "radius": 1}
    assert farey_distance("0/1", "1/0").to_dict() == {"status": "Resolved", "distance": 1}
    with pytest.raises(ValueError):
        farey_distance("0/1", "1/0", radius=0)


def test_farey_distance_matches_slice_bfs():
    """The closed-form distance agrees with BFS in an enumerated slice."""
    graph = enumerate_curve_graph("s11", 4)
    for a, b in combinations(slopes_up_to(2), 2):
        found = graph.distance(a, b)
        assert found.resolved
        # a slice can only lengthen paths
        assert found.distance >= farey_exact_distance(a, b)
        if max(a.height, b.height) <= 1:
            assert found.distance == farey_exact_distance(a, b)


# ============================================================================
# DISTANCE AND LENGTH BOUNDS
# ============================================================================

def test_hempel_bound_values():
    assert hempel_bound(0).contains(1)
    assert hempel_bound(1).contains(2)
    assert hempel_bound(2).contains(4)
    assert hempel_bound(4).contains(6)
    assert hempel_distance_cap(3) == 5
    with pytest.raises(ValueError):
        hempel_bound(-1)


def test_length_intersection_bound():
    bound = length_intersection_bound(1, 2)  # 1 * e
    assert bound.certainly_gt(Fraction("2.718"))
    assert bound.certainly_lt(Fraction("2.719"))
    with pytest.raises(ValueError):
        length_intersection_bound(-1, 2)


def test_hempel_consistency_small():
    """d <= 2 + 2 log2(i) for slope pairs of height <= 6."""
    caps = {}
    for a, b in combinations(slopes_up_to(6), 2):
        i = slope_intersection(a, b)
        if i not in caps:
            caps[i] = hempel_distance_cap(i)
        assert farey_exact_distance(a, b) <= caps[i]


@pytest.mark.slow
def test_hempel_consistency_exhaustive():
    """d <= 2 + 2 log2(i) for every slope pair of height <= 30."""
    caps = {}
    slopes = slopes_up_to(30)
    violations = []
    for a, b in combinations(slopes, 2):
        i = slope_intersection(a, b)
        if i not in caps:
            caps[i] = hempel_distance_cap(i)
        result = farey_distance(a, b, radius=64)
        assert result.resolved
        if result.distance > caps[i]:
            violations.append((str(a), str(b)))
    assert violations == []


# ============================================================================
# CURVE-GRAPH SLICES
# ============================================================================

def test_slice_of_height_one():
    """Slopes of height 1: 1/0, -1/1, 0/1, 1/1; only -1/1 and 1/1 miss the i = 1 relation."""
    graph = enumerate_curve_graph("s11", 1)
    assert graph.vertices() == sorted(["-1/1", "0/1", "1/0", "1/1"])
    assert len(graph.edges()) == 5
    assert ("-1/1", "1/1") not in graph.edges()
    provenance = graph.provenance()
    assert provenance == {"surface": "s11", "bound": 1, "relation": "i=1", "vertices": 4, "edges": 5}


def test_four_holed_sphere_slice_uses_i_two():
    graph = enumerate_curve_graph(SporadicSurface.FOUR_HOLED_SPHERE, 1)
    assert graph.relation == "i=2"
    assert len(graph.edges()) == 5


def test_slice_rejects_bad_bound():
    with pytest.raises(ValueError):
        enumerate_curve_graph("s11", 0)


def test_slice_is_deterministic():
    first = enumerate_curve_graph("s11", 3)
    second = enumerate_curve_graph("s11", 3)
    assert first.vertices() == second.vertices()
    assert first.edges() == second.edges()


def test_slice_copy_is_independent():
    graph = enumerate_curve_graph("s11", 1)
    copy = graph.copy()
    copy.add_curve(Slope(1, 2))
    assert "1/2" in copy.vertices()
    assert "1/2" not in graph.vertices()
    assert graph.edges() != copy.edges()


def test_add_curve_links_new_vertex():
    graph = enumerate_curve_graph("s11", 1)
    label = graph.add_curve(Slope(1, 2))
    assert label == "1/2"
    assert graph.distance(Slope(1, 2), Slope(0, 1)).distance == 1
    assert graph.distance(Slope(1, 2), Slope(1, 0)).distance == 2


# ============================================================================
# NORMAL CURVES
# ============================================================================

def test_punctured_torus():
    torus = punctured_torus()
    assert torus.euler == -1
    assert torus.sporadic_kind() == "s11"
    assert torus.is_free()


@pytest.mark.parametrize("slope", ["1/0", "0/1", "1/1", "-1/1", "2/3", "-3/5", "5/2"])
def test_slope_normal_round_trip(slope):
    curve = slope_to_normal(slope)
    assert normal_is_valid(curve)
    assert normal_to_slope(curve) == Slope.parse(slope)


def test_normal_intersection_matches_determinant():
    """On the punctured torus, i(a, b) of normal curves equals |det| of their slopes."""
    slopes = slopes_up_to(3)
    for a, b in combinations(slopes, 2):
        ca, cb = slope_to_normal(a), slope_to_normal(b)
        assert normal_intersection(ca, cb) == slope_intersection(a, b)


def test_normal_intersection_agrees_with_brute_force():
    """The word algorithm and the exhaustive interleaving oracle agree."""
    slopes = [Slope(1, 0), Slope(0, 1), Slope(1, 1), Slope(1, 2), Slope(-1, 2)]
    for a, b in combinations(slopes, 2):
        ca, cb = slope_to_normal(a), slope_to_normal(b)
        assert normal_intersection(ca, cb) == brute_force_intersection(ca, cb)


def test_normal_intersection_budget():
    ca, cb = slope_to_normal("13/21"), slope_to_normal("-21/34")
    with pytest.raises(ComplexityExceeded):
        normal_intersection(ca, cb, budget=5)


def test_invalid_normal_curve_diagnostics():
    torus = punctured_torus()
    broken = NormalCurve(torus, ((1, 0, 0), (0, 0, 0)))
    validity = normal_is_valid(broken)
    assert not validity
    assert any("matching equation" in d for d in validity.diagnostics)
    empty = NormalCurve(torus, ((0, 0, 0), (0, 0, 0)))
    assert normal_is_valid(empty).diagnostics == ["empty curve"]


def test_curve_from_word_round_trip():
    curve = slope_to_normal("2/3")
    rebuilt = curve_from_word(curve.surface, curve.canonical_word())
    assert rebuilt == curve


def test_random_curves_are_valid_and_reproducible():
    torus = punctured_torus()
    first = random_curves(torus, 6, seed=3)
    assert first == random_curves(torus, 6, seed=3)
    assert len(set(first)) == len(first)
    for curve in first:
        assert normal_is_valid(curve)


def test_random_curve_intersections_against_oracle():
    """Sampled pairs agree with the slope model."""
    curves = random_curves(punctured_torus(), 5, seed=11, max_length=12)
    for ca, cb in combinations(curves, 2):
        expected = slope_intersection(normal_to_slope(ca), normal_to_slope(cb))
        assert normal_intersection(ca, cb) == expected


def test_wrong_weight_shape_rejected():
    with pytest.raises(InvalidSurface):
        NormalCurve(punctured_torus(), ((1, 0, 0),))


# ============================================================================
# EXCHANGE FORMAT
# ============================================================================

def test_record_format():
    curve = slope_to_normal("1/0")
    text = format_record(curve)
    assert text.startswith("surface s11; weights t0:(")
    assert parse_record(text) == curve
    assert parse_record("slope 3/5") == Slope(3, 5)


def test_read_records_skips_comments():
    text = "# header\nslope 1/2\n\nsurface s11; weights t0:(1,0,0) t1:(0,1,0)  # 1/0\n"
    records = read_records(text)
    assert records[0] == Slope(1, 2)
    assert records[1] == slope_to_normal("1/0")
    assert read_records(write_records(records)) == records


@pytest.mark.parametrize("text", [
    "slope 1/",
    "surface s99; weights t0:(1,0,0) t1:(0,1,0)",
    "surface s11; weights t0:(1,0,0)",
    "surface s11; weights t0:(1,0,0) t0:(0,1,0)",
    "curve 1/2",
])
def test_record_errors(text):
    with pytest.raises(ParseError):
        parse_record(text)


def test_edge_list_export(tmp_path):
    graph = enumerate_curve_graph("s11", 2)
    path = write_edge_list(graph, tmp_path / "s11.edges")
    loaded = read_edge_list(path)
    assert loaded.number_of_edges() == len(graph.edges())
    first_line = path.read_text().splitlines()[0]
    assert first_line == "# s11 bound=2 relation=i=1"


def test_trace_splits_multicurves():
    curve = slope_to_normal("2/3")
    assert len(trace(curve)) == 1
    doubled = NormalCurve(curve.surface, tuple(tuple(2 * w for w in row) for row in curve.weights))
    components = trace(doubled)
    assert len(components) == 2
    assert len(components[0]) == len(components[1])


def test_push_across_vertex_keeps_intersections(fix_a):
    """A slide over a vertex gives an isotopic representative."""
    inside = fix_a.named_curve("inside")
    crossing = fix_a.named_curve("crossing")
    pushed = push_across_vertex(inside)
    if pushed is None:
        pytest.skip("no slide applies to this representative")
    assert pushed != inside
    assert normal_is_valid(pushed)
    assert normal_intersection(pushed, crossing) == normal_intersection(inside, crossing)
