"""
Tests for subsurface fixtures, arc surgery and projection diameters.
"""

from itertools import combinations

import pytest

from effcurves.curves import normal_intersection, normal_is_valid, push_across_vertex, random_curves
from effcurves.errors import (
    ComplexityExceeded, DegenerateSurgery, InvalidSurface, NoEssentialIntersection, ParseError,
)
from effcurves.projection import (
    default_slice, fixture_names, load_fixture, parse_fixture, project_curve, projection_diameter,
    projection_distance, slope_chart,
)


# ============================================================================
# FIXTURES
# ============================================================================

def test_shipped_fixtures():
    assert fixture_names() == ["fixA", "fixB", "fixC"]


def test_fixture_descriptions(fix_a, fix_b, fix_c):
    """Each fixture embeds a proper essential subsurface of a closed surface."""
    a = fix_a.describe()
    assert a["sub"] == "S(1,1)"
    assert a["boundary_components"] == 1
    assert a["ambient_euler"] == -2
    assert a["curves"] == ["crossing", "inside", "outside"]

    b = fix_b.describe()
    assert b["sub"] == "S(0,4)"
    assert b["boundary_components"] == 4
    assert b["curves"] == ["inside", "outside", "tube"]

    c = fix_c.describe()
    assert c["sub"] == "S(1,2)"
    assert c["ambient_euler"] == -4


def test_unknown_fixture():
    with pytest.raises(InvalidSurface):
        load_fixture("fixZ")


def test_unknown_curve_name(fix_a):
    with pytest.raises(InvalidSurface):
        fix_a.named_curve("nowhere")


def test_fixture_curves_are_valid(fix_a, fix_b, fix_c):
    for emb in (fix_a, fix_b, fix_c):
        for name in emb.describe()["curves"]:
            assert normal_is_valid(emb.named_curve(name)), (emb.name, name)


def test_label_walk_matches_named_curve(fix_a):
    assert fix_a.curve_from_labels(["c", "d", "C", "a"]) == fix_a.named_curve("crossing")


@pytest.mark.parametrize("text", [
    "fixture broken\nsub a b A B c\n",
    "fixture broken\nsub a b A B c\ncomp d e D E C\nwibble 1\n",
    "fixture broken\nsub a b A B c\ncomp d e D E C\nembedding t0=t0\n",
    "fixture broken\nsub a b A B c\ncomp d e D E C\ncurve = a\n",
])
def test_malformed_fixture(text):
    with pytest.raises(ParseError):
        parse_fixture(text)


def test_disk_subsurface_rejected():
    text = "fixture disk\nsub a b c\ncomp A B C d e D E\n"
    with pytest.raises(InvalidSurface):
        parse_fixture(text)


# ============================================================================
# PROJECTIONS
# ============================================================================

def test_contained_curve_projects_to_itself(fix_a):
    ps = project_curve(fix_a, fix_a.named_curve("inside"))
    assert ps.contained
    assert len(ps.curves) == 1
    assert ps.arc_classes == 0
    assert projection_diameter(ps, fix_a).diameter == 0


def test_disjoint_curve_has_no_projection(fix_a, fix_b):
    with pytest.raises(NoEssentialIntersection):
        project_curve(fix_a, fix_a.named_curve("outside"))
    # the annulus core is parallel to the boundary of the sphere
    with pytest.raises(NoEssentialIntersection):
        project_curve(fix_b, fix_b.named_curve("outside"))


def test_crossing_curve_on_one_holed_torus(fix_a):
    """An arc from the boundary to itself yields curves meeting at most twice."""
    ps = project_curve(fix_a, fix_a.named_curve("crossing"))
    assert not ps.contained
    assert ps.arc_classes >= 1
    assert ps.curves
    for group in ps.groups:
        for x, y in combinations(group, 2):
            assert normal_intersection(x, y) <= 2
    for curve in ps.curves:
        assert normal_is_valid(curve)
    data = ps.to_dict()
    assert data["fixture"] == "fixA"
    assert data["curves"] == ps.labels()


def test_arc_between_two_circles_of_four_holed_sphere(fix_b):
    """An arc joining two boundary circles of S(0,4) gives a single curve."""
    ps = project_curve(fix_b, fix_b.named_curve("tube"))
    assert len(ps.curves) == 1
    assert projection_diameter(ps, fix_b).diameter == 0


def test_projection_is_deterministic(fix_a):
    first = project_curve(fix_a, fix_a.named_curve("crossing"))
    second = project_curve(fix_a, fix_a.named_curve("crossing"))
    assert first.labels() == second.labels()


def test_projection_rejects_foreign_curve(fix_a, fix_b):
    with pytest.raises(InvalidSurface):
        project_curve(fix_a, fix_b.named_curve("tube"))


# ============================================================================
# DIAMETERS
# ============================================================================

def test_slope_chart_on_sporadic_subsurface(fix_a):
    chart = slope_chart(fix_a)
    assert str(chart.to_slope(chart.zero)) == "0/1"
    assert str(chart.to_slope(chart.infinity)) == "1/0"
    assert str(chart.to_slope(chart.one)) == "1/1"


def test_slope_chart_needs_sporadic_subsurface(fix_c):
    with pytest.raises(InvalidSurface):
        slope_chart(fix_c)


def test_projection_diameter_is_bounded(fix_a):
    """A single-source projection has diameter at most 4."""
    ps = project_curve(fix_a, fix_a.named_curve("crossing"))
    result = projection_diameter(ps, fix_a)
    assert result.resolved
    assert result.method == "farey"
    assert result.diameter <= 4
    assert result.to_dict()["status"] == "Resolved"


def test_projection_distance(fix_a):
    inside = project_curve(fix_a, fix_a.named_curve("inside"))
    crossing = project_curve(fix_a, fix_a.named_curve("crossing"))
    result = projection_distance(inside, crossing, fix_a)
    assert result.resolved
    assert result.diameter >= projection_diameter(crossing, fix_a).diameter


def test_projection_distance_needs_one_subsurface(fix_a, fix_b):
    ps_a = project_curve(fix_a, fix_a.named_curve("inside"))
    ps_b = project_curve(fix_b, fix_b.named_curve("tube"))
    with pytest.raises(InvalidSurface):
        projection_distance(ps_a, ps_b, fix_a)


@pytest.mark.slow
def test_slice_diameter_on_two_holed_torus(fix_c):
    """Off the sporadic surfaces the diameter is bracketed from a slice."""
    ps = project_curve(fix_c, fix_c.named_curve("crossing"))
    oracle = default_slice(fix_c)
    before = (oracle.vertices(), oracle.edges())
    result = projection_diameter(ps, fix_c, oracle)
    assert (oracle.vertices(), oracle.edges()) == before
    assert result.method == "slice"
    assert result.lo <= result.hi
    assert result.lo <= 4


@pytest.mark.slow
@pytest.mark.parametrize("name", ["fixA", "fixB", "fixC"])
def test_random_curves_project_with_small_diameter(name):
    """Projections of sampled ambient curves stay within the diameter cap."""
    emb = load_fixture(name)
    checked = 0
    for curve in random_curves(emb.ambient, 100, seed=7, max_length=24):
        try:
            ps = project_curve(emb, curve)
        except (NoEssentialIntersection, DegenerateSurgery, ComplexityExceeded):
            continue
        for group in ps.groups:
            for x, y in combinations(group, 2):
                assert normal_intersection(x, y) <= 2
        result = projection_diameter(ps, emb)
        if emb.sub.sporadic_kind() is not None:
            assert result.method == "farey"
            assert result.resolved
        assert result.lo <= 4
        if result.resolved:
            assert result.diameter <= 4
        checked += 1
    if not checked:
        pytest.skip("no sampled curve met the subsurface")


@pytest.mark.slow
def test_projection_is_isotopy_invariant(fix_a):
    """Pushing an ambient curve across a vertex leaves its projection's slopes unchanged."""
    chart = slope_chart(fix_a)
    compared = 0
    for curve in random_curves(fix_a.ambient, 30, seed=11, max_length=20):
        pushed = push_across_vertex(curve)
        if pushed is None:
            continue
        try:
            before = project_curve(fix_a, curve)
        except (NoEssentialIntersection, DegenerateSurgery, ComplexityExceeded):
            continue
        after = project_curve(fix_a, pushed)
        assert {chart.to_slope(c) for c in before.curves} == {chart.to_slope(c) for c in after.curves}
        compared += 1
    if not compared:
        pytest.skip("no pushable curve met the subsurface")
