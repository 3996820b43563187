"""
Tests for the closed-form hyperbolic-geometry formulas.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from effcurves.config import Settings, reset_settings
from effcurves.errors import DomainError, InvalidEps0, InvalidSurface
from effcurves.hypgeom import (
    MargulisEps, SurfaceSig, anosov_T, ball_area, bers_bound, collar_width, collar_width_lower,
    cusp_radius_at_inj, cusp_separation, flat_meridian_upper, formula_expr,
    get_formula_registry, inj_annulus, inj_cusp, normalized_length_lower,
    radius_at_injectivity_annulus, recurrence_count, shortest_loop_bound, surface_area,
    t1_ball_volume_lower, t_pi6, thick_two_loop_bound, to_fraction, tube_separation,
)


# ============================================================================
# SIGNATURES AND EPS0
# ============================================================================

def test_surface_signature():
    """Euler characteristic and labels of hyperbolic surfaces."""
    closed = SurfaceSig(2)
    assert closed.euler == -2
    assert closed.abs_euler == 2
    assert closed.label() == "S(2,0)"
    assert SurfaceSig(1, punctures=1).is_sporadic()
    assert SurfaceSig(0, boundary=4).is_sporadic()
    assert not SurfaceSig(2).is_sporadic()


def test_surface_signature_from_abs_euler():
    assert SurfaceSig.with_abs_euler(4).abs_euler == 4
    assert SurfaceSig.with_abs_euler(3).abs_euler == 3
    assert SurfaceSig.with_abs_euler(3).punctures == 1


@pytest.mark.parametrize("genus,punctures", [(1, 0), (0, 2), (0, 0)])
def test_non_hyperbolic_surface_rejected(genus, punctures):
    with pytest.raises(InvalidSurface):
        SurfaceSig(genus, punctures=punctures)


def test_margulis_eps_range():
    """eps0 must lie strictly between 0 and arcsinh(1/4) ~ 0.2474."""
    assert MargulisEps(Fraction(1, 10)).eps0 == Fraction(1, 10)
    assert MargulisEps("0.247").eps0 == Fraction(247, 1000)
    for bad in (0, Fraction(-1, 10), Fraction(1, 4), Fraction(248, 1000)):
        with pytest.raises(InvalidEps0):
            MargulisEps(bad)


def test_default_eps0_follows_settings():
    assert MargulisEps.default().eps0 == Fraction(1, 10)
    reset_settings(Settings(eps0=Fraction(1, 8)))
    assert MargulisEps.default().eps0 == Fraction(1, 8)


def test_to_fraction_reads_floats_as_printed():
    assert to_fraction(0.1) == Fraction(1, 10)
    assert to_fraction("1e-3") == Fraction(1, 1000)


# ============================================================================
# REGISTRY
# ============================================================================

def test_registry_lists_formulas():
    """Every formula is registered with a citation and an expression."""
    registry = get_formula_registry()
    names = registry.list_formula_names()
    for expected in ("shortest_loop_bound", "collar_width", "tube_separation", "anosov_T",
                     "t1_ball_volume_lower", "normalized_length_lower"):
        assert expected in names
    for name in names:
        formula = registry.get_formula(name)
        assert formula.citation
        assert formula_expr(name) is formula.expr


def test_unknown_formula():
    with pytest.raises(KeyError):
        formula_expr("no_such_formula")


# ============================================================================
# LENGTH BOUNDS AND COLLARS
# ============================================================================

def test_length_bounds_for_genus_two():
    """Lemma 2.1 bounds at |chi| = 2."""
    sig = SurfaceSig(2)
    assert shortest_loop_bound(sig).certainly_lt(4)  # 2 arccosh 3 ~ 3.525
    assert shortest_loop_bound(sig).certainly_gt(Fraction(35, 10))
    assert bers_bound(sig).certainly_gt(Fraction(1256, 100))
    assert surface_area(sig).certainly_lt(Fraction(1257, 100))
    thick = thick_two_loop_bound(sig, MargulisEps(Fraction(1, 10)))
    assert thick.certainly_gt(shortest_loop_bound(sig))


def test_collar_width_exceeds_lower_bound():
    """log coth(l/4) >= e^(-l/2) at sample lengths."""
    for length in (Fraction(1, 100), Fraction(1, 2), 1, 5, 40):
        assert collar_width(length).certainly_ge(collar_width_lower(length))


def test_collar_width_requires_positive_length():
    with pytest.raises(DomainError):
        collar_width(0)
    with pytest.raises(DomainError):
        collar_width_lower(-1)


def test_injectivity_radius_inverses():
    """radius_at_injectivity_annulus inverts inj_annulus in r."""
    eps, length = Fraction(1, 10), Fraction(1, 20)
    r = radius_at_injectivity_annulus(eps, length)
    assert inj_annulus(length, r).contains(eps)
    depth = cusp_radius_at_inj(eps)
    assert inj_cusp(depth).contains(eps)


def test_radius_at_injectivity_edge_cases():
    """eps = l/2 gives radius 0; eps < l/2 is outside the domain."""
    assert radius_at_injectivity_annulus(Fraction(1, 10), Fraction(1, 5)).is_point()
    with pytest.raises(DomainError):
        radius_at_injectivity_annulus(Fraction(1, 10), Fraction(1, 2))


def test_region_areas():
    assert ball_area(1).certainly_gt(Fraction(341, 100))  # 2 pi (cosh 1 - 1) ~ 3.4122
    assert ball_area(1).certainly_lt(Fraction(342, 100))


# ============================================================================
# THIN-PART SEPARATION
# ============================================================================

def test_tube_separation():
    """arccosh(eps0/sqrt(7.256 eps1)) - 0.042 needs eps0^2 >= 7.256 eps1."""
    value = tube_separation(Fraction(1, 10), Fraction(1, 1000))
    assert value.certainly_positive()
    with pytest.raises(DomainError):
        tube_separation(Fraction(1, 10), Fraction(1, 10))
    with pytest.raises(DomainError):
        tube_separation(Fraction(1, 10), Fraction(1, 500))


def test_cusp_separation():
    assert cusp_separation(Fraction(1, 10), Fraction(1, 10)).is_point()
    assert cusp_separation(Fraction(1, 10), Fraction(1, 100)).certainly_gt(2)


# ============================================================================
# VOLUMES AND RECURRENCE
# ============================================================================

def test_anosov_constant():
    """3072 log2 log2(148) + 3280 log2 + 384 lies in (18000, 18100), tightly."""
    value = anosov_T()
    assert value.certainly_gt(18000)
    assert value.certainly_lt(18100)
    assert value.width() < Fraction(1, 10**6)


def test_t_pi6_selection():
    assert t_pi6("closed_form").contains(anosov_T().mid())
    assert t_pi6("rounded").contains(200000)
    with pytest.raises(ValueError):
        t_pi6("exact")


def test_t_pi6_follows_settings():
    reset_settings(Settings(t_pi6="rounded"))
    assert t_pi6().contains(200000)


def test_t1_ball_volume_surrogate_radius():
    assert t1_ball_volume_lower(Fraction(1, 10)).certainly_positive()
    with pytest.raises(DomainError):
        t1_ball_volume_lower(Fraction(1, 2))


def test_recurrence_count():
    """floor(vol(eps/2) m / (2 pi |chi|)) grows with m."""
    sig = SurfaceSig(2)
    small = recurrence_count(10, Fraction(1, 100), sig)
    assert small.count == 0
    assert small.surrogate
    big = recurrence_count(10**12, Fraction(1, 100), sig)
    assert big.count > 0
    with pytest.raises(DomainError):
        recurrence_count(-1, Fraction(1, 100), sig)
    with pytest.raises(DomainError):
        recurrence_count(10, Fraction(1, 20), sig)


def test_recurrence_count_worked_example():
    """(2 pi/3) (1/40)^3 10^6 / (4 pi) = 15.625/6, so 2 recurrences."""
    count = recurrence_count(10**6, Fraction(1, 20), SurfaceSig(2), MargulisEps(Fraction(1, 5)))
    assert count.count == 2
    assert not count.ambiguous
    assert recurrence_count(0, Fraction(1, 20), SurfaceSig(2), MargulisEps(Fraction(1, 5))).count == 0


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=10**9), st.integers(min_value=0, max_value=10**9))
def test_recurrence_count_is_monotone_in_orbit_length(m, extra):
    sig, eps = SurfaceSig(2), Fraction(1, 50)
    assert recurrence_count(m, eps, sig).count <= recurrence_count(m + extra, eps, sig).count


def test_meridian_formulas():
    flat = flat_meridian_upper(Fraction(1, 100), Fraction(1, 1000))
    assert flat.certainly_gt(251)  # 80 pi
    assert flat.certainly_lt(252)
    normalized = normalized_length_lower(flat, Fraction(1, 10))
    assert normalized.certainly_gt(35)
    assert normalized.certainly_lt(36)


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=Fraction(1, 1000), max_value=50, max_denominator=1000))
def test_collar_width_dominates_everywhere(length):
    """The collar width bound holds at arbitrary rational lengths."""
    assert collar_width(length).certainly_ge(collar_width_lower(length))
