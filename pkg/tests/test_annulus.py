import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatsphere.annulus import (
    REGIME_EXITS_INNER,
    REGIME_INNER_START,
    REGIME_RETURNS_OUTER,
    AnnulusSpec,
    annulus_sc_lower_bound,
    annulus_self_intersections,
    classify_trajectory,
    modulus,
    monogon_family_annulus,
)

from _oracles import annulus_chord_crossings


def test_spec_rejects_bad_radii():
    with pytest.raises(ValueError):
        AnnulusSpec(2.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        AnnulusSpec(-0.5, 1.0, 1.0)
    with pytest.raises(ValueError):
        AnnulusSpec(0.0, 1.0, 0.0)


def test_modulus_values():
    assert modulus(AnnulusSpec(1.0, math.e, math.pi / 2)) == pytest.approx(
        2 / math.pi, abs=1e-12
    )
    assert modulus(AnnulusSpec(1.0, 2.0, 1.0)) == pytest.approx(
        math.log(2), abs=1e-12
    )


def test_modulus_degenerate_cone():
    with pytest.raises(ValueError):
        modulus(AnnulusSpec(0.0, 1.0, 1.0))


@settings(max_examples=50, deadline=None)
@given(
    r=st.floats(0.1, 5.0),
    ratio=st.floats(1.01, 10.0),
    theta=st.floats(0.05, 7.0),
    c=st.floats(0.01, 100.0),
)
def test_modulus_scale_invariant(r, ratio, theta, c):
    a = AnnulusSpec(r, r * ratio, theta)
    b = AnnulusSpec(c * r, c * r * ratio, theta)
    assert modulus(a) == pytest.approx(modulus(b), rel=1e-9)


def test_classify_radial_entry_exits_inner():
    rep = classify_trajectory(AnnulusSpec(1.0, 2.0, 1.0), "outer", 0.0)
    assert rep.regime == REGIME_EXITS_INNER
    assert rep.exit_boundary == "inner"
    assert rep.min_radius == 1.0
    assert rep.self_intersections is None


def test_classify_steep_entry_returns_outer():
    rep = classify_trajectory(AnnulusSpec(1.0, 2.0, 1.0), "outer", math.pi / 3)
    assert rep.regime == REGIME_RETURNS_OUTER
    assert rep.exit_boundary == "outer"
    assert rep.min_radius == pytest.approx(2 * math.sin(math.pi / 3), abs=1e-12)
    assert rep.min_radius == pytest.approx(math.sqrt(3), abs=1e-12)


def test_classify_inner_start_always_exits_outer():
    for alpha in (0.0, 0.3, math.pi / 2):
        rep = classify_trajectory(AnnulusSpec(0.5, 2.0, 2.0), "inner", alpha)
        assert rep.regime == REGIME_INNER_START
        assert rep.exit_boundary == "outer"


def test_classify_alpha_out_of_range():
    with pytest.raises(ValueError):
        classify_trajectory(AnnulusSpec(1.0, 2.0, 1.0), "outer", 2.0)


def test_classify_regime_boundary_continuity():
    # at sin(alpha) = R/Rp the two outer regimes agree on the minimum radius
    a = AnnulusSpec(1.0, 2.0, 0.7)
    alpha = math.asin(a.R / a.Rp)
    at = classify_trajectory(a, "outer", alpha)
    above = classify_trajectory(a, "outer", alpha + 1e-12)
    assert at.regime == REGIME_EXITS_INNER
    assert above.regime == REGIME_RETURNS_OUTER
    assert abs(at.min_radius - above.min_radius) < 1e-9


def test_self_intersections_examples():
    assert annulus_self_intersections(AnnulusSpec(0, 1, math.pi / 5), math.pi / 6) == 3
    assert annulus_self_intersections(AnnulusSpec(0, 1, math.pi / 2), math.pi / 6) == 1
    assert annulus_self_intersections(AnnulusSpec(0, 1, 0.3), math.pi / 2) == 0


def test_self_intersections_regime_mismatch():
    with pytest.raises(ValueError):
        annulus_self_intersections(AnnulusSpec(1.0, 2.0, 1.0), 0.1)


def test_sc_lower_bound_values():
    assert annulus_sc_lower_bound(AnnulusSpec(0, 1, 0.25)) == pytest.approx(
        math.pi / 0.5, abs=1e-12
    )
    assert annulus_sc_lower_bound(AnnulusSpec(1, 2, math.pi / 6)) == pytest.approx(
        2.0, abs=1e-12
    )
    assert annulus_sc_lower_bound(AnnulusSpec(1, 1 + 1e-15, 1.0)) == pytest.approx(
        0.0, abs=1e-6
    )


def test_monogon_family_values():
    a = monogon_family_annulus(math.pi / 3, 1.0, 4.0)
    assert a.theta == pytest.approx(2 * math.pi / 3, abs=1e-12)
    assert a.R == pytest.approx(1 / math.sqrt(3), abs=1e-12)
    assert a.Rp == pytest.approx(2 / math.sqrt(3), abs=1e-12)
    assert a.R < a.Rp


def test_monogon_family_too_short():
    with pytest.raises(ValueError):
        monogon_family_annulus(math.pi / 3, 1.0, 1.5)


def test_monogon_family_boundary_excluded():
    # L'/L = 2 equals 1/sin(pi/6) exactly; the strict inequality fails
    with pytest.raises(ValueError):
        monogon_family_annulus(math.pi / 3, 1.0, 2.0)


def test_crossing_count_matches_developed_sector_oracle():
    mismatches = []
    for k in range(2, 13):
        theta = math.pi / k
        for j in range(1, 12):
            alpha = j * math.pi / 24
            expected = annulus_self_intersections(AnnulusSpec(0, 1, theta), alpha)
            brute = annulus_chord_crossings(theta, alpha)
            if expected != brute:
                mismatches.append((k, j, expected, brute))
    assert mismatches == []


def test_crossings_lie_on_two_radial_leaves():
    # all self-crossing angles, mod theta, fall on two leaves theta/2 apart
    for theta, alpha in ((math.pi / 5, math.pi / 6), (math.pi / 7, math.pi / 5)):
        count, positions = annulus_chord_crossings(theta, alpha, return_positions=True)
        assert count == len(positions) > 0
        residues = sorted(math.atan2(p.imag, p.real) % theta for p in positions)
        clusters = [residues[0]]
        for r in residues[1:]:
            if min(abs(r - clusters[-1]), theta - abs(r - clusters[-1])) > 1e-9:
                clusters.append(r)
        assert len(clusters) <= 2
        if len(clusters) == 2:
            gap = abs(clusters[1] - clusters[0])
            gap = min(gap, theta - gap)
            assert gap == pytest.approx(theta / 2, abs=1e-9)
