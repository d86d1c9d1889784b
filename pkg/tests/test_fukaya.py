from fractions import Fraction as F

import pytest

from mirrorlab.fukaya import (
    TriangleDatum,
    functor_check,
    hom_rank,
    intersection_points,
    mu2_closed,
    triangle_area_closed,
    triangle_area_oracle,
    triangles_up_to,
)
from mirrorlab.lattice import LatticeVector, coset_reps
from mirrorlab.series import theta_product_constants


def test_hom_rank():
    assert hom_rank(1, 3) == 4
    assert hom_rank(2, 2) == 4
    assert hom_rank(5, 4) == 1
    assert hom_rank(0, 1) == 1


def test_intersection_points_counts_and_distinctness():
    assert len(intersection_points(0, 1)) == 1
    assert len(intersection_points(0, 2)) == 4
    pts = intersection_points(0, 3)
    assert len(pts) == 9
    # pairwise distinct in the base torus: differences must not be lattice
    from mirrorlab.lattice import from_std

    for a in pts:
        for b in pts:
            if a is b:
                continue
            delta = (
                a.position[0][0] - b.position[0][0],
                a.position[0][1] - b.position[0][1],
            )
            try:
                v = from_std(delta)
            except ValueError:
                continue  # not even a lattice direction: distinct
            assert v != LatticeVector(0, 0)
    with pytest.raises(ValueError):
        intersection_points(2, 2)


def test_triangle_area_examples():
    t = TriangleDatum(0, 1, 2, LatticeVector(0, 0), LatticeVector(0, 0))
    assert triangle_area_oracle(t) == 0
    t2 = TriangleDatum(0, 1, 2, LatticeVector(0, 0), LatticeVector(1, 0))
    assert triangle_area_oracle(t2) == 2
    assert triangle_area_closed(t2) == 2


def test_oracle_equals_closed_form_everywhere():
    for triple in ((0, 1, 2), (0, 1, 3), (0, 2, 3)):
        for t in triangles_up_to(*triple, F(10)):
            assert triangle_area_oracle(t) == triangle_area_closed(t)


def test_edges_close_exactly():
    for t in triangles_up_to(0, 2, 3, F(6)):
        edges = t.edges()
        for comp in range(2):
            assert sum(e[0][comp] for e in edges) == 0
            assert sum(e[1][comp] for e in edges) == 0


def test_mu2_leading_series():
    e0 = LatticeVector(0, 0)
    m = mu2_closed(0, 1, 2, e0, e0, F(10))
    assert [(e, c) for e, c in m[e0].terms][:3] == [
        (F(0), F(1)),
        (F(2), F(6)),
        (F(6), F(6)),
    ]


def test_mu2_matches_theta_route():
    e0 = LatticeVector(0, 0)
    for e1 in coset_reps(1):
        for e2 in coset_reps(2):
            tri = mu2_closed(0, 1, 3, e1, e2, F(12))
            theta = theta_product_constants(e1, 1, e2, 2, F(12))
            for rep in tri:
                assert tri[rep] == theta[rep].truncate(F(12))


def test_mu2_invalid_reps():
    with pytest.raises(ValueError):
        mu2_closed(0, 1, 2, LatticeVector(1, 0), LatticeVector(0, 0), F(4))
    with pytest.raises(ValueError):
        mu2_closed(0, 2, 1, LatticeVector(0, 0), LatticeVector(0, 0), F(4))


def test_mu2_zero_exponent_location():
    # an order-zero term appears only where the weight argument can vanish
    for e1 in coset_reps(2):
        out = mu2_closed(0, 2, 3, e1, LatticeVector(0, 0), F(8))
        for e, series in out.items():
            if series.coefficient(0):
                # (l''/l) e + a = 0 requires e = 0 mod l when gcd(l, l'') = 1
                assert (e.n1 * 1) % 3 == 0 and (e.n2 * 1) % 3 == 0


def test_mu2_translation_relabels_outputs():
    # shifting both input representatives by delta permutes outputs by 2*delta
    e0, delta = LatticeVector(0, 0), LatticeVector(1, 1)
    base = mu2_closed(0, 2, 4, e0, e0, F(10))
    e1 = LatticeVector(delta.n1 % 2, delta.n2 % 2)
    shifted = mu2_closed(0, 2, 4, e1, e1, F(10))
    for e, series in base.items():
        target = LatticeVector((e.n1 + 2) % 4, (e.n2 + 2) % 4)
        assert shifted[target] == series
    base_multiset = sorted(s.terms for s in base.values())
    shifted_multiset = sorted(s.terms for s in shifted.values())
    assert base_multiset == shifted_multiset


def test_functor_check_passes_and_serializes():
    rep = functor_check(0, 1, 2, F(12))
    assert rep.all_match
    obj = rep.to_json()
    assert obj["triple"] == [0, 1, 2]
    assert all(p["matches"] for p in obj["pairs"])


def test_functor_check_prefix_stability():
    small = functor_check(0, 1, 3, F(6))
    big = functor_check(0, 1, 3, F(12))
    assert small.all_match and big.all_match
    # matched prefixes never change when the cutoff grows
    e0 = LatticeVector(0, 0)
    lo = theta_product_constants(e0, 1, e0, 2, F(6))
    hi = theta_product_constants(e0, 1, e0, 2, F(12))
    for rep, series in lo.items():
        assert hi[rep].truncate(F(6)) == series


def test_functor_cutoff_zero():
    rep = functor_check(0, 1, 2, F(0))
    assert rep.all_match
