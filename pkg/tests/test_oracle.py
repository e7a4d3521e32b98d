"""Fiber-counting oracle: exact histograms at pinned primes, invariances,
resource guards, and the sampled mode's seeded determinism."""

import random

import pytest

from polarmap.arrangement import LinearFormProduct
from polarmap.errors import ReductionError, ResourceBoundError
from polarmap.fields import QQ, is_prime
from polarmap.oracle import (DegreeReport, ProjectivePoint, _degree_estimate,
                             check_contraction, dominance_by_span,
                             projective_size, scan_exhaustive, scan_sampled)
from polarmap.parsing import parse_arrangement, parse_polynomial
from polarmap.polar import RationalMap, polar_system, moving_part
from polarmap.poly import Polynomial


def polar_of(text):
    return polar_system(parse_polynomial(text))


def moving_of(text, nvars=None):
    return moving_part(parse_arrangement(text, nvars=nvars)).moving


def test_projective_point_normalization():
    pt = ProjectivePoint((2, 4, 6), 101)
    assert pt.coords == (1, 2, 3)
    # pivot not in first position: 5^-1 = 3 mod 7
    assert ProjectivePoint((0, 5, 3), 7).coords == (0, 1, 2)
    assert ProjectivePoint((0, 0, 9), 7).coords == (0, 0, 1)
    with pytest.raises(ValueError):
        ProjectivePoint((0, 0, 0), 7)
    with pytest.raises(ValueError):
        ProjectivePoint((7, 14), 7)


def test_projective_point_identity():
    a = ProjectivePoint((2, 4, 6), 101)
    b = ProjectivePoint((3, 6, 9), 101)
    assert a == b
    assert hash(a) == hash(b)
    assert a != ProjectivePoint((1, 2, 4), 101)
    assert repr(a) == "[1:2:3]"


def test_projective_point_key_injective():
    rng = random.Random(5)
    p = 13
    seen = {}
    for _ in range(300):
        coords = tuple(rng.randrange(p) for _ in range(3))
        if not any(coords):
            continue
        pt = ProjectivePoint(coords, p)
        key = pt.key()
        assert seen.setdefault(key, pt) == pt


def test_projective_size():
    assert projective_size(1, 2) == 3
    assert projective_size(2, 101) == 10303
    assert projective_size(3, 101) == 1040604


def test_standard_cremona_plane():
    rep = scan_exhaustive(polar_of("x0*x1*x2"), 101)
    assert rep.fiber_histogram == {1: 10000, 100: 3}
    assert rep.base_points == 3
    assert rep.image_size == 10003
    assert rep.degree == 1
    assert rep.dominant
    assert rep.homaloidal


def test_standard_cremona_plane_small_prime():
    # degree survives p=11; the 90% knob does not (contracted fibers eat
    # 30 of 130 non-base points), which is why verdict scans use p >= 101
    rep = scan_exhaustive(polar_of("x0*x1*x2"), 11)
    assert rep.fiber_histogram == {1: 100, 10: 3}
    assert rep.degree == 1
    assert rep.dominant
    assert not rep.homaloidal


def test_standard_cremona_space():
    rep = scan_exhaustive(polar_of("x0*x1*x2*x3"), 101)
    assert rep.fiber_histogram == {1: 1000000, 10000: 4}
    assert rep.degree == 1
    assert rep.homaloidal


def test_smooth_quadric_polar_is_linear():
    rep = scan_exhaustive(polar_of("x0^2 + x1^2 + x2^2 + x3^2"), 101)
    assert rep.fiber_histogram == {1: 1040604}
    assert rep.base_points == 0
    assert rep.degree == 1
    assert rep.homaloidal


def test_four_general_lines_degree_three():
    m = moving_of("x0*x1*x2*(x0+x1+x2)")
    rep = scan_exhaustive(m, 101)
    assert rep.fiber_histogram == {1: 4953, 2: 384, 3: 1392, 100: 4}
    assert rep.image_size == 6733
    assert rep.base_points == 6
    assert rep.degree == 3
    assert not rep.homaloidal


def test_four_general_lines_prime_stable():
    m = moving_of("x0*x1*x2*(x0+x1+x2)")
    rep = scan_exhaustive(m, 211)
    assert rep.fiber_histogram == {1: 22047, 2: 804, 3: 6744, 210: 4}
    assert rep.degree == 3
    assert not rep.homaloidal


def test_five_general_planes_degree_four():
    m = moving_of("x0*x1*x2*x3*(x0+x1+x2+x3)")
    rep = scan_exhaustive(m, 101)
    assert rep.degree == 4
    assert not rep.homaloidal
    assert rep.fiber_histogram[4] == 30210


def test_cone_not_dominant():
    rep = scan_exhaustive(moving_of("x0*x1", nvars=3), 101)
    assert rep.fiber_histogram == {101: 102}
    assert not rep.dominant
    assert not rep.homaloidal


def test_exhaustive_accounting():
    for rep in (scan_exhaustive(polar_of("x0*x1*x2"), 101),
                scan_exhaustive(moving_of("x0*x1*x2*(x0+x1+x2)"), 101),
                scan_exhaustive(moving_of("x0*x1", nvars=3), 101)):
        mapped = sum(s * c for s, c in rep.fiber_histogram.items())
        assert rep.base_points + mapped == rep.domain_size
        assert rep.domain_size == projective_size(3 - 1, 101)


def test_scaling_invariance():
    f = parse_polynomial("x0*x1*x2*(x0+x1+x2)")
    a = scan_exhaustive(polar_system(f), 101)
    b = scan_exhaustive(polar_system(f * 7), 101)
    assert a == b


def _random_linear_images(rng, nvars):
    """Invertible change of coordinates built from elementary row operations."""
    rows = [[1 if i == j else 0 for j in range(nvars)] for i in range(nvars)]
    for _ in range(8):
        i, j = rng.randrange(nvars), rng.randrange(nvars)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
    vars_ = [Polynomial.variable(QQ, nvars, j) for j in range(nvars)]
    images = []
    for row in rows:
        acc = Polynomial.zero(QQ, nvars)
        for c, v in zip(row, vars_):
            acc = acc + v * c
        images.append(acc)
    return images


def test_projectivity_invariance_of_degree():
    rng = random.Random(17)
    for text, expected in (("x0*x1*x2", 1), ("x0*x1*x2*(x0+x1+x2)", 3)):
        m = moving_of(text)
        for _ in range(3):
            images = _random_linear_images(rng, 3)
            twisted = RationalMap([c.substitute(images) for c in m.components])
            assert scan_exhaustive(twisted, 101).degree == expected


def test_sampled_cremona_p4():
    rep = scan_sampled(polar_of("x0*x1*x2*x3*x4"), 31, targets=64, seed=0)
    assert rep.fiber_histogram == {1: 57, 27000: 4}
    assert rep.base_points == 9305
    assert rep.degree == 1
    assert rep.dominant
    assert rep.homaloidal
    assert rep.mode == "sample"


def test_sampled_seed_determinism():
    pm = polar_of("x0*x1*x2*x3*x4")
    a = scan_sampled(pm, 31, targets=64, seed=0)
    b = scan_sampled(pm, 31, targets=64, seed=0)
    assert a == b
    c = scan_sampled(pm, 31, targets=64, seed=1)
    assert c.degree == 1 and c.homaloidal


def test_sampled_non_homaloidal_map():
    # span test sees dominance even though the degree-3 map covers only
    # a Frobenius fraction of rational points
    rep = scan_sampled(moving_of("x0*x1*x2*(x0+x1+x2)"), 101, targets=64, seed=0)
    assert rep.dominant
    assert not rep.homaloidal


def test_sampled_needs_enough_targets():
    with pytest.raises(ValueError):
        scan_sampled(polar_of("x0*x1*x2"), 101, targets=3)


def test_dominance_by_span():
    pts = [ProjectivePoint(c, 101) for c in
           ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1))]
    assert dominance_by_span(pts, 101)
    flat = [ProjectivePoint((a, b, 0), 101) for a, b in
            ((1, 0), (0, 1), (1, 1), (1, 2))]
    assert not dominance_by_span(flat, 101)
    with pytest.raises(ValueError):
        dominance_by_span(pts[:2], 101)


def test_check_contraction_four_lines():
    F = parse_arrangement("x0*x1*x2*(x0+x1+x2)")
    for i in range(4):
        assert check_contraction(F, i, 101, samples=100, seed=0)


def test_check_contraction_multiplicity_blind():
    F = parse_arrangement("x0^3*x1*x2*(x0+x1+x2)")
    for i in range(4):
        assert check_contraction(F, i, 101, samples=50, seed=0)


def test_check_contraction_validation():
    F = parse_arrangement("x0*x1*x2")
    with pytest.raises(IndexError):
        check_contraction(F, 3, 101)
    with pytest.raises(TypeError):
        check_contraction(parse_polynomial("x0*x1*x2"), 0, 101)


def test_degree_estimate_rules():
    # contracted images (size >= p-1) never count as generic
    assert _degree_estimate({1: 4953, 2: 384, 3: 1392, 100: 4}, 6733, 101) == 3
    assert _degree_estimate({1: 100, 10: 3}, 103, 11) == 1
    # nothing eligible: plain mode, smaller size on ties
    assert _degree_estimate({100: 1, 3: 1}, 2, 101) == 3


def test_rejects_composite_modulus():
    with pytest.raises(ValueError):
        scan_exhaustive(polar_of("x0*x1*x2"), 100)
    assert not is_prime(1)


def test_domain_bound():
    with pytest.raises(ResourceBoundError):
        scan_exhaustive(polar_of("x0*x1*x2"), 101, max_domain=10000)


def test_prime_bound_for_int32_scan():
    p = 46341
    while not is_prime(p):
        p += 1
    with pytest.raises(ResourceBoundError):
        scan_exhaustive(polar_of("x0^2 + x1^2"), p)


def test_bad_prime_raises_not_lies():
    # all components vanish mod 2
    m = RationalMap([parse_polynomial("2*x0", nvars=2),
                     parse_polynomial("2*x1", nvars=2)])
    with pytest.raises(ReductionError):
        scan_exhaustive(m, 2)


def test_worker_merge_matches_serial():
    pm = polar_of("x0*x1*x2")
    assert scan_exhaustive(pm, 11, workers=2) == scan_exhaustive(pm, 11, workers=1)
    assert scan_sampled(pm, 11, targets=8, seed=3, workers=2) == \
        scan_sampled(pm, 11, targets=8, seed=3, workers=1)
