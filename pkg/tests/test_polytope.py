import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glslab.errors import EmptySetError
from glslab.lattice import SubLattice, difference_lattice, hermite_basis, lattice_index
from glslab.polytope import (
    EMPTY_POLYTOPE,
    RationalPolytope,
    convex_hull,
    convex_hull_volume,
    enumerate_dilation,
    enumerate_points,
    h_representation,
)


def simplex(n, scale=1):
    verts = [tuple(0 for _ in range(n))]
    for i in range(n):
        verts.append(tuple(scale if j == i else 0 for j in range(n)))
    return convex_hull(verts)


def brute_points_of_simplex(n, bound):
    # independent membership: coordinates nonnegative, sum <= bound
    pts = []
    for p in itertools.product(range(bound + 1), repeat=n):
        if sum(p) <= bound:
            pts.append(p)
    return sorted(pts)


class TestConvexHull:
    def test_square_vertices(self):
        p = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])
        assert p.vertices == ((0, 0), (0, 1), (1, 0), (1, 1))
        assert p.dim == 2

    def test_interior_and_boundary_points_dropped(self):
        pts = [(0, 0), (2, 0), (0, 2), (1, 0), (1, 1), (0, 1)]
        p = convex_hull(pts)
        assert p.vertices == ((0, 0), (0, 2), (2, 0))

    def test_collinear(self):
        p = convex_hull([(0, 0), (1, 1), (3, 3), (2, 2)])
        assert p.vertices == ((0, 0), (3, 3))
        assert p.dim == 1

    def test_point(self):
        p = convex_hull([(5, 7, 1)])
        assert p.vertices == ((5, 7, 1),) and p.dim == 0

    def test_empty(self):
        assert convex_hull([]) is EMPTY_POLYTOPE

    def test_rational_vertices(self):
        p = convex_hull([(Fraction(1, 2), 0), (0, Fraction(1, 2)), (0, 0)])
        assert p.dim == 2
        assert (Fraction(1, 2), 0) in p.vertices

    def test_cube_3d(self):
        corners = list(itertools.product((0, 3), repeat=3))
        extras = [(1, 1, 1), (2, 3, 3), (0, 1, 2)]
        p = convex_hull(corners + extras)
        assert sorted(p.vertices) == sorted(corners)

    def test_cross_polytope_4d(self):
        verts = []
        for i in range(4):
            for s in (1, -1):
                verts.append(tuple(s * 2 if j == i else 0 for j in range(4)))
        p = convex_hull(verts + [(0, 0, 0, 0), (1, 0, 0, 0)])
        assert sorted(p.vertices) == sorted(verts)
        assert p.dim == 4

    @given(st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=1, max_size=12))
    @settings(max_examples=150, deadline=None)
    def test_vertices_are_subset_and_hull_idempotent(self, pts):
        p = convex_hull(pts)
        assert set(p.vertices) <= set(map(tuple, pts))
        again = convex_hull(p.vertices)
        assert again == p


class TestHullVolume:
    def test_dilated_simplex(self):
        pts = brute_points_of_simplex(2, 2)
        assert len(pts) == 6
        res = convex_hull_volume(pts, SubLattice.full(2))
        assert res.dim == 2 and res.nvol == 4

    def test_reference_rescaling(self):
        pts = [(0, 0), (2, 0), (0, 2)]
        assert convex_hull_volume(pts, SubLattice.full(2)).nvol == 4
        assert convex_hull_volume(pts, hermite_basis([(2, 0), (0, 2)])).nvol == 1

    def test_segment_in_line(self):
        res = convex_hull_volume([(0,), (2,), (3,)], SubLattice.full(1))
        assert res.nvol == 3
        assert res.hull.vertices == ((0,), (3,))

    def test_rank_drop_gives_zero(self):
        res = convex_hull_volume([(0, 0), (1, 0), (2, 0)], SubLattice.full(2))
        assert res.nvol == 0 and res.dim == 1
        assert res.hull.vertices == ((0, 0), (2, 0))

    def test_point_with_zero_reference(self):
        res = convex_hull_volume([(4, 4)], SubLattice.zero(2))
        assert res.nvol == 1 and res.dim == 0

    def test_empty_raises(self):
        with pytest.raises(EmptySetError):
            convex_hull_volume([], SubLattice.full(2))

    def test_reference_must_contain_differences(self):
        with pytest.raises(ValueError):
            convex_hull_volume([(0, 0), (1, 0), (0, 1)], hermite_basis([(2, 0), (0, 2)]))

    def test_unit_cube_volume(self):
        pts = list(itertools.product((0, 1), repeat=3))
        res = convex_hull_volume(pts, SubLattice.full(3))
        assert res.nvol == 6  # 3! * 1

    def test_saturation_consistency(self):
        # nvol w.r.t. the difference lattice, scaled by its index in the
        # saturation, equals nvol w.r.t. the saturation
        cases = [
            [(0, 0), (2, 0), (0, 2)],
            [(0, 0), (2, 0), (0, 2), (2, 2)],
            [(1, 1), (3, 1), (1, 5), (3, 5)],
            [(0,), (2,), (6,)],
            [(0, 0, 0), (2, 0, 0), (0, 2, 0), (0, 0, 2)],
        ]
        for pts in cases:
            diff = difference_lattice(pts)
            sat = diff.saturation()
            idx = lattice_index(diff, sat)
            v_diff = convex_hull_volume(pts, diff).nvol
            v_sat = convex_hull_volume(pts, sat).nvol
            assert v_diff * idx == v_sat, pts

    @given(
        st.lists(
            st.tuples(st.integers(0, 8), st.integers(0, 8)), min_size=3, max_size=10
        )
    )
    @settings(max_examples=150, deadline=None)
    def test_volume_matches_shoelace(self, pts):
        # independent 2-d oracle: shoelace formula over the ordered hull
        res = convex_hull_volume(pts, SubLattice.full(2))
        if res.dim < 2:
            assert res.nvol == 0
            return
        verts = list(res.hull.vertices)
        cx = Fraction(sum(v[0] for v in verts), len(verts))
        cy = Fraction(sum(v[1] for v in verts), len(verts))
        import math as _math

        verts.sort(key=lambda v: _math.atan2(v[1] - cy, v[0] - cx))
        twice_area = 0
        for i, (x1, y1) in enumerate(verts):
            x2, y2 = verts[(i + 1) % len(verts)]
            twice_area += x1 * y2 - x2 * y1
        assert res.nvol == abs(twice_area)

    def test_translation_invariance(self):
        pts = [(0, 0), (3, 1), (1, 4), (2, 2)]
        moved = [(x + 11, y - 7) for x, y in pts]
        a = convex_hull_volume(pts, SubLattice.full(2)).nvol
        b = convex_hull_volume(moved, SubLattice.full(2)).nvol
        assert a == b


class TestEnumeration:
    def test_dilated_triangle_count(self):
        p = simplex(2)
        assert len(enumerate_dilation(p, 2)) == 6

    def test_congruence_filter(self):
        p = simplex(2)
        even = hermite_basis([(2, 0), (0, 2)])
        got = enumerate_dilation(p, 3, constraint=(even, (0, 0)))
        assert got == ((0, 0), (0, 2), (2, 0))

    def test_empty_polytope(self):
        assert enumerate_points(EMPTY_POLYTOPE) == ()

    def test_counts_match_brute_force(self):
        catalog = [
            simplex(2),
            convex_hull([(0, 0), (2, 0), (0, 2)]),
            convex_hull([(0,), (2,)]),
            convex_hull([(0, 0), (1, 0)]),
            convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]),
        ]
        for p in catalog:
            n = p.ambient_dim
            top = max(max(abs(int(c)) for c in v) for v in p.vertices)
            for m in range(13):
                got = enumerate_dilation(p, m)
                box = range(-1, top * m + 2)
                hrep = h_representation(p)
                brute = [
                    q
                    for q in itertools.product(box, repeat=n)
                    if hrep.contains(q, dilation=m)
                ] if m else [tuple(0 for _ in range(n))]
                assert list(got) == sorted(brute), (p, m)

    def test_simplex_points_against_binomial(self):
        import math as _math

        p = simplex(3)
        for m in range(8):
            assert len(enumerate_dilation(p, m)) == _math.comb(m + 3, 3)

    def test_lex_order_and_determinism(self):
        p = convex_hull([(0, 0), (3, 0), (0, 3)])
        a = enumerate_points(p)
        b = enumerate_points(p)
        assert a == b == tuple(sorted(a))

    def test_lower_dimensional_polytope(self):
        p = convex_hull([(0, 0), (2, 2)])
        assert enumerate_points(p) == ((0, 0), (1, 1), (2, 2))

    def test_rational_polytope_enumeration(self):
        p = convex_hull([(0, 0), (Fraction(3, 2), 0), (0, Fraction(3, 2))])
        pts = enumerate_points(p)
        assert pts == ((0, 0), (0, 1), (1, 0))
        assert enumerate_dilation(p, 2) == tuple(
            q for q in brute_points_of_simplex(2, 3)
        )


class TestHRepresentation:
    def test_triangle(self):
        hrep = h_representation(simplex(2))
        assert not hrep.equations
        assert len(hrep.inequalities) == 3
        assert hrep.contains((0, 0)) and not hrep.contains((1, 1))

    def test_segment_in_plane_has_equation(self):
        hrep = h_representation(convex_hull([(0, 0), (2, 0)]))
        assert hrep.equations == (((0, 1), 0),)
        assert hrep.contains((1, 0)) and not hrep.contains((1, 1))
        assert not hrep.contains((3, 0))
