"""Exact convex hulls, H-representations, normalized volumes, enumeration.

Everything is computed in exact arithmetic (integers and Fractions).  The
normalized volume convention throughout the package: nvol = (dim)! times the
Lebesgue volume measured so that a fundamental cell of the reference lattice
has volume 1; a unimodular simplex then has nvol 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatchError, EmptySetError
from .lattice import (
    SubLattice,
    determinant,
    difference_lattice,
    dot,
    hermite_basis,
    left_kernel,
    point_set,
    transpose,
    vec_sub,
)

Rational = Fraction
RationalVector = tuple[Fraction, ...]


def _exact(value) -> Fraction | int:
    """Normalize a rational to int when integral (canonical representation)."""
    f = Fraction(value)
    return int(f) if f.denominator == 1 else f


def as_rational_vector(coords: Iterable) -> tuple:
    return tuple(_exact(c) for c in coords)


@dataclass(frozen=True)
class RationalPolytope:
    """Convex polytope given by its irredundant vertex list.

    ``vertices`` is lexicographically sorted; ``dim`` is the dimension of the
    affine span (-1 for the empty polytope).  Use :func:`convex_hull` to build
    one from an arbitrary point list.
    """

    vertices: tuple[tuple, ...]
    dim: int

    @property
    def ambient_dim(self) -> int:
        if not self.vertices:
            raise EmptySetError("empty polytope has no ambient dimension")
        return len(self.vertices[0])

    def dilate(self, factor) -> "RationalPolytope":
        """Scaled polytope factor * P; factor 0 collapses to the origin."""
        f = Fraction(factor)
        if f < 0:
            raise ValueError("dilation factor must be nonnegative")
        if not self.vertices:
            return self
        if f == 0:
            origin = tuple(0 for _ in range(self.ambient_dim))
            return RationalPolytope((origin,), 0)
        verts = sorted({tuple(_exact(c * f) for c in v) for v in self.vertices})
        return RationalPolytope(tuple(verts), self.dim)


EMPTY_POLYTOPE = RationalPolytope((), -1)


# ---------------------------------------------------------------------------
# Full-dimensional hull over the integers (beneath-beyond)
# ---------------------------------------------------------------------------

def _normal_through(points: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Integer normal of the hyperplane through d points of Z^d (cofactors)."""
    d = len(points[0])
    rows = [vec_sub(q, points[0]) for q in points[1:]]
    normal = []
    for j in range(d):
        minor = [[r[i] for i in range(d) if i != j] for r in rows]
        c = determinant(minor)
        normal.append(c if j % 2 == 0 else -c)
    return tuple(normal)


def _affinely_independent_subset(pts: Sequence[tuple], d: int) -> list[tuple]:
    """d+1 affinely independent points from a full-dimensional point list."""
    base = [pts[0]]
    rows: list[tuple] = []
    for p in pts[1:]:
        cand = rows + [vec_sub(p, pts[0])]
        if hermite_basis(cand, d).rank > len(rows):
            rows = cand
            base.append(p)
            if len(rows) == d:
                return base
    raise EmptySetError("point set is not full-dimensional")


def _hull_fulldim(pts: Sequence[tuple], d: int):
    """Exact hull of a full-dimensional integer point set.

    Returns (vertices, hyperplanes, nvol):
      vertices    lex-sorted extreme points (a subset of pts);
      hyperplanes deduplicated primitive facet inequalities (a, b), a.x <= b;
      nvol        d! times the Lebesgue volume of the hull.

    Incremental insertion with strict visibility keeps the simplicial facet
    pieces tiling the boundary even for coplanar inputs; volumes come from
    coning the pieces to a base vertex, and true vertices are recognized by a
    rank test on their active facet normals.
    """
    pts = sorted(set(pts))
    if d == 0:
        return list(pts), [], 1
    if d == 1:
        lo = min(p[0] for p in pts)
        hi = max(p[0] for p in pts)
        return [(lo,), (hi,)], [((1,), hi), ((-1,), -lo)], hi - lo

    base = _affinely_independent_subset(pts, d)
    center = tuple(sum(p[i] for p in base) for i in range(d))  # scaled by d+1
    scale = d + 1

    def oriented(verts: tuple) -> tuple:
        a = _normal_through(verts)
        b = dot(a, verts[0])
        side = dot(a, center) - b * scale
        if side == 0:
            raise ArithmeticError("degenerate facet through the interior point")
        if side > 0:
            a = tuple(-x for x in a)
            b = -b
        return (a, b, verts)

    facets = []
    for leave_out in range(d + 1):
        verts = tuple(sorted(base[i] for i in range(d + 1) if i != leave_out))
        facets.append(oriented(verts))

    base_set = set(base)
    for p in pts:
        if p in base_set:
            continue
        visible = [f for f in facets if dot(f[0], p) > f[1]]
        if not visible:
            continue
        ridge_count: dict[frozenset, int] = {}
        for _, _, verts in visible:
            vs = frozenset(verts)
            for v in verts:
                ridge = vs - {v}
                ridge_count[ridge] = ridge_count.get(ridge, 0) + 1
        kept = [f for f in facets if dot(f[0], p) <= f[1]]
        for ridge, count in sorted(ridge_count.items(), key=lambda kv: sorted(kv[0])):
            if count == 1:
                verts = tuple(sorted(ridge | {p}))
                kept.append(oriented(verts))
        facets = kept

    # volume: cone all boundary pieces to one base vertex (coplanar pieces
    # contribute a zero determinant on their own)
    apex = base[0]
    nvol = 0
    for _, _, verts in facets:
        nvol += abs(determinant([vec_sub(v, apex) for v in verts]))

    planes = set()
    for a, b, _ in facets:
        g = math.gcd(math.gcd(*(abs(x) for x in a)), abs(b))
        planes.add((tuple(x // g for x in a), b // g))
    plane_list = sorted(planes)

    vertices = []
    for p in pts:
        active = [a for a, b in plane_list if dot(a, p) == b]
        if len(active) >= d and hermite_basis(active, d).rank == d:
            vertices.append(p)
    return vertices, plane_list, nvol


# ---------------------------------------------------------------------------
# Rational point sets: affine span coordinates
# ---------------------------------------------------------------------------

def _fraction_matrix_inverse(a: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(a)
    work = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col] != 0), None)
        if piv is None:
            raise ArithmeticError("singular matrix")
        work[col], work[piv] = work[piv], work[col]
        inv = Fraction(1) / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
    return [row[n:] for row in work]


def _primitive(coeffs: Sequence[Fraction], rhs: Fraction) -> tuple[tuple[int, ...], int]:
    """Clear denominators of (coeffs, rhs) and divide by the content."""
    fracs = [Fraction(c) for c in coeffs] + [Fraction(rhs)]
    denom = math.lcm(*(f.denominator for f in fracs))
    ints = [int(f * denom) for f in fracs]
    g = math.gcd(*(abs(x) for x in ints))
    if g:
        ints = [x // g for x in ints]
    return tuple(ints[:-1]), ints[-1]


@dataclass(frozen=True)
class HRepresentation:
    """Integer-primitive affine equations (a.x == b) and facet inequalities
    (a.x <= b) cutting out a polytope; valid together, not separately."""

    equations: tuple[tuple[tuple[int, ...], int], ...]
    inequalities: tuple[tuple[tuple[int, ...], int], ...]

    def contains(self, point: Sequence[int], dilation: int = 1) -> bool:
        """Membership of an integer point in ``dilation`` times the polytope."""
        for a, b in self.equations:
            if dot(a, point) != dilation * b:
                return False
        for a, b in self.inequalities:
            if dot(a, point) > dilation * b:
                return False
        return True


_HULL_CACHE: dict = {}


def _hull_data(points: tuple) -> tuple[tuple, int, HRepresentation]:
    """Vertices, dimension, and H-representation of conv(points) (cached)."""
    key = points
    hit = _HULL_CACHE.get(key)
    if hit is not None:
        return hit
    n = len(points[0])
    denom = math.lcm(*(Fraction(c).denominator for p in points for c in p)) if points else 1
    ipts = sorted({tuple(int(Fraction(c) * denom) for c in p) for p in points})
    v0 = ipts[0]
    diffs = [vec_sub(p, v0) for p in ipts[1:]]
    span = hermite_basis(diffs, n) if diffs else SubLattice.zero(n)
    k = span.rank

    # affine span equations: integer vectors orthogonal to all differences
    eqs = []
    if k < n:
        normal_lat = left_kernel(transpose(tuple(diffs)), n) if diffs else SubLattice.full(n)
        for a in normal_lat.basis:
            eqs.append(_primitive([Fraction(x) for x in a], Fraction(dot(a, v0), denom)))

    ineqs = []
    if k > 0:
        coords = [span.coordinates_of(vec_sub(p, v0)) for p in ipts]
        verts_c, planes_c, _ = _hull_fulldim(coords, k)
        # pull a coordinate functional back to ambient space:
        # coords(x) = (denom*x - v0) * B^T (B B^T)^(-1) on the affine span
        b_rows = span.basis
        gram = [[Fraction(dot(r1, r2)) for r2 in b_rows] for r1 in b_rows]
        gram_inv = _fraction_matrix_inverse(gram)
        # T = (B B^T)^(-1) B, shape k x n
        t_mat = [
            [sum(gram_inv[i][l] * b_rows[l][j] for l in range(k)) for j in range(n)]
            for i in range(k)
        ]
        for a_c, b_c in planes_c:
            g = [sum(Fraction(a_c[i]) * t_mat[i][j] for i in range(k)) for j in range(n)]
            rhs = Fraction(b_c) + sum(gj * v0j for gj, v0j in zip(g, v0))
            ineqs.append(_primitive([gj * denom for gj in g], rhs))
        vertex_pts = []
        for vc in verts_c:
            amb = list(v0)
            for c, row in zip(vc, b_rows):
                for j in range(n):
                    amb[j] += c * row[j]
            vertex_pts.append(tuple(_exact(Fraction(x, denom)) for x in amb))
        vertices = tuple(sorted(vertex_pts))
    else:
        vertices = (tuple(_exact(Fraction(c, denom)) for c in v0),)

    result = (vertices, k, HRepresentation(tuple(sorted(eqs)), tuple(sorted(ineqs))))
    _HULL_CACHE[key] = result
    return result


def convex_hull(points: Iterable[Sequence]) -> RationalPolytope:
    """Convex hull of rational points, reduced to its extreme vertices."""
    pts = tuple(sorted({as_rational_vector(p) for p in points}))
    if not pts:
        return EMPTY_POLYTOPE
    if len({len(p) for p in pts}) != 1:
        raise DimensionMismatchError("points have unequal lengths")
    vertices, dim, _ = _hull_data(pts)
    return RationalPolytope(vertices, dim)


def h_representation(p: RationalPolytope) -> HRepresentation:
    """Integer-primitive H-representation of a polytope (cached by vertex set)."""
    if not p.vertices:
        raise EmptySetError("empty polytope has no H-representation")
    _, _, hrep = _hull_data(p.vertices)
    return hrep


# ---------------------------------------------------------------------------
# Normalized volume relative to a reference lattice
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HullVolume:
    hull: RationalPolytope
    dim: int
    nvol: Fraction


def convex_hull_volume(points: Iterable[Sequence[int]], ref: SubLattice) -> HullVolume:
    """Hull of an integer point set with its lattice-normalized volume.

    nvol is dim! times the Lebesgue volume of conv(points), in units where a
    fundamental cell of ``ref`` (restricted to the affine span) has volume 1.
    Requires ref to contain the difference lattice of the set; nvol is 0
    exactly when the hull dimension drops below rank(ref).
    """
    pts = point_set(points)
    if not pts:
        raise EmptySetError("convex_hull_volume of an empty set")
    n = len(pts[0])
    if ref.ambient_dim != n:
        raise DimensionMismatchError("reference lattice ambient mismatch")
    diff = difference_lattice(pts)
    if not ref.contains_lattice(diff):
        raise ValueError("reference lattice does not contain the difference lattice")
    k = diff.rank
    if ref.rank < k:
        raise ValueError("reference lattice rank is below the affine dimension")
    base = pts[0]

    def back_map(coord_verts, rows):
        verts = []
        for vc in coord_verts:
            amb = list(base)
            for c, row in zip(vc, rows):
                for j in range(n):
                    amb[j] += c * row[j]
            verts.append(tuple(amb))
        return tuple(sorted(verts))

    if k == 0:
        hull = RationalPolytope((base,), 0)
        return HullVolume(hull, 0, Fraction(1 if ref.rank == 0 else 0))
    if ref.rank == k:
        coords = [ref.coordinates_of(vec_sub(p, base)) for p in pts]
        verts_c, _, nvol = _hull_fulldim(coords, k)
        return HullVolume(RationalPolytope(back_map(verts_c, ref.basis), k), k, Fraction(nvol))
    # rank drop: volume vanishes, hull still reported
    coords = [diff.coordinates_of(vec_sub(p, base)) for p in pts]
    verts_c, _, _ = _hull_fulldim(coords, k)
    return HullVolume(RationalPolytope(back_map(verts_c, diff.basis), k), k, Fraction(0))


# ---------------------------------------------------------------------------
# Lattice point enumeration
# ---------------------------------------------------------------------------

_ENUMERATION_GUARD = 50_000_000


def _box_ranges(vertices, dilation: int = 1):
    n = len(vertices[0])
    ranges = []
    for i in range(n):
        vals = [Fraction(v[i]) * dilation for v in vertices]
        ranges.append(range(math.ceil(min(vals)), math.floor(max(vals)) + 1))
    return ranges


def enumerate_dilation(
    p: RationalPolytope,
    dilation: int,
    constraint: Optional[tuple[SubLattice, Sequence[int]]] = None,
):
    """Integer points of dilation * p, optionally restricted to a coset.

    The H-representation of p is computed once and reused for every dilation.
    A constraint (lattice, offset) keeps only points with point - offset in
    the lattice.  Points come back lexicographically sorted.
    """
    if dilation < 0:
        raise ValueError("dilation must be nonnegative")
    if not p.vertices:
        return ()
    if dilation == 0:
        candidates = [tuple(0 for _ in range(p.ambient_dim))]
    else:
        hrep = h_representation(p)
        ranges = _box_ranges(p.vertices, dilation)
        total = 1
        for r in ranges:
            total *= len(r)
        if total > _ENUMERATION_GUARD:
            raise ValueError(f"enumeration box holds {total} candidates; refusing")
        candidates = [
            pt for pt in product(*ranges) if hrep.contains(pt, dilation=dilation)
        ]
    if constraint is not None:
        lat, offset = constraint
        candidates = [pt for pt in candidates if vec_sub(pt, offset) in lat]
    return tuple(candidates)


def enumerate_points(
    p: RationalPolytope,
    constraint: Optional[tuple[SubLattice, Sequence[int]]] = None,
):
    """All integer points of a bounded polytope (lexicographic order)."""
    return enumerate_dilation(p, 1, constraint)
