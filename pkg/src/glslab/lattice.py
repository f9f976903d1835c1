"""Exact integer linear algebra: normal forms, sublattices, indices, sumsets.

All arithmetic uses Python's arbitrary-precision integers.  Matrices are
tuples of row tuples; lattices are stored by a canonical row Hermite normal
form basis, so equal lattices compare equal as values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatchError, EmptySetError, NotSublatticeError

IntVector = tuple[int, ...]
IntMatrix = tuple[IntVector, ...]
Point = IntVector
PointSet = tuple[Point, ...]


class _Infinite:
    """Singleton marker for an infinite lattice index."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "INFINITE"


INFINITE = _Infinite()


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and g = a*x + b*y."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def as_vector(coords: Iterable[int]) -> IntVector:
    return tuple(int(c) for c in coords)


def as_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    mat = tuple(as_vector(r) for r in rows)
    if mat:
        width = len(mat[0])
        if any(len(r) != width for r in mat):
            raise DimensionMismatchError("matrix rows have unequal lengths")
    return mat


def identity_matrix(k: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a and b and len(a[0]) != len(b):
        raise DimensionMismatchError("incompatible shapes for matrix product")
    cols = len(b[0]) if b else 0
    return tuple(
        tuple(sum(ra[k] * b[k][j] for k in range(len(ra))) for j in range(cols))
        for ra in a
    )


def transpose(a: IntMatrix) -> IntMatrix:
    if not a:
        return ()
    return tuple(tuple(row[j] for row in a) for j in range(len(a[0])))


def vec_add(u: Sequence[int], v: Sequence[int]) -> IntVector:
    return tuple(x + y for x, y in zip(u, v))


def vec_sub(u: Sequence[int], v: Sequence[int]) -> IntVector:
    return tuple(x - y for x, y in zip(u, v))


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(u, v))


def determinant(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (Bareiss elimination)."""
    n = len(a)
    if n == 0:
        return 1
    if any(len(r) != n for r in a):
        raise DimensionMismatchError("determinant requires a square matrix")
    m = [list(map(int, row)) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def smith_normal_form(a: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form with transforms: returns (D, U, V) with U*A*V = D.

    D is diagonal with nonnegative entries d_1 | d_2 | ... and U, V are
    unimodular.  Total function: any integer matrix (including empty and
    rectangular ones) is accepted.
    """
    a = as_matrix(a)
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    m = [list(row) for row in a]
    u = [list(row) for row in identity_matrix(nrows)]
    v = [list(row) for row in identity_matrix(ncols)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def combine_rows(i, j, x, y, z, w):
        # rows (i, j) <- (x*ri + y*rj, z*ri + w*rj); x*w - y*z = +-1
        for row_set in (m, u):
            ri, rj = row_set[i], row_set[j]
            for k in range(len(ri)):
                ri[k], rj[k] = x * ri[k] + y * rj[k], z * ri[k] + w * rj[k]

    def combine_cols(i, j, x, y, z, w):
        for row_set in (m, v):
            for row in row_set:
                row[i], row[j] = x * row[i] + y * row[j], z * row[i] + w * row[j]

    limit = min(nrows, ncols)
    t = 0
    while t < limit:
        # locate a pivot of minimal absolute value in the remaining block
        pivot = None
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                e = m[i][j]
                if e and (best is None or abs(e) < best):
                    best = abs(e)
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            # Clear column t and row t.  Exact divisions eliminate without
            # touching the pivot cross; otherwise an xgcd combination strictly
            # shrinks |m[t][t]|, so the loop terminates.
            while True:
                for i in range(t + 1, nrows):
                    e = m[i][t]
                    if e:
                        piv = m[t][t]
                        if e % piv == 0:
                            q = e // piv
                            for k in range(ncols):
                                m[i][k] -= q * m[t][k]
                            for k in range(nrows):
                                u[i][k] -= q * u[t][k]
                        else:
                            g, x, y = xgcd(piv, e)
                            combine_rows(t, i, x, y, -(e // g), piv // g)
                for j in range(t + 1, ncols):
                    e = m[t][j]
                    if e:
                        piv = m[t][t]
                        if e % piv == 0:
                            q = e // piv
                            for row_set in (m, v):
                                for row in row_set:
                                    row[j] -= q * row[t]
                        else:
                            g, x, y = xgcd(piv, e)
                            combine_cols(t, j, x, y, -(e // g), piv // g)
                if all(m[i][t] == 0 for i in range(t + 1, nrows)) and all(
                    m[t][j] == 0 for j in range(t + 1, ncols)
                ):
                    break
            # make the pivot divide the remaining block; a fold followed by
            # re-clearing replaces the pivot with a strictly smaller gcd, which
            # also guarantees the divisibility chain of the final diagonal
            offender = None
            piv = m[t][t]
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if m[i][j] % piv:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            for k in range(ncols):
                m[t][k] += m[offender][k]
            for k in range(nrows):
                u[t][k] += u[offender][k]
        t += 1

    for i in range(limit):
        if m[i][i] < 0:
            for k in range(len(m[i])):
                m[i][k] = -m[i][k]
            for k in range(len(u[i])):
                u[i][k] = -u[i][k]

    return (
        tuple(tuple(row) for row in m),
        tuple(tuple(row) for row in u),
        tuple(tuple(row) for row in v),
    )


def invariant_factors(a: IntMatrix) -> tuple[int, ...]:
    """Nonzero diagonal of the Smith form of ``a``."""
    d, _, _ = smith_normal_form(a)
    vals = [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]
    return tuple(x for x in vals if x)


# ---------------------------------------------------------------------------
# Hermite normal form and sublattices
# ---------------------------------------------------------------------------

def _hermite_rows(generators: Sequence[Sequence[int]], ambient_dim: int) -> list[list[int]]:
    """Canonical row HNF basis of the lattice spanned by ``generators``.

    Pivots are positive, entries above a pivot are reduced into [0, pivot),
    and rows are ordered by pivot column.  The result depends only on the
    lattice, not on the generator order.
    """
    basis: list[list[int]] = []
    pivot_cols: list[int] = []
    for gen in generators:
        vec = list(gen)
        if len(vec) != ambient_dim:
            raise DimensionMismatchError(
                f"generator has length {len(vec)}, ambient is {ambient_dim}"
            )
        col = 0
        while col < ambient_dim:
            if vec[col] == 0:
                col += 1
                continue
            if col in pivot_cols:
                idx = pivot_cols.index(col)
                row = basis[idx]
                a, b = row[col], vec[col]
                if b % a == 0:
                    q = b // a
                    for k in range(col, ambient_dim):
                        vec[k] -= q * row[k]
                else:
                    g, x, y = xgcd(a, b)
                    ag, bg = a // g, b // g
                    for k in range(col, ambient_dim):
                        rk, vk = row[k], vec[k]
                        row[k] = x * rk + y * vk
                        vec[k] = -bg * rk + ag * vk
            else:
                pos = 0
                while pos < len(pivot_cols) and pivot_cols[pos] < col:
                    pos += 1
                basis.insert(pos, vec)
                pivot_cols.insert(pos, col)
                break
        # fully reduced vectors are dropped
    # canonical signs and reduction above the pivots
    for idx, col in enumerate(pivot_cols):
        if basis[idx][col] < 0:
            basis[idx] = [-x for x in basis[idx]]
    # increasing order: a reduction may disturb later pivot columns of upper
    # rows, and those are re-canonicalized by the later iterations
    for idx in range(len(basis)):
        col = pivot_cols[idx]
        piv = basis[idx][col]
        for upper in range(idx):
            q = basis[upper][col] // piv
            if q:
                for k in range(col, ambient_dim):
                    basis[upper][k] -= q * basis[idx][k]
    return basis


@dataclass(frozen=True)
class SubLattice:
    """An integer sublattice of Z^n, stored by its canonical HNF row basis."""

    ambient_dim: int
    basis: IntMatrix

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def pivot_columns(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.basis)

    @classmethod
    def full(cls, n: int) -> "SubLattice":
        return cls(n, identity_matrix(n))

    @classmethod
    def zero(cls, n: int) -> "SubLattice":
        return cls(n, ())

    def coordinates_of(self, vec: Sequence[int]) -> Optional[IntVector]:
        """Integer coordinates of ``vec`` in the basis, or None if outside."""
        if len(vec) != self.ambient_dim:
            raise DimensionMismatchError("vector/lattice ambient mismatch")
        v = list(vec)
        coeffs = []
        for row, col in zip(self.basis, self.pivot_columns):
            q, r = divmod(v[col], row[col])
            if r:
                return None
            if q:
                for k in range(col, self.ambient_dim):
                    v[k] -= q * row[k]
            coeffs.append(q)
        if any(v):
            return None
        return tuple(coeffs)

    def __contains__(self, vec: Sequence[int]) -> bool:
        return self.coordinates_of(vec) is not None

    def contains_lattice(self, other: "SubLattice") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatchError("lattice ambient mismatch")
        return all(row in self for row in other.basis)

    def join(self, other: "SubLattice") -> "SubLattice":
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatchError("lattice ambient mismatch")
        return hermite_basis(self.basis + other.basis, self.ambient_dim)

    def saturation(self) -> "SubLattice":
        """Smallest saturated sublattice containing this one.

        Computed as the double integer orthogonal complement; the result has
        the same rational span but is primitive in Z^n.
        """
        perp = left_kernel(transpose(self.basis), self.ambient_dim)
        return left_kernel(transpose(perp.basis), self.ambient_dim)


def hermite_basis(
    generators: Iterable[Sequence[int]], ambient_dim: Optional[int] = None
) -> SubLattice:
    """Sublattice generated by ``generators``, in canonical HNF."""
    gens = [as_vector(g) for g in generators]
    if ambient_dim is None:
        if not gens:
            raise DimensionMismatchError(
                "ambient_dim is required for an empty generator list"
            )
        ambient_dim = len(gens[0])
    rows = _hermite_rows(gens, ambient_dim)
    return SubLattice(ambient_dim, tuple(tuple(r) for r in rows))


def left_kernel(a: IntMatrix, nrows: Optional[int] = None) -> SubLattice:
    """Lattice of integer row vectors x with x * a = 0 (saturated in Z^nrows)."""
    a = as_matrix(a)
    r = len(a) if a else (nrows or 0)
    if nrows is not None and a and len(a) != nrows:
        raise DimensionMismatchError("left_kernel row count mismatch")
    if not a:
        return SubLattice.full(nrows or 0)
    c = len(a[0])
    d, u, _ = smith_normal_form(a)
    rows = []
    for i in range(r):
        diag = d[i][i] if i < min(r, c) else 0
        if diag == 0:
            rows.append(u[i])
    return hermite_basis(rows, r)


def difference_lattice(points: Iterable[Sequence[int]]) -> SubLattice:
    """Lattice generated by the pairwise differences of a point set.

    Independent of the chosen base point and invariant under translation.
    """
    pts = sorted({as_vector(p) for p in points})
    if not pts:
        raise EmptySetError("difference_lattice of an empty set")
    base = pts[0]
    return hermite_basis([vec_sub(p, base) for p in pts[1:]], len(base))


def lattice_index(sub: SubLattice, sup: SubLattice):
    """Index [sup : sub] as a positive integer, or INFINITE on rank drop.

    Raises NotSublatticeError unless sub is contained in sup.
    """
    if sub.ambient_dim != sup.ambient_dim:
        raise DimensionMismatchError("lattice ambient mismatch")
    coords = []
    for row in sub.basis:
        c = sup.coordinates_of(row)
        if c is None:
            raise NotSublatticeError("first lattice is not contained in the second")
        coords.append(c)
    if sub.rank < sup.rank:
        return INFINITE
    # |det| of sub expressed in sup's basis = product of its Smith invariants
    return abs(determinant(coords))


# ---------------------------------------------------------------------------
# Point sets and sumsets
# ---------------------------------------------------------------------------

def point_set(points: Iterable[Sequence[int]]) -> PointSet:
    """Canonical (sorted, deduplicated) tuple of integer points."""
    pts = sorted({as_vector(p) for p in points})
    if pts:
        width = len(pts[0])
        if any(len(p) != width for p in pts):
            raise DimensionMismatchError("points have unequal lengths")
    return tuple(pts)


def sumset(a: Iterable[Sequence[int]], b: Iterable[Sequence[int]]) -> PointSet:
    """Minkowski sum {x + y} as a set; the empty set is absorbing."""
    pa, pb = point_set(a), point_set(b)
    if not pa or not pb:
        return ()
    if len(pa[0]) != len(pb[0]):
        raise DimensionMismatchError("sumset of sets in different dimensions")
    return point_set(vec_add(x, y) for x in pa for y in pb)
