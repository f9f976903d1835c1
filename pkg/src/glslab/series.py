"""Graded monomial series: declarative slice rules, validity checks, and the
support / basepoint-free degree semigroups.

A series assigns to every degree m a finite set S_m of exponent vectors
inside the dilated standard simplex (m*d)*Delta_n; the degree-0 slice is
always the origin alone.  Slices multiply by Minkowski sum, and the graded
axiom S_k + S_l inside S_{k+l} is checkable, not assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import EmptySliceError, SpecError
from .lattice import (
    IntMatrix,
    IntVector,
    PointSet,
    SubLattice,
    as_matrix,
    as_vector,
    hermite_basis,
    point_set,
    sumset,
)
from .polytope import RationalPolytope, convex_hull, enumerate_dilation


@dataclass(frozen=True)
class AmbientSpec:
    """Projective ambient: dimension n and line-bundle degree d.

    Slices live in (m*d)*Delta_n, the exponents of monomials of total degree
    at most m*d in the n torus variables.
    """

    n: int
    d: int

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise SpecError("ambient requires n >= 1 and d >= 1")

    def simplex_vertices(self, m: int) -> PointSet:
        """Vertices of (m*d)*Delta_n: the origin and the pure powers."""
        scale = m * self.d
        verts = [tuple(0 for _ in range(self.n))]
        for i in range(self.n):
            verts.append(tuple(scale if j == i else 0 for j in range(self.n)))
        return point_set(verts)


def _check_inside_simplex(points, d: int, what: str, degree: int = 1):
    for p in points:
        if any(Fraction(c) < 0 for c in p) or sum(Fraction(c) for c in p) > degree * d:
            raise SpecError(f"{what} has entry {tuple(p)} outside {degree * d}*Delta")


@dataclass(frozen=True)
class PolytopalRule:
    """S_m = (m*P) intersected with Z^n."""

    polytope: RationalPolytope


@dataclass(frozen=True)
class CongruenceRule:
    """S_m = (m*P intersected with Z^n) restricted to the coset m*w + L."""

    polytope: RationalPolytope
    lattice: SubLattice
    offset: IntVector


@dataclass(frozen=True)
class PowersRule:
    """S_m is the m-fold Minkowski sum of the degree-one slice."""

    generators: PointSet


@dataclass(frozen=True)
class TableRule:
    """Explicit slices up to max_degree, extended by sumset closure above."""

    max_degree: int
    slices: tuple[tuple[int, PointSet], ...]

    def slice_at(self, m: int) -> PointSet:
        for deg, pts in self.slices:
            if deg == m:
                return pts
        return ()


@dataclass(frozen=True)
class Piece:
    low: int
    high: Optional[int]  # inclusive; None means unbounded
    spec: "SeriesSpec"


@dataclass(frozen=True)
class PiecewiseRule:
    """Degree-range dispatch; the first matching piece wins."""

    pieces: tuple[Piece, ...]


@dataclass(frozen=True)
class ProjectedRule:
    """Pointwise image of a base series under an integer matrix."""

    base: "SeriesSpec"
    matrix: IntMatrix


Rule = Union[PolytopalRule, CongruenceRule, PowersRule, TableRule, PiecewiseRule, ProjectedRule]


@dataclass(frozen=True)
class SeriesSpec:
    """A declarative rule producing one exponent set per degree."""

    ambient: AmbientSpec
    rule: Rule
    name: str = ""
    declared_lambda_inf: Optional[SubLattice] = None

    def __post_init__(self):
        n, d = self.ambient.n, self.ambient.d
        rule = self.rule
        if isinstance(rule, (PolytopalRule, CongruenceRule)):
            p = rule.polytope
            if not p.vertices:
                raise SpecError("rule polytope is empty")
            if p.ambient_dim != n:
                raise SpecError("rule polytope lives in the wrong dimension")
            _check_inside_simplex(p.vertices, d, "polytope vertex list")
        if isinstance(rule, CongruenceRule):
            if rule.lattice.ambient_dim != n or len(rule.offset) != n:
                raise SpecError("congruence data has the wrong dimension")
        if isinstance(rule, PowersRule):
            if not rule.generators:
                raise SpecError("POWERS rule needs a nonempty degree-one slice")
            if len(rule.generators[0]) != n:
                raise SpecError("POWERS points live in the wrong dimension")
            _check_inside_simplex(rule.generators, d, "POWERS slice")
        if isinstance(rule, TableRule):
            if rule.max_degree < 1:
                raise SpecError("TABLE needs max_degree >= 1")
            for deg, pts in rule.slices:
                if not 1 <= deg <= rule.max_degree:
                    raise SpecError(f"TABLE degree {deg} outside 1..{rule.max_degree}")
                if pts and len(pts[0]) != n:
                    raise SpecError("TABLE points live in the wrong dimension")
                _check_inside_simplex(pts, d, f"TABLE slice {deg}", degree=deg)
        if isinstance(rule, PiecewiseRule):
            if not rule.pieces:
                raise SpecError("PIECEWISE needs at least one piece")
            for piece in rule.pieces:
                if piece.low < 0 or (piece.high is not None and piece.high < piece.low):
                    raise SpecError("PIECEWISE piece has an empty degree range")
                if piece.spec.ambient != self.ambient:
                    raise SpecError("PIECEWISE piece changes the ambient")
        if isinstance(rule, ProjectedRule):
            mat = rule.matrix
            if not mat or len(mat) != n:
                raise SpecError("PROJECTED matrix row count must match the ambient")
            if len(mat[0]) != rule.base.ambient.n:
                raise SpecError("PROJECTED matrix column count must match the base")
            if hermite_basis(mat).rank != len(mat):
                raise SpecError("PROJECTED matrix is rank-deficient")
        if self.declared_lambda_inf is not None:
            if self.declared_lambda_inf.ambient_dim != n:
                raise SpecError("declared stable lattice has the wrong dimension")


def polytopal_spec(n: int, d: int, vertices, name: str = "", **kw) -> SeriesSpec:
    return SeriesSpec(AmbientSpec(n, d), PolytopalRule(convex_hull(vertices)), name, **kw)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

_SLICE_CACHE: dict[tuple[SeriesSpec, int], PointSet] = {}


def seed_slice_cache(spec: SeriesSpec, m: int, points: PointSet) -> None:
    """Pre-populate the slice cache (used by the CLI's on-disk cache)."""
    _SLICE_CACHE[(spec, m)] = point_set(points)


def evaluate(spec: SeriesSpec, m: int) -> PointSet:
    """The degree-m slice S_m, canonically ordered and cached per (spec, m)."""
    if m < 0:
        raise ValueError("degree must be nonnegative")
    key = (spec, m)
    cached = _SLICE_CACHE.get(key)
    if cached is not None:
        return cached
    if m == 0:
        result = point_set([tuple(0 for _ in range(spec.ambient.n))])
    else:
        result = _evaluate_rule(spec, m)
    _SLICE_CACHE[key] = result
    return result


def _evaluate_rule(spec: SeriesSpec, m: int) -> PointSet:
    rule = spec.rule
    if isinstance(rule, PolytopalRule):
        return enumerate_dilation(rule.polytope, m)
    if isinstance(rule, CongruenceRule):
        offset = tuple(m * c for c in rule.offset)
        return enumerate_dilation(rule.polytope, m, constraint=(rule.lattice, offset))
    if isinstance(rule, PowersRule):
        if m == 1:
            return point_set(rule.generators)
        return sumset(evaluate(spec, m - 1), rule.generators)
    if isinstance(rule, TableRule):
        if m <= rule.max_degree:
            return rule.slice_at(m)
        out: set = set()
        for k in range(1, m):
            out.update(sumset(evaluate(spec, k), evaluate(spec, m - k)))
        return point_set(out)
    if isinstance(rule, PiecewiseRule):
        for piece in rule.pieces:
            if piece.low <= m and (piece.high is None or m <= piece.high):
                return evaluate(piece.spec, m)
        raise SpecError(f"no PIECEWISE piece covers degree {m}")
    if isinstance(rule, ProjectedRule):
        base_points = evaluate(rule.base, m)
        mat = rule.matrix
        return point_set(
            tuple(sum(row[j] * p[j] for j in range(len(p))) for row in mat)
            for p in base_points
        )
    raise SpecError(f"unknown rule type {type(rule).__name__}")


def dimension(spec: SeriesSpec, m: int) -> int:
    """dim of the degree-m slice: the number of monomials spanning it."""
    return len(evaluate(spec, m))


# ---------------------------------------------------------------------------
# Multiplicativity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MultiplicativityReport:
    spec_name: str
    bound: int
    origin_ok: bool
    violations: tuple[tuple[int, int, IntVector], ...]

    @property
    def passed(self) -> bool:
        return self.origin_ok and not self.violations

    def to_jsonable(self):
        return {
            "report": "multiplicativity",
            "spec": self.spec_name,
            "bound": str(self.bound),
            "origin_ok": self.origin_ok,
            "passed": self.passed,
            "violations": [
                {"k": str(k), "l": str(l), "witness": [str(c) for c in w]}
                for k, l, w in self.violations
            ],
        }


def check_multiplicativity(spec: SeriesSpec, bound: int) -> MultiplicativityReport:
    """Verify S_k + S_l inside S_{k+l} for all k + l <= bound, and S_0 = {0}.

    Violations are reported as data: every offending (k, l, witness point)
    triple is listed, with k <= l.
    """
    if bound < 2:
        raise ValueError("bound must be at least 2")
    origin = tuple(0 for _ in range(spec.ambient.n))
    origin_ok = evaluate(spec, 0) == (origin,)
    violations = []
    for k in range(1, bound):
        for l in range(k, bound - k + 1):
            target = set(evaluate(spec, k + l))
            for w in sumset(evaluate(spec, k), evaluate(spec, l)):
                if w not in target:
                    violations.append((k, l, w))
    return MultiplicativityReport(spec.name, bound, origin_ok, tuple(violations))


# ---------------------------------------------------------------------------
# Degree semigroups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SemigroupReport:
    """Degrees (up to a truncation bound) where a property holds.

    threshold_N is the least N >= 1 such that every multiple of gcd_e in
    [N, bound] is a member; it is observed within the window only, never
    certified.
    """

    kind: str
    spec_name: str
    members: tuple[int, ...]
    gcd_e: int
    threshold_N: Optional[int]
    truncation_bound: int

    def to_jsonable(self):
        return {
            "report": f"{self.kind}_semigroup",
            "spec": self.spec_name,
            "members": [str(m) for m in self.members],
            "gcd": str(self.gcd_e),
            "threshold": "" if self.threshold_N is None else str(self.threshold_N),
            "bound": str(self.truncation_bound),
            "certified": False,
        }


def _semigroup_report(kind, spec, bound, member_test) -> SemigroupReport:
    if bound < 1:
        raise ValueError("bound must be at least 1")
    members = [m for m in range(bound + 1) if member_test(m)]
    g = math.gcd(*[m for m in members if m > 0]) if any(members) else 0
    threshold = None
    if g:
        for start in range(1, bound + 1):
            if all(m in set(members) for m in range(start, bound + 1) if m % g == 0):
                threshold = start
                break
    return SemigroupReport(kind, spec.name, tuple(members), g, threshold, bound)


def support_semigroup(spec: SeriesSpec, bound: int) -> SemigroupReport:
    """Degrees m <= bound with a nonzero slice."""
    return _semigroup_report(
        "support", spec, bound, lambda m: bool(evaluate(spec, m))
    )


def basepoint_free_at(spec: SeriesSpec, m: int) -> bool:
    """Whether the degree-m slice is basepoint-free.

    Criterion for monomial series on projective space: the slice must contain
    every vertex of (m*d)*Delta_n, because at each torus-fixed point only the
    corresponding pure power is nonvanishing (see README for the argument).
    """
    if m < 1:
        raise ValueError("basepoint-freeness is tested for m >= 1 only")
    if isinstance(spec.rule, ProjectedRule):
        raise SpecError(
            "basepoint-freeness is undefined for projected series; "
            "its slices need not sit in a dilated standard simplex"
        )
    got = set(evaluate(spec, m))
    return all(v in got for v in spec.ambient.simplex_vertices(m))


def free_semigroup(spec: SeriesSpec, bound: int) -> SemigroupReport:
    """Degrees m <= bound whose slice is basepoint-free (0 included)."""
    return _semigroup_report(
        "free", spec, bound, lambda m: m == 0 or basepoint_free_at(spec, m)
    )


def support_members(spec: SeriesSpec, bound: int) -> tuple[int, ...]:
    """Positive degrees up to bound with a nonzero slice."""
    return tuple(m for m in range(1, bound + 1) if evaluate(spec, m))


def require_nonempty(spec: SeriesSpec, m: int) -> PointSet:
    pts = evaluate(spec, m)
    if not pts:
        raise EmptySliceError(f"slice at degree {m} is the zero space")
    return pts
