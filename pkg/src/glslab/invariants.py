"""Per-degree and stabilized invariants of the maps defined by each slice.

In the monomial model the closure of the image of the degree-m map is the
toric variety of (conv S_m, Lambda_m), where Lambda_m is the lattice of
exponent differences.  Everything downstream reads off that pair:

  image dimension      rank Lambda_m
  generic map degree   [Z^n : Lambda_m]           (full rank only)
  stable comparison    [Lambda_inf : Lambda_m]    (1 = stably the same image)
  image Hilbert fn     |k-fold sumset of S_m|
  image volume         nvol(conv S_m) w.r.t. Lambda_m

Stabilized values and thresholds are observed within a truncation window and
are never certified.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import EmptySliceError
from .lattice import (
    INFINITE,
    SubLattice,
    difference_lattice,
    lattice_index,
    sumset,
)
from .polytope import convex_hull_volume
from .series import SeriesSpec, evaluate, require_nonempty, support_members


class _Undefined:
    """Marker for a generic degree that does not exist (image too small)."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "UNDEFINED"


UNDEFINED = _Undefined()

_LATTICE_CACHE: dict = {}
_SUMSET_CACHE: dict = {}


def exponent_lattice(spec: SeriesSpec, m: int) -> SubLattice:
    """Difference lattice Lambda_m of the degree-m slice (cached)."""
    key = (spec, m)
    hit = _LATTICE_CACHE.get(key)
    if hit is None:
        hit = difference_lattice(require_nonempty(spec, m))
        _LATTICE_CACHE[key] = hit
    return hit


def stable_lattice(spec: SeriesSpec, bound: int) -> SubLattice:
    """Join of the slice lattices over the window, or the declared one.

    A declared stable lattice must contain the observed join; catalog entries
    use it so the window join is exact rather than truncated.
    """
    join = SubLattice.zero(spec.ambient.n)
    for m in support_members(spec, bound):
        join = join.join(exponent_lattice(spec, m))
    declared = spec.declared_lambda_inf
    if declared is not None:
        if not declared.contains_lattice(join):
            raise ValueError(
                "declared stable lattice does not contain the observed join"
            )
        return declared
    return join


# ---------------------------------------------------------------------------
# Stabilization reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StabilizationReport:
    """Per-degree values with the observed stable value and onset.

    ``observed_threshold`` is the least window degree from which every later
    window value equals ``stable_value``; ``certified`` stays False because a
    truncated window can never prove stabilization.
    """

    label: str
    spec_name: str
    values: tuple[tuple[int, object], ...]
    stable_value: object
    observed_threshold: Optional[int]
    bound: int
    certified: bool = False
    notes: tuple[str, ...] = ()

    def value_at(self, m: int):
        for deg, val in self.values:
            if deg == m:
                return val
        raise KeyError(m)

    def to_jsonable(self):
        from .reporting import fmt_exact

        return {
            "report": self.label,
            "spec": self.spec_name,
            "bound": str(self.bound),
            "values": [[str(m), fmt_exact(v)] for m, v in self.values],
            "stable_value": fmt_exact(self.stable_value),
            "observed_threshold": ""
            if self.observed_threshold is None
            else str(self.observed_threshold),
            "certified": self.certified,
            "notes": list(self.notes),
        }


def _stabilize(label, spec, bound, pairs, notes=()) -> StabilizationReport:
    if not pairs:
        return StabilizationReport(label, spec.name, (), UNDEFINED, None, bound, False, notes)
    stable = pairs[-1][1]
    threshold = None
    for idx in range(len(pairs) - 1, -1, -1):
        if pairs[idx][1] != stable:
            break
        threshold = pairs[idx][0]
    return StabilizationReport(
        label, spec.name, tuple(pairs), stable, threshold, bound, False, notes
    )


def iitaka_dim_at(spec: SeriesSpec, m: int) -> int:
    """Dimension of the degree-m image: the rank of Lambda_m."""
    return exponent_lattice(spec, m).rank


def iitaka_dimension(spec: SeriesSpec, bound: int) -> StabilizationReport:
    """Stabilized image dimension over the support window."""
    members = support_members(spec, bound)
    if not members:
        raise EmptySliceError("no nonzero slice in the window")
    pairs = [(m, iitaka_dim_at(spec, m)) for m in members]
    report = _stabilize("iitaka_dimension", spec, bound, pairs)
    peak = max(v for _, v in pairs)
    notes = (f"window_max={peak}",)
    if peak != report.stable_value:
        notes += ("window max exceeds the tail value; window too short",)
    return StabilizationReport(
        report.label,
        report.spec_name,
        report.values,
        report.stable_value,
        report.observed_threshold,
        bound,
        False,
        notes,
    )


def degree_at(spec: SeriesSpec, m: int):
    """Generic degree of the degree-m map, or UNDEFINED if not finite.

    Characteristic-zero semantics: the degree equals [Z^n : Lambda_m] when
    Lambda_m has full rank, and is undefined otherwise.
    """
    lam = exponent_lattice(spec, m)
    if lam.rank < spec.ambient.n:
        return UNDEFINED
    return lattice_index(lam, SubLattice.full(spec.ambient.n))


def asymptotic_degree(spec: SeriesSpec, bound: int) -> StabilizationReport:
    """Stabilized generic degree over degrees where it is defined.

    If the image dimension never reaches the ambient dimension, the report
    carries UNDEFINED and points at the subtorus-restriction workflow.
    """
    members = support_members(spec, bound)
    if not members:
        raise EmptySliceError("no nonzero slice in the window")
    pairs = [(m, degree_at(spec, m)) for m in members]
    defined = [(m, v) for m, v in pairs if v is not UNDEFINED]
    if not defined:
        return StabilizationReport(
            "asymptotic_degree",
            spec.name,
            tuple(pairs),
            UNDEFINED,
            None,
            bound,
            False,
            (
                "image dimension stays below the ambient dimension; "
                "restrict to a subtorus of matching dimension instead",
            ),
        )
    report = _stabilize("asymptotic_degree", spec, bound, defined)
    floor_ok = all(v >= report.stable_value for _, v in defined)
    notes = () if floor_ok else ("a window degree dips below the stable value",)
    return StabilizationReport(
        report.label,
        report.spec_name,
        tuple(pairs),
        report.stable_value,
        report.observed_threshold,
        bound,
        False,
        notes,
    )


def birational_threshold(spec: SeriesSpec, bound: int) -> StabilizationReport:
    """Comparison degree [Lambda_inf : Lambda_m] per window degree.

    The value 1 means the degree-m image already carries the stable function
    field; the observed threshold is the onset of 1s, and INFINITE marks
    degrees whose image dimension is still too small.
    """
    members = support_members(spec, bound)
    if not members:
        raise EmptySliceError("no nonzero slice in the window")
    lam_inf = stable_lattice(spec, bound)
    pairs = [(m, lattice_index(exponent_lattice(spec, m), lam_inf)) for m in members]
    finite = [(m, v) for m, v in pairs if v is not INFINITE]
    stable = 1 if any(v == 1 for _, v in finite) else (finite[-1][1] if finite else INFINITE)
    threshold = None
    for idx in range(len(pairs) - 1, -1, -1):
        if pairs[idx][1] != stable:
            break
        threshold = pairs[idx][0]
    return StabilizationReport(
        "birational_threshold", spec.name, tuple(pairs), stable, threshold, bound
    )


def divisibility_violations(spec: SeriesSpec, bound: int) -> tuple[tuple[int, int], ...]:
    """Pairs i | j in the window with Lambda_i not inside Lambda_j."""
    members = support_members(spec, bound)
    bad = []
    for i in members:
        for j in members:
            if j != i and j % i == 0:
                if not exponent_lattice(spec, j).contains_lattice(
                    exponent_lattice(spec, i)
                ):
                    bad.append((i, j))
    return tuple(bad)


# ---------------------------------------------------------------------------
# Image Hilbert function and image volume
# ---------------------------------------------------------------------------

def image_hilbert(spec: SeriesSpec, m: int, k: int) -> int:
    """Dimension of the degree-k part of the subalgebra generated by S_m.

    Equals the cardinality of the k-fold sumset of the degree-m slice; this
    counts sections of the degree-m image itself, not of its normalization.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return 1
    base = require_nonempty(spec, m)
    key = (spec, m)
    chain = _SUMSET_CACHE.setdefault(key, [point_set_of_origin(spec), base])
    while len(chain) <= k:
        chain.append(sumset(chain[-1], base))
    return len(chain[k])


def point_set_of_origin(spec: SeriesSpec):
    return (tuple(0 for _ in range(spec.ambient.n)),)


def image_volume(spec: SeriesSpec, m: int) -> Fraction:
    """Normalized volume of conv(S_m) with respect to Lambda_m.

    This is the self-intersection number of the polarization on the degree-m
    image, and the k->infinity limit of rank! * image_hilbert(m, k) / k^rank.
    """
    pts = require_nonempty(spec, m)
    return convex_hull_volume(pts, exponent_lattice(spec, m)).nvol
