"""Canonical example series shipped as data files.

``broken_table`` deliberately violates graded multiplicativity and is meant
for exercising the validation path; the other entries are well-formed.
"""

from __future__ import annotations

from importlib import resources

from .errors import SpecFileError
from .series import SeriesSpec
from .specfile import parse_spec_text

CATALOG_NAMES = (
    "full_O1_P2",
    "even_sublattice_P2",
    "segment_kappa1",
    "gap_semigroup",
    "deg_drop_line",
    "parabola_index2",
    "powers_023",
)

BROKEN_NAMES = ("broken_table",)

_cache: dict[str, SeriesSpec] = {}


def load_catalog(name: str) -> SeriesSpec:
    """Load one named catalog spec (cached)."""
    if name in _cache:
        return _cache[name]
    if name not in CATALOG_NAMES + BROKEN_NAMES:
        raise SpecFileError(f"unknown catalog entry {name!r}")
    text = resources.files("glslab.data").joinpath(f"{name}.json").read_text()
    spec = parse_spec_text(text)
    _cache[name] = spec
    return spec


def catalog_specs() -> tuple[SeriesSpec, ...]:
    """All well-formed catalog entries."""
    return tuple(load_catalog(name) for name in CATALOG_NAMES)


def catalog_path(name: str):
    """Filesystem path of a catalog spec file (for CLI examples and tests)."""
    return resources.files("glslab.data").joinpath(f"{name}.json")
