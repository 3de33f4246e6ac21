"""The eighteen six-dimensional nilpotent Lie algebras admitting complex structures."""

from __future__ import annotations

from functools import lru_cache

from .lie import AlgebraClass, LieAlgebra, SeriesProfile, fingerprint
from .parsing import parse_salamon

__all__ = [
    "CATALOG_SALAMON", "TAGS", "catalog_algebra", "catalog_fingerprints",
    "fingerprint_collisions", "GEN_BISMUT", "BALANCED_ALGEBRAS", "SKT_ALGEBRAS",
    "LCK_ALGEBRAS", "display_name",
]

CATALOG_SALAMON: dict[str, str] = {
    "h1": "(0,0,0,0,0,0)",
    "h2": "(0,0,0,0,12,34)",
    "h3": "(0,0,0,0,0,12+34)",
    "h4": "(0,0,0,0,12,14+23)",
    "h5": "(0,0,0,0,13+42,14+23)",
    "h6": "(0,0,0,0,12,13)",
    "h7": "(0,0,0,12,13,23)",
    "h8": "(0,0,0,0,0,12)",
    "h9": "(0,0,0,0,12,14+25)",
    "h10": "(0,0,0,12,13,14)",
    "h11": "(0,0,0,12,13,14+23)",
    "h12": "(0,0,0,12,13,24)",
    "h13": "(0,0,0,12,13+14,24)",
    "h14": "(0,0,0,12,14,13+42)",
    "h15": "(0,0,0,12,13+42,14+23)",
    "h16": "(0,0,0,12,14,24)",
    "h19minus": "(0,0,0,12,23,14-35)",
    "h26plus": "(0,0,12,13,23,14+25)",
}

TAGS: tuple[str, ...] = tuple(CATALOG_SALAMON)

# Bismut-connection holonomy in SU(3): every / some / no complex structure admits it.
GEN_BISMUT: dict[str, str] = {
    **{t: "all" for t in ("h1", "h6", "h19minus")},
    **{t: "some" for t in ("h2", "h3", "h4", "h5")},
    **{t: "none" for t in ("h7", "h8", "h9", "h10", "h11", "h12", "h13", "h14",
                           "h15", "h16", "h26plus")},
}

BALANCED_ALGEBRAS = frozenset({"h1", "h2", "h3", "h4", "h5", "h6", "h19minus"})
SKT_ALGEBRAS = frozenset({"h2", "h4", "h5", "h8"})
ABELIAN_SKT_ALGEBRAS = frozenset({"h2", "h8"})
LCK_ALGEBRAS = frozenset({"h1", "h3"})


def display_name(tag: str) -> str:
    return {"h19minus": "h19-", "h26plus": "h26+"}.get(tag, tag)


def catalog_algebra(tag: str) -> LieAlgebra:
    try:
        text = CATALOG_SALAMON[tag]
    except KeyError:
        raise KeyError(f"unknown catalog tag {tag!r}") from None
    return LieAlgebra(6, parse_salamon(text))


@lru_cache(maxsize=None)
def catalog_fingerprints() -> dict[str, SeriesProfile]:
    return {tag: fingerprint(catalog_algebra(tag)) for tag in TAGS}


def fingerprint_collisions() -> list[AlgebraClass]:
    """Groups of catalog algebras sharing a fingerprint."""
    groups: dict[tuple, list[str]] = {}
    for tag, fp in catalog_fingerprints().items():
        groups.setdefault(fp.key(), []).append(tag)
    return [AlgebraClass.of(*tags) for tags in groups.values() if len(tags) > 1]
