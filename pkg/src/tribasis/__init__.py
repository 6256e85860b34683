"""Exact computation of triangular integral bases of L = K(theta) over Z or
GF(q)[t], and of triangular bases of fractional ideals, via the Montes/OM
algorithm, Okutsu local bases, the MaxMin algorithm and CRT gluing."""

from .rings import (
    ZRing,
    FqTRing,
    PrimeElement,
    IndexData,
    valuation,
    size_h,
    squarefree_factorization,
    crt_lift,
    ff_factorize,
)
from .upoly import (
    UPoly,
    TruncatedPoly,
    phi_expansion,
    resultant,
    discriminant,
    hensel_lift,
    truncate,
)
from .parse import parse_poly, format_poly

__all__ = [
    "ZRing",
    "FqTRing",
    "PrimeElement",
    "IndexData",
    "valuation",
    "size_h",
    "squarefree_factorization",
    "crt_lift",
    "ff_factorize",
    "UPoly",
    "TruncatedPoly",
    "phi_expansion",
    "resultant",
    "discriminant",
    "hensel_lift",
    "truncate",
    "parse_poly",
    "format_poly",
]
