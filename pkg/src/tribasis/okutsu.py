"""Okutsu numerators and local integral bases attached to one OM
representation (one prime ideal, one irreducible p-adic factor).

The degree-m numerator is x^j0 * phi_1^j1 * ... * phi_r^jr with the ji the
mixed-radix digits of m over the frame degrees; its value at a branch root
is the matching combination of the frame values, and the local basis
denominator exponents are the floors of those values.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .omcore import OMRep


@dataclass(frozen=True)
class LocalNumerator:
    """Symbolic product of frame polynomials of total degree ``degree``.

    exponents is the mixed-radix vector (j0, ..., jr); the degree-d
    numerator is the approximant sentinel (is_approximant True)."""

    rep_ordinal: int
    exponents: tuple
    degree: int
    is_approximant: bool = False


def numerator(m: int, rep: OMRep) -> LocalNumerator:
    """The unique degree-m Okutsu numerator of this factor (0 <= m <= d)."""
    if not 0 <= m <= rep.degree:
        raise InputError("numerator index out of range")
    if m == rep.degree:
        return LocalNumerator(rep.ordinal, (), m, is_approximant=True)
    return LocalNumerator(rep.ordinal, rep.numerator_exponents(m), m)


def numerator_set(rep: OMRep):
    """The extended numerator list [g_0=1, ..., g_{d-1}, g_d=approximant]."""
    return [numerator(m, rep) for m in range(rep.degree + 1)]


def local_basis(rep: OMRep):
    """[(LocalNumerator, eta_m)] for m = 0..d-1: an O_p-basis of the local
    maximal order, with denominators p^eta_m.

    eta is non-decreasing and sums to ind_p(F_p)."""
    out = []
    etas = []
    for m in range(rep.degree):
        eta = int(rep.numerator_value(m))
        out.append((numerator(m, rep), eta))
        etas.append(eta)
    assert all(a <= b for a, b in zip(etas, etas[1:])), "eta not monotone"
    assert sum(etas) == rep.ind_local
    return out
