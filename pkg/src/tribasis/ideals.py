"""Fractional ideals of the maximal order: normalization, shifted
quasi-valuations, S-bases and triangular p-bases of ideals.

An ideal is given by its prime-ideal factorization: exponents indexed by
(prime of A, ordinal of the OM representation in the canonical order).
Normalization rescales so that the maximal order is contained in the ideal
(all exponents <= 0); bases of the normalized ideal are computed and the
scalar is reported factored, never multiplied through.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CertificateError, InputError
from .maxmin import (
    MultiIndex,
    assemble_basis,
    maxmin,
    value_tables,
    well_order,
)
from .omcore import INF, om_index
from .upoly import UPoly


@dataclass(frozen=True, order=True)
class PrimeIdealId:
    """Stable name of a prime ideal: (prime of A, ordinal over that prime)."""

    p: object  # PrimeElement
    ordinal: int


@dataclass
class FractionalIdeal:
    """prod of prime ideals to integer exponents (finitely many nonzero)."""

    exponents: dict = field(default_factory=dict)

    def cleaned(self):
        return {k: v for k, v in self.exponents.items() if v}

    def primes_of_A(self):
        return sorted(
            {pid.p for pid in self.cleaned()},
            key=lambda p: p.ring.key(p.value),
        )

    def exponent(self, pid):
        return self.exponents.get(pid, 0)

    def is_trivial(self):
        return not self.cleaned()


@dataclass
class NormalizedIdeal:
    """I* = alpha * I with B contained in I*; m holds v_p(alpha) per prime."""

    ideal: FractionalIdeal
    m: dict  # {PrimeElement: m_p}

    def scalar_factored(self):
        return {p: e for p, e in self.m.items() if e}


def resolve(reps_per_prime, pid: PrimeIdealId):
    reps = reps_per_prime.get(pid.p)
    if reps is None or not 0 <= pid.ordinal < len(reps):
        raise InputError(f"unresolved prime ideal id {pid}")
    return reps[pid.ordinal]


def normalize(ideal: FractionalIdeal, reps_per_prime) -> NormalizedIdeal:
    """Rescale by alpha = prod p^{m_p}, m_p = max ceil(n_p/e_p), so that all
    exponents become n_p - e_p m_p <= 0.  Idempotent."""
    exps = ideal.cleaned()
    m = {}
    for pid in exps:
        resolve(reps_per_prime, pid)  # validate
    for p in {pid.p for pid in exps}:
        # max of ceil(n/e) over every prime ideal above p (n = 0 included)
        m[p] = max(
            -((-exps.get(PrimeIdealId(p, i), 0)) // rep.e)
            for i, rep in enumerate(reps_per_prime[p])
        )
    new_exps = {}
    for p, mp in m.items():
        for ordinal, rep in enumerate(reps_per_prime[p]):
            pid = PrimeIdealId(p, ordinal)
            n = exps.get(pid, 0) - rep.e * mp
            assert n <= 0
            if n:
                new_exps[pid] = n
    out = NormalizedIdeal(FractionalIdeal(new_exps), m)
    for p in out.ideal.primes_of_A():
        reps = reps_per_prime[p]
        assert max(
            -((-out.ideal.exponent(PrimeIdealId(p, i))) // reps[i].e)
            for i in range(len(reps))
        ) == 0, "normalization not idempotent"
    return out


def shifted_w(rep, n_p) -> Fraction:
    """Shift turning w_p into w_{p,I}: w_{p,I}(b) = w_p(b) - n_p/e_p."""
    return Fraction(-n_p, rep.e)


def ideal_index_p(reps, exps):
    """ind_p(I*) = sum over p|p of (ind(F_p) + Res-half - f_p n_p)."""
    total = Fraction(0)
    for i, rep in enumerate(reps):
        res_half = Fraction(sum(rep.res_val.values()), 2)
        total += rep.ind_local + res_half - rep.fres * exps[i]
    assert total.denominator == 1
    return int(total)


def split_T_S(reps, istar: NormalizedIdeal, p):
    """Partition the prime ideals over p: T collects those with zero local
    index, zero resultant coupling and zero ideal exponent; S is the rest."""
    T, S = [], []
    exps = [
        istar.ideal.exponent(PrimeIdealId(p, rep.ordinal)) for rep in reps
    ]
    for i, rep in enumerate(reps):
        res_total = sum(rep.res_val.values())
        if rep.ind_local == 0 and res_total == 0 and exps[i] == 0:
            T.append(rep)
        else:
            S.append(rep)
    ind_p = ideal_index_p(reps, exps)
    assert len(S) <= 2 * ind_p, "S larger than the index allows"
    return T, S


def ideal_p_basis(f: UPoly, p, reps, istar: NormalizedIdeal):
    """Triangular p-basis of a normalized ideal.

    With T nonempty the fast path pads with powers of x below the S-block
    degree and multiplies an S-basis through by g = prod of T-approximants
    (triangular but not w-reduced in general); otherwise a full shifted
    MaxMin runs over all prime ideals."""
    exps = [
        istar.ideal.exponent(PrimeIdealId(p, rep.ordinal)) for rep in reps
    ]
    expected = ideal_index_p(reps, exps)
    shifts_all = [shifted_w(rep, n) for rep, n in zip(reps, exps)]
    T, S = split_T_S(reps, istar, p)
    if not T:
        tables = value_tables(reps)
        order = well_order(reps, tables, expected, shifts=shifts_all)
        indices, values = maxmin(tables, order, shifts_all)
        return assemble_basis(
            reps, indices, values, p, expected, True, shifts=shifts_all
        )
    s_idx = [i for i, rep in enumerate(reps) if rep in S]
    d = f.degree()
    d_S = sum(reps[i].degree for i in s_idx)
    head_indices = []
    head_values = []
    for i in range(d - d_S):
        head_indices.append(MultiIndex(tuple(0 for _ in reps), x_power=i))
        head_values.append(_power_value(reps, shifts_all, i))
    if not S:
        return assemble_basis(
            reps, head_indices, head_values, p, expected, False,
            shifts=shifts_all,
        )
    sub_reps = [reps[i] for i in s_idx]
    sub_shifts = [shifts_all[i] for i in s_idx]
    sub_tables = value_tables(sub_reps)
    last_error = None
    for perm in _s_orderings(len(sub_reps)):
        indices, values = maxmin(sub_tables, perm, sub_shifts)
        full_indices = list(head_indices)
        full_values = list(head_values)
        for mi, w in zip(indices, values):
            coords = [rep.degree if rep in T else 0 for rep in reps]
            for k, i in enumerate(s_idx):
                coords[i] = mi.coords[k]
            full_indices.append(MultiIndex(tuple(coords)))
            full_values.append(w)
        try:
            return assemble_basis(
                reps, full_indices, full_values, p, expected, False,
                shifts=shifts_all,
            )
        except CertificateError as exc:
            last_error = exc
    raise last_error


def _power_value(reps, shifts, i):
    """w_I(x^i) = min over prime ideals of (i*w_q(x) + shift_q)."""
    vals = []
    for q, rep in enumerate(reps):
        w_x = rep.cross[rep.uid][0]
        if i and w_x == INF:
            vals.append(INF)
        else:
            vals.append(i * w_x + shifts[q] if i else shifts[q])
    return min(vals)


def _s_orderings(s):
    import itertools as it

    if s == 1:
        return [(0,)]
    if s > 8:
        raise CertificateError("too many prime ideals for ordering search")
    return it.permutations(range(s))


def ideal_index_and_size(ideal: FractionalIdeal, reps_per_prime):
    """({p: ind_p(I*)}, h(I) over the supplied primes).

    Asserts h(I) >= h(D) with equality iff I* = B (over those primes)."""
    norm = normalize(ideal, reps_per_prime)
    inds = {}
    h_ideal = 0
    h_index = 0
    trivial = True
    for p, reps in reps_per_prime.items():
        exps = [
            norm.ideal.exponent(PrimeIdealId(p, rep.ordinal)) for rep in reps
        ]
        ind_star = ideal_index_p(reps, exps)
        inds[p] = ind_star
        h_ideal += ind_star * p.h()
        h_index += om_index(reps) * p.h()
        if any(exps):
            trivial = False
    assert h_ideal >= h_index
    assert (h_ideal == h_index) == trivial
    return inds, h_ideal
