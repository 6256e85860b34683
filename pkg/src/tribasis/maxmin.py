"""The MaxMin algorithm and reduced triangular p-integral bases.

Degree by degree, MaxMin picks one Okutsu numerator per prime ideal so that
the product has maximal quasi-valuation w = min over the prime ideals; the
approximants are treated as symbols of value infinity at their own branch.
Correctness of a chosen prime-ideal ordering is certified afterward by
sum(floor(alpha_i)) = ind_p(f); on failure other orderings are tried.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import CertificateError, InputError
from .omcore import INF, boost_approximants, om_index
from .upoly import UPoly, truncate


@dataclass(frozen=True)
class MultiIndex:
    """One numerator index j_p per prime ideal; x_power carries an extra
    power of x (used only by the ideals fast path, where basis elements
    below the S-block are plain powers of x)."""

    coords: tuple
    x_power: int = 0

    @property
    def degree(self):
        return self.x_power + sum(self.coords)


@dataclass
class TriangularLocalBasis:
    """Triangular p-integral basis (1, g_1(x)/p^eta_1, ...).

    numerators are monic of degree i, reduced mod p^(eta_i + 1); values
    holds the exact rationals w(g_i(theta)) (equal to alpha_i when reduced
    is True)."""

    p: object
    numerators: list
    values: list
    etas: list
    ind: int
    reduced: bool
    multi_indices: list = None

    def denominator_exponent(self, i):
        return self.etas[i]


def value_tables(reps):
    """tables[i][m][q] = w_q(g_{i,m}) for the degree-m numerator of rep i.

    The self entry of the approximant (m = d_i, q = i) is INF (symbolic)."""
    tables = []
    for i, rep in enumerate(reps):
        rows = []
        for m in range(rep.degree + 1):
            vec = []
            for q, rq in enumerate(reps):
                if m == rep.degree:
                    w = INF if q == i else rep.cross[rq.uid][-1]
                elif q == i:
                    w = rep.numerator_value(m)
                else:
                    js = rep.numerator_exponents(m)
                    cross = rep.cross[rq.uid]  # values of (x, phi_1.., approx)
                    w = Fraction(0)
                    for l, j in enumerate(js):
                        if j and w != INF:
                            w = INF if cross[l] == INF else w + j * cross[l]
                vec.append(w)
            rows.append(vec)
        tables.append(rows)
    return tables


def maxmin(tables, order, shifts=None):
    """Run MaxMin over the numerator value tables in the given prime order.

    shifts (one rational per prime ideal, from the ideal exponents) are
    added once per coordinate.  Returns (multi-indices of degrees 0..d-1,
    their w-values)."""
    s = len(tables)
    degrees = [len(t) - 1 for t in tables]
    d = sum(degrees)
    if shifts is None:
        shifts = [Fraction(0)] * s
    coords = [0] * s
    out = []
    values = []
    for _ in range(d):
        vec = list(shifts)
        for i in range(s):
            row = tables[i][coords[i]]
            for q in range(s):
                if vec[q] == INF or row[q] == INF:
                    vec[q] = INF
                else:
                    vec[q] = vec[q] + row[q]
        w = min(vec)
        assert w != INF, "total degree below d cannot have infinite value"
        out.append(MultiIndex(tuple(coords)))
        values.append(w)
        for i in order:
            if vec[i] == w:
                coords[i] += 1
                break
    return out, values


def well_order(reps, tables=None, expected_ind=None, shifts=None):
    """A prime-ideal ordering under which MaxMin certifies, as a permutation.

    Candidates are tried in a deterministic sequence (descending factor
    degree first, then the canonical order, then all permutations, s <= 8);
    certification is sum(floor(alpha_i)) = ind_p."""
    if tables is None:
        tables = value_tables(reps)
    if expected_ind is None:
        expected_ind = om_index(reps)
    s = len(reps)
    if s == 1:
        return (0,)
    if s > 8:
        raise CertificateError("too many prime ideals for ordering search")
    by_degree = tuple(sorted(range(s), key=lambda i: (-reps[i].degree, i)))
    candidates = itertools.chain(
        (by_degree, tuple(range(s))), itertools.permutations(range(s))
    )
    seen = set()
    for perm in candidates:
        if perm in seen:
            continue
        seen.add(perm)
        _, values = maxmin(tables, perm, shifts)
        if sum(int(v) for v in values) == expected_ind:
            return perm
    raise CertificateError("no prime-ideal ordering certifies MaxMin")


def certify_p_basis(basis: TriangularLocalBasis, expected_ind: int) -> bool:
    """True iff the denominator exponents sum to the expected index and the
    numerators are monic of their degrees."""
    if sum(basis.etas) != expected_ind:
        return False
    for i, g in enumerate(basis.numerators):
        if g.degree() != i or not g.is_monic():
            return False
    return True


def _acc(total, mult, value):
    if total == INF or value == INF:
        return INF
    return total + mult * value


def boost_targets(reps, indices, values, shifts=None):
    """Per-rep self-value targets making every chosen product's ambiguous
    (approximant) coordinates reach its claimed value."""
    s = len(reps)
    if shifts is None:
        shifts = [Fraction(0)] * s
    targets = [Fraction(0)] * s
    for mi, alpha in zip(indices, values):
        for q in range(s):
            if mi.coords[q] != reps[q].degree:
                continue
            # coordinate q is symbolic: w_q(g) = gamma_top_q + rest
            rest = shifts[q]
            if mi.x_power:
                rest = _acc(rest, mi.x_power, reps[q].cross[reps[q].uid][0])
            for i in range(s):
                m = mi.coords[i]
                if i == q:
                    continue
                rep = reps[i]
                cross = rep.cross[reps[q].uid]
                if m == rep.degree:
                    rest = _acc(rest, 1, cross[-1])
                else:
                    for l, j in enumerate(rep.numerator_exponents(m)):
                        if j:
                            rest = _acc(rest, j, cross[l])
            if rest == INF:
                continue
            need = alpha - rest
            if need > targets[q]:
                targets[q] = need
    return targets


def assemble_basis(reps, indices, values, p, expected_ind, reduced,
                   shifts=None):
    """Expand the chosen numerator products, truncate, and certify."""
    ring = reps[0].engine.ring
    targets = boost_targets(reps, indices, values, shifts=shifts)
    boost_approximants(reps, targets)
    numerators = []
    etas = []
    for mi, alpha in zip(indices, values):
        g = UPoly.monomial(ring, ring.one, mi.x_power)
        for i, m in enumerate(mi.coords):
            if m:
                g = g * reps[i].numerator_poly(m)
        eta = int(alpha)
        g = truncate(g, p, eta + 1)
        assert g.is_monic() and g.degree() == mi.degree
        numerators.append(g)
        etas.append(eta)
    basis = TriangularLocalBasis(
        p, numerators, list(values), etas, expected_ind, reduced,
        multi_indices=list(indices),
    )
    if not certify_p_basis(basis, expected_ind):
        raise CertificateError("certificate failed")
    return basis


def p_basis(f: UPoly, p, reps) -> TriangularLocalBasis:
    """Reduced triangular p-integral basis via MaxMin over all prime ideals.

    The approximants are boosted until every chosen product provably attains
    its alpha_i; the result carries the certificate sum(eta) = ind_p(f)."""
    if not reps:
        raise InputError("no OM representations supplied")
    expected = om_index(reps)
    for attempt in range(2):
        tables = value_tables(reps)
        order = well_order(reps, tables, expected)
        indices, values = maxmin(tables, order)
        assert all(a <= b for a, b in zip(values, values[1:])), \
            "alpha not monotone"
        basis = assemble_basis(reps, indices, values, p, expected, True)
        # boosting never changes the symbolic tables: re-derive and compare
        tables2 = value_tables(reps)
        if tables2 == tables:
            return basis
    raise CertificateError("MaxMin tables did not stabilize under boosting")
