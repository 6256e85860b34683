"""CRT gluing of per-prime triangular bases into a global triangular basis,
and the final index/discriminant bookkeeping.

The degree-i global numerator is the canonical representative (symmetric
over Z, degree-reduced over GF(q)[t]) satisfying h_i = g_{p,i}
mod p^(eta_{p,i}+1) for every contributing prime; the exponent-(eta+1)
congruences are kept intact in the stored numerators, which is what the
golden tests pin down.  Denominators are kept factored.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError
from .rings import IndexData, crt_lift, valuation
from .upoly import UPoly, discriminant


@dataclass
class TriangularBasis:
    """Global triangular basis: numerators h_i (monic, deg i) over A and
    factored denominators a_i = prod p^e; for ideal bases an extra factored
    scalar multiplies the whole basis."""

    ring: object
    numerators: list
    denominators: list          # list of {PrimeElement: exponent}
    scalar: dict = field(default_factory=dict)  # {PrimeElement: exponent}

    def denominator_element(self, i):
        out = self.ring.one
        for p, e in sorted(self.denominators[i].items(),
                           key=lambda t: self.ring.key(t[0].value)):
            out = self.ring.mul(out, p.power(e))
        return out

    def index_element(self):
        """D = prod a_i as an element of A (unit-normalized)."""
        out = self.ring.one
        for i in range(len(self.numerators)):
            out = self.ring.mul(out, self.denominator_element(i))
        return out

    def check_chain(self):
        """Divisibility chain: v_p(a_i) non-decreasing in i for every p."""
        primes = set()
        for d in self.denominators:
            primes.update(d)
        for p in primes:
            exps = [d.get(p, 0) for d in self.denominators]
            if any(a > b for a, b in zip(exps, exps[1:])):
                return False
        return True


def glue_global(local_bases) -> TriangularBasis:
    """Glue certified per-prime triangular bases by CRT (one basis per prime
    dividing the index)."""
    if not local_bases:
        raise InputError("nothing to glue")
    ring = local_bases[0].numerators[0].dom
    d = len(local_bases[0].numerators)
    if any(len(b.numerators) != d for b in local_bases):
        raise InputError("local bases have inconsistent degrees")
    numerators = []
    denominators = []
    for i in range(d):
        h = _crt_numerator(ring, i, local_bases)
        numerators.append(h)
        denominators.append(
            {b.p: b.etas[i] for b in local_bases if b.etas[i] > 0}
        )
    basis = TriangularBasis(ring, numerators, denominators)
    assert basis.check_chain(), "denominator chain broken"
    if not _check_congruences(basis, local_bases):
        raise InputError("glued numerators violate a congruence")
    return basis


def _crt_numerator(ring, i, local_bases):
    coeffs = []
    for k in range(i):
        residues = [
            (b.p.power(b.etas[i] + 1), b.numerators[i][k])
            for b in local_bases
        ]
        coeffs.append(crt_lift(ring, residues))
    coeffs.append(ring.one)
    return UPoly(ring, coeffs)


def _check_congruences(basis, local_bases):
    ring = basis.ring
    for b in local_bases:
        for i, h in enumerate(basis.numerators):
            m = b.p.power(b.etas[i] + 1)
            diff = h - b.numerators[i]
            if any(
                not ring.is_zero(ring.canonical_mod(c, m))
                for c in diff.coeffs
            ):
                return False
    return True


def index_and_discriminant(basis: TriangularBasis, disc) -> IndexData:
    """IndexData from a certified integral basis: D = prod a_i and the exact
    division disc = D^2 * disc(L/K)."""
    ring = basis.ring
    data = IndexData(ring)
    primes = set()
    for dd in basis.denominators:
        primes.update(dd)
    for p in sorted(primes, key=lambda q: ring.key(q.value)):
        v_index = sum(dd.get(p, 0) for dd in basis.denominators)
        v_disc = valuation(disc, p)
        if v_disc == float("inf"):
            raise InputError("discriminant is zero")
        data.record(p, int(v_disc), v_index)
    dsq = basis.index_element()
    dsq = ring.mul(dsq, dsq)
    try:
        field_disc = ring.exact_div(disc, dsq)
    except ArithmeticError as exc:
        raise InputError("index does not divide the discriminant") from exc
    data.check()
    data.field_disc = field_disc
    return data


def global_basis(f: UPoly, local_bases, expect_index=None) -> TriangularBasis:
    """Glue and fully check: product of denominators vs indices, eq-(2)."""
    basis = glue_global(local_bases)
    disc = discriminant(f)
    data = index_and_discriminant(basis, disc)
    if expect_index is not None:
        for p, v in expect_index.items():
            assert data.v_index.get(p, 0) == v
    basis.index_data = data
    return basis
