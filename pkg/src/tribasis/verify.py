"""Independent oracles: integrality, multiplicative closure, p-maximality
(Pohst-Zassenhaus) and brute-force maximal valuations.

These deliberately avoid the pipeline's precision reasoning.  Quasi-
valuations are measured through resultants against factor approximations
whose quality is certified by the exact arithmetic check
v_p(f - prod(approximants)) >= 2(v_p(disc f)+1); integrality goes through
characteristic polynomials (bivariate resultants); maximality through the
multiplier ring of the p-radical, with linear algebra over the residue
field.  Desk scale only (small degree, small residue fields).
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import ff
from .errors import DeskScaleError, InputError
from .omcore import MontesEngine, montes, om_index
from .upoly import PolyDomain, UPoly, discriminant, resultant

INF = float("inf")


# ---------------------------------------------------------------------------
# integrality via characteristic polynomials
# ---------------------------------------------------------------------------

def char_poly_resultant(f: UPoly, g: UPoly, a):
    """Res_x(f(x), a*y - g(x)) as a polynomial in y over A.

    Equals a^d * charpoly(g(theta)/a) for monic f of degree d."""
    ring = f.dom
    dom = PolyDomain(ring)
    fx = f.map_coeffs(lambda c: UPoly.const(ring, c), dom)
    coeffs = [UPoly.const(ring, ring.neg(c)) for c in g.coeffs]
    while len(coeffs) < 1:
        coeffs.append(UPoly.zero(ring))
    ay = UPoly(ring, (ring.zero, a))
    if coeffs:
        coeffs[0] = coeffs[0] + ay
    else:
        coeffs = [ay]
    hx = UPoly(dom, coeffs)
    return resultant(fx, hx)


def is_integral(g: UPoly, a, f: UPoly, p) -> bool:
    """True iff g(theta)/a is integral over the localization at p.

    Checked on the characteristic polynomial: all coefficients of the monic
    charpoly must have nonnegative p-valuation."""
    if g.degree() >= f.degree():
        raise InputError("expected deg g < deg f")
    ring = f.dom
    if g.is_zero():
        return True
    r = char_poly_resultant(f, g, a)
    lead = r.lc()
    v_lead = ring.valuation(lead, p.value)
    return all(
        ring.valuation(c, p.value) >= v_lead
        for c in r.coeffs
        if not ring.is_zero(c)
    )


# ---------------------------------------------------------------------------
# bases as orders: closure and maximality at p
# ---------------------------------------------------------------------------

def _basis_data(basis, p):
    """(numerators, v_p of denominators) for local or global bases."""
    nums = basis.numerators
    if hasattr(basis, "etas"):
        vals = list(basis.etas)
    else:
        vals = [d.get(p, 0) for d in basis.denominators]
    return nums, vals


def triangular_expand(nums, h: UPoly):
    """Coefficients of h over a monic triangular family (deg g_i = i)."""
    ring = h.dom
    coeffs = [ring.zero] * len(nums)
    rest = h
    for k in range(len(nums) - 1, -1, -1):
        c = rest[k]
        if not ring.is_zero(c):
            coeffs[k] = c
            rest = rest - nums[k].scale(c)
    assert rest.is_zero(), "not in the span of the triangular family"
    return coeffs


def order_closed(basis, f: UPoly, p) -> bool:
    """True iff the basis spans a ring at p: all pairwise products re-expand
    with p-integral coefficients."""
    ring = f.dom
    nums, vals = _basis_data(basis, p)
    d = len(nums)
    for i in range(d):
        for j in range(i, d):
            prod = (nums[i] * nums[j]).divmod_monic(f)[1]
            lam = triangular_expand(nums, prod)
            for k in range(d):
                if ring.is_zero(lam[k]):
                    continue
                v = ring.valuation(lam[k], p.value) + vals[k] - vals[i] - vals[j]
                if v < 0:
                    return False
    return True


def _structure_constants_mod(ring, nums, vals, f, p, power):
    """c_{ijk} reduced mod p^power (requires the basis to be closed at p)."""
    d = len(nums)
    m = p.power(power)
    out = {}
    for i in range(d):
        for j in range(i, d):
            prod = (nums[i] * nums[j]).divmod_monic(f)[1]
            lam = triangular_expand(nums, prod)
            row = []
            for k in range(d):
                c = lam[k]
                if ring.is_zero(c):
                    row.append(ring.zero)
                    continue
                v = ring.valuation(c, p.value) + vals[k] - vals[i] - vals[j]
                assert v >= 0, "basis is not closed at p"
                # c * a_k / (a_i a_j) = p^v * unit; reduce the unit mod p^power
                vc = ring.valuation(c, p.value)
                unit_num = ring.exact_div(c, p.power(int(vc)))
                shift = vals[k] - vals[i] - vals[j] + int(vc)
                # value = p^shift * unit_num with shift = v - 0 >= 0
                red = ring.canonical_mod(unit_num, m)
                red = ring.mul(red, p.power(int(shift))) if shift >= 0 else \
                    _divide_p(ring, red, p, -shift, m)
                row.append(ring.canonical_mod(red, m))
            out[(i, j)] = row
            out[(j, i)] = row
    return out


def _divide_p(ring, value, p, k, m):
    return ring.exact_div(ring.canonical_mod(value, ring.mul(m, p.power(k))), p.power(k))


def _alg_mul(ring, sc, a, b, p, power):
    """Product in the quotient algebra, coefficient vectors over A/p^power."""
    d = len(a)
    m = p.power(power)
    out = [ring.zero] * d
    for i in range(d):
        if ring.is_zero(a[i]):
            continue
        for j in range(d):
            if ring.is_zero(b[j]):
                continue
            row = sc[(i, j)]
            coef = ring.canonical_mod(ring.mul(a[i], b[j]), m)
            for k in range(d):
                if not ring.is_zero(row[k]):
                    out[k] = ring.canonical_mod(
                        ring.add(out[k], ring.mul(coef, row[k])), m
                    )
    return out


def _kp_matrix_kernel(kp, rows):
    """Kernel basis of a matrix over the residue field (rows = list of row
    vectors); returns echelonized kernel vectors."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    mat = [list(r) for r in rows]
    pivots = {}
    r = 0
    for c in range(ncols):
        pr = None
        for rr in range(r, nrows):
            if not kp.is_zero(mat[rr][c]):
                pr = rr
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = kp.inv(mat[r][c])
        mat[r] = [kp.mul(x, inv) for x in mat[r]]
        for rr in range(nrows):
            if rr != r and not kp.is_zero(mat[rr][c]):
                coef = mat[rr][c]
                mat[rr] = [
                    kp.sub_(x, kp.mul(coef, y)) for x, y in zip(mat[rr], mat[r])
                ]
        pivots[c] = r
        r += 1
    kernel = []
    free = [c for c in range(ncols) if c not in pivots]
    for c in free:
        vec = [kp.zero] * ncols
        vec[c] = kp.one
        for pc, pr in pivots.items():
            vec[pc] = kp.neg(mat[pr][c])
        kernel.append(vec)
    return kernel, pivots


def pz_maximal(basis, f: UPoly, p, max_dim=8) -> bool:
    """Pohst-Zassenhaus: the order spanned by the basis is p-maximal iff it
    equals the multiplier ring of its p-radical."""
    ring = f.dom
    d = f.degree()
    if d > max_dim or p.residue.card ** d > 10 ** 7:
        raise DeskScaleError("out of desk-scale range for pz_maximal")
    nums, vals = _basis_data(basis, p)
    kp = p.residue
    sc2 = _structure_constants_mod(ring, nums, vals, f, p, 2)

    def red1(vec):
        return [p.reduce(c) for c in vec]

    sc1 = {k: red1(v) for k, v in sc2.items()}

    def mul1(a, b):
        out = [kp.zero] * d
        for i in range(d):
            if kp.is_zero(a[i]):
                continue
            for j in range(d):
                if kp.is_zero(b[j]):
                    continue
                coef = kp.mul(a[i], b[j])
                row = sc1[(i, j)]
                for k in range(d):
                    if not kp.is_zero(row[k]):
                        out[k] = kp.add(out[k], kp.mul(coef, row[k]))
        return out

    def power_q(vec, q):
        result = None
        base = vec
        n = q
        while n:
            if n & 1:
                result = base if result is None else mul1(result, base)
            base = mul1(base, base)
            n >>= 1
        return result

    # radical = kernel of x -> x^(q^m), q^m >= d
    q = kp.card
    m = 1
    while q ** m < d:
        m += 1
    frob_images = []
    for i in range(d):
        e = [kp.zero] * d
        e[i] = kp.one
        v = e
        for _ in range(m):
            v = power_q(v, q)
        frob_images.append(v)
    mat = [[frob_images[i][k] for i in range(d)] for k in range(d)]
    kernel, _ = _kp_matrix_kernel(kp, mat)
    if not kernel:
        return True  # radical is pO, whose multiplier ring is O
    ech = [list(v) for v in kernel]
    pivot_cols = _echelon_pivots(kp, ech)
    # lattice basis of the radical I: kernel lifts at pivot columns, p*e else
    gens = [[p.lift(x) for x in vec] for vec in ech]
    nonpivot = [c for c in range(d) if c not in pivot_cols]
    for c in nonpivot:
        e = [ring.zero] * d
        e[c] = p.value
        gens.append(e)
    # O is p-maximal iff no nonzero ybar acts as zero on I/pI
    rows = []
    for i in range(d):
        e = [ring.zero] * d
        e[i] = ring.one
        row = []
        for gvec in gens:
            w = _alg_mul(ring, sc2, e, gvec, p, 2)
            row.extend(
                _radical_coords(ring, kp, ech, pivot_cols, nonpivot, w, p)
            )
        rows.append(row)
    mat2 = [[rows[i][k] for i in range(d)] for k in range(len(rows[0]))]
    kernel2, _ = _kp_matrix_kernel(kp, mat2)
    return not kernel2


def _echelon_pivots(kp, rows):
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pr = None
        for rr in range(r, len(rows)):
            if not kp.is_zero(rows[rr][c]):
                pr = rr
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = kp.inv(rows[r][c])
        rows[r] = [kp.mul(x, inv) for x in rows[r]]
        for rr in range(len(rows)):
            if rr != r and not kp.is_zero(rows[rr][c]):
                coef = rows[rr][c]
                rows[rr] = [
                    kp.sub_(x, kp.mul(coef, y)) for x, y in zip(rows[rr], rows[r])
                ]
        pivots.append(c)
        r += 1
    return pivots


def _radical_coords(ring, kp, ech, pivot_cols, nonpivot, w, p):
    """Image of w in I/pI as coordinates over the gens basis.

    w (over A/p^2) must lie in I = radical lattice.  The kernel-lift
    coordinates read off at the pivot columns; what remains is p*u with the
    p*e_c coordinates equal to the non-pivot components of u after removing
    its radical part."""
    m2 = p.power(2)
    lam_pivot = [p.reduce(w[c]) for c in pivot_cols]
    w2 = list(w)
    for lam, vec in zip(lam_pivot, ech):
        lift = p.lift(lam)
        if ring.is_zero(lift):
            continue
        gvec = [p.lift(x) for x in vec]
        w2 = [
            ring.canonical_mod(ring.sub(a, ring.mul(lift, b)), m2)
            for a, b in zip(w2, gvec)
        ]
    u = []
    for c in w2:
        assert ring.is_zero(c) or ring.valuation(c, p.value) >= 1, \
            "vector is not in the radical lattice"
        u.append(p.reduce(ring.exact_div(c, p.value)) if not ring.is_zero(c)
                 else kp.zero)
    # remove the radical component of u (echelon pivots), keep non-pivots
    for vec, c in zip(ech, pivot_cols):
        lam = u[c]
        if kp.is_zero(lam):
            continue
        u = [kp.sub_(a, kp.mul(lam, b)) for a, b in zip(u, vec)]
    return lam_pivot + [u[c] for c in nonpivot]


# ---------------------------------------------------------------------------
# certified quasi-valuation oracle and brute-force alpha
# ---------------------------------------------------------------------------

class WOracle:
    """Measures w_p(g) = v_p(Res(F_p, g))/deg F_p through certified factor
    approximations, independently of the chain machinery."""

    def __init__(self, f: UPoly, p, reps=None, seed=0, precision=None):
        self.f = f
        self.p = p
        self.ring = f.dom
        disc_val = self.ring.valuation(discriminant(f), p.value)
        # default overshoots the pipeline's tight bound; shifted (ideal)
        # measurements may need more and can pass a larger floor
        self.precision = precision or 2 * (int(disc_val) + 1)
        if reps is None:
            reps = montes(f, p, seed=seed, check=False)
        self.reps = reps
        self._certify()

    def _certify(self):
        from .omcore import boost_approximants

        target = Fraction(self.precision)
        for _ in range(200):
            boost_approximants(self.reps, target)
            prod = UPoly.one(self.ring)
            for rep in self.reps:
                prod = prod * rep.approximant
            diff = self.f - prod
            ok = diff.is_zero() or min(
                self.ring.valuation(c, self.p.value)
                for c in diff.coeffs if not self.ring.is_zero(c)
            ) >= self.precision
            if ok:
                return
            target += 1
        raise DeskScaleError("oracle approximants failed to certify")

    def w_values(self, g: UPoly):
        """[w_p(g) per prime ideal]; None entries mean 'beyond the certified
        precision' (treated as +infinity at desk scale)."""
        out = []
        for rep in self.reps:
            if g.is_zero():
                out.append(INF)
                continue
            r = resultant(rep.approximant, g)
            if self.ring.is_zero(r):
                out.append(INF)
                continue
            v = Fraction(int(self.ring.valuation(r, self.p.value)), rep.degree)
            out.append(v)
        return out

    def w(self, g: UPoly):
        return min(self.w_values(g))


def brute_alpha(f: UPoly, p, i, precision_bound, budget=200000, oracle=None):
    """Exhaustive alpha_i: max of w(h(theta)) over monic degree-i h with
    coefficients ranging over residues mod p^K, K = precision_bound.

    Exact once K exceeds ceil(alpha_i).  Raises DeskScaleError over
    budget."""
    if i == 0:
        return Fraction(0)
    ring = f.dom
    K = int(precision_bound)
    q = p.residue.card
    if (q ** K) ** i > budget:
        raise DeskScaleError("brute-force alpha search over budget")
    if oracle is None:
        oracle = WOracle(f, p)
    digits = _residue_lifts(ring, p)
    best = None
    for combo in itertools.product(_padic_residues(ring, p, K, digits), repeat=i):
        h = UPoly(ring, tuple(combo) + (ring.one,))
        w = oracle.w(h)
        if best is None or w > best:
            best = w
    return best


def _residue_lifts(ring, p):
    kp = p.residue
    return [p.lift(c) for c in kp.elements()]


def _padic_residues(ring, p, K, digits):
    for combo in itertools.product(digits, repeat=K):
        total = ring.zero
        pk = ring.one
        for c in combo:
            total = ring.add(total, ring.mul(c, pk))
            pk = ring.mul(pk, p.value)
        yield total


# ---------------------------------------------------------------------------
# transition-matrix determinant
# ---------------------------------------------------------------------------

def det_fraction_free(ring, rows):
    """Exact determinant by fraction-free (Bareiss) elimination over A."""
    n = len(rows)
    mat = [list(r) for r in rows]
    sign = 1
    prev = ring.one
    for k in range(n - 1):
        if ring.is_zero(mat[k][k]):
            for rr in range(k + 1, n):
                if not ring.is_zero(mat[rr][k]):
                    mat[k], mat[rr] = mat[rr], mat[k]
                    sign = -sign
                    break
            else:
                return ring.zero
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = ring.sub(
                    ring.mul(mat[i][j], mat[k][k]),
                    ring.mul(mat[i][k], mat[k][j]),
                )
                mat[i][j] = ring.exact_div(num, prev)
            mat[i][k] = ring.zero
        prev = mat[k][k]
    det = mat[n - 1][n - 1]
    return det if sign == 1 else ring.neg(det)


def transition_det_valuation(basis, p):
    """v_p of the determinant of the basis-over-power-basis matrix.

    For a certified p-integral basis this equals -ind_p(f)."""
    nums, vals = _basis_data(basis, p)
    ring = nums[0].dom
    d = len(nums)
    rows = [[nums[i][j] for j in range(d)] for i in range(d)]
    det = det_fraction_free(ring, rows)
    return ring.valuation(det, p.value) - sum(vals)
