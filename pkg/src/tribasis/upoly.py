"""Dense univariate polynomials over a coefficient domain.

The domain is any object exposing zero/one/add/sub/neg/mul/is_zero/exact_div
(the BaseRing objects from rings.py qualify, and PolyDomain below turns
UPoly itself into a domain, which is how bivariate resultants are taken).
Coefficient sequences are stored constant-term first and trimmed; the zero
polynomial has an empty sequence.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError


class UPoly:
    __slots__ = ("dom", "coeffs", "_hash")

    def __init__(self, dom, coeffs):
        coeffs = tuple(coeffs)
        n = len(coeffs)
        while n and dom.is_zero(coeffs[n - 1]):
            n -= 1
        self.dom = dom
        self.coeffs = coeffs[:n]
        self._hash = None

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls, dom):
        return cls(dom, ())

    @classmethod
    def one(cls, dom):
        return cls(dom, (dom.one,))

    @classmethod
    def x(cls, dom):
        return cls(dom, (dom.zero, dom.one))

    @classmethod
    def const(cls, dom, c):
        return cls(dom, (c,))

    @classmethod
    def monomial(cls, dom, c, n):
        return cls(dom, (dom.zero,) * n + (c,))

    # -- basics ---------------------------------------------------------------

    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def lc(self):
        if not self.coeffs:
            raise InputError("leading coefficient of zero")
        return self.coeffs[-1]

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == self.dom.one

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.dom.zero

    def __eq__(self, other):
        return (
            isinstance(other, UPoly)
            and other.dom == self.dom
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((id(self.dom), self.coeffs))
        return self._hash

    def __repr__(self):
        return f"UPoly({self.coeffs})"

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        d = self.dom
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = d.add(out[i], c)
        return UPoly(d, out)

    def __sub__(self, other):
        d = self.dom
        out = list(self.coeffs) + [d.zero] * max(
            0, len(other.coeffs) - len(self.coeffs)
        )
        for i, c in enumerate(other.coeffs):
            out[i] = d.sub(out[i], c)
        return UPoly(d, out)

    def __neg__(self):
        d = self.dom
        return UPoly(d, tuple(d.neg(c) for c in self.coeffs))

    def __mul__(self, other):
        d = self.dom
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UPoly.zero(d)
        out = [d.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if d.is_zero(x):
                continue
            for j, y in enumerate(b):
                out[i + j] = d.add(out[i + j], d.mul(x, y))
        return UPoly(d, out)

    def scale(self, c):
        d = self.dom
        return UPoly(d, tuple(d.mul(x, c) for x in self.coeffs))

    def shift(self, n):
        """Multiply by x^n."""
        if self.is_zero():
            return self
        return UPoly(self.dom, (self.dom.zero,) * n + self.coeffs)

    def divmod_monic(self, b):
        """Quotient and remainder by a monic divisor."""
        if not b.is_monic():
            raise InputError("divisor must be monic")
        d = self.dom
        r = list(self.coeffs)
        db = b.degree()
        if len(r) - 1 < db:
            return UPoly.zero(d), self
        q = [d.zero] * (len(r) - db)
        for i in range(len(r) - db - 1, -1, -1):
            c = r[i + db]
            if d.is_zero(c):
                continue
            q[i] = c
            for j, y in enumerate(b.coeffs):
                r[i + j] = d.sub(r[i + j], d.mul(c, y))
        return UPoly(d, q), UPoly(d, r[:db])

    def exact_div(self, b):
        """Exact division (raises if not exact); divisor need not be monic."""
        d = self.dom
        if b.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        r = list(self.coeffs)
        db = b.degree()
        dq = len(r) - 1 - db
        if dq < 0:
            if self.is_zero():
                return self
            raise ArithmeticError("non-exact polynomial division")
        q = [d.zero] * (dq + 1)
        for i in range(dq, -1, -1):
            c = d.exact_div(r[i + db], b.coeffs[-1])
            q[i] = c
            for j, y in enumerate(b.coeffs):
                r[i + j] = d.sub(r[i + j], d.mul(c, y))
        if any(not d.is_zero(c) for c in r):
            raise ArithmeticError("non-exact polynomial division")
        return UPoly(d, q)

    def derivative(self):
        d = self.dom
        out = []
        for i in range(1, len(self.coeffs)):
            c = self.coeffs[i]
            s = d.zero
            for _ in range(i):
                s = d.add(s, c)
            out.append(s)
        return UPoly(d, out)

    def evaluate(self, x):
        d = self.dom
        acc = d.zero
        for c in reversed(self.coeffs):
            acc = d.add(d.mul(acc, x), c)
        return acc

    def map_coeffs(self, fn, new_dom=None):
        return UPoly(new_dom or self.dom, tuple(fn(c) for c in self.coeffs))


def phi_expansion(g: UPoly, phi: UPoly):
    """Coefficients (a_0, ..., a_k) with g = sum a_i phi^i, deg a_i < deg phi."""
    if phi.degree() < 1:
        raise InputError("phi must have degree >= 1")
    if not phi.is_monic():
        raise InputError("phi must be monic")
    out = []
    while not g.is_zero():
        g, r = g.divmod_monic(phi)
        out.append(r)
    return out or [UPoly.zero(phi.dom)]


def _prem(a: UPoly, b: UPoly):
    """Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a  mod  b."""
    d = a.dom
    r = list(a.coeffs)
    db = b.degree()
    lb = b.lc()
    for i in range(len(r) - db - 1, -1, -1):
        # multiply the remainder-so-far by lc(b), then eliminate slot i+db
        for j in range(len(r)):
            if j != i + db:
                r[j] = d.mul(r[j], lb)
        c = r[i + db]
        r[i + db] = d.zero
        for j, y in enumerate(b.coeffs[:-1]):
            r[i + j] = d.sub(r[i + j], d.mul(c, y))
    return UPoly(d, r[:db])


def resultant(a: UPoly, b: UPoly):
    """Exact resultant by the subresultant PRS.

    Convention: Res(a, b) = lc(a)^deg(b) * prod b(alpha) over roots of a."""
    if a.is_zero() or b.is_zero():
        raise InputError("resultant of zero polynomial")
    d = a.dom
    sign = 1
    if a.degree() < b.degree():
        if (a.degree() * b.degree()) % 2:
            sign = -sign
        a, b = b, a
    if b.degree() == 0:
        return _apply_sign(d, d_pow(d, b.lc(), a.degree()), sign)
    g = d.one
    h = d.one
    while True:
        da, db = a.degree(), b.degree()
        delta = da - db
        if (da % 2) and (db % 2):
            sign = -sign
        r = _prem(a, b)
        a = b
        divisor = d.mul(g, d_pow(d, h, delta))
        if r.is_zero():
            return d.zero
        b = r.map_coeffs(lambda c: d.exact_div(c, divisor))
        g = a.lc()
        if delta:
            h = d.exact_div(d_pow(d, g, delta), d_pow(d, h, delta - 1))
        if b.degree() == 0:
            da = a.degree()
            res = d.exact_div(d_pow(d, b.lc(), da), d_pow(d, h, da - 1))
            return _apply_sign(d, res, sign)


def d_pow(d, c, n):
    out = d.one
    for _ in range(n):
        out = d.mul(out, c)
    return out


def _apply_sign(d, c, sign):
    return c if sign == 1 else d.neg(c)


def discriminant(f: UPoly):
    """(-1)^(d(d-1)/2) * Res(f, f') / lc(f)."""
    if f.is_zero():
        raise InputError("discriminant of zero")
    d = f.degree()
    df = f.derivative()
    if df.is_zero():
        return f.dom.zero
    res = resultant(f, df)
    res = f.dom.exact_div(res, f.lc())
    if (d * (d - 1) // 2) % 2:
        res = f.dom.neg(res)
    return res


class PolyDomain:
    """UPoly-over-ring viewed as a coefficient domain (for bivariate work)."""

    def __init__(self, ring):
        self.ring = ring
        self.zero = UPoly.zero(ring)
        self.one = UPoly.one(ring)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a.is_zero()

    def exact_div(self, a, b):
        return a.exact_div(b)

    def __eq__(self, other):
        return isinstance(other, PolyDomain) and other.ring == self.ring

    def __hash__(self):
        return hash(("PolyDomain", self.ring))


@dataclass(frozen=True)
class TruncatedPoly:
    """A polynomial over A with every coefficient reduced mod p^sigma."""

    poly: UPoly
    p: object  # PrimeElement
    sigma: int

    @classmethod
    def of(cls, f: UPoly, p, sigma):
        if sigma < 1:
            raise InputError("precision must be >= 1")
        m = p.power(sigma)
        ring = f.dom
        red = f.map_coeffs(lambda c: ring.canonical_mod(c, m))
        return cls(red, p, sigma)


def truncate(f: UPoly, p, sigma) -> UPoly:
    return TruncatedPoly.of(f, p, sigma).poly


def hensel_lift(f: UPoly, factors, p, from_sigma, to_sigma):
    """Lift a coprime factorization of f mod p^from_sigma to mod p^to_sigma.

    All polynomials monic over A; factors must be pairwise coprime mod p and
    multiply to f mod p^from_sigma.  Quadratic iterations.
    """
    ring = f.dom
    if from_sigma < 1 or to_sigma < from_sigma:
        raise InputError("bad precision range")
    factors = [truncate(g, p, from_sigma) for g in factors]
    for g in factors:
        if not g.is_monic():
            raise InputError("factors must be monic")
    kp = p.residue
    reds = [_reduce_poly(g, p) for g in factors]
    from . import ff
    for i in range(len(reds)):
        for j in range(i + 1, len(reds)):
            if ff.pdeg(ff.pgcd(kp, reds[i], reds[j])) != 0:
                raise InputError("factors are not coprime mod p")
    prod = UPoly.one(ring)
    for g in factors:
        prod = prod * g
    m0 = p.power(from_sigma)
    if any(
        not ring.is_zero(ring.canonical_mod(c, m0))
        for c in (f - prod).coeffs
    ):
        raise InputError("product does not match f at starting precision")
    if len(factors) == 1:
        return [truncate(f, p, to_sigma)]
    half = len(factors) // 2
    g = _product(ring, factors[:half])
    h = _product(ring, factors[half:])
    g, h = _hensel_pair(f, g, h, p, from_sigma, to_sigma)
    return hensel_lift(g, factors[:half], p, from_sigma, to_sigma) + hensel_lift(
        h, factors[half:], p, from_sigma, to_sigma
    )


def _product(ring, polys):
    out = UPoly.one(ring)
    for q in polys:
        out = out * q
    return out


def _reduce_poly(g: UPoly, p):
    from . import ff
    return ff.ptrim(tuple(p.reduce(c) for c in g.coeffs))


def _hensel_pair(f, g, h, p, from_sigma, to_sigma):
    ring = f.dom

    def red_at(sigma):
        m = p.power(sigma)
        return lambda poly: poly.map_coeffs(lambda c: ring.canonical_mod(c, m))

    def bezout_refresh(s, t, g, h, sigma):
        red = red_at(sigma)
        b = red(s * g + t * h - UPoly.one(ring))
        s_new = red((s - s * b).divmod_monic(h)[1])
        q, r = (UPoly.one(ring) - s_new * g).divmod_monic(h)
        assert red(r).is_zero(), "hensel bezout update failed"
        return s_new, red(q)

    from . import ff
    kp = p.residue
    gr, hr = _reduce_poly(g, p), _reduce_poly(h, p)
    _, s0, t0 = ff.pext_gcd(kp, gr, hr)
    s = UPoly(ring, tuple(p.lift(c) for c in s0))
    t = UPoly(ring, tuple(p.lift(c) for c in t0))
    # raise the Bezout pair to the starting precision
    j = 1
    while j < from_sigma:
        j = min(2 * j, from_sigma)
        s, t = bezout_refresh(s, t, g, h, j)
    k = from_sigma
    while k < to_sigma:
        k2 = min(2 * k, to_sigma)
        red = red_at(k2)
        e = red(f - g * h)
        dg = red((e * t).divmod_monic(g)[1])
        g_new = g + dg
        q, r = f.divmod_monic(g_new)
        assert red(r).is_zero(), "hensel correction failed"
        g, h = red(g_new), red(q)
        s, t = bezout_refresh(s, t, g, h, k2)
        k = k2
    red = red_at(to_sigma)
    assert red(f - g * h).is_zero(), "hensel lift failed to converge"
    return g, h


def factor_monic(f: UPoly, seed=0, max_primes=200):
    """Desk-scale complete factorization of a monic separable f over Frac(A).

    Zassenhaus style: factor mod a good prime, Hensel lift past a coefficient
    bound, recombine subsets.  Returns monic factors over A.
    """
    from . import ff
    from .rings import PrimeElement

    ring = f.dom
    if not f.is_monic():
        raise InputError("factor_monic expects a monic polynomial")
    if f.degree() <= 1:
        return [f]
    disc = discriminant(f)
    if ring.is_zero(disc):
        raise InputError("polynomial is not separable")
    p = None
    for cand in _prime_candidates(ring, max_primes):
        if ring.valuation(disc, cand) == 0:
            p = PrimeElement(ring, cand)
            break
    if p is None:
        raise InputError("no good prime found for factorization")
    kp = p.residue
    fbar = _reduce_poly(f, p)
    parts = ff.ff_factorize(kp, fbar, seed=seed)
    if len(parts) == 1:
        return [f]
    sigma = _lift_bound(ring, f, p)
    lifted = hensel_lift(
        f,
        [UPoly(ring, tuple(p.lift(c) for c in g)) for g in parts],
        p,
        1,
        sigma,
    )
    return _recombine(f, lifted, p, sigma)


def _prime_candidates(ring, max_primes):
    if ring.kind == "z":
        n, count = 2, 0
        while count < max_primes:
            if ring.is_prime(n):
                yield n
                count += 1
            n += 1
    else:
        from . import ff
        count = 0
        deg = 1
        while count < max_primes:
            found = False
            for tail in ff._lex_tuples(ring.base, deg):
                g = tail + (ring.base.one,)
                if ff.is_irreducible(ring.base, g):
                    found = True
                    yield g
                    count += 1
                    if count >= max_primes:
                        return
            deg += 1
            if not found and deg > 12:
                return


def _lift_bound(ring, f, p):
    if ring.kind == "z":
        height = max(abs(c) for c in f.coeffs)
        bound = 2 ** (f.degree() + 2) * (f.degree() + 1) * height
        sigma = 1
        while p.power(sigma) <= 2 * bound:
            sigma += 1
        return sigma
    deg_t = max((len(c) - 1 for c in f.coeffs if c), default=0)
    return (deg_t * f.degree() + 2) // p.h() + 2


def _recombine(f, lifted, p, sigma):
    import itertools

    ring = f.dom
    m = p.power(sigma)
    red = lambda poly: poly.map_coeffs(lambda c: ring.canonical_mod(c, m))
    remaining = list(lifted)
    out = []
    current = f
    size = 1
    while remaining and size <= len(remaining):
        found = None
        for combo in itertools.combinations(range(len(remaining)), size):
            cand = red(_product(ring, [remaining[i] for i in combo]))
            try:
                quo = current.exact_div(cand)
            except (ArithmeticError, ZeroDivisionError):
                continue
            found = (combo, cand, quo)
            break
        if found is None:
            size += 1
            continue
        combo, cand, quo = found
        out.append(cand)
        current = quo
        remaining = [g for i, g in enumerate(remaining) if i not in combo]
    if current.degree() > 0:
        out.append(current)
    return out
