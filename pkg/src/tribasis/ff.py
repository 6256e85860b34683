"""Finite fields as explicit towers of quotient extensions.

A field is either the prime field GF(p) (elements: ints in [0, p)) or an
extension step F[y]/(m(y)) over a previously built field F (elements:
fixed-length tuples of F-elements, one slot per power of the generator).
Towers are never flattened to a primitive element; each step keeps its own
modulus.

Polynomials *over* a field are trimmed tuples of field elements, constant
term first, () for zero.  The helpers below (padd, pmul, pdivmod, ...) take
the coefficient field as first argument so they work uniformly at every
tower level.
"""

from __future__ import annotations

import random
from functools import reduce


class PrimeField:
    """GF(p) with int elements in [0, p)."""

    def __init__(self, p):
        if p < 2 or not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.char = p
        self.card = p
        self.sub = None
        self.zero = 0
        self.one = 1

    def add(self, a, b):
        return (a + b) % self.char

    def sub_(self, a, b):
        return (a - b) % self.char

    def neg(self, a):
        return -a % self.char

    def mul(self, a, b):
        return (a * b) % self.char

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, -1, self.char)

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return n % self.char

    def to_ints(self, a):
        return a

    def key(self, a):
        """Total-order key on elements (used for deterministic factor order)."""
        return (a,)

    def elements(self):
        return range(self.char)

    def random_element(self, rng):
        return rng.randrange(self.char)

    def pow(self, a, n):
        if n < 0:
            return self.pow(self.inv(a), -n)
        return pow(a, n, self.char)

    def __repr__(self):
        return f"GF({self.char})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.char == self.char

    def __hash__(self):
        return hash(("PrimeField", self.char))


class FFField:
    """One extension step F[y]/(modulus) over a field-like ``sub``.

    Elements are tuples of length deg(modulus) over ``sub``; slot i is the
    coefficient of gen^i.
    """

    def __init__(self, sub, modulus, check=True):
        modulus = ptrim(modulus)
        if len(modulus) < 2:
            raise ValueError("modulus must have degree >= 1")
        if modulus[-1] != sub.one:
            raise ValueError("modulus must be monic")
        if check and not is_irreducible(sub, modulus):
            raise ValueError("modulus is reducible")
        self.sub = sub
        self.modulus = modulus
        self.deg = len(modulus) - 1
        self.char = sub.char
        self.card = sub.card ** self.deg
        self.zero = (sub.zero,) * self.deg
        self.one = ((sub.one,) + (sub.zero,) * (self.deg - 1))
        self.gen = tuple(
            sub.one if i == 1 else sub.zero for i in range(self.deg)
        ) if self.deg > 1 else tuple([sub.neg(modulus[0])])

    # -- element arithmetic ------------------------------------------------

    def add(self, a, b):
        s = self.sub
        return tuple(s.add(x, y) for x, y in zip(a, b))

    def sub_(self, a, b):
        s = self.sub
        return tuple(s.sub_(x, y) for x, y in zip(a, b))

    def neg(self, a):
        s = self.sub
        return tuple(s.neg(x) for x in a)

    def mul(self, a, b):
        prod = pmul(self.sub, ptrim(a), ptrim(b))
        _, r = pdivmod(self.sub, prod, self.modulus)
        return self._pad(r)

    def inv(self, a):
        at = ptrim(a)
        if not at:
            raise ZeroDivisionError("inverse of 0")
        g, s, _ = pext_gcd(self.sub, at, self.modulus)
        if len(g) != 1:
            raise ZeroDivisionError("element not invertible")
        c = self.sub.inv(g[0])
        return self._pad(pscale(self.sub, s, c))

    def is_zero(self, a):
        s = self.sub
        return all(s.is_zero(x) for x in a)

    def pow(self, a, n):
        if n < 0:
            return self.pow(self.inv(a), -n)
        result = self.one
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def _pad(self, coeffs):
        return tuple(coeffs) + (self.sub.zero,) * (self.deg - len(coeffs))

    def embed(self, a):
        """Embed an element of the subfield."""
        return self._pad((a,))

    def from_int(self, n):
        return self.embed(self.sub.from_int(n))

    def to_ints(self, a):
        return tuple(self.sub.to_ints(x) for x in a)

    def key(self, a):
        return tuple(self.sub.key(x) for x in a)

    def elements(self):
        def rec(slots):
            if slots == 0:
                yield ()
                return
            for rest in rec(slots - 1):
                for c in self.sub.elements():
                    yield rest + (c,)
        return rec(self.deg)

    def random_element(self, rng):
        return tuple(self.sub.random_element(rng) for _ in range(self.deg))

    def extend(self, modulus, check=True):
        return FFField(self, modulus, check=check)

    def tower_degree(self):
        d = self.deg
        f = self.sub
        while isinstance(f, FFField):
            d *= f.deg
            f = f.sub
        return d

    def __repr__(self):
        return f"GF({self.char}^{self.tower_degree()})"

    def __eq__(self, other):
        return (
            isinstance(other, FFField)
            and other.sub == self.sub
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("FFField", self.sub, self.modulus))


def _is_prime(n):
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic Miller-Rabin for n < 3.3e24
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# -- polynomials over a field (trimmed tuples, constant first) -------------

def ptrim(a):
    a = tuple(a)
    n = len(a)
    while n and (a[n - 1] == 0 if isinstance(a[n - 1], int) else _tuple_zero(a[n - 1])):
        n -= 1
    return a[:n]


def _tuple_zero(t):
    return all((x == 0 if isinstance(x, int) else _tuple_zero(x)) for x in t)


def pdeg(a):
    return len(a) - 1


def padd(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return ptrim(out)


def psub(F, a, b):
    out = list(a) + [F.zero] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = F.sub_(out[i], c)
    return ptrim(out)


def pneg(F, a):
    return tuple(F.neg(c) for c in a)


def pscale(F, a, c):
    if F.is_zero(c):
        return ()
    return ptrim(tuple(F.mul(x, c) for x in a))


def pmul(F, a, b):
    if not a or not b:
        return ()
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if F.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return ptrim(out)


def pdivmod(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    binv = F.inv(b[-1])
    q = [F.zero] * max(0, len(a) - len(b) + 1)
    r = list(a)
    for i in range(len(a) - len(b), -1, -1):
        c = F.mul(r[i + len(b) - 1], binv)
        if F.is_zero(c):
            continue
        q[i] = c
        for j, y in enumerate(b):
            r[i + j] = F.sub_(r[i + j], F.mul(c, y))
    return ptrim(q), ptrim(r)


def pmonic(F, a):
    if not a:
        return a
    return pscale(F, a, F.inv(a[-1]))


def pgcd(F, a, b):
    while b:
        a, b = b, pdivmod(F, a, b)[1]
    return pmonic(F, a)


def pext_gcd(F, a, b):
    """(g, s, t) with s*a + t*b = g, g monic (or zero)."""
    r0, r1 = a, b
    s0, s1 = (F.one,), ()
    t0, t1 = (), (F.one,)
    while r1:
        q, r = pdivmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, psub(F, s0, pmul(F, q, s1))
        t0, t1 = t1, psub(F, t0, pmul(F, q, t1))
    if r0:
        c = F.inv(r0[-1])
        r0, s0, t0 = pscale(F, r0, c), pscale(F, s0, c), pscale(F, t0, c)
    return r0, s0, t0


def ppow_mod(F, a, n, m):
    result = (F.one,)
    base = pdivmod(F, a, m)[1]
    while n:
        if n & 1:
            result = pdivmod(F, pmul(F, result, base), m)[1]
        base = pdivmod(F, pmul(F, base, base), m)[1]
        n >>= 1
    return result


def pderiv(F, a):
    out = []
    for i in range(1, len(a)):
        c = a[i]
        s = F.zero
        for _ in range(i % F.char if F.char else i):
            s = F.add(s, c)
        out.append(s)
    return ptrim(out)


def peval(F, a, x):
    acc = F.zero
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def pkey(F, a):
    """Deterministic sort key for polynomials over F."""
    return (len(a),) + tuple(F.key(c) for c in a)


# -- irreducibility / factorization ----------------------------------------

def is_irreducible(F, g):
    """Rabin's test: g monic of degree >= 1 over F."""
    n = pdeg(g)
    if n < 1:
        return False
    if n == 1:
        return True
    q = F.card
    x = (F.zero, F.one)
    h = ppow_mod(F, x, q ** n, g)
    if psub(F, h, x):
        return False
    for ell in _prime_divisors(n):
        h = ppow_mod(F, x, q ** (n // ell), g)
        if pdeg(pgcd(F, psub(F, h, x), g)) != 0:
            return False
    return True


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def find_irreducible(F, degree):
    """Lexicographically first monic irreducible of given degree over F."""
    if degree == 1:
        return (F.zero, F.one)
    for tail in _lex_tuples(F, degree):
        g = tail + (F.one,)
        if is_irreducible(F, g):
            return g
    raise RuntimeError("no irreducible polynomial found")  # unreachable


def _lex_tuples(F, n):
    def rec(k):
        if k == 0:
            yield ()
            return
        for c in sorted(F.elements(), key=F.key):
            for rest in rec(k - 1):
                yield (c,) + rest
    return rec(n)


def squarefree_decomposition(F, g):
    """g monic over F -> list of (h, multiplicity), h squarefree pairwise coprime.

    Works in any characteristic (p-th roots via c -> c^(card/p))."""
    out = {}
    _sqfree_rec(F, pmonic(F, g), 1, out)
    return sorted(out.items(), key=lambda t: pkey(F, t[0]))


def _sqfree_rec(F, g, mult, out):
    if pdeg(g) == 0:
        return
    d = pderiv(F, g)
    if not d:
        # g = h(y^p): take p-th root of coefficients
        p = F.char
        root = ptrim(tuple(_field_pth_root(F, g[i]) for i in range(0, len(g), p)))
        _sqfree_rec(F, root, mult * p, out)
        return
    c = pgcd(F, g, d)
    w = pdivmod(F, g, c)[0]
    i = 1
    while pdeg(w) > 0:
        y = pgcd(F, w, c)
        fac = pdivmod(F, w, y)[0]
        if pdeg(fac) > 0:
            key = pmonic(F, fac)
            out[key] = out.get(key, 0) + i * mult
        w = y
        c = pdivmod(F, c, y)[0]
        i += 1
    if pdeg(c) > 0:
        # c holds exactly the factors with p-divisible multiplicity, at full
        # multiplicity; its derivative vanishes, so the recursion takes the
        # p-th root (which multiplies recorded multiplicities by p itself)
        _sqfree_rec(F, c, mult, out)


def _field_pth_root(F, c):
    # Frobenius is an automorphism; x^(card/p) is the inverse of x -> x^p.
    return F.pow(c, F.card // F.char)


def ff_factorize(F, g, seed=0):
    """Complete factorization of a squarefree monic g over F.

    Returns monic irreducible factors sorted by coefficient sequence;
    deterministic for a fixed seed.  Rejects non-squarefree input."""
    g = pmonic(F, g)
    if pdeg(g) < 1:
        return []
    if pdeg(pgcd(F, g, pderiv(F, g))) != 0:
        raise ValueError("polynomial is not squarefree")
    rng = random.Random(seed)
    factors = []
    for h, d in _distinct_degree(F, g):
        factors.extend(_equal_degree(F, h, d, rng))
    factors.sort(key=lambda f: pkey(F, f))
    return factors


def factor_full(F, g, seed=0):
    """Factor an arbitrary monic g over F into [(irreducible, multiplicity)]."""
    out = []
    for h, m in squarefree_decomposition(F, g):
        for f in ff_factorize(F, h, seed=seed):
            out.append((f, m))
    out.sort(key=lambda t: pkey(F, t[0]))
    return out


def _distinct_degree(F, g):
    q = F.card
    x = (F.zero, F.one)
    out = []
    h = x
    d = 0
    while pdeg(g) > 0:
        d += 1
        if 2 * d > pdeg(g):
            out.append((g, pdeg(g)))
            break
        h = ppow_mod(F, h, q, g)
        fac = pgcd(F, psub(F, h, x), g)
        if pdeg(fac) > 0:
            out.append((fac, d))
            g = pdivmod(F, g, fac)[0]
            h = pdivmod(F, h, g)[1]
    return out


def _equal_degree(F, g, d, rng):
    n = pdeg(g)
    if n == d:
        return [g]
    q = F.card
    while True:
        r = tuple(F.random_element(rng) for _ in range(n))
        r = ptrim(r)
        if pdeg(r) < 1:
            continue
        if q % 2 == 1:
            h = ppow_mod(F, r, (q ** d - 1) // 2, g)
            h = psub(F, h, (F.one,))
        else:
            # additive trace over GF(2) inside GF(q^d)
            k = (q ** d).bit_length() - 1  # q^d = 2^k
            h = r
            acc = r
            for _ in range(k - 1):
                acc = ppow_mod(F, acc, 2, g)
                h = padd(F, h, acc)
        fac = pgcd(F, h, g)
        if 0 < pdeg(fac) < n:
            return _equal_degree(F, fac, d, rng) + _equal_degree(
                F, pdivmod(F, g, fac)[0], d, rng
            )


def make_field(p, k=1):
    """GF(p^k) as a tower: prime field plus one step of degree k (if k > 1)."""
    base = PrimeField(p)
    if k == 1:
        return base
    return FFField(base, find_irreducible(base, k))


def int_encode(F, a):
    """Encode a field element as an int in [0, card) by digit expansion."""
    if isinstance(F, PrimeField):
        return a
    base = F.sub.card
    n = 0
    for c in reversed(a):
        n = n * base + int_encode(F.sub, c)
    return n


def int_decode(F, n):
    if isinstance(F, PrimeField):
        return n % F.char
    base = F.sub.card
    out = []
    for _ in range(F.deg):
        out.append(int_decode(F.sub, n % base))
        n //= base
    return tuple(out)
