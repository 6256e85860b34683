"""The base principal ideal domain A: either the integers or GF(q)[t].

Elements of the integer ring are Python ints; elements of GF(q)[t] are
trimmed coefficient tuples over the coefficient field (see ff.py), constant
term first.  A BaseRing bundles the element arithmetic, prime handling,
valuations, the size function, squarefree factorization and CRT so that
everything downstream is generic in the ring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import ff
from .errors import InputError, UnfactoredCofactor

INF = float("inf")


class ZRing:
    """A = Z.  Elements are ints; canonical residues are symmetric."""

    kind = "z"

    def __init__(self):
        self.characteristic = 0

    # element arithmetic -----------------------------------------------------

    zero = 0
    one = 1

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a in (1, -1)

    def exact_div(self, a, b):
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError("non-exact division")
        return q

    def divmod(self, a, b):
        return divmod(a, b)

    def gcd(self, a, b):
        return math.gcd(a, b)

    def ext_gcd(self, a, b):
        g, s, t = _ext_gcd_int(a, b)
        return g, s, t

    def pow_el(self, a, n):
        return a ** n

    def normalize_unit(self, a):
        """(unit u, a/u) with a/u in canonical form (positive)."""
        if a < 0:
            return -1, -a
        return 1, a

    def canonical_mod(self, a, m):
        """Symmetric representative of a mod m, in (-m/2, m/2]."""
        m = abs(m)
        r = a % m
        if 2 * r > m:
            r -= m
        return r

    def from_int(self, n):
        return n

    def key(self, a):
        return (abs(a), a < 0)

    def format(self, a):
        return str(a)

    # primes -----------------------------------------------------------------

    def is_prime(self, p):
        return p > 1 and ff._is_prime(p)

    def residue_field(self, p):
        return ff.PrimeField(p)

    def to_residue(self, a, p, kp=None):
        kp = kp or self.residue_field(p)
        return a % p

    def lift_residue(self, c, p, kp=None):
        return self.canonical_mod(c, p)

    def size_h(self, a):
        if a == 0:
            raise InputError("size of zero")
        return abs(a).bit_length()

    def valuation(self, a, p):
        if a == 0:
            return INF
        v = 0
        while a % p == 0:
            a //= p
            v += 1
        return v

    def random_element(self, rng, size):
        return rng.randrange(-size, size + 1)

    def __repr__(self):
        return "Z"

    def __eq__(self, other):
        return isinstance(other, ZRing)

    def __hash__(self):
        return hash("ZRing")


class FqTRing:
    """A = GF(q)[t].  Elements are trimmed coefficient tuples over GF(q)."""

    kind = "fqt"

    def __init__(self, q_or_field):
        if isinstance(q_or_field, int):
            p, k = _prime_power(q_or_field)
            self.base = ff.make_field(p, k)
        else:
            self.base = q_or_field
        self.q = self.base.card
        self.characteristic = self.base.char
        self.zero = ()
        self.one = (self.base.one,)

    def add(self, a, b):
        return ff.padd(self.base, a, b)

    def sub(self, a, b):
        return ff.psub(self.base, a, b)

    def neg(self, a):
        return ff.pneg(self.base, a)

    def mul(self, a, b):
        return ff.pmul(self.base, a, b)

    def is_zero(self, a):
        return not a

    def is_unit(self, a):
        return len(a) == 1

    def exact_div(self, a, b):
        q, r = ff.pdivmod(self.base, a, b)
        if r:
            raise ArithmeticError("non-exact division")
        return q

    def divmod(self, a, b):
        return ff.pdivmod(self.base, a, b)

    def gcd(self, a, b):
        return ff.pgcd(self.base, a, b)

    def ext_gcd(self, a, b):
        return ff.pext_gcd(self.base, a, b)

    def pow_el(self, a, n):
        out = self.one
        for _ in range(n):
            out = self.mul(out, a)
        return out

    def normalize_unit(self, a):
        if not a:
            return self.one, a
        u = (a[-1],)
        return u, ff.pmonic(self.base, a)

    def canonical_mod(self, a, m):
        return ff.pdivmod(self.base, a, m)[1]

    def from_int(self, n):
        c = self.base.from_int(n)
        return (c,) if not self.base.is_zero(c) else ()

    def key(self, a):
        return ff.pkey(self.base, a)

    def format(self, a):
        return format_tpoly(self.base, a)

    def is_prime(self, p):
        return (
            len(p) >= 2
            and p[-1] == self.base.one
            and ff.is_irreducible(self.base, p)
        )

    def residue_field(self, p):
        if len(p) == 2:
            # degree-1 prime: residue field is the coefficient field itself
            return self.base
        return ff.FFField(self.base, p, check=False)

    def to_residue(self, a, p, kp=None):
        kp = kp or self.residue_field(p)
        r = ff.pdivmod(self.base, a, p)[1]
        if kp is self.base:
            return ff.peval(self.base, r, self.base.neg(p[0]))
        return kp._pad(r)

    def lift_residue(self, c, p, kp=None):
        kp = kp or self.residue_field(p)
        if kp is self.base:
            return (c,) if not self.base.is_zero(c) else ()
        return ff.ptrim(c)

    def size_h(self, a):
        if not a:
            raise InputError("size of zero")
        return len(a) - 1

    def valuation(self, a, p):
        if not a:
            return INF
        v = 0
        while True:
            q, r = ff.pdivmod(self.base, a, p)
            if r:
                return v
            a = q
            v += 1

    def random_element(self, rng, size):
        deg = rng.randrange(-1, size + 1)
        if deg < 0:
            return ()
        coeffs = [self.base.random_element(rng) for _ in range(deg)]
        lead = self.base.zero
        while self.base.is_zero(lead):
            lead = self.base.random_element(rng)
        return ff.ptrim(tuple(coeffs) + (lead,))

    def __repr__(self):
        return f"GF({self.q})[t]"

    def __eq__(self, other):
        return isinstance(other, FqTRing) and other.base == self.base

    def __hash__(self):
        return hash(("FqTRing", self.base))


def _prime_power(q):
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            while q > 1:
                if q % p:
                    raise InputError(f"{q} is not a prime power")
                q //= p
                k += 1
            return p, k
    raise InputError(f"{q} is not a prime power")


def _ext_gcd_int(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def format_tpoly(F, a, var="t"):
    if not a:
        return "0"
    parts = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if F.is_zero(c):
            continue
        n = ff.int_encode(F, c)
        if i == 0:
            parts.append(str(n))
        else:
            head = "" if n == 1 else f"{n}*"
            parts.append(f"{head}{var}" + (f"^{i}" if i > 1 else ""))
    return " + ".join(parts)


@dataclass(frozen=True)
class PrimeElement:
    """A prime of A together with its residue field."""

    ring: object
    value: object

    def __post_init__(self):
        if not self.ring.is_prime(self.value):
            raise InputError(f"{self.ring.format(self.value)} is not prime")
        object.__setattr__(self, "_kp", self.ring.residue_field(self.value))

    @property
    def residue(self):
        return self._kp

    def reduce(self, a):
        return self.ring.to_residue(a, self.value, self._kp)

    def lift(self, c):
        return self.ring.lift_residue(c, self.value, self._kp)

    def power(self, n):
        return self.ring.pow_el(self.value, n)

    def h(self):
        return self.ring.size_h(self.value)

    def __repr__(self):
        return f"prime({self.ring.format(self.value)})"

    def __hash__(self):
        return hash((self.ring, _hashable(self.value)))

    def __eq__(self, other):
        return (
            isinstance(other, PrimeElement)
            and other.ring == self.ring
            and other.value == self.value
        )


def _hashable(v):
    return v if isinstance(v, (int, tuple)) else tuple(v)


def valuation(a, p: PrimeElement):
    """Exact p-adic valuation of an element of A (INF for 0)."""
    return p.ring.valuation(a, p.value)


def size_h(ring, a):
    """deg(a) over GF(q)[t]; bit length of |a| over Z."""
    return ring.size_h(a)


def squarefree_factorization(ring, a, hints=(), bound=10 ** 6,
                             cofactor_squarefree=False):
    """a = unit * prod f_i^{m_i} with the f_i squarefree and pairwise coprime.

    Over GF(q)[t] the factorization is complete (into irreducibles).  Over Z
    we use trial division up to ``bound`` plus the optional ``hints``; a
    leftover cofactor raises UnfactoredCofactor unless ``cofactor_squarefree``
    says it may be appended as a squarefree factor.
    """
    if ring.is_zero(a):
        raise InputError("cannot factor zero")
    if ring.kind == "fqt":
        _, a = ring.normalize_unit(a)
        return ff.factor_full(ring.base, a)
    a = abs(a)
    out = []
    for h in hints:
        h = abs(h)
        if h <= 1:
            continue
        m = 0
        while a % h == 0:
            a //= h
            m += 1
        if m:
            out.append((h, m))
    d = 2
    while d * d <= a and d <= bound:
        if a % d == 0:
            m = 0
            while a % d == 0:
                a //= d
                m += 1
            out.append((d, m))
        d += 1 if d == 2 else 2
    if a > 1:
        if a <= bound * bound:
            # the cofactor is prime: trial division reached sqrt(a)
            out.append((a, 1))
        elif cofactor_squarefree:
            out.append((a, 1))
        else:
            raise UnfactoredCofactor(
                f"unfactored cofactor {a} beyond bound {bound}; supply hints"
            )
    out.sort(key=lambda t: ring.key(t[0]))
    return out


def crt_lift(ring, residues):
    """Unique canonical representative modulo the product of the moduli.

    residues: iterable of (modulus, value).  Moduli must be pairwise coprime.
    Over Z the representative is symmetric; over GF(q)[t] degree-reduced.
    """
    residues = list(residues)
    if not residues:
        raise InputError("empty residue list")
    mod, val = residues[0]
    val = ring.canonical_mod(val, mod)
    for m, v in residues[1:]:
        g, s, t = ring.ext_gcd(mod, m)
        if not ring.is_unit(g):
            raise InputError("moduli are not pairwise coprime")
        # val*(t*m) + v*(s*mod) has the right residues; divide the gcd out
        ginv_pairs = (ring.exact_div(ring.one, g) if not ring.is_zero(
            ring.sub(g, ring.one)) else ring.one)
        # normalize Bezout identity to s*mod + t*m = 1
        s = ring.mul(s, ginv_pairs)
        t = ring.mul(t, ginv_pairs)
        combined = ring.add(
            ring.mul(val, ring.mul(t, m)), ring.mul(v, ring.mul(s, mod))
        )
        mod = ring.mul(mod, m)
        val = ring.canonical_mod(combined, mod)
    return val


def ff_factorize(field, g, seed=0):
    """Factor a squarefree monic polynomial over a finite field (see ff.py)."""
    return ff.ff_factorize(field, g, seed=seed)


@dataclass
class IndexData:
    """Per-prime valuations of the discriminant, the index and the field
    discriminant, plus the global size indicators."""

    ring: object
    v_disc: dict = field(default_factory=dict)
    v_index: dict = field(default_factory=dict)
    v_field_disc: dict = field(default_factory=dict)
    h_disc: int = 0
    h_index: int = 0
    h_red: int = 0

    def record(self, p: PrimeElement, v_disc, v_index):
        v_field = v_disc - 2 * v_index
        if v_field < 0 or v_disc < 0 or v_index < 0:
            raise ValueError("negative valuation in index data")
        self.v_disc[p] = v_disc
        self.v_index[p] = v_index
        self.v_field_disc[p] = v_field
        hp = p.h()
        self.h_disc += v_disc * hp
        self.h_index += v_index * hp
        if v_disc >= 2:
            self.h_red += hp

    def check(self):
        for p, vd in self.v_disc.items():
            assert vd == 2 * self.v_index[p] + self.v_field_disc[p]
        return True
