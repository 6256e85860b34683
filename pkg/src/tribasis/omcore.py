"""Montes/OM algorithm: one OM representation per prime ideal over p.

The machinery is a chain of augmented valuations in the MacLane style,
normalized so that every value is the exact rational v_p(.) it stands for
(v_p(p) = 1).  A chain node is either the mod-p starting datum (Level0: an
irreducible factor psi0 of f mod p) or a Stage (key polynomial phi, its
value gamma = v_p(phi(theta)) on the branch, ramification jump e, residual
factor psi over the current residue field).  Residue fields are explicit
quotient towers (ff.py).

Reductions of polynomials and of p/phi-monomials into the residue towers
are computed recursively against canonical monomials; no closed-form twist
formula is assumed, and every residual polynomial and constructed lift is
assert-checked (degree = integral length, nonzero endpoints, representative
residual associate to psi).

Newton polygons carry absolute ordinates: the polygon of f with respect to
a key polynomial uses the previous chain valuation on the expansion
coefficients, and the relevant sides are those strictly steeper than the
current value bound (a fresh key's value, or the refined value after a
refinement step).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import ff
from .errors import InputError, PrecisionError
from .rings import PrimeElement
from .upoly import UPoly, discriminant, phi_expansion, truncate, hensel_lift

INF = float("inf")


class NeedsBoost(Exception):
    """Internal: evaluation ambiguous at current approximant precision."""


# ---------------------------------------------------------------------------
# Newton polygons
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Side:
    slope: Fraction
    s0: int
    u0: Fraction
    s1: int
    u1: Fraction

    @property
    def length(self):
        """Horizontal length."""
        return self.s1 - self.s0


@dataclass(frozen=True)
class NewtonPolygon:
    sides: tuple

    def __iter__(self):
        return iter(self.sides)


def lower_hull(points):
    """Lower convex hull vertices of [(s, u)], s strictly increasing."""
    pts = sorted(points)
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def hull_sides(points, bound=None):
    """Sides of the lower hull; with a bound, keep only slopes < -bound."""
    hull = lower_hull(points)
    sides = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = Fraction(y2 - y1, x2 - x1)
        if bound is not None and -slope <= bound:
            continue
        sides.append(Side(slope, x1, Fraction(y1), x2, Fraction(y2)))
    return sides


def newton_polygon(points) -> NewtonPolygon:
    """Principal Newton polygon (negative-slope part of the lower hull).

    points: iterable of (index, value), value rational or infinity."""
    finite = [(s, Fraction(u)) for s, u in points if u != INF]
    if not finite:
        raise InputError("all points are infinite")
    return NewtonPolygon(tuple(hull_sides(finite, bound=Fraction(0))))


# ---------------------------------------------------------------------------
# Chain nodes
# ---------------------------------------------------------------------------

class Level0:
    """Start of a chain: an irreducible factor psi0 of f mod p."""

    __slots__ = ("kp", "psi0", "f0", "fld_next", "gen_next", "E", "depth")

    def __init__(self, kp, psi0):
        self.kp = kp
        self.psi0 = psi0
        self.f0 = ff.pdeg(psi0)
        if self.f0 == 1:
            self.fld_next = kp
            self.gen_next = kp.neg(psi0[0])
        else:
            self.fld_next = ff.FFField(kp, psi0, check=False)
            self.gen_next = self.fld_next.gen
        self.E = 1
        self.depth = 0

    @property
    def next_degree(self):
        return self.f0


class Stage:
    """One augmentation: mu(phi) = gamma, residual factor psi chosen."""

    __slots__ = (
        "prev", "phi", "m", "gamma", "e", "E", "H", "psi", "fdeg",
        "fld", "fld_next", "gen_next", "depth",
    )

    def __init__(self, prev, phi, gamma, psi):
        self.prev = prev
        self.phi = phi
        self.m = phi.degree()
        self.gamma = Fraction(gamma)
        frac = self.gamma * prev.E
        self.e = frac.denominator
        self.H = frac.numerator
        self.E = prev.E * self.e
        self.psi = psi
        self.fdeg = ff.pdeg(psi)
        self.fld = prev.fld_next
        if self.fdeg == 1:
            self.fld_next = self.fld
            self.gen_next = self.fld.neg(psi[0])
        else:
            self.fld_next = ff.FFField(self.fld, psi, check=False)
            self.gen_next = self.fld_next.gen
        self.depth = prev.depth + 1

    @property
    def next_degree(self):
        return self.m * self.e * self.fdeg


def chain_stages(node):
    """(list of stages root-to-top, the Level0 root)."""
    out = []
    while isinstance(node, Stage):
        out.append(node)
        node = node.prev
    return list(reversed(out)), node


# ---------------------------------------------------------------------------
# OM representation of one prime ideal
# ---------------------------------------------------------------------------

class OMRep:
    """OM representation of one prime ideal over p.

    Holds the Okutsu frame (the chain's key polynomials plus the
    approximant), the local invariants, and cross-value tables filled in
    once all branches over p are terminal."""

    _uid = itertools.count()

    def __init__(self, engine, node, approximant, e_total, f_total, degree):
        self.engine = engine
        self.p = engine.p
        self.node = node
        self.approximant = approximant
        self.e = e_total
        self.fres = f_total
        self.degree = degree
        self.gamma_top = None
        self.ordinal = None
        self.cross = {}      # other uid -> values of (x, phi_1.., approx)
        self.res_val = {}    # other uid -> v_p(Res(F_self, F_other))
        self.uid = next(OMRep._uid)
        self.version = 0
        stages, level0 = chain_stages(node)
        self.stages = stages
        self.level0 = level0
        self.frame_degrees = [st.m for st in stages] + [degree]
        self.frame_gammas = [st.gamma for st in stages]
        self.ind_local = sum(
            int(self.numerator_value(m)) for m in range(1, degree)
        )

    # -- Okutsu numerators ----------------------------------------------------

    def numerator_exponents(self, m):
        """Mixed-radix digits of m over the frame degrees.

        Returns (j0, ..., jr) with m = j0*1 + sum_i ji*m_i and
        0 <= ji < m_{i+1}/m_i."""
        if not 0 <= m <= self.degree:
            raise InputError("numerator index out of range")
        degs = [1] + self.frame_degrees
        out = []
        rest = m
        for i in range(len(degs) - 2, -1, -1):
            j, rest = divmod(rest, degs[i])
            out.append(j)
        out.reverse()
        for i, j in enumerate(out):
            assert 0 <= j < degs[i + 1] // degs[i]
        return tuple(out)

    def numerator_value(self, m):
        """v_p(g_m(theta)) for the degree-m Okutsu numerator, 0 <= m < d."""
        js = self.numerator_exponents(m)
        val = Fraction(0)
        for i in range(1, len(js)):
            if js[i]:
                val += js[i] * self.frame_gammas[i - 1]
        return val

    def numerator_poly(self, m):
        """The degree-m Okutsu numerator (m = d gives the approximant)."""
        if m == self.degree:
            return self.approximant
        js = self.numerator_exponents(m)
        ring = self.engine.ring
        out = UPoly.monomial(ring, ring.one, js[0])
        for i in range(1, len(js)):
            for _ in range(js[i]):
                out = out * self.stages[i - 1].phi
        assert out.degree() == m
        return out

    def frame_polys(self):
        return [st.phi for st in self.stages] + [self.approximant]

    def __repr__(self):
        return (
            f"OMRep(d={self.degree}, e={self.e}, f={self.fres}, "
            f"ind={self.ind_local})"
        )


# ---------------------------------------------------------------------------
# The engine
# ---------------------------------------------------------------------------

class MontesEngine:
    """Runs the OM algorithm for one (f, p) and owns the chain arithmetic."""

    def __init__(self, f: UPoly, p: PrimeElement, seed=0, check=True):
        self.ring = f.dom
        self.f = f
        self.p = p
        self.kp = p.residue
        self.seed = seed
        self.check = check
        self._mu_memo = {}
        self._val_memo = {}
        self.reps = None

    # -- base maps -------------------------------------------------------------

    def reduce_poly(self, g: UPoly):
        return ff.ptrim(tuple(self.p.reduce(c) for c in g.coeffs))

    def lift_poly(self, gbar):
        return UPoly(self.ring, tuple(self.p.lift(c) for c in gbar))

    def gauss(self, a: UPoly):
        if a.is_zero():
            return INF
        ring = self.ring
        return Fraction(min(
            ring.valuation(c, self.p.value)
            for c in a.coeffs
            if not ring.is_zero(c)
        ))

    # -- chain valuations --------------------------------------------------------

    def mu(self, node, a: UPoly):
        """Valuation of a under the chain ending at node (Level0 = Gauss)."""
        if a.is_zero():
            return INF
        if isinstance(node, Level0):
            return self.gauss(a)
        key = (id(node), a)
        hit = self._mu_memo.get(key)
        if hit is not None:
            return hit
        val = min(
            self.mu(node.prev, c) + s * node.gamma
            for s, c in enumerate(phi_expansion(a, node.phi))
            if not c.is_zero()
        )
        self._mu_memo[key] = val
        return val

    # -- canonical monomials and reductions ----------------------------------------

    def can_mono(self, node, v):
        """Exponents (b_p, b_1..b_k) of the canonical monomial of value v in
        p and the chain's key polynomials, with 0 <= b_i < e_i."""
        v = Fraction(v)
        if isinstance(node, Level0):
            assert v.denominator == 1, "value outside the level-0 group"
            return [int(v)]
        if node.e == 1:
            b = 0
        else:
            n = v * node.E
            assert n.denominator == 1, "value outside the chain's group"
            b = (int(n) * pow(node.H, -1, node.e)) % node.e
        rest = self.can_mono(node.prev, v - b * node.gamma)
        rest.append(b)
        return rest

    def mono_red_split(self, node: Stage, exps):
        """Reduction of a value-0 monomial keeping the stage generator formal.

        Returns (u, q): the reduction is u * tau^q with u in node.fld."""
        b = exps[-1]
        q, r = divmod(b, node.e)
        assert r == 0, "monomial is not reducible in this value group"
        lower = list(exps[:-1])
        if q:
            cm = self.can_mono(node.prev, node.e * node.gamma)
            for i, c in enumerate(cm):
                lower[i] += q * c
        return self.mono_red(node.prev, lower), q

    def mono_red(self, node, exps):
        """Reduction of a value-0 monomial into node.fld_next."""
        if isinstance(node, Level0):
            assert len(exps) == 1 and exps[0] == 0, "nonzero level-0 monomial"
            return node.fld_next.one
        u, q = self.mono_red_split(node, exps)
        F = node.fld_next
        u = _embed(node.fld, F, u)
        if q:
            u = F.mul(u, F.pow(node.gen_next, q))
        return u

    def poly_red(self, node, a: UPoly):
        """(mu(a), normalized reduction of a in node.fld_next).

        Requires deg a < node.next_degree.  A zero reduction is meaningful:
        the true value of a at branch roots then exceeds mu(a)."""
        assert a.degree() < node.next_degree
        if isinstance(node, Level0):
            v = self.gauss(a)
            assert 0 <= v != INF
            pk = self.p.power(int(v)) if v else self.ring.one
            red = ff.ptrim(
                [self.p.reduce(self.ring.exact_div(c, pk)) for c in a.coeffs]
            )
            if node.f0 == 1:
                elt = red[0] if red else node.kp.zero
            else:
                elt = node.fld_next._pad(red)
            return v, elt
        F = node.fld_next
        terms = []
        vmin = None
        for s, c in enumerate(phi_expansion(a, node.phi)):
            if c.is_zero():
                continue
            w, r = self.poly_red(node.prev, c)
            t = w + s * node.gamma
            terms.append((s, w, r, t))
            if vmin is None or t < vmin:
                vmin = t
        total = F.zero
        neg = self.can_mono(node, -vmin)
        for s, w, r, t in terms:
            if t != vmin:
                continue
            bvec = self.can_mono(node.prev, w)
            bvec.append(0)
            bvec = [x + y for x, y in zip(bvec, neg)]
            bvec[-1] += s
            u = self.mono_red(node, bvec)
            total = F.add(total, F.mul(_embed(node.fld, F, r), u))
        return vmin, total

    # -- residual polynomial of a polygon side ---------------------------------------

    def side_residual(self, node, side: Side, expansion, values):
        """Residual polynomial of the expansion along one polygon side.

        node is the chain below the current key polynomial.  Returns an
        ff-polynomial over node.fld_next of degree side.length / e_side."""
        gamma = -side.slope
        frac = gamma * node.E
        e_side, h_side = frac.denominator, frac.numerator
        assert side.length % e_side == 0
        ell = side.length // e_side
        v_side = side.u0 + side.s0 * gamma
        if e_side == 1:
            b_top = 0
        else:
            n = -v_side * node.E * e_side
            assert n.denominator == 1
            b_top = (int(n) * pow(h_side, -1, e_side)) % e_side
        can_rest = self.can_mono(node, -v_side - b_top * gamma)
        cm_step = None
        F = node.fld_next
        out = [F.zero] * (ell + 1)
        for j in range(ell + 1):
            s = side.s0 + j * e_side
            if s >= len(expansion) or expansion[s].is_zero():
                continue
            u_on = side.u0 - (s - side.s0) * gamma
            w = values[s]
            if w > u_on:
                continue
            assert w == u_on, "data point below its own hull"
            _, r = self.poly_red(node, expansion[s])
            q, rem = divmod(s + b_top, e_side)
            assert rem == 0
            bvec = self.can_mono(node, w)
            bvec = [x + y for x, y in zip(bvec, can_rest)]
            if q:
                if cm_step is None:
                    cm_step = self.can_mono(node, e_side * gamma)
                bvec = [x + y * q for x, y in zip(bvec, cm_step)]
            u = self.mono_red(node, bvec)
            out[j] = F.mul(r, u)
        assert not F.is_zero(out[0]), "residual constant term vanished"
        assert not F.is_zero(out[-1]), "residual leading term vanished"
        return tuple(out)

    # -- constructive lifts --------------------------------------------------------

    def construct(self, node, c, v):
        """g in A[x], deg g < node.next_degree, with mu(g) = v and
        normalized reduction c (a nonzero element of node.fld_next)."""
        v = Fraction(v)
        if isinstance(node, Level0):
            assert v.denominator == 1 and v >= 0
            if node.f0 == 1:
                rep = (c,) if not node.kp.is_zero(c) else ()
            else:
                rep = ff.ptrim(c)
            g = self.lift_poly(rep)
            if v:
                g = g.scale(self.p.power(int(v)))
            return g
        F = node.fld_next
        sub = node.fld
        if node.e == 1:
            s_star = 0
        else:
            n = v * node.E
            assert n.denominator == 1
            s_star = (int(n) * pow(node.H, -1, node.e)) % node.e
        neg = self.can_mono(node, -v)
        slots = []
        qbase = None
        for j in range(node.fdeg):
            s_j = s_star + j * node.e
            v_j = v - s_j * node.gamma
            bvec = self.can_mono(node.prev, v_j)
            bvec.append(0)
            bvec = [x + y for x, y in zip(bvec, neg)]
            bvec[-1] += s_j
            u_j, q_j = self.mono_red_split(node, bvec)
            if qbase is None:
                qbase = q_j - j
            assert q_j == qbase + j
            slots.append((s_j, v_j, u_j))
        cc = c
        if qbase:
            cc = F.mul(cc, F.pow(node.gen_next, -qbase))
        coords = _coords(F, sub, node.fdeg, cc)
        g = UPoly.zero(self.ring)
        for j, (s_j, v_j, u_j) in enumerate(slots):
            if sub.is_zero(coords[j]):
                continue
            lam = sub.mul(coords[j], sub.inv(u_j))
            g = g + self.construct(node.prev, lam, v_j) * _poly_pow(
                node.phi, s_j
            )
        assert g.degree() < node.next_degree
        if self.check:
            vv, rr = self.poly_red(node, g)
            assert vv == v and rr == c, "construct() broke its contract"
        return g

    def representative(self, stage: Stage):
        """Monic key polynomial of degree stage.next_degree whose residual
        along (gamma, e) is associate to stage.psi."""
        e, fdeg, gamma = stage.e, stage.fdeg, stage.gamma
        sub = stage.fld
        out = _poly_pow(stage.phi, e * fdeg)
        neg = self.can_mono(stage, -e * fdeg * gamma)
        bvec_f = list(neg)
        bvec_f[-1] += e * fdeg
        u_f, q_f = self.mono_red_split(stage, bvec_f)
        for j in range(fdeg):
            cj = stage.psi[j]
            if sub.is_zero(cj):
                continue
            v_j = (fdeg - j) * e * gamma
            bvec = self.can_mono(stage.prev, v_j)
            bvec.append(0)
            bvec = [x + y for x, y in zip(bvec, neg)]
            bvec[-1] += j * e
            u_j, q_j = self.mono_red_split(stage, bvec)
            assert q_j == q_f - fdeg + j
            lam = sub.mul(sub.mul(cj, u_f), sub.inv(u_j))
            out = out + self.construct(stage.prev, lam, v_j) * _poly_pow(
                stage.phi, j * e
            )
        assert out.is_monic() and out.degree() == stage.next_degree
        if self.check:
            self._check_representative(stage, out)
        return out

    def _check_representative(self, stage, phi_next):
        coeffs = phi_expansion(phi_next, stage.phi)
        values = [
            self.mu(stage.prev, c) if not c.is_zero() else INF for c in coeffs
        ]
        top = stage.e * stage.fdeg
        side = Side(-stage.gamma, 0, top * stage.gamma, top, Fraction(0))
        res = self.side_residual(stage.prev, side, coeffs, values)
        F = stage.fld
        inv = F.inv(res[-1])
        scaled = tuple(F.mul(c, inv) for c in res)
        assert scaled == tuple(stage.psi), "representative residual mismatch"

    # -- the algorithm ----------------------------------------------------------------

    def run(self):
        if self.reps is not None:
            return self.reps
        f = self.f
        if not f.is_monic():
            raise InputError("f must be monic")
        if f.degree() < 1:
            raise InputError("f must have degree >= 1")
        fbar = self.reduce_poly(f)
        assert ff.pdeg(fbar) == f.degree()
        reps = []
        for psi0, mult in ff.factor_full(self.kp, fbar, seed=self.seed):
            level0 = Level0(self.kp, psi0)
            phi1 = self.lift_poly(psi0)
            if mult == 1:
                reps.append(self._finalize(level0, phi1, None))
            else:
                reps.extend(self._process(level0, phi1, Fraction(0), mult))
        if sum(r.degree for r in reps) != f.degree():
            raise PrecisionError(
                "factor degrees do not sum to deg f (inseparable input?)"
            )
        self.reps = reps
        for rep in reps:
            # sub-runs keep their own engine for boosting, but invariants of
            # the full polynomial are taken against the outermost run
            rep.owner = self
        self._order_reps()
        self._separate()
        self._fill_cross()
        return reps

    def _process(self, node, phi, bound, mult):
        """Branch on the polygon of f with respect to phi above the bound."""
        reps = []
        coeffs = phi_expansion(self.f, phi)
        if coeffs[0].is_zero():
            # phi divides f exactly: find its primes with a sub-run; the
            # sub-engine stays attached to those reps for boosting
            sub = MontesEngine(phi, self.p, seed=self.seed, check=self.check)
            reps.extend(sub.run())
            mult -= 1  # f separable, so phi^2 does not divide f
        values = [
            self.mu(node, c) if not c.is_zero() else INF for c in coeffs
        ]
        points = [(s, v) for s, v in enumerate(values) if v != INF]
        sides = hull_sides(points, bound=bound)
        if coeffs[0].is_zero():
            sides = [s for s in sides if s.s0 >= 1]
        assert sum(s.length for s in sides) == mult, "polygon mass mismatch"
        for side in sides:
            gamma = -side.slope
            e_side = (gamma * node.E).denominator
            residual = self.side_residual(node, side, coeffs, values)
            F = node.fld_next
            for psi, a in ff.factor_full(F, _fmonic(F, residual), seed=self.seed):
                if a == 1:
                    reps.append(self._finalize(node, phi, Stage(node, phi, gamma, psi)))
                elif e_side == 1 and ff.pdeg(psi) == 1:
                    # refinement: replace phi in place, same degree
                    delta = self.construct(node, psi[0], gamma)
                    reps.extend(self._process(node, phi + delta, gamma, a))
                else:
                    stage = Stage(node, phi, gamma, psi)
                    phi_next = self.representative(stage)
                    reps.extend(
                        self._process(
                            stage, phi_next, stage.e * stage.fdeg * gamma, a
                        )
                    )
        return reps

    def _finalize(self, node, phi, terminal_stage):
        """Create the OMRep of a terminal branch."""
        if terminal_stage is None:
            # multiplicity-1 factor of f mod p: the lift is the approximant
            level0 = node
            approx = phi
            e_total, f_total, degree = 1, level0.f0, level0.f0
            keep = node
            bound0 = Fraction(0)
        else:
            st = terminal_stage
            approx = self.representative(st)
            stages, level0 = chain_stages(st)
            e_total = st.E
            f_total = level0.f0
            for s in stages:
                f_total *= s.fdeg
            degree = st.next_degree
            if st.e * st.fdeg == 1:
                # the terminal stage only refines phi in place: drop it
                keep = st.prev
                bound0 = st.gamma
            else:
                keep = st
                bound0 = st.e * st.fdeg * st.gamma
        rep = OMRep(self, keep, approx, e_total, f_total, degree)
        assert rep.degree == rep.e * rep.fres
        self._refresh_top(rep, bound0)
        return rep

    def _refresh_top(self, rep, bound):
        """Recompute gamma_top from the polygon of f against the approximant."""
        coeffs = phi_expansion(self.f, rep.approximant)
        if coeffs[0].is_zero():
            rep.gamma_top = INF
            return
        values = [
            self.mu(rep.node, c) if not c.is_zero() else INF for c in coeffs
        ]
        points = [(s, v) for s, v in enumerate(values) if v != INF]
        sides = hull_sides(points, bound=bound)
        assert sum(s.length for s in sides) == 1, "approximant not separating"
        rep.gamma_top = -sides[0].slope

    # -- boosting -----------------------------------------------------------------------

    def boost_round(self, rep):
        """One refinement round on the approximant; gamma_top increases."""
        if rep.gamma_top == INF:
            return rep
        coeffs = phi_expansion(self.f, rep.approximant)
        if coeffs[0].is_zero():
            rep.gamma_top = INF
            rep.version += 1
            return rep
        values = [
            self.mu(rep.node, c) if not c.is_zero() else INF for c in coeffs
        ]
        points = [(s, v) for s, v in enumerate(values) if v != INF]
        terminal = [
            s for s in hull_sides(points) if -s.slope == rep.gamma_top
        ]
        assert len(terminal) == 1 and terminal[0].length == 1, \
            "terminal side lost"
        side = terminal[0]
        gamma = -side.slope
        residual = self.side_residual(rep.node, side, coeffs, values)
        F = rep.node.fld_next
        psi = _fmonic(F, residual)
        assert len(psi) == 2
        delta = self.construct(rep.node, psi[0], gamma)
        rep.approximant = rep.approximant + delta
        rep.version += 1
        self._refresh_top(rep, gamma)
        assert rep.gamma_top == INF or rep.gamma_top > gamma
        return rep

    def boost_to(self, rep, target):
        while rep.gamma_top != INF and rep.gamma_top < target:
            self.boost_round(rep)
        return rep

    # -- evaluation at branch roots ----------------------------------------------------

    def value_of(self, rep, g: UPoly):
        """Exact v_p(g(theta)) at a root of this rep's p-adic factor.

        Boosts the rep whenever the expansion minimum is ambiguous."""
        while True:
            key = (rep.uid, rep.version, g)
            hit = self._val_memo.get(key)
            if hit is not None:
                return hit
            try:
                val = self._value_once(rep, g)
            except NeedsBoost:
                rep.engine.boost_round(rep)
                continue
            self._val_memo[key] = val
            return val

    def _value_once(self, rep, g):
        if g.is_zero():
            return INF
        if g.degree() < rep.degree:
            return self.mu(rep.node, g)
        vals = []
        for s, c in enumerate(phi_expansion(g, rep.approximant)):
            if c.is_zero():
                continue
            if rep.gamma_top == INF:
                if s == 0:
                    vals.append(self.mu(rep.node, c))
                continue
            vals.append(self.mu(rep.node, c) + s * rep.gamma_top)
        if not vals:
            return INF
        m = min(vals)
        if vals.count(m) > 1:
            raise NeedsBoost
        return m

    # -- ordering, separation, cross tables ----------------------------------------------

    def _order_reps(self):
        def key(rep):
            parts = [ff.pkey(rep.level0.kp, rep.level0.psi0)]
            for st in rep.stages:
                parts.append((st.gamma, ff.pkey(st.fld, st.psi)))
            return (len(parts), parts)

        self.reps.sort(key=key)
        for i, rep in enumerate(self.reps):
            rep.ordinal = i

    def _separate(self):
        """Enforce v_p(phi_p(theta_p)) > v_p(phi_p(theta_q)) for all q != p."""
        reps = self.reps
        for _ in range(1000):
            changed = False
            for rq in reps:
                for rp in reps:
                    if rp is rq:
                        continue
                    c = self.value_of(rq, rp.approximant)
                    if rp.gamma_top != INF and rp.gamma_top <= c:
                        rp.engine.boost_round(rp)
                        changed = True
            if not changed:
                return
        raise PrecisionError("separation did not stabilize")

    def _fill_cross(self):
        reps = self.reps
        for _ in range(200):
            for rep in reps:
                rows = [UPoly.x(self.ring)] + rep.frame_polys()
                rep.cross = {
                    rq.uid: [
                        INF if (rq is rep and poly is rep.approximant)
                        else self.value_of(rq, poly)
                        for poly in rows
                    ]
                    for rq in reps
                }
            stable = True
            for rp, rq in itertools.combinations(reps, 2):
                # both compute v_p(Res(F_p, F_q)): they must agree
                if rq.degree * rp.cross[rq.uid][-1] != \
                        rp.degree * rq.cross[rp.uid][-1]:
                    stable = False
                    rp.engine.boost_round(rp)
                    rq.engine.boost_round(rq)
            if stable:
                break
        else:
            raise PrecisionError("cross-value table did not stabilize")
        for rp in reps:
            rp.res_val = {
                rq.uid: rq.degree * rp.cross[rq.uid][-1]
                for rq in reps
                if rq is not rp
            }


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _embed(sub, sup, x):
    if sup is sub:
        return x
    return sup.embed(x)


def _coords(F, sub, fdeg, c):
    """Coordinates of c over sub in the generator-power basis of F."""
    if F is sub:
        return [c]
    assert len(c) == fdeg
    return list(c)


def _poly_pow(base: UPoly, n: int):
    out = UPoly.one(base.dom)
    for _ in range(n):
        out = out * base
    return out


def _fmonic(F, poly):
    inv = F.inv(poly[-1])
    return tuple(F.mul(c, inv) for c in poly)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def montes(f: UPoly, p: PrimeElement, truncation=None, seed=0, check=True):
    """OM representations of the prime ideals over p.

    With ``truncation`` = sigma the algorithm runs on f mod p^sigma and the
    a-posteriori certificate sigma > 2 ind_p(f) + 1 is enforced
    (PrecisionError otherwise; also if the truncation is inseparable)."""
    if not f.is_monic():
        raise InputError("f must be monic")
    g = f
    if truncation is not None:
        if truncation < 1:
            raise InputError("precision must be >= 1")
        g = truncate(f, p, truncation)
        if g.dom.is_zero(discriminant(g)):
            raise PrecisionError("truncation is inseparable; raise precision")
    elif f.dom.is_zero(discriminant(f)):
        raise InputError("f must be separable")
    engine = MontesEngine(g, p, seed=seed, check=check)
    reps = engine.run()
    if truncation is not None:
        ind = om_index(reps)
        if truncation <= 2 * ind + 1:
            raise PrecisionError(
                f"insufficient precision: sigma={truncation} <= 2*{ind}+1"
            )
    if check:
        _sandwich_checks(g, reps)
    return reps


def om_index(reps):
    """ind_p(f) = sum ind_p(F_p) + (1/2) sum_{p != q} v_p(Res(F_p, F_q))."""
    total = Fraction(0)
    for rep in reps:
        total += rep.ind_local
        for v in rep.res_val.values():
            total += Fraction(v, 2)
    assert total.denominator == 1, "resultant valuations do not pair up"
    return int(total)


def factor_discriminants(reps):
    """Per-factor v_p(disc F_p), certified against global additivity."""
    if not reps:
        raise InputError("no representations")
    f = reps[0].owner.f
    p = reps[0].p
    delta_f = f.dom.valuation(discriminant(f), p.value)
    res_total = sum(v for rep in reps for v in rep.res_val.values())
    for _ in range(200):
        deltas = []
        for rep in reps:
            dval = rep.engine.value_of(rep, rep.approximant.derivative())
            deltas.append(rep.degree * dval)
        if sum(deltas) + res_total == delta_f:
            return deltas, delta_f
        for rep in reps:
            rep.engine.boost_round(rep)
    raise PrecisionError("per-factor discriminants did not stabilize")


def delta_invariants(reps):
    """((delta0 per rep), delta*(f), delta(f) = v_p(disc f), rho(f)).

    delta0(F) = 2 (delta(F) - f_p rho_p) / deg F, computed through the local
    different, so that the index sandwich and the delta* bound hold exactly
    together with the wild-family equality cases."""
    deltas, delta_f = factor_discriminants(reps)
    res_total = sum(v for rep in reps for v in rep.res_val.values())
    delta0 = []
    rho = Fraction(0)
    dstar = Fraction(0)
    for rep, dF in zip(reps, deltas):
        v_disc_local = dF - 2 * rep.ind_local
        assert v_disc_local >= 0
        # v_p(disc of the local field) = f*(e-1) + f*rho_p (wild part)
        wild = v_disc_local - rep.fres * (rep.e - 1)
        assert wild >= 0, "local different below the tame bound"
        rho += wild
        d0 = Fraction(2 * (dF - wild), rep.degree)
        assert d0 >= 0
        delta0.append(d0)
        dstar += Fraction(rep.degree, 2) * d0
    dstar += res_total
    return delta0, dstar, delta_f, rho


def _sandwich_checks(f, reps):
    ind = om_index(reps)
    delta0, dstar, delta_f, rho = delta_invariants(reps)
    d = f.degree()
    assert ind <= dstar <= 2 * ind + d - 1, "index sandwich violated"
    assert dstar <= delta_f - rho, "delta* upper bound violated"


def boost_approximants(reps, target):
    """Raise every approximant's self-value v_p(phi_p(theta_p)) to at least
    the target (one rational, or one per rep)."""
    targets = list(target) if isinstance(target, (list, tuple)) \
        else [target] * len(reps)
    for rep, t in zip(reps, targets):
        rep.engine.boost_to(rep, t)
    return reps


def detect_p_divides_index(f: UPoly, p: PrimeElement, seed=0):
    """True iff ind_p(f) > 0, decided from f mod p^2 only.

    Factor f mod p, Hensel-lift the coprime blocks psi^m once, then per
    block: multiplicity 1 passes, otherwise the remainder modulo (a lift
    of) the irreducible psi must have valuation exactly 1 (the Eisenstein
    case)."""
    ring = f.dom
    if not f.is_monic():
        raise InputError("f must be monic")
    kp = p.residue
    engine = MontesEngine(f, p, seed=seed, check=False)
    fbar = engine.reduce_poly(f)
    parts = []
    for g, m in ff.factor_full(kp, fbar, seed=seed):
        block = g
        for _ in range(m - 1):
            block = ff.pmul(kp, block, g)
        parts.append((engine.lift_poly(g), m, engine.lift_poly(block)))
    if len(parts) == 1:
        lifted = [truncate(f, p, 2)]
    else:
        lifted = hensel_lift(f, [b for _, _, b in parts], p, 1, 2)
    for (P, N, _), G in zip(parts, lifted):
        if N == 1:
            continue
        _, rem = G.divmod_monic(P)
        v = min(
            (ring.valuation(c, p.value) for c in rem.coeffs
             if not ring.is_zero(c)),
            default=INF,
        )
        if v != 1:
            return True
    return False
