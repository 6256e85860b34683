"""Command-line front end.

Subcommands: integral-basis, p-basis, ideal-basis, om-show.  Inputs are an
expression (or file) for f, the base ring, and optional prime hints; output
is text or JSON (coefficients as decimal strings over Z, coefficient arrays
over GF(q)[t]).

Exit codes: 0 success, 2 input error, 3 precision/certification failure,
4 desk-scale limit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import ff
from .errors import (
    CertificateError,
    DeskScaleError,
    InputError,
    PrecisionError,
    TribasisError,
)
from .glue import global_basis
from .ideals import (
    FractionalIdeal,
    NormalizedIdeal,
    PrimeIdealId,
    ideal_index_p,
    ideal_p_basis,
    normalize,
)
from .maxmin import p_basis as reduced_p_basis
from .omcore import INF, delta_invariants, detect_p_divides_index, montes, om_index
from .parse import format_poly, parse_poly
from .rings import (
    FqTRing,
    PrimeElement,
    ZRing,
    squarefree_factorization,
)
from .upoly import UPoly, discriminant, factor_monic
from .verify import order_closed, pz_maximal, transition_det_valuation


# ---------------------------------------------------------------------------
# job description
# ---------------------------------------------------------------------------

class JobSpec:
    """Parsed command description (ring, f, hints, ideal, output options)."""

    def __init__(self, ring, f, command, primes=(), delta_factors=(),
                 d_factors=(), ideal=(), fmt="text", certify=False, seed=0,
                 jobs=1):
        self.ring = ring
        self.f = f
        self.command = command
        self.primes = list(primes)
        self.delta_factors = list(delta_factors)
        self.d_factors = list(d_factors)
        self.ideal = list(ideal)
        self.fmt = fmt
        self.certify = certify
        self.seed = seed
        self.jobs = max(1, jobs)
        if self.ideal and command != "ideal-basis":
            raise InputError("ideal exponents only apply to ideal-basis")


def make_ring(kind, q=None):
    if kind == "z":
        return ZRing()
    if kind in ("fqt", "fq[t]"):
        if q is None:
            raise InputError("GF(q)[t] requires --q")
        return FqTRing(q)
    raise InputError(f"unknown ring kind {kind!r}")


def parse_ring_element(ring, text):
    """Parse an element of A (an integer, or a polynomial in t)."""
    text = text.strip()
    if ring.kind == "z":
        try:
            return int(text)
        except ValueError as exc:
            raise InputError(f"bad integer {text!r}") from exc
    poly = parse_poly(text, ring)
    if poly.degree() > 0:
        raise InputError(f"{text!r} is not an element of GF(q)[t]")
    return poly[0] if poly.degree() == 0 else ring.zero


def make_prime(ring, text):
    return PrimeElement(ring, parse_ring_element(ring, text))


# ---------------------------------------------------------------------------
# pipeline pieces
# ---------------------------------------------------------------------------

def check_input_poly(f: UPoly, seed=0):
    ring = f.dom
    if not f.is_monic():
        raise InputError("f must be monic")
    if f.degree() < 1:
        raise InputError("f must have degree >= 1")
    if ring.is_zero(discriminant(f)):
        raise InputError("f is not separable")
    factors = factor_monic(f, seed=seed)
    if len(factors) > 1:
        raise InputError("f is reducible over the base ring")


def bad_primes(job: JobSpec):
    """Primes possibly dividing the index, from hints or the discriminant.

    With only Delta-hints, the squared primes go through the mod-p^2
    detector; with no hints the discriminant is computed and factored
    (complete over GF(q)[t], trial division over Z)."""
    ring = job.ring
    f = job.f
    if job.primes:
        return [make_prime(ring, t) for t in job.primes]
    if job.d_factors:
        return [make_prime(ring, t.split(",")[0]) for t in job.d_factors]
    if job.delta_factors:
        out = []
        for t in job.delta_factors:
            parts = t.split(",")
            p = make_prime(ring, parts[0])
            e = int(parts[1]) if len(parts) > 1 else 2
            if e >= 2 and detect_p_divides_index(f, p, seed=job.seed):
                out.append(p)
        return out
    disc = discriminant(f)
    factors = squarefree_factorization(ring, disc)
    out = []
    for val, e in factors:
        if ring.kind == "z" and val in (1, -1):
            continue
        if ring.kind == "fqt" and len(val) <= 1:
            continue
        p = PrimeElement(ring, val if ring.kind == "fqt" else abs(val))
        if e >= 2 and detect_p_divides_index(f, p, seed=job.seed):
            out.append(p)
    return out


def trivial_ideal(reps_per_prime):
    return normalize(FractionalIdeal({}), reps_per_prime)


def local_bases(f, primes, seed=0, jobs=1, ideal=None):
    """montes + triangular p-basis per prime (the fast T/S route).

    Returns (reps_per_prime, {p: basis or None for index-0 primes})."""
    reps_per_prime = {}

    def run_montes(p):
        return p, montes(f, p, seed=seed)

    if jobs > 1 and len(primes) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for p, reps in pool.map(run_montes, primes):
                reps_per_prime[p] = reps
    else:
        for p in primes:
            reps_per_prime[p] = montes(f, p, seed=seed)
    norm = normalize(ideal or FractionalIdeal({}), reps_per_prime)
    bases = {}
    for p in primes:
        reps = reps_per_prime[p]
        exps = [
            norm.ideal.exponent(PrimeIdealId(p, r.ordinal)) for r in reps
        ]
        if ideal_index_p(reps, exps) == 0:
            bases[p] = None
        else:
            bases[p] = ideal_p_basis(f, p, reps, norm)
    return reps_per_prime, norm, bases


def power_basis(f: UPoly):
    ring = f.dom
    from .glue import TriangularBasis

    return TriangularBasis(
        ring,
        [UPoly.monomial(ring, ring.one, i) for i in range(f.degree())],
        [{} for _ in range(f.degree())],
    )


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_integral_basis(job: JobSpec):
    f = job.f
    check_input_poly(f, seed=job.seed)
    primes = bad_primes(job)
    reps_per_prime, _, bases = local_bases(
        f, primes, seed=job.seed, jobs=job.jobs
    )
    contributing = [b for b in bases.values() if b is not None]
    if contributing:
        basis = global_basis(f, contributing)
    else:
        basis = power_basis(f)
        basis.index_data = _trivial_index_data(f)
    report = render_basis(job, basis, reps_per_prime)
    if job.certify:
        report["certify"] = certify_report(f, bases)
    return report


def _trivial_index_data(f):
    from .glue import index_and_discriminant, TriangularBasis

    basis = power_basis(f)
    data = index_and_discriminant(basis, discriminant(f))
    return data


def cmd_p_basis(job: JobSpec, p=None):
    f = job.f
    check_input_poly(f, seed=job.seed)
    if p is None:
        if len(job.primes) != 1:
            raise InputError("p-basis needs exactly one --prime")
        p = make_prime(job.ring, job.primes[0])
    reps = montes(f, p, seed=job.seed)
    norm = trivial_ideal({p: reps})
    exps = [0] * len(reps)
    if ideal_index_p(reps, exps) == 0:
        basis = None
    else:
        basis = ideal_p_basis(f, p, reps, norm)
    report = render_local(job, p, reps, basis)
    if job.certify:
        report["certify"] = certify_report(f, {p: basis})
    return report


def parse_ideal_spec(ring, items):
    exps = {}
    for item in items:
        parts = item.rsplit(":", 2)
        if len(parts) != 3:
            raise InputError(f"bad ideal exponent {item!r} (want p:ordinal:exp)")
        p = make_prime(ring, parts[0])
        exps[PrimeIdealId(p, int(parts[1]))] = int(parts[2])
    return FractionalIdeal(exps)


def cmd_ideal_basis(job: JobSpec):
    f = job.f
    check_input_poly(f, seed=job.seed)
    ideal = parse_ideal_spec(job.ring, job.ideal)
    index_primes = bad_primes(job)
    primes = list(dict.fromkeys(ideal.primes_of_A() + index_primes))
    reps_per_prime, norm, bases = local_bases(
        f, primes, seed=job.seed, jobs=job.jobs, ideal=ideal
    )
    for pid in ideal.cleaned():
        if pid.p not in reps_per_prime:
            raise InputError(f"unresolved prime ideal id {pid}")
        if not 0 <= pid.ordinal < len(reps_per_prime[pid.p]):
            raise InputError(f"unresolved prime ideal id {pid}")
    contributing = [b for b in bases.values() if b is not None]
    if contributing:
        basis = global_basis(f, contributing)
    else:
        basis = power_basis(f)
        basis.index_data = _trivial_index_data(f)
    basis.scalar = norm.scalar_factored()
    h_ideal = 0
    for p, reps in reps_per_prime.items():
        exps = [
            norm.ideal.exponent(PrimeIdealId(p, r.ordinal)) for r in reps
        ]
        h_ideal += ideal_index_p(reps, exps) * p.h()
    report = render_basis(job, basis, reps_per_prime)
    report["scalar"] = {
        _fmt_prime(job.ring, p): e for p, e in basis.scalar.items()
    }
    report["h_ideal"] = h_ideal
    if job.certify:
        report["certify"] = certify_report(f, bases)
    return report


def cmd_om_show(job: JobSpec, p=None):
    f = job.f
    check_input_poly(f, seed=job.seed)
    if p is None:
        if len(job.primes) != 1:
            raise InputError("om-show needs exactly one --prime")
        p = make_prime(job.ring, job.primes[0])
    reps = montes(f, p, seed=job.seed)
    delta0, dstar, delta_f, rho = delta_invariants(reps)
    out = {
        "command": "om-show",
        "ring": _ring_json(job.ring),
        "f": _poly_json(f),
        "p": _fmt_prime(job.ring, p),
        "ind_p": om_index(reps),
        "v_p_disc": int(delta_f),
        "delta_star": str(dstar),
        "rho": str(rho),
        "reps": [],
    }
    rows_labels = {}
    for rep, d0 in zip(reps, delta0):
        frame = rep.frame_polys()
        entry = {
            "ordinal": rep.ordinal,
            "degree": rep.degree,
            "e": rep.e,
            "f": rep.fres,
            "ind": rep.ind_local,
            "delta0": str(d0),
            "frame": [_poly_json(ph) for ph in frame],
            "self_value": _val_json(rep.gamma_top),
            "slopes": [str(-st.gamma) for st in rep.stages],
            "cross": {
                str(other.ordinal): [
                    _val_json(v) for v in rep.cross[other.uid]
                ]
                for other in reps
            },
        }
        out["reps"].append(entry)
    return out


def certify_report(f, bases):
    out = {}
    for p, basis in bases.items():
        key = _fmt_prime(f.dom, p)
        if basis is None:
            out[key] = {"skipped": "index 0"}
            continue
        entry = {"order_closed": order_closed(basis, f, p)}
        try:
            entry["pz_maximal"] = pz_maximal(basis, f, p)
        except DeskScaleError:
            entry["pz_maximal"] = "out of desk-scale range"
        entry["det_valuation"] = -transition_det_valuation(basis, p)
        entry["ind"] = basis.ind
        out[key] = entry
    return out


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _ring_json(ring):
    if ring.kind == "z":
        return {"kind": "z"}
    return {"kind": "fqt", "q": ring.q}


def _coeff_json(ring, c):
    if ring.kind == "z":
        return str(c)
    return [ff.int_encode(ring.base, x) for x in c]


def _poly_json(poly: UPoly):
    return [_coeff_json(poly.dom, c) for c in poly.coeffs]


def _fmt_prime(ring, p: PrimeElement):
    return ring.format(p.value)


def _val_json(v):
    return "inf" if v == INF else str(Fraction(v))


def render_basis(job, basis, reps_per_prime):
    ring = job.ring
    idx = getattr(basis, "index_data", None)
    out = {
        "command": job.command,
        "ring": _ring_json(ring),
        "f": _poly_json(job.f),
        "numerators": [_poly_json(g) for g in basis.numerators],
        "denominators": [
            {"factored": [
                [_fmt_prime(ring, p), e]
                for p, e in sorted(
                    dd.items(), key=lambda t: ring.key(t[0].value)
                )
            ]}
            for dd in basis.denominators
        ],
        "index": {},
        "per_prime": {},
    }
    if idx is not None:
        out["index"] = {
            "D_factored": [
                [_fmt_prime(ring, p), v] for p, v in sorted(
                    idx.v_index.items(), key=lambda t: ring.key(t[0].value)
                ) if v
            ],
            "v_disc": {
                _fmt_prime(ring, p): v for p, v in idx.v_disc.items()
            },
            "v_field_disc": {
                _fmt_prime(ring, p): v for p, v in idx.v_field_disc.items()
            },
            "h_D": idx.h_index,
            "h_red": idx.h_red,
        }
    for p, reps in reps_per_prime.items():
        out["per_prime"][_fmt_prime(ring, p)] = {
            "ind": om_index(reps),
            "reps": [
                {"degree": r.degree, "e": r.e, "f": r.fres, "ind": r.ind_local}
                for r in reps
            ],
        }
    return out


def render_local(job, p, reps, basis):
    ring = job.ring
    out = {
        "command": job.command,
        "ring": _ring_json(ring),
        "f": _poly_json(job.f),
        "p": _fmt_prime(ring, p),
        "ind": om_index(reps),
    }
    if basis is None:
        d = job.f.degree()
        out["numerators"] = [
            _poly_json(UPoly.monomial(ring, ring.one, i)) for i in range(d)
        ]
        out["exponents"] = [0] * d
        out["values"] = ["0"] * d
    else:
        out["numerators"] = [_poly_json(g) for g in basis.numerators]
        out["exponents"] = list(basis.etas)
        out["values"] = [str(v) for v in basis.values]
        out["reduced"] = basis.reduced
    return out


def render_text(report):
    lines = []
    cmd = report.get("command", "")
    lines.append(f"# {cmd}")
    if "numerators" in report:
        denoms = report.get("denominators")
        for i, num in enumerate(report["numerators"]):
            poly = _poly_text(report, num)
            if denoms is not None:
                fac = denoms[i]["factored"]
                den = " * ".join(f"({p})^{e}" for p, e in fac) if fac else "1"
            else:
                e = report["exponents"][i]
                den = f"({report['p']})^{e}" if e else "1"
            lines.append(f"b_{i} = ({poly}) / {den}")
    if "index" in report and report["index"]:
        lines.append(
            "D = "
            + (" * ".join(
                f"({p})^{e}" for p, e in report["index"]["D_factored"]
            ) or "1")
        )
    if "scalar" in report:
        alpha = " * ".join(f"({p})^{e}" for p, e in report["scalar"].items())
        lines.append(f"scalar = {alpha or '1'}")
        lines.append(f"h(I) = {report['h_ideal']}")
    if cmd == "om-show":
        lines.append(f"p = {report['p']}  ind_p = {report['ind_p']}  "
                     f"v_p(disc) = {report['v_p_disc']}  "
                     f"delta* = {report['delta_star']}  rho = {report['rho']}")
        for entry in report["reps"]:
            lines.append(
                f"prime ideal #{entry['ordinal']}: d={entry['degree']} "
                f"e={entry['e']} f={entry['f']} ind={entry['ind']} "
                f"delta0={entry['delta0']} self={entry['self_value']}"
            )
            lines.append(f"  cross rows (x, frame.., approximant):")
            for other, col in sorted(entry["cross"].items()):
                lines.append(f"    at #{other}: {col}")
    if "certify" in report:
        lines.append(f"certify: {report['certify']}")
    return "\n".join(lines)


def _poly_text(report, coeff_list):
    ring = make_ring(report["ring"]["kind"], report["ring"].get("q"))
    poly = _poly_from_json(ring, coeff_list)
    return format_poly(poly)


def _poly_from_json(ring, coeff_list):
    coeffs = []
    for c in coeff_list:
        if ring.kind == "z":
            coeffs.append(int(c))
        else:
            coeffs.append(tuple(ff.int_decode(ring.base, n) for n in c))
    return UPoly(ring, coeffs)


# ---------------------------------------------------------------------------
# argument parsing and entry point
# ---------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(
        prog="tribasis",
        description="Triangular integral bases over Z and GF(q)[t]",
    )
    ap.add_argument("command", choices=[
        "integral-basis", "p-basis", "ideal-basis", "om-show",
    ])
    ap.add_argument("--ring", default="z", choices=["z", "fqt", "fq[t]"])
    ap.add_argument("--q", type=int, default=None,
                    help="field cardinality for GF(q)[t]")
    ap.add_argument("-f", dest="poly", required=True,
                    help="polynomial expression or a file containing one")
    ap.add_argument("--prime", action="append", default=[],
                    help="a prime of A (repeatable)")
    ap.add_argument("--delta-factor", action="append", default=[],
                    metavar="p,e", help="squarefree factorization of disc(f)")
    ap.add_argument("--d-factor", action="append", default=[],
                    metavar="p,e", help="squarefree factorization of the index")
    ap.add_argument("--ideal", action="append", default=[],
                    metavar="p:ordinal:exp", help="prime-ideal exponent")
    ap.add_argument("--format", dest="fmt", default="text",
                    choices=["text", "json"])
    ap.add_argument("--certify", action="store_true")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    return ap


def job_from_args(args) -> JobSpec:
    ring = make_ring(args.ring, args.q)
    text = args.poly
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    f = parse_poly(text, ring)
    return JobSpec(
        ring, f, args.command,
        primes=args.prime, delta_factors=args.delta_factor,
        d_factors=args.d_factor, ideal=args.ideal, fmt=args.fmt,
        certify=args.certify, seed=args.seed, jobs=args.jobs,
    )


def run_job(job: JobSpec):
    if job.command == "integral-basis":
        return cmd_integral_basis(job)
    if job.command == "p-basis":
        return cmd_p_basis(job)
    if job.command == "ideal-basis":
        return cmd_ideal_basis(job)
    if job.command == "om-show":
        return cmd_om_show(job)
    raise InputError(f"unknown command {job.command!r}")


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        job = job_from_args(args)
        report = run_job(job)
    except (InputError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (PrecisionError, CertificateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DeskScaleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except TribasisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if job.fmt == "json":
        print(json.dumps(report, indent=2))
    else:
        print(render_text(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
