"""Command-line front end: compute genera, run identity checks, emit JSON reports.

Exit codes: 0 success, 1 a checked identity failed, 2 validation error,
3 theta pole or transcendental residue, 4 insufficient truncation.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from math import lcm

from . import catalog
from .arith.series import ExponentProfile
from .errors import (
    GenusLabError,
    InsufficientTruncation,
    ThetaPoleError,
    TranscendentalResidue,
)
from .genus import (
    CONVENTIONS,
    TorsionTable,
    elliptic_genus,
    functional_equation_check,
    profile_for,
    specialize,
)
from .jacobi import membership

EXIT_OK, EXIT_FAILED, EXIT_VALIDATION, EXIT_POLE, EXIT_TRUNCATION = 0, 1, 2, 3, 4


def _fmt(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _cyclo_text(c) -> str:
    if c.is_rational():
        return _fmt(c.to_fraction())
    terms = [f"{_fmt(a)}*z{c.order}^{k}" if k else _fmt(a) for k, a in enumerate(c.coefficients()) if a]
    return "(" + " + ".join(terms) + ")"


def _power(var: str, e: Fraction) -> str:
    if e == 1:
        return var
    return f"{var}^{_fmt(e)}" if e.denominator == 1 else f"{var}^({_fmt(e)})"


def _poly_text(poly: dict, Ly: int) -> str:
    out = ""
    for k in sorted(poly):
        c = poly[k]
        if c.is_zero():
            continue
        e = Fraction(k, Ly)
        coeff = _cyclo_text(c)
        sign = "+"
        if coeff.startswith("-"):
            sign, coeff = "-", coeff[1:]
        if e:
            coeff = _power("y", e) if coeff == "1" else f"{coeff}*{_power('y', e)}"
        if not out:
            out = coeff if sign == "+" else "-" + coeff
        else:
            out += f" {sign} {coeff}"
    return out or "0"


def coefficient_table(series) -> str:
    """One line per q-exponent with the y-coefficient written in powers of y."""
    p = series.profile
    lines = []
    for f in sorted(series.terms):
        c = series.terms[f]
        row = _poly_text(c.numerator_poly(), p.Ly)
        if not c.is_polynomial():
            row = f"({row}) / ({_poly_text(c.denominator_poly(), p.Ly)})"
        lines.append(f"{_power('q', Fraction(f, p.Nq)) if f else 'q^0'}: {row}")
    lines.append(f"O({_power('q', Fraction(series.trunc + 1, p.Nq))})")
    return "\n".join(lines)


def _variety(args, key_attr="variety", file_attr="file"):
    path = getattr(args, file_attr, None)
    if path:
        return catalog.load_variety(path)
    return catalog.get(getattr(args, key_attr))


def _torsion(args):
    if not getattr(args, "torsion", None):
        return None
    with open(args.torsion) as fh:
        return TorsionTable.from_json(json.load(fh))


def _alpha(args):
    a = getattr(args, "alpha", None)
    return None if a in (None, "none", "") else a


def _compute(args, X=None, profile=None):
    X = X or _variety(args)
    return elliptic_genus(X, args.convention, _alpha(args), trunc=args.qmax, profile=profile,
                          torsion=_torsion(args))


def _emit(args, payload: dict, text: str):
    blob = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(blob + "\n")
    print(blob if args.json else text)


def cmd_compute(args) -> int:
    r = _compute(args)
    head = f"{r.variety}: weight {r.weight}, index {_fmt(r.index)}, convention {r.convention_tag}"
    _emit(args, r.to_json(), head + "\n" + coefficient_table(r.series))
    return EXIT_OK


_LAWS = {"m1": "modular1", "m3": "modular3", "m4": "modular4"}


def cmd_check(args) -> int:
    r = _compute(args)
    checks = args.check or ["m1", "m3", "m4", "membership"]
    reports = []
    ok = True
    lines = []
    for chk in checks:
        if chk == "membership":
            rep = membership(r)
            reports.append({"check": chk, **rep.to_json()})
            ok &= rep.success
            coords = ", ".join(f"{k}: {_fmt(v)}" for k, v in sorted(rep.compact().items())) or "-"
            line = f"membership: {'pass' if rep.success else 'FAIL'} ({coords})"
            if rep.residual:
                line += f" first unexplained monomial {_power('q', rep.residual[0])} {_power('y', rep.residual[1])}"
        else:
            if chk.startswith("lattice:"):
                rep = functional_equation_check(r, "lattice", int(chk.split(":", 1)[1]))
            elif chk in _LAWS:
                rep = functional_equation_check(r, _LAWS[chk])
            else:
                raise ValueError(f"unknown check {chk!r}")
            reports.append({"check": chk, **rep.to_json()})
            ok &= rep.passed
            line = f"{chk}: {'pass' if rep.passed else 'FAIL'} ({rep.compared} comparisons)"
            if rep.discrepancy:
                q, y = rep.discrepancy
                line += f" first discrepancy at {_power('q', q)}" + ("" if y == "*" else f" {_power('y', y)}")
            if rep.message and not rep.passed:
                line += f": {rep.message}"
        lines.append(line)
    _emit(args, {"variety": r.variety, "checks": reports, "passed": ok}, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAILED


def cmd_specialize(args) -> int:
    r = _compute(args)
    kinds = [args.kind] if args.kind else ["todd", "euler", "signature", "chi_y"]
    out = {}
    for k in kinds:
        v = specialize(r, k)
        if k in ("q0", "chi_y"):
            out[k] = _poly_text(v.numerator_poly(), r.series.profile.Ly) if v.is_polynomial() else repr(v)
        else:
            out[k] = _fmt(v) if isinstance(v, (int, Fraction)) else repr(v)
    _emit(args, {"variety": r.variety, "specializations": out},
          "\n".join(f"{k}: {v}" for k, v in out.items()))
    return EXIT_OK


def _compare(args, left, right, label) -> int:
    torsion = _torsion(args)
    pl, pr = profile_for(left, torsion), profile_for(right)
    p = ExponentProfile(lcm(pl.Ly, pr.Ly), lcm(pl.Nq, pr.Nq), lcm(pl.Nzeta, pr.Nzeta))
    a = _compute(args, left, p)
    b = _compute(args, right, p)
    T = min(a.series.trunc, b.series.trunc)
    diff = a.series.first_difference(b.series, T)
    passed = diff is None
    payload = {"check": label, "left": a.variety, "right": b.variety, "passed": passed, "truncation": T,
               "discrepancy": None if passed else _fmt(Fraction(diff, p.Nq))}
    text = f"{label}: {a.variety} vs {b.variety} through q^{_fmt(Fraction(T, p.Nq))}: {'pass' if passed else 'FAIL'}"
    if not passed:
        text += f"\nfirst discrepancy at q^{_fmt(Fraction(diff, p.Nq))}"
    _emit(args, payload, text)
    return EXIT_OK if passed else EXIT_FAILED


def cmd_mckay(args) -> int:
    orb = _variety(args)
    target = catalog.get(args.target)
    return _compare(args, orb, target, "mckay")


def cmd_kequiv(args) -> int:
    res = _variety(args)
    target = catalog.get(args.target)
    return _compare(args, res, target, "kequiv")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="genuslab", description="Exact elliptic genera and their identities.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, default_variety):
        p.add_argument("--variety", default=default_variety, help="catalog key (see 'genuslab compute --help')")
        p.add_argument("--file", help="variety JSON file (overrides --variety)")
        p.add_argument("--qmax", type=int, default=24, help="truncation numerator in units of 1/Nq (default 24)")
        p.add_argument("--alpha", default=None, help="pullback class name, or 'none'")
        p.add_argument("--convention", choices=CONVENTIONS, default="eq2")
        p.add_argument("--torsion", help="discrete torsion table JSON file")
        p.add_argument("--out", help="write the JSON report to this path")
        p.add_argument("--json", action="store_true", help="print JSON instead of text")

    p = sub.add_parser("compute", help="compute a genus", epilog="catalog keys: " + ", ".join(catalog.keys()))
    common(p, "k3-quartic")
    p.set_defaults(func=cmd_compute)
    p = sub.add_parser("check", help="functional equations and Jacobi membership")
    common(p, "k3-quartic")
    p.add_argument("--check", action="append", help="m1, m3, m4, lattice:K or membership (repeatable)")
    p.set_defaults(func=cmd_check)
    p = sub.add_parser("specialize", help="todd, euler, signature, chi_y or q0")
    common(p, "k3-quartic")
    p.add_argument("--kind", choices=["q0", "todd", "euler", "signature", "chi_y"])
    p.set_defaults(func=cmd_specialize)
    p = sub.add_parser("mckay", help="orbifold genus against the genus of the resolution")
    common(p, "kummer")
    p.add_argument("--target", default="k3-quartic")
    p.set_defaults(func=cmd_mckay)
    p = sub.add_parser("kequiv", help="genus of a pair against a K-equivalent variety")
    common(p, "blowup-p2")
    p.add_argument("--target", default="p2")
    p.set_defaults(func=cmd_kequiv)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.qmax < 0:
        print("error: --qmax must be nonnegative", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return args.func(args)
    except (ThetaPoleError, TranscendentalResidue) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_POLE
    except InsufficientTruncation as exc:
        print(f"error: insufficient truncation: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except (GenusLabError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
