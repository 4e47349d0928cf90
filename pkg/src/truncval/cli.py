"""Command-line front end.

Every verb assembles a descriptor from the flags and calls the library;
there is no CLI-only logic.  Exit codes: 0 success, 1 a Fail in ``verify``,
2 an Unknown or Skipped check in ``verify``, 3 configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import lab
from .exactpoly import Poly, format_poly, hasse, newton_polygon, q_expand
from .graded import analyze, criteria_report
from .keypoly import PairData, TruncationNotValuation, delta_of, epsilon_table, is_key, is_minimal_pair
from .numfield import NumberField, RationalField, Reducible, UnsupportedExtension
from .ordgroup import ZERO, format_value, parse_value
from .parsing import PolySyntaxError, parse_element, parse_poly
from .valuation import (
    Base,
    DomainError,
    Monomial,
    Restriction,
    Truncation,
    describe,
    trunc_eval,
    val_eval,
)

VERBS = (
    "eval", "expand", "hasse", "epsilon", "polygon", "delta", "keycheck",
    "minimalpair", "truncate", "graded", "criteria", "classify", "verify",
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _prime(text: str):
    if text == "trivial":
        return None
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--p expects a prime or 'trivial', got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="truncval", description="Exact valuations, truncations and key polynomials on Q[x].")
    parser.add_argument("--version", action="version", version=f"truncval {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(sp, poly=True):
        if poly:
            sp.add_argument("poly", help="polynomial in x, e.g. 'x^2 - 2'")
        sp.add_argument("--p", type=_prime, default=2, help="base prime or 'trivial' (default 2)")
        sp.add_argument("--field", help="minimal polynomial of t, e.g. 't^2-2'")
        sp.add_argument("--center", help="center of the monomial valuation (may use t)")
        sp.add_argument("--delta", help="value of x - center: '3/4', '(1/2, 1)' or 'inf'")
        sp.add_argument("--q", help="truncation polynomial")
        sp.add_argument("--json", action="store_true", help="emit JSON")
        sp.add_argument("--out", help="write output to this file")
        return sp

    common(sub.add_parser("eval", help="evaluate the valuation"))
    common(sub.add_parser("truncate", help="evaluate the truncation at --q"))
    common(sub.add_parser("expand", help="q-expansion of a polynomial"))
    sp = common(sub.add_parser("hasse", help="Hasse derivative"))
    sp.add_argument("--b", type=int, required=True)
    common(sub.add_parser("epsilon", help="epsilon invariant and its table"))
    common(sub.add_parser("polygon", help="Newton polygon of the coefficients"))
    common(sub.add_parser("delta", help="optimizing-root value delta(f)"))
    for name in ("keycheck", "criteria"):
        sp = common(sub.add_parser(name), poly=(name == "keycheck"))
        sp.add_argument("--seed", type=int, default=42)
        sp.add_argument("--bound-deg", type=int, default=3)
        sp.add_argument("--coeffs", help="comma-separated coefficient set, e.g. '0,1,-1,2,-2,1/2'")
    common(sub.add_parser("minimalpair", help="decide whether (center, delta) is a minimal pair"), poly=False)
    common(sub.add_parser("graded", help="S_q and delta_q table"))
    common(sub.add_parser("classify", help="classify the valuation"), poly=False)
    sp = sub.add_parser("verify", help="run a scenario file")
    sp.add_argument("scenarios", help="scenario file, or 'paper_suite' for the bundled suite")
    sp.add_argument("--seed", type=int, help="override every scenario seed")
    sp.add_argument("--out", help="write the report to this file")
    sp.add_argument("--json", action="store_true", help="accepted for symmetry; reports are always JSON")
    sp.add_argument("--timings", action="store_true", help="include elapsed times (breaks byte-identity)")
    return parser


# ------------------------------------------------------------- assembly


def _field(args):
    if args.field:
        return NumberField(parse_poly(args.field, var="t"), args.p)
    return RationalField(args.p)


def descriptor(args):
    """Valuation described by the flags: Base, Monomial or Restriction."""
    fld = _field(args)
    if args.center is None and args.delta is None and fld.degree == 1:
        return Base(args.p), fld
    center = parse_element(args.center or "0", fld)
    delta = parse_value(args.delta) if args.delta else ZERO
    M = Monomial(fld, center, delta)
    return (Restriction(M) if fld.degree > 1 else M), fld


def _poly(args, fld=None):
    return parse_poly(args.poly, fld if fld is not None and fld.degree > 1 else None)


def _q(args, required=True):
    if args.q is None:
        if required:
            raise _UsageError("--q is required for this verb")
        return None
    return parse_poly(args.q)


def _coeffs(args, p):
    from .corpus import default_coeffs

    if not getattr(args, "coeffs", None):
        return default_coeffs(p)
    return tuple(Fraction(c.strip()) for c in args.coeffs.split(","))


# ---------------------------------------------------------------- verbs


def _run(args):
    """Returns (text, json payload)."""
    verb = args.verb
    V, fld = descriptor(args)
    if verb == "eval":
        f = _poly(args, fld)
        if isinstance(V, Restriction) and not all(getattr(c, "is_rational", lambda: True)() for c in f.coeffs):
            V = V.inner  # L[x] input: evaluate with the monomial valuation over L
        v = val_eval(V, f)
        return format_value(v), {"value": format_value(v)}
    if verb == "truncate":
        v = trunc_eval(Truncation(V, _q(args)), _poly(args))
        return format_value(v), {"value": format_value(v)}
    if verb == "expand":
        exp = q_expand(_poly(args, fld), _q(args))
        digits = [format_poly(d) for d in exp.digits]
        return "\n".join(f"f_{i} = {d}" for i, d in enumerate(digits)), {"q": format_poly(exp.q), "digits": digits}
    if verb == "hasse":
        g = hasse(_poly(args, fld), args.b)
        return format_poly(g), {"b": args.b, "result": format_poly(g)}
    if verb == "epsilon":
        target = Truncation(V, _q(args)) if args.q else V
        table = epsilon_table(target, _poly(args))
        lines = [f"nu(f) = {format_value(table.nu_f)}"]
        for b, v, qv in table.rows:
            lines.append(f"b={b}  nu(d_b f) = {format_value(v)}  quotient = {'-' if qv is None else format_value(qv)}")
        lines.append(f"epsilon = {table.value}")
        return "\n".join(lines), table.to_json()
    if verb == "polygon":
        f = _poly(args, fld)
        poly = newton_polygon((i, fld.value(c)) for i, c in enumerate(f.coeffs))
        segs = [{"slope": str(s), "length": n} for s, n in poly.segments]
        roots = [{"valuation": str(v), "multiplicity": n} for v, n in poly.root_valuations()]
        text = "\n".join(f"slope {s['slope']}  length {s['length']}" for s in segs) or "(single point)"
        return text, {"segments": segs, "root_valuations": roots}
    if verb == "delta":
        _require_pair(V)
        d = delta_of(V, _poly(args))
        return format_value(d), {"delta": format_value(d)}
    if verb == "keycheck":
        Q = _poly(args)
        target = Truncation(V, _q(args)) if args.q else V
        v = is_key(target, Q, coeffs=_coeffs(args, args.p))
        table = epsilon_table(target, Q)
        payload = {"verdict": v.to_json(), "epsilon_Q": table.to_json()}
        return _verdict_text(v), payload
    if verb == "minimalpair":
        _require_pair(V)
        v = is_minimal_pair(PairData.of(V))
        return _verdict_text(v), {"verdict": v.to_json()}
    if verb == "graded":
        a = analyze(Truncation(V, _q(args)), _poly(args))
        data = a.to_json()
        lines = [f"{i}: {d}  value {v}" for i, (d, v) in enumerate(zip(data["digits"], data["values"]))]
        lines.append(f"S_q = {{{', '.join(map(str, data['S_q']))}}}  delta_q = {data['delta_q']}")
        return "\n".join(lines), data
    if verb == "criteria":
        rep = criteria_report(
            Truncation(V, _q(args)), degree=args.bound_deg, coeffs=_coeffs(args, args.p), seed=args.seed,
        )
        lines = [f"({name}) holds={c['holds']} checked={c['checked']}" for name, c in rep["conditions"].items()]
        lines.append(f"is_key: {rep['key']['status']}  agreement: {rep['agrees_with_key']}")
        return "\n".join(lines), rep
    if verb == "classify":
        label, info = lab.classify(V)
        return label, {"class": label, **info}
    raise _UsageError(f"unknown verb {verb!r}")


def _require_pair(V):
    if not isinstance(V, (Monomial, Restriction)):
        raise _UsageError("this verb needs --center/--delta")


def _verdict_text(v) -> str:
    text = v.label
    if v.certificate:
        text += f" ({v.certificate})"
    if v.witness:
        text += " witness: " + json.dumps(v.witness)
    return text


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _verify(args) -> int:
    path = Path(args.scenarios)
    if not path.exists() and args.scenarios in ("paper_suite", "paper_suite.json"):
        path = lab.bundled_suite_path()
    report = lab.run_scenarios(path, seed=args.seed, timings=args.timings)
    _emit(lab.dumps(report), args.out)
    return lab.exit_code(report)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.verb == "verify":
            return _verify(args)
        text, payload = _run(args)
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    except (_UsageError, lab.ConfigError, PolySyntaxError, Reducible, UnsupportedExtension,
            DomainError, TruncationNotValuation, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    if args.json:
        out = {"schema_version": lab.SCHEMA_VERSION, "verb": args.verb, "valuation": describe(descriptor(args)[0])}
        out.update(payload)
        _emit(json.dumps(out, indent=2) + "\n", args.out)
    else:
        _emit(text + "\n", args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
