"""Command line: expand, coeffs, lvalue, constants, cm-values, verify."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction


from . import cmalg, heckechar, hyperfun as hf, lvalues as lv, suite
from ._numeric import DEFAULT_PRECISION, to_decimal_string
from .qseries import EtaQuotient, QuotientParseError


def _emit(args, payload: dict, text: str) -> None:
    if args.text:
        print(text)
    else:
        print(json.dumps(payload, ensure_ascii=False, indent=2))


def _resolve_quotient(spec: str) -> tuple[str, EtaQuotient]:
    if spec in heckechar.NAMED_FORMS:
        return spec, heckechar.NAMED_FORMS[spec].eta
    return spec, EtaQuotient.parse(spec)


def cmd_expand(args) -> int:
    name, f = _resolve_quotient(args.form)
    s = f.expand(Fraction(args.order))
    payload = s.to_json() if args.emit_series else {"form": name, **s.to_json()}
    lines = [f"{name} = " + " + ".join(f"({c})*q^{e}" for e, c in s.items()) + f" + O(q^{s.order})"]
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_coeffs(args) -> int:
    form = heckechar.form_spec(args.form)
    seq = heckechar.coefficients(form.character, args.N)
    payload = {"form": args.form, "N": args.N, "a": list(seq.values)}
    _emit(args, payload, " ".join(str(a) for a in seq.values))
    return 0


def cmd_lvalue(args) -> int:
    p = args.precision
    res = lv.lvalue(args.form, args.s, args.route, args.k, p)
    match = None
    if res.closed_form is not None:
        match = {"expression": res.closed_form,
                 "value": to_decimal_string(res.closed_form_value, p),
                 "residual": to_decimal_string(res.closed_form_residual, 5)}
    payload = {"form": res.form, "s": str(res.s), "value": to_decimal_string(res.value, p),
               "error": to_decimal_string(res.error, 5), "route": res.route.value,
               "closed_form_match": match}
    text = f"L({res.form},{res.s}) = {payload['value']}  [{res.route.value}, error <= {payload['error']}]"
    if match:
        text += f"\n  closed form {match['expression']}: residual {match['residual']}"
    _emit(args, payload, text)
    return 0


def cmd_constants(args) -> int:
    p = args.precision
    out = {}
    for d in (4, 3):
        c = hf.chowla_selberg(d, p)
        out[c.tag] = {"value": to_decimal_string(c.value, p),
                      "forms": {k: to_decimal_string(v, p) for k, v in c.forms.items()}}
    for a, b in ((Fraction(1, 4), Fraction(1, 4)), (Fraction(1, 3), Fraction(1, 3)), (Fraction(1, 2), Fraction(1, 4))):
        c = hf.beta_constant(a, b, p)
        out[c.tag] = {"value": to_decimal_string(c.value, p),
                      "forms": {k: to_decimal_string(v, p) for k, v in c.forms.items()}}
    text = "\n".join(f"{k} = {v['value']}" for k, v in out.items())
    _emit(args, {"constants": out}, text)
    return 0


def cmd_cm_values(args) -> int:
    p = args.precision
    tower = []
    for e in cmalg.solve_cm_tower(p):
        tower.append({"point": e.point, "j": str(e.j), "j_numeric": to_decimal_string(e.j_numeric, p),
                      "u": str(e.u), "u_numeric": to_decimal_string(e.u_numeric, p)})
    eta = [{"name": v.name, "expression": v.expression, "value": to_decimal_string(v.closed_form, p),
            "direct": to_decimal_string(v.direct, p)} for v in cmalg.eta_cm_values(p)]
    phi = [{"name": v.name, "expression": v.expression, "value": to_decimal_string(v.closed_form, p),
            "direct": to_decimal_string(v.direct, p)} for v in cmalg.phi_cm_values(p)]
    payload = {"j_u_tower": tower, "eta": eta, "phi": phi}
    lines = [f"j({t['point']}) = {t['j']}\n  u = {t['u']}" for t in tower]
    lines += [f"{v['name']} = {v['expression']} = {v['value']}" for v in eta + phi]
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_verify(args) -> int:
    report = suite.run(args.scope, suite.Settings(args.precision, args.order, args.N))
    if args.text:
        for c in report.checks:
            extra = f"  residual {c.residual}" if c.residual else ""
            print(f"[{c.status}] {c.name}{extra}")
        print(f"{sum(c.status == suite.PASS for c in report.checks)}/{len(report.checks)} passed"
              f" in {report.wall_time:.1f}s")
    else:
        print(json.dumps(report.to_json(), ensure_ascii=False, indent=2))
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="decimal digits (default 30)")
    common.add_argument("--order", type=int, default=60, help="q-series truncation order (default 60)")
    common.add_argument("--N", type=int, default=1000, help="coefficient bound (default 1000)")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="text", action="store_false", default=False, help="JSON output (default)")
    fmt.add_argument("--text", dest="text", action="store_true", help="plain text output")

    parser = argparse.ArgumentParser(prog="cmlvalues", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common], help="q-expansion of a named form or eta-quotient literal")
    p.add_argument("form", help='f32, g, f36, h3, h4 or a literal such as "eta(4t)^2*eta(8t)^2"')
    p.add_argument("--emit-series", action="store_true", help="print only the bare series JSON")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("coeffs", parents=[common], help="Grossencharacter coefficients of a named form")
    p.add_argument("form", choices=sorted(heckechar.NAMED_FORMS))
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("lvalue", parents=[common], help="an L-value by one route")
    p.add_argument("--form", required=True)
    p.add_argument("--s", type=Fraction, required=True, help="integer, or k/2 for chi^k")
    p.add_argument("--route", required=True, choices=[r.value for r in lv.Route])
    p.add_argument("--k", type=int, default=None, help="power of chi for the Eisenstein route")
    p.set_defaults(func=cmd_lvalue)

    p = sub.add_parser("constants", parents=[common], help="Chowla-Selberg periods and Beta values")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("cm-values", parents=[common], help="j, u, eta and phi values at the CM points")
    p.set_defaults(func=cmd_cm_values)

    p = sub.add_parser("verify", parents=[common], help="run a verification scope")
    p.add_argument("scope", nargs="?", default="all", choices=suite.SCOPES + ("all",))
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except QuotientParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
