"""The end-to-end verification registry behind ``cmlvalues verify``.

Every check produces a :class:`CheckResult`; checks are grouped by scope and
tagged with the acceptance item they belong to.  Negative controls pass when
the perturbed quantity is correctly rejected.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

import mpmath

from . import cmalg, heckechar, hyperfun as hf, lvalues as lv, qseries as qs
from ._numeric import DEFAULT_PRECISION, mpf_of, to_decimal_string, working_precision

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"
SCOPES = ("identities", "lvalues", "table1", "congruences", "cm")


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    measured: str = ""
    expected: str = ""
    residual: str = ""
    criterion: int | None = None

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "measured": self.measured,
                "expected": self.expected, "residual": self.residual, "criterion": self.criterion}


@dataclass
class SuiteReport:
    checks: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_json(self) -> dict:
        return {"checks": [c.to_json() for c in self.checks], "wall_time": f"{self.wall_time:.3f}",
                "ok": self.ok}


@dataclass(frozen=True)
class Settings:
    precision: int = DEFAULT_PRECISION
    order: int = 60
    N: int = 1000


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


def _num(x, s: Settings) -> str:
    return to_decimal_string(x, s.precision)


def _identity(check: qs.IdentityCheck, criterion=5) -> CheckResult:
    return CheckResult(check.name, _status(check.ok), "identical" if check.ok else f"mismatch at q^{check.mismatch}",
                       "identical", "0" if check.ok else str(check.mismatch), criterion)


def _relation(r: lv.RelationCheck, s: Settings, criterion: int) -> CheckResult:
    return CheckResult(r.name, _status(r.ok), _num(r.lhs, s), _num(r.rhs, s),
                       to_decimal_string(r.residual, 5), criterion)


def _close(name, measured, expected, tol, s: Settings, criterion: int, relative=True) -> CheckResult:
    with working_precision(s.precision):
        res = abs(measured - expected)
        if relative:
            res = res / abs(expected)
        return CheckResult(name, _status(res <= mpf_of(tol)), _num(measured, s), _num(expected, s),
                           to_decimal_string(res, 5), criterion)


# ---------------------------------------------------------------------------
# scopes


def identity_checks(s: Settings) -> Iterator[CheckResult]:
    o = Fraction(s.order)
    t2, t3, t4 = (qs.theta_expand(w, 1, o) for w in (2, 3, 4))
    yield _identity(qs.check_identity("theta3^4 = theta2^4 + theta4^4", t3 ** 4, t2 ** 4 + t4 ** 4, o))
    for w, t in ((2, t2), (3, t3), (4, t4)):
        c, f = qs.THETA_ETA_FORMS[w]
        yield _identity(qs.check_identity(f"theta{w} = {c if c != 1 else ''}{f}", t, qs.theta_from_eta(w, o), o))
    lam = qs.lambda_expand(o)
    yield _identity(qs.check_identity(f"1 - lambda = {qs.ONE_MINUS_LAMBDA_ETA}", 1 - lam,
                                      qs.ONE_MINUS_LAMBDA_ETA.expand(o), o))
    yield _identity(qs.lambda_derivative_check(o, lam))
    a, b, c = (qs.cubic_theta_expand(w, o) for w in "abc")
    yield _identity(qs.check_identity("a^3 = b^3 + c^3", a ** 3, b ** 3 + c ** 3, o))
    for k in range(1, 12):
        yield _identity(qs.sebbar_identity_check(k, o))
    phi, phi1 = qs.phi_expand(o)
    holo = (qs.e2_expand(3, o) - phi * phi) / 3
    rhs = qs.eisenstein_expand(2, o).series.scale(-4)
    yield _identity(qs.check_identity("(E2(3t) - phi^2)/3 = -4 sum n(q^n + q^2n)/(1 - q^3n)", holo, rhs, o))
    yield _identity(qs.check_identity("phi = (t + 3) phi1", phi, (qs.t_expand(o + 1) + 3) * phi1, o))
    order30 = min(30, s.order)
    res = cmalg.phi2_series_check(order30)
    yield _identity(qs.IdentityCheck(f"Phi2(j(t), j(2t)) = 0 to order {order30}", res == 0,
                                     res.valuation() if res != 0 else None, Fraction(order30)))
    yield _identity(qs.check_identity("j_from_u = j_from_t", cmalg.j_series_from_u(o), cmalg.j_series_from_t(o), o))
    # negative control: a perturbed lambda must break the derivative identity
    bad = lam + qs.QSeries.monomial(Fraction(7, 2), 1)
    chk = qs.lambda_derivative_check(o, bad)
    yield CheckResult("control: perturbed lambda is rejected", _status(not chk.ok),
                      f"mismatch at q^{chk.mismatch}", "mismatch", "", 5)


def coefficient_checks(s: Settings) -> Iterator[CheckResult]:
    bound = 2 * s.N
    for name in heckechar.NAMED_FORMS:
        r = heckechar.eta_equivalence(name, bound)
        yield CheckResult(f"{name}: character coefficients = eta product, n <= {bound}", _status(r.ok),
                          "equal" if r.ok else f"differ at n={r.first_mismatch}", "equal", "0", 6)


def congruence_checks(s: Settings) -> Iterator[CheckResult]:
    rep = heckechar.congruence_scan(s.N)
    for r in rep.results:
        yield CheckResult(f"a{r.form} = a2 mod {r.modulus}, n <= {s.N}", _status(r.ok),
                          "holds" if r.ok else f"fails at n={r.first_violation}", "holds", "", 7)
    bad = heckechar.congruence_scan(min(s.N, 200), perturb={(3, 7): 1})
    first = bad.results[0]
    yield CheckResult("control: perturbed a3(7) is reported", _status(first.first_violation == 7),
                      f"violation at n={first.first_violation}", "violation at n=7", "", 7)


def lvalue_checks(s: Settings) -> Iterator[CheckResult]:
    p = s.precision
    f32 = lv.lvalue_named("f32", 1, p)
    yield _close("L(f32,1) = 2^(-7/2) B(1/4,1/4)", f32.value, f32.closed_form_value, "1e-12", s, 1)
    for r in lv.c_psi_check(p):
        yield _relation(r, s, 1)
    ctl = lv.c_psi_check(p, scale=Fraction(20001, 10000))[0]
    yield CheckResult("control: 2.0001 L(f32,1)^2 = L(g,2) is flagged", _status(not ctl.ok),
                      to_decimal_string(ctl.residual, 5), "> 1e-9", "", 1)
    rels = lv.chi_relation_checks(p)
    for r in rels:
        yield _relation(r, s, 3 if "h4" in r.name else 2)
    yield _relation(lv.doubling_check(2, p), s, 2)
    yield from special_function_checks(s)


def special_function_checks(s: Settings) -> Iterator[CheckResult]:
    p = s.precision
    for a in (Fraction(1, 6), Fraction(1, 4), Fraction(1, 3), "0.37"):
        r = hf.reflection_residual(a, p)
        yield CheckResult(f"Gamma reflection at a={a}", _status(r <= mpf_of("1e-25")), "", "",
                          to_decimal_string(r, 5), 9)
    for a, m in ((Fraction(1, 4), 2), (Fraction(1, 3), 3)):
        r = hf.gamma_multiplication_residual(a, m, p)
        yield CheckResult(f"Gamma multiplication at a={a}, m={m}", _status(r <= mpf_of("1e-25")), "", "",
                          to_decimal_string(r, 5), 9)
    spec = hf.PFQSpec((Fraction(1, 6), Fraction(1, 3)), (1,), 1)
    gauss = hf.pfq_value(spec, p)
    series = hf.pfq_value(spec, p, method="series")
    yield _close("2F1(1/6,1/3;1;1): Gauss = series + extrapolation", series.value, gauss.value, "1e-8", s, 9)
    for a, b, x in ((Fraction(1, 4), Fraction(1, 4), 0), (Fraction(1, 6), Fraction(1, 3), Fraction(1, 2)),
                    (Fraction(1, 6), Fraction(1, 3), 1)):
        lhs, rhs = hf.clausen_sides(a, b, x, p)
        yield _close(f"Clausen at a={a}, b={b}, x={x}", lhs, rhs, "1e-12", s, 9)
    for x in ("0.1", "0.5", "0.9"):
        half = Fraction(1, 2)
        yield _close(f"Euler integral = series for 2F1(1/2,1/2;1;{x})", hf.euler_integral(half, half, 1, x, p),
                     hf.hyp([half, half], [1], Fraction(x), p), "1e-10", s, 9)
    rec = hf.PFQSpec((Fraction(1, 2), Fraction(1, 2), 1), (1, Fraction(5, 4)), 1)
    yield _close("3F2(1/2,1/2,1;1,5/4;1): recursive integral = cancellation + Gauss",
                 hf.recursive_integral(rec, p), hf.pfq(rec, p), "1e-12", s, 9)


def table_checks(s: Settings) -> Iterator[CheckResult]:
    for row in lv.c_chi_table(11, s.precision):
        rr = row.reconstruction
        ok = row.ok and rr.residual <= mpf_of("1e-12")
        yield CheckResult(f"C_chi,{row.k} = {row.expected}", _status(ok), str(rr.result), str(row.expected),
                          to_decimal_string(rr.residual, 5), 4)
    rr = lv.rational_reconstruct(mpmath.pi, 50, "1e-10", s.precision)
    yield CheckResult("control: pi with denominator bound 50 is not reconstructed", _status(not rr.ok),
                      f"{rr.result} ({rr.status})", "FAILED", to_decimal_string(rr.residual, 5), 4)


def cm_checks(s: Settings) -> Iterator[CheckResult]:
    p = s.precision
    j0 = cmalg.j_at_sqrt_m3()
    yield CheckResult("j(sqrt(-3)) = 54000 from Phi2(X,0) = (X-54000)^3", _status(j0 == 54000), str(j0),
                      "54000", "0", 8)
    for name, ok in cmalg.phi2_tower_relations():
        yield CheckResult(name, _status(ok), "exact" if ok else "nonzero", "0", "", 8)
    for e in cmalg.solve_cm_tower(p):
        yield CheckResult(f"j({e.point}) = {e.j}", _status(e.j_residual <= mpf_of("1e-9")),
                          _num(e.j_numeric, s), _num(e.j.numeric(), s), to_decimal_string(e.j_residual, 5), 8)
        yield CheckResult(f"u({e.point}) = {e.u}", _status(e.u_residual <= mpf_of("1e-9") and e.u_relation_exact),
                          _num(e.u_numeric, s), _num(e.u.numeric(), s), to_decimal_string(e.u_residual, 5), 8)
    for v in cmalg.eta_cm_values(p):
        yield CheckResult(f"{v.name} = {v.expression}", _status(v.ok), _num(v.direct, s), _num(v.closed_form, s),
                          to_decimal_string(v.residual, 5), 8)
    pv = cmalg.phi_cm_values(p)
    for v in pv:
        tol = "1e-12" if v is pv.t else "1e-9"
        yield _close(f"{v.name} = {v.expression}", v.direct, v.closed_form, tol, s, 8)
    with working_precision(p):
        e2 = mpmath.re(lv.e2_star(mpmath.j * mpmath.sqrt(3), p))
        yield _close("E2*(sqrt(-3)) = 2^(-8/3) B(1/3,1/3)^2/pi^2", e2, cmalg.e2_star_cm_closed_form(p),
                     "1e-9", s, 8)


REGISTRY: dict[str, tuple[Callable[[Settings], Iterator[CheckResult]], ...]] = {
    "identities": (identity_checks,),
    "lvalues": (lvalue_checks,),
    "table1": (table_checks,),
    "congruences": (coefficient_checks, congruence_checks),
    "cm": (cm_checks,),
}


def run(scope: str = "all", settings: Settings | None = None) -> SuiteReport:
    settings = settings or Settings()
    scopes = SCOPES if scope == "all" else (scope,)
    if any(sc not in REGISTRY for sc in scopes):
        raise ValueError(f"unknown scope {scope!r}; expected one of {SCOPES + ('all',)}")
    start = time.perf_counter()
    report = SuiteReport()
    for sc in scopes:
        for producer in REGISTRY[sc]:
            report.checks.extend(producer(settings))
    report.wall_time = time.perf_counter() - start
    return report
