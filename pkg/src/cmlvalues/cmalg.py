"""CM algebra at the points sqrt(-3) * 2^m: modular polynomial, j/u/t relations,
exact j and u values in Q(sqrt 2, sqrt 3), and the eta and phi values at
``tau0 = i/sqrt(3)``.

Values are held exactly in Q(sqrt 2, sqrt 3) wherever they are algebraic, so
that polynomial relations among them are checked without rounding; radicals
of positive field elements are kept as (base, exponent) pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Mapping

import mpmath

from ._numeric import DEFAULT_PRECISION, mpf_of, tolerance, working_precision
from .qseries import EtaQuotient, QSeries, T_ETA, evaluate_series, phi_expand

# ---------------------------------------------------------------------------
# exact arithmetic in Q(sqrt 2, sqrt 3)

_BASIS = (1, 2, 3, 6)


class QSqrt23:
    """``c1 + c2 sqrt2 + c3 sqrt3 + c6 sqrt6`` with rational ``c``."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Mapping[int, object] | int | Fraction = 0):
        if not isinstance(coeffs, Mapping):
            coeffs = {1: coeffs}
        c = {}
        for d, v in coeffs.items():
            if d not in _BASIS:
                raise ValueError(f"sqrt({d}) is not in the basis 1, sqrt2, sqrt3, sqrt6")
            v = Fraction(v)
            if v:
                c[d] = v
        self.c = c

    @classmethod
    def of(cls, r=0, s2=0, s3=0, s6=0) -> "QSqrt23":
        return cls({1: r, 2: s2, 3: s3, 6: s6})

    def __add__(self, other) -> "QSqrt23":
        other = _lift(other)
        out = dict(self.c)
        for d, v in other.c.items():
            out[d] = out.get(d, 0) + v
        return QSqrt23(out)

    __radd__ = __add__

    def __neg__(self) -> "QSqrt23":
        return QSqrt23({d: -v for d, v in self.c.items()})

    def __sub__(self, other) -> "QSqrt23":
        return self + (-_lift(other))

    def __rsub__(self, other) -> "QSqrt23":
        return _lift(other) - self

    def __mul__(self, other) -> "QSqrt23":
        other = _lift(other)
        out: dict[int, Fraction] = {}
        for d1, v1 in self.c.items():
            for d2, v2 in other.c.items():
                g = gcd(d1, d2)
                d = d1 * d2 // (g * g)
                out[d] = out.get(d, 0) + v1 * v2 * g
        return QSqrt23(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QSqrt23":
        out = QSqrt23(1)
        for _ in range(int(k)):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        try:
            return not (self - _lift(other)).c
        except TypeError:
            return NotImplemented

    __hash__ = None

    def is_rational(self) -> bool:
        return set(self.c) <= {1}

    def numeric(self) -> mpmath.mpf:
        return mpmath.fsum(mpf_of(v) * mpmath.sqrt(d) for d, v in self.c.items())

    def __str__(self) -> str:
        if not self.c:
            return "0"
        parts = []
        for d in _BASIS:
            if d in self.c:
                v = self.c[d]
                parts.append(str(v) if d == 1 else f"{v}*sqrt({d})")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"QSqrt23({self})"


def _lift(x) -> QSqrt23:
    if isinstance(x, QSqrt23):
        return x
    if isinstance(x, (int, Fraction)):
        return QSqrt23(x)
    raise TypeError(f"cannot use {type(x).__name__} in Q(sqrt2, sqrt3)")


@dataclass(frozen=True)
class AlgebraicValue:
    """``prod base_i ^ exponent_i`` with positive bases in Q(sqrt 2, sqrt 3)."""

    factors: tuple

    @classmethod
    def exact(cls, x) -> "AlgebraicValue":
        return cls(((_lift(x), Fraction(1)),))

    def __post_init__(self):
        norm = []
        for base, e in self.factors:
            base, e = _lift(base), Fraction(e)
            if e.denominator != 1:
                with working_precision(DEFAULT_PRECISION + 30):
                    if base.numeric() <= 0:
                        raise ValueError(f"radicand {base} is not positive")
            norm.append((base, e))
        object.__setattr__(self, "factors", tuple(norm))

    def __mul__(self, other: "AlgebraicValue") -> "AlgebraicValue":
        return AlgebraicValue(self.factors + other.factors)

    @property
    def field_element(self) -> QSqrt23 | None:
        """The value as an exact field element when every exponent is a non-negative integer."""
        out = QSqrt23(1)
        for base, e in self.factors:
            if e.denominator != 1 or e < 0:
                return None
            out = out * base ** int(e)
        return out

    def numeric(self, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
        # extra digits: some table entries cancel about 18 digits
        with working_precision(precision + 30):
            out = mpmath.mpf(1)
            for base, e in self.factors:
                out *= base.numeric() ** mpf_of(e)
            return out

    def expression(self) -> str:
        parts = []
        for base, e in self.factors:
            b = str(base)
            if not base.is_rational() or b.startswith("-"):
                b = f"({b})"
            parts.append(b if e == 1 else f"{b}^({e})")
        return "*".join(parts) if parts else "1"

    def __str__(self) -> str:
        return self.expression()


# ---------------------------------------------------------------------------
# modular polynomial and Hauptmoduln

PHI2: dict[tuple[int, int], int] = {
    (3, 0): 1, (0, 3): 1, (2, 2): -1,
    (1, 2): 1488, (2, 1): 1488,
    (2, 0): -162000, (0, 2): -162000,
    (1, 1): 40773375,
    (1, 0): 8748000000, (0, 1): 8748000000,
    (0, 0): -157464000000000,
}


def phi2_modular_polynomial() -> dict[tuple[int, int], int]:
    """Coefficients of ``Phi_2(X, Y)`` keyed by ``(deg_X, deg_Y)``."""
    return dict(PHI2)


def phi2_eval(x, y):
    """``Phi_2(x, y)`` for any ring elements supporting + and * (ints, series, field elements)."""
    total = 0
    xp = {0: 1}
    yp = {0: 1}
    for i in range(1, 4):
        xp[i] = xp[i - 1] * x
        yp[i] = yp[i - 1] * y
    for (i, j), c in PHI2.items():
        total = total + xp[i] * yp[j] * c
    return total


def phi2_specialize(y) -> list:
    """Coefficients (constant first) of ``Phi_2(X, y)`` as a polynomial in ``X``."""
    out = [0, 0, 0, 0]
    for (i, j), c in PHI2.items():
        out[i] = out[i] + c * y ** j
    return out


def poly_mul(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def j_from_u(u):
    """``j = (1 + 256 u)^3 / u`` for a number or a :class:`QSeries`."""
    return (1 + 256 * u) ** 3 / u


def j_from_t(t):
    """``j = (t+3)^3 (t+9)^3 (t^2+27)^3 / (t^3 (t^2+9t+27)^3)``."""
    num = (t + 3) ** 3 * (t + 9) ** 3 * (t * t + 27) ** 3
    den = t ** 3 * (t * t + 9 * t + 27) ** 3
    return num / den


U_ETA = EtaQuotient.of((2, 24), (1, -24))


def u_expand(order=60) -> QSeries:
    return U_ETA.expand(order)


def j_series_from_u(order=60) -> QSeries:
    """q-expansion of j through ``u = (eta(2t)/eta(t))^24``, exact below ``q^order``."""
    # 1/u costs one order; expand u a little further
    u = u_expand(order + 2)
    return j_from_u(u).truncate(order)


def j_series_from_t(order=60) -> QSeries:
    """q-expansion of j through ``t = eta(t/3)^3/eta(3t)^3``, exact below ``q^order``."""
    t = T_ETA.expand(order + 2)
    return j_from_t(t).truncate(order)


def phi2_series_check(order=30) -> QSeries:
    """``Phi_2(j(tau), j(2 tau))`` as a q-series, exact below ``q^order`` (should vanish)."""
    # the poles q^-1 and q^-2 cost six orders in the degree-(2,2) term
    j = j_series_from_u(order + 8)
    return phi2_eval(j, j.rescale(2)).truncate(order)


# ---------------------------------------------------------------------------
# numerics at points of the upper half-plane


def u_numeric(tau, precision: int = DEFAULT_PRECISION):
    with working_precision(precision):
        return evaluate_series(U_ETA, tau, precision).value


def j_numeric(tau, precision: int = DEFAULT_PRECISION):
    with working_precision(precision):
        return j_from_u(u_numeric(tau, precision))


def t_numeric(tau, precision: int = DEFAULT_PRECISION):
    with working_precision(precision):
        return evaluate_series(T_ETA, tau, precision).value


def _sqrt_m3(scale: Fraction):
    return mpmath.j * mpmath.sqrt(3) * mpf_of(scale)


# ---------------------------------------------------------------------------
# the tower sqrt(-3)/4, sqrt(-3)/2, sqrt(-3), 2 sqrt(-3)

# keys: the point as a rational multiple of sqrt(-3)
J_TABLE: dict[Fraction, QSqrt23] = {
    Fraction(1): QSqrt23.of(54000),
    Fraction(2): QSqrt23.of(1417905000, s3=818626500),
    Fraction(1, 2): QSqrt23.of(1417905000, s3=-818626500),
    Fraction(1, 4): QSqrt23.of(2010450259344609000, s2=-1421603011620136125,
                               s3=-1160733998424384000, s6=820762881440077125),
}

U_TABLE: dict[Fraction, QSqrt23] = {
    Fraction(1): QSqrt23.of(Fraction(13, 512), s3=Fraction(-15, 1024)),
    Fraction(2): QSqrt23.of(Fraction(-1667, 512), s2=Fraction(9405, 4096),
                            s3=Fraction(-15, 8), s6=Fraction(5445, 4096)),
    Fraction(1, 2): QSqrt23.of(Fraction(13, 2), s3=Fraction(-15, 4)),
    Fraction(1, 4): QSqrt23.of(173084, s2=Fraction(-489555, 4), s3=-99930, s6=Fraction(282645, 4)),
}


def point_name(scale: Fraction) -> str:
    scale = Fraction(scale)
    if scale == 1:
        return "sqrt(-3)"
    if scale.denominator == 1:
        return f"{scale}*sqrt(-3)"
    if scale.numerator == 1:
        return f"sqrt(-3)/{scale.denominator}"
    return f"{scale}*sqrt(-3)"


def j_at_sqrt_m3() -> int:
    """``j(sqrt(-3))`` from ``Phi_2(X, 0) = (X - 54000)^3`` and ``j(zeta3) = 0``."""
    coeffs = phi2_specialize(0)
    root = 54000
    expected = poly_mul(poly_mul([-root, 1], [-root, 1]), [-root, 1])
    if coeffs != expected:
        raise ArithmeticError("Phi_2(X, 0) is not a perfect cube")
    return root


@dataclass(frozen=True)
class TowerEntry:
    point: str
    scale: Fraction
    j: QSqrt23
    u: QSqrt23
    j_numeric: mpmath.mpf
    j_candidates: tuple
    j_residual: mpmath.mpf
    u_numeric: mpmath.mpf
    u_residual: mpmath.mpf
    u_relation_exact: bool

    @property
    def ok(self) -> bool:
        return self.u_relation_exact and self.j_residual <= mpmath.mpf("1e-9") \
            and self.u_residual <= mpmath.mpf("1e-9")


def _roots_numeric(coeffs: list) -> list:
    cs = [c.numeric() if isinstance(c, QSqrt23) else mpf_of(c) for c in coeffs]
    return mpmath.polyroots(list(reversed(cs)), maxsteps=200, extraprec=200)


def _select_root(candidates, target, rel_tol="1e-6"):
    best = min(candidates, key=lambda r: abs(r - target))
    if abs(best - target) > mpf_of(rel_tol) * max(1, abs(target)):
        raise ArithmeticError(f"no root of the modular polynomial within tolerance of {target}")
    return best


def solve_cm_tower(precision: int = DEFAULT_PRECISION) -> list[TowerEntry]:
    """j and u at sqrt(-3) * {1, 2, 1/2, 1/4}.

    Going up or down the 2-isogeny tower, the roots of ``Phi_2(X, j_known)``
    are computed numerically and the one nearest to a direct evaluation of j
    is kept; the tabulated closed form must then be an exact root (checked in
    Q(sqrt 2, sqrt 3)) and agree with the selected root and with the
    numerics.  The tabulated u must satisfy ``j u = (1 + 256 u)^3`` exactly.
    """
    j0 = j_at_sqrt_m3()
    steps = [(Fraction(1), None), (Fraction(2), Fraction(1)), (Fraction(1, 2), Fraction(1)),
             (Fraction(1, 4), Fraction(1, 2))]
    out = []
    with working_precision(precision + 30):
        for scale, parent in steps:
            tau = _sqrt_m3(scale)
            jn = mpmath.re(j_numeric(tau, precision + 30))
            jt = J_TABLE[scale]
            if parent is None:
                cands = (mpf_of(j0),)
                if jt != j0:
                    raise ArithmeticError("table value of j(sqrt(-3)) disagrees with Phi_2(X, 0)")
            else:
                poly = phi2_specialize(J_TABLE[parent])
                if phi2_eval(jt, J_TABLE[parent]) != 0:
                    raise ArithmeticError(f"tabulated j({point_name(scale)}) is not a root of Phi_2")
                cands = tuple(mpmath.re(r) for r in _roots_numeric(poly))
            chosen = _select_root(cands, jn)
            tab = jt.numeric()
            j_res = max(abs(tab - jn), abs(tab - chosen)) / abs(jn)
            ut = U_TABLE[scale]
            un = mpmath.re(u_numeric(tau, precision + 30))
            u_res = abs(ut.numeric() - un) / abs(un)
            rel = jt * ut == (1 + 256 * ut) ** 3
            out.append(TowerEntry(point_name(scale), scale, jt, ut, jn, cands, j_res, un, u_res, rel))
    return out


def phi2_tower_relations() -> list[tuple[str, bool]]:
    """``Phi_2(j(tau), j(2 tau)) = 0`` exactly for consecutive points of the tower."""
    pairs = [(Fraction(1, 4), Fraction(1, 2)), (Fraction(1, 2), Fraction(1)), (Fraction(1), Fraction(2))]
    return [(f"Phi2(j({point_name(a)}), j({point_name(b)})) = 0", phi2_eval(J_TABLE[a], J_TABLE[b]) == 0)
            for a, b in pairs]


# ---------------------------------------------------------------------------
# eta and phi at tau0 = i/sqrt(3)


@dataclass(frozen=True)
class CMValue:
    """A closed form at the CM point next to a direct numerical evaluation."""

    name: str
    expression: str
    closed_form: mpmath.mpf
    direct: mpmath.mpf
    residual: mpmath.mpf
    algebraic: AlgebraicValue | None = None

    @property
    def ok(self) -> bool:
        return self.residual <= mpmath.mpf("1e-9")


def eta_tau0_closed_form(precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """``eta(i/sqrt 3) = 3^(3/8) Gamma(1/3)^(3/2) / (2^(1/3) 2 pi)``."""
    with working_precision(precision):
        return mpmath.mpf(3) ** (mpmath.mpf(3) / 8) * mpmath.gamma(mpmath.mpf(1) / 3) ** (mpmath.mpf(3) / 2) \
            / (mpmath.cbrt(2) * 2 * mpmath.pi)


# eta(m tau0) = ratio * eta(base tau0)
ETA_RATIOS: dict[int, tuple[int, AlgebraicValue]] = {
    2: (1, AlgebraicValue(((QSqrt23.of(104, s3=60), Fraction(1, 24)), (QSqrt23.of(2), Fraction(-1, 2))))),
    3: (1, AlgebraicValue(((QSqrt23.of(3), Fraction(-1, 4)),))),
    4: (1, AlgebraicValue(((QSqrt23.of(-4544, s2=1980, s3=-1440, s6=1980), Fraction(1, 24)),
                           (QSqrt23.of(2), Fraction(-1)),))),
    6: (3, AlgebraicValue(((QSqrt23.of(-5, s3=3), Fraction(1, 12)), (QSqrt23.of(2), Fraction(-11, 24))))),
    12: (3, AlgebraicValue(((QSqrt23.of(-1136, s2=-495, s3=360, s6=495), Fraction(1, 24)),
                            (QSqrt23.of(2), Fraction(-11, 12))))),
}


def eta_cm_values(precision: int = DEFAULT_PRECISION) -> list[CMValue]:
    """The six values ``eta(m tau0)``, ``m`` in {1, 2, 3, 4, 6, 12}."""
    out = []
    with working_precision(precision):
        tau0 = mpmath.j / mpmath.sqrt(3)
        closed = {1: eta_tau0_closed_form(precision)}
        direct = {m: mpmath.re(evaluate_series(EtaQuotient.of((m, 1)), tau0, precision).value)
                  for m in (1, 2, 3, 4, 6, 12)}
        out.append(CMValue("eta(tau0)", "3^(3/8)*Gamma(1/3)^(3/2)/(2^(1/3)*2*pi)", closed[1], direct[1],
                           abs(closed[1] - direct[1]) / direct[1]))
        for m in (2, 3, 4, 6, 12):
            base, ratio = ETA_RATIOS[m]
            closed[m] = ratio.numeric(precision) * closed[base]
            base_name = "eta(tau0)" if base == 1 else "eta(3*tau0)"
            out.append(CMValue(f"eta({m}*tau0)", f"{ratio.expression()}*{base_name}", closed[m], direct[m],
                               abs(closed[m] - direct[m]) / direct[m], ratio))
    return out


def eta_inversion_checks(precision: int = DEFAULT_PRECISION) -> list[tuple[str, mpmath.mpf]]:
    """Residuals of ``eta(-1/tau) = sqrt(tau/i) eta(tau)`` at ``tau = m tau0``."""
    out = []
    with working_precision(precision):
        tau0 = mpmath.j / mpmath.sqrt(3)
        for m in (1, 2, 3, 4, 6, 12):
            tau = m * tau0
            eta = EtaQuotient.of((1, 1))
            lhs = evaluate_series(eta, -1 / tau, precision).value
            rhs = mpmath.sqrt(tau / mpmath.j) * evaluate_series(eta, tau, precision).value
            out.append((f"eta(-1/({m} tau0))", abs(lhs - rhs) / abs(rhs)))
    return out


@dataclass(frozen=True)
class PhiValues:
    t: CMValue
    phi: CMValue
    phi1: CMValue
    phi_assembled: CMValue
    phi1_from_eta: CMValue

    def __iter__(self):
        return iter((self.t, self.phi, self.phi1, self.phi_assembled, self.phi1_from_eta))


def phi_cm_values(precision: int = DEFAULT_PRECISION) -> PhiValues:
    """``phi(tau0)``, ``phi1(tau0)`` and ``t(tau0)``.

    Closed forms: ``phi = sqrt3/(2 pi) 2^(-1/3) B``, ``phi1 = B/(2^(2/3) sqrt3 2 pi)``
    with ``B = B(1/3,1/3)``, and ``t = 3(2^(1/3) - 1)``.  Direct values come
    from the theta series; phi1 is also evaluated as ``(phi(tau0/3) - phi(tau0))/6``.
    """
    with working_precision(precision):
        tau0 = mpmath.j / mpmath.sqrt(3)
        B = mpmath.beta(mpmath.mpf(1) / 3, mpmath.mpf(1) / 3)
        s3 = mpmath.sqrt(3)
        phi_c = s3 / (2 * mpmath.pi) / mpmath.cbrt(2) * B
        phi1_c = B / (mpmath.cbrt(4) * s3 * 2 * mpmath.pi)
        t_c = 3 * (mpmath.cbrt(2) - 1)
        digits = precision + 20
        # phi(tau0/3) needs |q|^(1/3)-convergence
        order = int(3 * digits * mpmath.log(10) / (2 * mpmath.pi / s3)) + 10
        phi_s, _ = phi_expand(order)
        grow = (12, 2)
        phi_d = mpmath.re(evaluate_series(phi_s, tau0, precision, grow).value)
        phi_third = mpmath.re(evaluate_series(phi_s, tau0 / 3, precision, grow).value)
        phi1_d = (phi_third - phi_d) / 6
        t_d = mpmath.re(evaluate_series(T_ETA, tau0, precision).value)
        rel = lambda a, b: abs(a - b) / abs(b)
        assembled = (t_c + 3) * phi1_c
        # phi1 = eta(3t)^3/eta(t) and eta(3 tau0) = 3^(-1/4) eta(tau0)
        phi1_eta = mpmath.mpf(3) ** (-mpmath.mpf(3) / 4) * eta_tau0_closed_form(precision) ** 2
        return PhiValues(
            CMValue("t(tau0)", "3*(2^(1/3) - 1)", t_c, t_d, rel(t_c, t_d)),
            CMValue("phi(tau0)", "sqrt(3)/(2*pi)*2^(-1/3)*B(1/3,1/3)", phi_c, phi_d, rel(phi_c, phi_d)),
            CMValue("phi1(tau0)", "B(1/3,1/3)/(2^(2/3)*sqrt(3)*2*pi)", phi1_c, phi1_d, rel(phi1_c, phi1_d)),
            CMValue("phi(tau0) via (t+3)*phi1", "(t(tau0)+3)*phi1(tau0)", assembled, phi_d,
                    rel(assembled, phi_d)),
            CMValue("phi1(tau0) via eta values", "eta(3*tau0)^3/eta(tau0)", phi1_eta, phi1_d,
                    rel(phi1_eta, phi1_d)),
        )


def e2_star_cm_closed_form(precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """``E2*(sqrt(-3)) = 2^(-8/3) B(1/3,1/3)^2 / pi^2``."""
    with working_precision(precision):
        B = mpmath.beta(mpmath.mpf(1) / 3, mpmath.mpf(1) / 3)
        return mpmath.mpf(2) ** (-mpmath.mpf(8) / 3) * B ** 2 / mpmath.pi ** 2


def special_u_values(precision: int = DEFAULT_PRECISION) -> list[tuple[str, mpmath.mpc, Fraction]]:
    """u(i) = 1/512 and u(zeta3) = -1/256 against direct evaluation."""
    with working_precision(precision):
        zeta3 = mpmath.mpc(-0.5, mpmath.sqrt(3) / 2)
        return [("u(i)", u_numeric(mpmath.j, precision), Fraction(1, 512)),
                ("u(zeta3)", u_numeric(zeta3, precision), Fraction(-1, 256))]
