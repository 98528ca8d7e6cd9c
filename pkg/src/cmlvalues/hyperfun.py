"""Gamma, Beta and generalized hypergeometric values at high precision.

Gamma itself comes from mpmath.  The hypergeometric evaluator is our own:
plain summation below 1 with a ratio-test tail bound, and at ``x = 1`` Gauss
summation, parameter cancellation or Richardson extrapolation of the partial
sums, in that order of preference.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import mpmath

from ._numeric import DEFAULT_PRECISION, mpf_of, tolerance, working_precision


class DivergenceError(ValueError):
    """The hypergeometric series diverges at the requested argument."""


class SlowConvergenceWarning(UserWarning):
    """Summation hit its term budget before reaching the requested accuracy."""


# only needed as a cross-check, the primary routes at x = 1 are closed forms
TERM_BUDGET = 10 ** 6


def _param(v):
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    return v


def _is_nonpositive_integer(v) -> bool:
    if isinstance(v, Fraction):
        return v.denominator == 1 and v <= 0
    v = mpmath.mpf(v)
    return v <= 0 and v == int(v)


@dataclass(frozen=True)
class PFQSpec:
    """``{}_{n+1}F_n(upper; lower; x)`` with real ``x`` in ``[0, 1]``."""

    upper: tuple
    lower: tuple
    x: object = Fraction(1)

    def __post_init__(self):
        upper = tuple(_param(a) for a in self.upper)
        lower = tuple(_param(b) for b in self.lower)
        x = _param(self.x)
        if len(upper) != len(lower) + 1:
            raise ValueError("need exactly one more upper than lower parameter")
        for b in lower:
            if _is_nonpositive_integer(b):
                raise ValueError(f"lower parameter {b} is a non-positive integer")
        if not 0 <= x <= 1:
            raise ValueError("argument must lie in [0, 1]")
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "x", x)

    @property
    def excess(self):
        """``sum(lower) - sum(upper)``; the series converges at 1 iff this is positive."""
        return sum(self.lower) - sum(self.upper)

    @property
    def terminating(self) -> bool:
        return any(_is_nonpositive_integer(a) for a in self.upper)

    def __str__(self) -> str:
        p, q = len(self.upper), len(self.lower)
        up = ",".join(str(a) for a in self.upper)
        lo = ",".join(str(b) for b in self.lower)
        return f"{p}F{q}({up};{lo};{self.x})"


class PFQValue(NamedTuple):
    value: mpmath.mpf
    error: mpmath.mpf
    method: str


# ---------------------------------------------------------------------------
# Gamma and Beta


def gamma(x, precision: int = DEFAULT_PRECISION):
    """Gamma function; raises ``ValueError`` at the poles."""
    with working_precision(precision):
        x = mpf_of(x) if isinstance(x, Fraction) else mpmath.mpmathify(x)
        if mpmath.im(x) == 0 and _is_nonpositive_integer(mpmath.re(x)):
            raise ValueError(f"Gamma has a pole at {x}")
        return +mpmath.gamma(x)


def beta(a, b, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    with working_precision(precision):
        a, b = mpf_of(a), mpf_of(b)
        return mpmath.gamma(a) * mpmath.gamma(b) / mpmath.gamma(a + b)


def beta_integral(a, b, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """``B(a, b)`` by quadrature, split at 1/2 with ``t = u^(1/a)`` and ``1 - t = v^(1/b)``.

    The substitutions absorb both endpoint powers, so the integrands stay bounded.
    """
    with working_precision(precision):
        a, b = mpf_of(a), mpf_of(b)
        h = mpmath.mpf(1) / 2
        left = mpmath.quad(lambda u: (1 - u ** (1 / a)) ** (b - 1), [0, h ** a]) / a
        right = mpmath.quad(lambda v: (1 - v ** (1 / b)) ** (a - 1), [0, h ** b]) / b
        return left + right


def reflection_residual(a, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """``|Gamma(a) Gamma(1-a) - pi / sin(pi a)|``."""
    with working_precision(precision):
        a = mpf_of(a)
        return abs(mpmath.gamma(a) * mpmath.gamma(1 - a) - mpmath.pi / mpmath.sin(mpmath.pi * a))


def reflection_check(a, precision: int = DEFAULT_PRECISION, tol=None) -> bool:
    tol = tolerance(precision - 2) if tol is None else tol
    return reflection_residual(a, precision) <= tol


def gamma_multiplication_residual(a, m: int, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """Relative residual of ``prod_j Gamma(a + j/m) = (2 pi)^((m-1)/2) m^(1/2 - m a) Gamma(m a)``."""
    with working_precision(precision):
        a = mpf_of(a)
        m = int(m)
        lhs = mpmath.fprod(mpmath.gamma(a + mpmath.mpf(j) / m) for j in range(m))
        rhs = (2 * mpmath.pi) ** (mpmath.mpf(m - 1) / 2) * mpmath.mpf(m) ** (mpmath.mpf(1) / 2 - m * a) \
            * mpmath.gamma(m * a)
        return abs(lhs - rhs) / abs(rhs)


def gamma_multiplication_check(a, m: int, precision: int = DEFAULT_PRECISION, tol=None) -> bool:
    tol = tolerance(precision - 2) if tol is None else tol
    return gamma_multiplication_residual(a, m, precision) <= tol


# ---------------------------------------------------------------------------
# closed-form constants


@dataclass(frozen=True)
class ClosedFormConstant:
    """A Gamma-monomial constant with equivalent closed forms evaluated side by side."""

    tag: str
    parameters: tuple
    value: mpmath.mpf
    forms: dict = field(default_factory=dict, compare=False)

    def spread(self) -> mpmath.mpf:
        """Largest relative disagreement between the recorded forms."""
        vals = [self.value, *self.forms.values()]
        return max(abs(v - self.value) for v in vals) / abs(self.value)


def chowla_selberg(d: int, precision: int = DEFAULT_PRECISION) -> ClosedFormConstant:
    """The period ``b_K`` of ``Q(sqrt(-d))`` for ``d`` in {3, 4}."""
    with working_precision(precision):
        G = mpmath.gamma
        half = G(mpmath.mpf(1) / 2)
        if d == 4:
            g4 = G(mpmath.mpf(1) / 4)
            value = half * g4 / G(mpmath.mpf(3) / 4)
            forms = {
                "sqrt2/(2pi)*Gamma(1/2)*Gamma(1/4)^2": mpmath.sqrt(2) / (2 * mpmath.pi) * half * g4 ** 2,
                "B(1/2,1/4)": beta(Fraction(1, 2), Fraction(1, 4), precision),
            }
        elif d == 3:
            g3 = G(mpmath.mpf(1) / 3)
            value = half * (g3 / G(mpmath.mpf(2) / 3)) ** (mpmath.mpf(3) / 2)
            forms = {
                "(3/4)^(3/4)*Gamma(1/3)^3/pi": (mpmath.mpf(3) / 4) ** (mpmath.mpf(3) / 4) * g3 ** 3 / mpmath.pi,
                "(3/4)^(1/4)*B(1/3,1/3)": (mpmath.mpf(3) / 4) ** (mpmath.mpf(1) / 4)
                * beta(Fraction(1, 3), Fraction(1, 3), precision),
            }
        else:
            raise ValueError("only d = 3 and d = 4 are supported")
        return ClosedFormConstant(f"b_K({d})", (d,), value, forms)


def beta_constant(a, b, precision: int = DEFAULT_PRECISION) -> ClosedFormConstant:
    with working_precision(precision):
        return ClosedFormConstant(f"B({a},{b})", (Fraction(a), Fraction(b)), beta(a, b, precision),
                                  {"quadrature": beta_integral(a, b, precision)})


# ---------------------------------------------------------------------------
# hypergeometric series


def _term_ratio(upper, lower, x, n):
    r = mpmath.mpf(x) / (n + 1)
    for a in upper:
        r *= a + n
    for b in lower:
        r /= b + n
    return r


def _sum_below_one(upper, lower, x, eps) -> tuple:
    """Direct summation; the tail after term ``t_n`` is at most ``|t_n| rho / (1 - rho)``."""
    big = max([abs(p) for p in (*upper, *lower)] + [1])
    s = mpmath.mpf(1)
    t = mpmath.mpf(1)
    n = 0
    while True:
        t *= _term_ratio(upper, lower, x, n)
        n += 1
        s += t
        if t == 0:
            return s, mpmath.mpf(0)
        if n > 2 * big + 2:
            rho = max(abs(_term_ratio(upper, lower, x, n)), x)
            if rho < 1:
                tail = abs(t) * rho / (1 - rho)
                if tail <= eps * abs(s):
                    return s, tail
        if n > TERM_BUDGET:
            raise DivergenceError("term budget exhausted below x = 1")


def _richardson_at_one(upper, lower, delta, eps, k0=64, window=10) -> tuple:
    """Partial sums at ``K = k0 * 2^j`` extrapolated in powers ``K^-(delta + i)``.

    The tail of a convergent series at 1 has an asymptotic expansion in
    ``K^-(delta+i)``, ``i = 0, 1, ...``, so repeated Richardson elimination
    applies.  Only the last ``window`` checkpoints are combined: the
    expansion is asymptotic, and small ``K`` would poison high levels.
    """
    s = mpmath.mpf(1)
    t = mpmath.mpf(1)
    n = 0
    sums: list = []
    checkpoint = k0
    best, err = None, mpmath.inf
    prev_cand = None
    while checkpoint <= TERM_BUDGET:
        while n < checkpoint:
            t *= _term_ratio(upper, lower, 1, n)
            n += 1
            s += t
        sums.append(s)
        level = sums[-window:]
        prev_level = None
        i = 0
        while len(level) > 1:
            f = mpmath.mpf(2) ** (delta + i)
            prev_level = level
            level = [(f * level[j + 1] - level[j]) / (f - 1) for j in range(len(level) - 1)]
            i += 1
        cand = level[0]
        if prev_level is not None and prev_cand is not None:
            e = max(abs(cand - prev_level[-1]), abs(cand - prev_cand))
            if e < err:
                best, err = cand, e
            if err <= eps * abs(cand):
                return best, err
        prev_cand = cand
        checkpoint *= 2
    warnings.warn(f"series at 1 reached the {TERM_BUDGET}-term budget with estimated "
                  f"error {mpmath.nstr(err, 3)}", SlowConvergenceWarning, stacklevel=3)
    return best, err


def _cancel_shared(spec: PFQSpec) -> PFQSpec | None:
    lower = list(spec.lower)
    for i, a in enumerate(spec.upper):
        if a in lower:
            lower.remove(a)
            return PFQSpec(spec.upper[:i] + spec.upper[i + 1:], tuple(lower), spec.x)
    return None


def pfq_value(spec: PFQSpec, precision: int = DEFAULT_PRECISION, method: str = "auto") -> PFQValue:
    """Evaluate with an error estimate.

    ``method="auto"`` prefers closed forms at ``x = 1``; ``method="series"``
    forces summation (with extrapolation at 1) so that the two can be compared.
    """
    if method not in ("auto", "series"):
        raise ValueError("method must be 'auto' or 'series'")
    with working_precision(precision):
        eps = tolerance(precision + 5)
        if spec.x == 1 and not spec.terminating and spec.excess <= 0:
            raise DivergenceError(f"{spec} diverges: sum(lower) - sum(upper) = {spec.excess} <= 0")
        if method == "auto":
            reduced = _cancel_shared(spec)
            if reduced is not None:
                v = pfq_value(reduced, precision, method)
                return PFQValue(v.value, v.error, "cancel+" + v.method)
        upper = [mpf_of(a) for a in spec.upper]
        lower = [mpf_of(b) for b in spec.lower]
        if spec.x != 1 or spec.terminating:
            s, err = _sum_below_one(upper, lower, mpf_of(spec.x), eps)
            return PFQValue(s, err, "series")
        if method == "auto" and len(upper) == 2:
            (a, b), (c,) = upper, lower
            G = mpmath.gamma
            v = G(c) * G(c - a - b) / (G(c - a) * G(c - b))
            return PFQValue(v, abs(v) * tolerance(precision + 5), "gauss")
        # extrapolation cannot reach guard digits; aim for the requested precision
        s, err = _richardson_at_one(upper, lower, mpf_of(spec.excess), tolerance(precision))
        return PFQValue(s, err, "series+richardson")


def pfq(spec: PFQSpec, precision: int = DEFAULT_PRECISION, method: str = "auto") -> mpmath.mpf:
    return pfq_value(spec, precision, method).value


def hyp(upper: Sequence, lower: Sequence, x=1, precision: int = DEFAULT_PRECISION,
        method: str = "auto") -> mpmath.mpf:
    """Shorthand: ``hyp([a, b], [c], x)`` is 2F1(a, b; c; x)."""
    return pfq(PFQSpec(tuple(upper), tuple(lower), x), precision, method)


def clausen_sides(a, b, x, precision: int = DEFAULT_PRECISION) -> tuple:
    """``2F1(a,b;a+b+1/2;x)^2`` and ``3F2(2a,2b,a+b;2a+2b,a+b+1/2;x)``."""
    a, b = Fraction(a), Fraction(b)
    with working_precision(precision):
        lhs = hyp([a, b], [a + b + Fraction(1, 2)], x, precision) ** 2
        rhs = hyp([2 * a, 2 * b, a + b], [2 * a + 2 * b, a + b + Fraction(1, 2)], x, precision)
        return lhs, rhs


def clausen_check(a, b, x, precision: int = DEFAULT_PRECISION, tol=Fraction(1, 10 ** 12)) -> bool:
    lhs, rhs = clausen_sides(a, b, x, precision)
    with working_precision(precision):
        return abs(lhs - rhs) <= mpf_of(tol) * max(1, abs(rhs))


def euler_integral(a, b, c, x, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """2F1(a,b;c;x) from its Euler integral; needs ``c > b > 0`` and ``x < 1``."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if not c > b > 0:
        raise ValueError("Euler integral needs c > b > 0")
    with working_precision(precision):
        A, B, C, X = mpf_of(a), mpf_of(b), mpf_of(c), mpf_of(x)
        if X >= 1:
            raise ValueError("Euler integral route needs x < 1")
        s, co = mpmath.sin, mpmath.cos
        f = lambda th: s(th) ** (2 * B - 1) * co(th) ** (2 * (C - B) - 1) * (1 - X * s(th) ** 2) ** (-A)
        integral = 2 * mpmath.quad(f, [0, mpmath.pi / 4, mpmath.pi / 2])
        return mpmath.gamma(C) / (mpmath.gamma(B) * mpmath.gamma(C - B)) * integral


def recursive_integral(spec: PFQSpec, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """One level of ``p+1Fq+1(a, a'; b, b'; x) = Gamma(b')/(Gamma(a')Gamma(b'-a')) int_0^1
    t^(a'-1) (1-t)^(b'-a'-1) pFq(a; b; x t) dt`` for a 3F2.

    The last upper and lower parameters are peeled off; the inner 2F1 comes from
    mpmath so that this is an independent route.
    """
    if len(spec.upper) != 3:
        raise ValueError("recursive_integral handles 3F2 only")
    *inner_up, a3 = spec.upper
    *inner_lo, b2 = spec.lower
    if not b2 > a3 > 0:
        raise ValueError("need lower > upper > 0 for the peeled parameters")
    with working_precision(precision):
        a1, a2 = (mpf_of(v) for v in inner_up)
        (b1,) = (mpf_of(v) for v in inner_lo)
        A3, B2, X = mpf_of(a3), mpf_of(b2), mpf_of(spec.x)

        # t = 1 - u^(1/beta) absorbs the (1-t)^(beta-1) endpoint power; near u = 0
        # the digits of 1 - t are kept by raising the precision locally
        beta_ = B2 - A3
        base_dps = mpmath.mp.dps

        def f(u):
            if u == 0:
                return mpmath.mpf(0)
            w = u ** (1 / beta_)
            lost = max(0, int(-mpmath.log10(w))) if w < 1 else 0
            if lost > 3 * base_dps:
                return mpmath.mpf(0)
            with mpmath.workdps(base_dps + lost + 5):
                t = 1 - w
                return t ** (A3 - 1) * mpmath.hyp2f1(a1, a2, b1, X * t) / beta_

        integral = mpmath.quad(f, [0, mpmath.mpf(1) / 2, 1])
        return mpmath.gamma(B2) / (mpmath.gamma(A3) * mpmath.gamma(B2 - A3)) * integral
