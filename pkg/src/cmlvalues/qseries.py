"""Exact truncated q-expansions and the catalogue of eta, theta and Eisenstein
series used for the CM forms of level 9 through 36.

A :class:`QSeries` stores ``sum c_n q^(n/denom)`` with exact rational
coefficients.  Everything in this module is exact; numbers only appear in
:func:`evaluate_series` and the ``evaluate`` methods.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd, lcm
from typing import Iterable, Mapping, NamedTuple

import mpmath

from ._numeric import DEFAULT_PRECISION, mpf_of, tolerance, working_precision

Rational = int | Fraction


class InsufficientTruncation(ValueError):
    """The truncation tail of a series exceeds the requested precision."""


def _rat(v) -> Rational:
    if isinstance(v, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        raise TypeError("float coefficients are not exact; pass a Fraction or str")
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else v


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("float exponents are not exact; pass a Fraction or str")
    return Fraction(x)


class QSeries:
    """Truncated series ``sum c_n q^(n/denom)`` with exact rational ``c_n``.

    Coefficients are known exactly for every index ``n < trunc`` and are
    unknown beyond; ``trunc=None`` marks an exact finite sum (a polynomial
    in ``q^(1/denom)``, possibly with negative powers).

    Instances are immutable.  Equality compares coefficients below the common
    truncation, so ``a == b`` reads as "agree as truncated series".
    """

    __slots__ = ("denom", "trunc", "_c")

    def __init__(self, coeffs: Mapping[int, Rational] | None = None, denom: int = 1,
                 trunc: int | None = None):
        denom = int(denom)
        if denom < 1:
            raise ValueError("denom must be a positive integer")
        c = {}
        for n, v in (coeffs or {}).items():
            n = int(n)
            if trunc is not None and n >= trunc:
                continue
            v = _rat(v)
            if v:
                c[n] = v
        self.denom = denom
        self.trunc = None if trunc is None else int(trunc)
        self._c = c

    @classmethod
    def _raw(cls, c: dict, denom: int, trunc: int | None) -> "QSeries":
        s = object.__new__(cls)
        s.denom, s.trunc, s._c = denom, trunc, c
        return s

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, c=1) -> "QSeries":
        return cls({0: c})

    @classmethod
    def monomial(cls, exponent, c=1) -> "QSeries":
        e = _as_fraction(exponent)
        return cls({e.numerator: c}, denom=e.denominator)

    @classmethod
    def from_list(cls, values: Iterable, denom: int = 1, offset: int = 0,
                  trunc: int | None = None) -> "QSeries":
        """``values[i]`` becomes the coefficient of ``q^((offset + i)/denom)``.

        Without an explicit ``trunc`` the list is taken as exactly known up
        to its length.
        """
        values = list(values)
        if trunc is None:
            trunc = offset + len(values)
        return cls({offset + i: v for i, v in enumerate(values)}, denom, trunc)

    # -- basic properties ---------------------------------------------------

    @property
    def order(self) -> Fraction | None:
        """Exponent bound: coefficients are exact for all exponents below it."""
        return None if self.trunc is None else Fraction(self.trunc, self.denom)

    @property
    def is_exact(self) -> bool:
        return self.trunc is None

    def items(self) -> list[tuple[Fraction, Rational]]:
        """Sorted ``(exponent, coefficient)`` pairs of the nonzero terms."""
        return [(Fraction(n, self.denom), self._c[n]) for n in sorted(self._c)]

    def index_items(self) -> list[tuple[int, Rational]]:
        return [(n, self._c[n]) for n in sorted(self._c)]

    def _valuation_index(self) -> int | None:
        if self._c:
            return min(self._c)
        return self.trunc

    def valuation(self) -> Fraction | None:
        """Exponent of the leading nonzero term (the truncation order if none is known)."""
        v = self._valuation_index()
        return None if v is None else Fraction(v, self.denom)

    def leading_coefficient(self) -> Rational:
        if not self._c:
            raise ValueError("series has no known nonzero coefficient")
        return self._c[min(self._c)]

    def coeff(self, exponent) -> Rational:
        e = _as_fraction(exponent)
        n = e * self.denom
        if self.trunc is not None and n >= self.trunc:
            raise InsufficientTruncation(f"coefficient of q^{e} lies beyond the truncation order {self.order}")
        if n.denominator != 1:
            return 0
        return self._c.get(int(n), 0)

    def coefficients(self, start, stop, step=1) -> list[Rational]:
        """Coefficients at exponents ``start, start+step, ... < stop``."""
        start, stop, step = _as_fraction(start), _as_fraction(stop), _as_fraction(step)
        out = []
        e = start
        while e < stop:
            out.append(self.coeff(e))
            e += step
        return out

    # -- denominators and truncation ----------------------------------------

    def with_denom(self, denom: int) -> "QSeries":
        if denom % self.denom:
            raise ValueError(f"cannot rewrite denominator {self.denom} as {denom}")
        f = denom // self.denom
        if f == 1:
            return self
        return QSeries._raw({n * f: v for n, v in self._c.items()}, denom,
                            None if self.trunc is None else self.trunc * f)

    def reduce(self) -> "QSeries":
        """Rewrite with the smallest possible exponent denominator."""
        g = self.denom
        for n in self._c:
            g = gcd(g, n)
        if self.trunc is not None:
            g = gcd(g, self.trunc)
        if g == 1:
            return self
        return QSeries._raw({n // g: v for n, v in self._c.items()}, self.denom // g,
                            None if self.trunc is None else self.trunc // g)

    def truncate(self, order) -> "QSeries":
        """Forget everything at exponents ``>= order``."""
        t = ceil(_as_fraction(order) * self.denom)
        if self.trunc is not None:
            t = min(t, self.trunc)
        return QSeries._raw({n: v for n, v in self._c.items() if n < t}, self.denom, t)

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "QSeries":
        if isinstance(x, QSeries):
            return x
        return QSeries.constant(_rat(x))

    @staticmethod
    def _common(a: "QSeries", b: "QSeries") -> tuple["QSeries", "QSeries"]:
        if a.denom == b.denom:
            return a, b
        d = lcm(a.denom, b.denom)
        return a.with_denom(d), b.with_denom(d)

    def __neg__(self) -> "QSeries":
        return QSeries._raw({n: -v for n, v in self._c.items()}, self.denom, self.trunc)

    def __pos__(self) -> "QSeries":
        return self

    def __add__(self, other) -> "QSeries":
        if not isinstance(other, (QSeries, int, Fraction)):
            return NotImplemented
        a, b = QSeries._common(self, QSeries._coerce(other))
        trunc = _tmin(a.trunc, b.trunc)
        c = {n: v for n, v in a._c.items() if trunc is None or n < trunc}
        for n, v in b._c.items():
            if trunc is not None and n >= trunc:
                continue
            s = c.get(n, 0) + v
            if s:
                c[n] = s
            else:
                c.pop(n, None)
        return QSeries._raw(c, a.denom, trunc)

    __radd__ = __add__

    def __sub__(self, other) -> "QSeries":
        if not isinstance(other, (QSeries, int, Fraction)):
            return NotImplemented
        return self + (-QSeries._coerce(other))

    def __rsub__(self, other) -> "QSeries":
        return QSeries._coerce(other) - self

    def scale(self, c) -> "QSeries":
        c = _rat(c)
        if not c:
            return QSeries._raw({}, self.denom, self.trunc)
        return QSeries._raw({n: v * c for n, v in self._c.items()}, self.denom, self.trunc)

    def __mul__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = QSeries._common(self, other)
        if (a.trunc is None and not a._c) or (b.trunc is None and not b._c):
            return QSeries._raw({}, a.denom, None)
        va, vb = a._valuation_index(), b._valuation_index()
        limit = _tmin(None if a.trunc is None else a.trunc + vb,
                      None if b.trunc is None else b.trunc + va)
        bi = b.index_items()
        c: dict[int, Rational] = {}
        for i, x in a.index_items():
            if limit is not None and i + vb >= limit:
                break
            for j, y in bi:
                n = i + j
                if limit is not None and n >= limit:
                    break
                c[n] = c.get(n, 0) + x * y
        return QSeries._raw({n: _rat(v) for n, v in c.items() if v}, a.denom, limit)

    __rmul__ = __mul__

    def inverse(self) -> "QSeries":
        """Multiplicative inverse; needs a known nonzero leading coefficient."""
        if not self._c:
            raise ZeroDivisionError("cannot invert a series with no known nonzero coefficient")
        v = min(self._c)
        lead = self._c[v]
        if self.trunc is None:
            if len(self._c) == 1:
                return QSeries._raw({-v: _rat(Fraction(1) / lead)}, self.denom, None)
            raise ValueError("inverting an exact polynomial needs a truncation; call truncate() first")
        rel = self.trunc - v
        g = [(i - v, Fraction(x) / lead) for i, x in self.index_items() if i > v]
        b: list[Rational] = [0] * rel
        b[0] = 1
        for n in range(1, rel):
            s = 0
            for i, x in g:
                if i > n:
                    break
                bn = b[n - i]
                if bn:
                    s += x * bn
            b[n] = -s
        inv_lead = Fraction(1) / lead
        c = {n - v: _rat(bn * inv_lead) for n, bn in enumerate(b) if bn}
        return QSeries._raw(c, self.denom, self.trunc - 2 * v)

    def __truediv__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        if not isinstance(other, QSeries):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "QSeries":
        return QSeries._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "QSeries":
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        result = QSeries.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def rescale(self, s) -> "QSeries":
        """Substitute ``tau -> s*tau`` for a positive rational ``s``."""
        s = _as_fraction(s)
        if s <= 0:
            raise ValueError("rescale factor must be positive")
        p, r = s.numerator, s.denominator
        return QSeries._raw({n * p: v for n, v in self._c.items()}, self.denom * r,
                            None if self.trunc is None else self.trunc * p)

    def shift(self, exponent) -> "QSeries":
        """Multiply by ``q^exponent``."""
        e = _as_fraction(exponent)
        d = lcm(self.denom, e.denominator)
        a = self.with_denom(d)
        k = int(e * d)
        return QSeries._raw({n + k: v for n, v in a._c.items()}, d,
                            None if a.trunc is None else a.trunc + k)

    def qderiv(self) -> "QSeries":
        """``q d/dq`` applied termwise."""
        c = {n: _rat(Fraction(n, self.denom) * v) for n, v in self._c.items() if n}
        return QSeries._raw(c, self.denom, self.trunc)

    # -- comparison ---------------------------------------------------------

    def first_mismatch(self, other) -> Fraction | None:
        """Lowest exponent where the two series differ below the common truncation."""
        diff = self - QSeries._coerce(other)
        if not diff._c:
            return None
        return Fraction(min(diff._c), diff.denom)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (QSeries, int, Fraction)):
            return NotImplemented
        return self.first_mismatch(other) is None

    __hash__ = None

    def __repr__(self) -> str:
        terms = []
        for e, c in self.items()[:8]:
            terms.append(f"{c}*q^{e}")
        if len(self._c) > 8:
            terms.append("...")
        body = " + ".join(terms) if terms else "0"
        tail = "" if self.trunc is None else f" + O(q^{self.order})"
        return f"QSeries({body}{tail})"

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        out = []
        for n in sorted(self._c):
            f = Fraction(self._c[n])
            out.append([n, f"{f.numerator}/{f.denominator}"])
        return {"denom": self.denom, "trunc": self.trunc, "coeffs": out}

    @classmethod
    def from_json(cls, data: Mapping) -> "QSeries":
        return cls({int(n): Fraction(c) for n, c in data["coeffs"]},
                   denom=int(data["denom"]), trunc=data.get("trunc"))

    # -- numerics -----------------------------------------------------------

    def evaluate(self, tau, precision: int = DEFAULT_PRECISION,
                 growth: tuple | None = None) -> "SeriesValue":
        return evaluate_series(self, tau, precision, growth)


def _tmin(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


# ---------------------------------------------------------------------------
# integer power series helpers (the fast path behind eta products)


def _euler_product(n: int) -> list[int]:
    """Coefficients of prod_{k>=1} (1 - x^k) below x^n, by the pentagonal theorem."""
    out = [0] * max(n, 0)
    k = 0
    while True:
        hit = False
        for j in ((k, -k) if k else (0,)):
            g = j * (3 * j - 1) // 2
            if g < n:
                out[g] += -1 if j % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    return out


def _series_power(a: list[int], r: int, n: int) -> list[int]:
    """``a(x)^r`` below ``x^n`` for integer ``r`` and ``a[0] == 1``.

    Uses the recurrence b_m = (1/m) sum_k ((r+1)k - m) a_k b_{m-k}, which is
    exact over the integers when a_0 = 1.
    """
    if n <= 0:
        return []
    if a[0] != 1:
        raise ValueError("leading coefficient must be 1")
    nz = [(k, x) for k, x in enumerate(a[:n]) if k and x]
    b = [0] * n
    b[0] = 1
    for m in range(1, n):
        s = 0
        for k, x in nz:
            if k > m:
                break
            bm = b[m - k]
            if bm:
                s += ((r + 1) * k - m) * x * bm
        q, rem = divmod(s, m)
        if rem:
            raise ArithmeticError("non-integral power series coefficient")
        b[m] = q
    return b


def _mul_int(a: list[int], b: list[int], n: int) -> list[int]:
    out = [0] * n
    bi = [(j, y) for j, y in enumerate(b) if y]
    for i, x in enumerate(a):
        if not x or i >= n:
            continue
        lim = n - i
        for j, y in bi:
            if j >= lim:
                break
            out[i + j] += x * y
    return out


# ---------------------------------------------------------------------------
# eta quotients


class SeriesValue(NamedTuple):
    """A numeric value together with a certified bound on its truncation error."""

    value: mpmath.mpc
    error: mpmath.mpf


_LITERAL_FACTOR = re.compile(r"\s*eta\(\s*(\d+(?:/\d+)?)?\s*t\s*\)(?:\s*\^\s*(-?\d+))?(?!\s*\^)\s*")


@dataclass(frozen=True)
class EtaQuotient:
    """The product ``prod eta(m_j tau)^(r_j)`` over ``(m_j, r_j)`` factor pairs."""

    factors: tuple[tuple[Fraction, int], ...]

    def __post_init__(self):
        merged: dict[Fraction, int] = {}
        for m, r in self.factors:
            m = _as_fraction(m)
            if m <= 0:
                raise ValueError(f"eta scale must be positive, got {m}")
            merged[m] = merged.get(m, 0) + int(r)
        object.__setattr__(self, "factors",
                           tuple(sorted((m, r) for m, r in merged.items() if r)))

    @classmethod
    def of(cls, *pairs) -> "EtaQuotient":
        """``EtaQuotient.of((4, 2), (8, 2))`` is eta(4t)^2 eta(8t)^2."""
        return cls(tuple(pairs))

    @classmethod
    def parse(cls, text: str) -> "EtaQuotient":
        """Parse literals such as ``"eta(4t)^2*eta(8t)^2"`` or ``"eta(1/2t)^-2"``."""
        pairs = []
        pos = 0
        while True:
            m = _LITERAL_FACTOR.match(text, pos)
            if not m:
                raise QuotientParseError(text, _parse_failure_offset(text, pos))
            scale = Fraction(m.group(1)) if m.group(1) else Fraction(1)
            if scale == 0:
                raise QuotientParseError(text, m.start(1))
            pairs.append((scale, int(m.group(2)) if m.group(2) else 1))
            pos = m.end()
            if pos == len(text):
                break
            if text[pos] != "*":
                raise QuotientParseError(text, pos)
            pos += 1
        return cls(tuple(pairs))

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        parts = []
        for m, r in self.factors:
            s = f"eta({m}t)"
            parts.append(s if r == 1 else f"{s}^{r}")
        return "*".join(parts)

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(r for _, r in self.factors), 2)

    @property
    def leading_exponent(self) -> Fraction:
        return sum((m * r for m, r in self.factors), Fraction(0)) / 24

    def __mul__(self, other: "EtaQuotient") -> "EtaQuotient":
        return EtaQuotient(self.factors + other.factors)

    def __truediv__(self, other: "EtaQuotient") -> "EtaQuotient":
        return EtaQuotient(self.factors + tuple((m, -r) for m, r in other.factors))

    def __pow__(self, k: int) -> "EtaQuotient":
        return EtaQuotient(tuple((m, r * k) for m, r in self.factors))

    def rescale(self, s) -> "EtaQuotient":
        s = _as_fraction(s)
        return EtaQuotient(tuple((m * s, r) for m, r in self.factors))

    def expand(self, order) -> QSeries:
        """q-expansion, exact for all exponents below ``order``."""
        order = _as_fraction(order)
        lead = self.leading_exponent
        d = 1
        for m, _ in self.factors:
            d = lcm(d, m.denominator)
        denom = lcm(d, lead.denominator)
        step = denom // d
        n = max(ceil((order - lead) * d), 0)
        body = [1] + [0] * (n - 1) if n else []
        for m, r in self.factors:
            stride = int(m * d)
            length = ceil(n / stride) if n else 0
            p = _series_power(_euler_product(length), r, length)
            stretched = [0] * n
            for i, x in enumerate(p):
                stretched[i * stride] = x
            body = _mul_int(body, stretched, n)
        base = int(lead * denom)
        coeffs = {base + i * step: x for i, x in enumerate(body) if x}
        return QSeries._raw(coeffs, denom, base + n * step)

    def evaluate(self, tau, precision: int = DEFAULT_PRECISION) -> SeriesValue:
        return evaluate_series(self, tau, precision)

    def fricke(self, level: int) -> "FrickeTransform":
        return fricke_transform(self, level)


class QuotientParseError(ValueError):
    def __init__(self, text: str, offset: int):
        self.text, self.offset = text, offset
        super().__init__(f"cannot parse eta-quotient literal {text!r} at offset {offset}")


def _parse_failure_offset(text: str, pos: int) -> int:
    # report the first character that cannot continue an "eta(<rational>t)^<int>" factor
    i = pos
    while i < len(text) and text[i].isspace():
        i += 1
    if not text.startswith("eta(", i):
        for j, ch in enumerate("eta("):
            if i + j >= len(text) or text[i + j] != ch:
                return i + j
    i += 4
    while i < len(text) and (text[i].isdigit() or text[i] in "/ "):
        i += 1
    if i >= len(text) or text[i] != "t":
        return i
    i += 1
    if i >= len(text) or text[i] != ")":
        return i
    i += 1
    if i < len(text) and text[i] == "^":
        i += 1
        if i < len(text) and text[i] == "-":
            i += 1
        if i >= len(text) or not text[i].isdigit():
            return i
    return i


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    """Product with the conservative truncation rule (same as ``a * b``)."""
    return a * b


def eta_expand(m, order) -> QSeries:
    """``eta(m tau) = q^(m/24) prod (1 - q^(m n))`` below ``q^order``."""
    return EtaQuotient.of((m, 1)).expand(order)


@dataclass(frozen=True)
class FrickeTransform:
    """``f(-1/(L tau)) = prefactor(tau) * image(tau)`` for an eta quotient ``f``."""

    source: EtaQuotient
    level: int
    image: EtaQuotient
    # prefactor(tau) = sqrt(constant_squared) * (tau/i)^weight on the imaginary axis
    constant_squared: Fraction

    @property
    def self_dual(self) -> bool:
        return self.image == self.source

    @property
    def weight(self) -> Fraction:
        return self.source.weight

    def constant(self) -> mpmath.mpf:
        return mpmath.sqrt(mpf_of(self.constant_squared))

    def prefactor(self, tau) -> mpmath.mpc:
        """Numeric prefactor, built factor by factor on the principal branch."""
        tau = mpmath.mpmathify(tau)
        out = mpmath.mpc(1)
        for m, r in self.source.factors:
            out *= mpmath.sqrt((self.level / mpf_of(m)) * tau / mpmath.j) ** r
        return out


def fricke_transform(f: EtaQuotient, level: int) -> FrickeTransform:
    """Apply ``eta(-1/tau) = sqrt(tau/i) eta(tau)`` factor by factor under ``tau -> -1/(L tau)``."""
    level = int(level)
    if level < 1:
        raise ValueError("level must be a positive integer")
    image = []
    c2 = Fraction(1)
    for m, r in f.factors:
        q = Fraction(level) / m
        if q.denominator != 1:
            raise ValueError(f"scale {m} does not divide level {level}")
        image.append((q, r))
        c2 *= q ** r
    return FrickeTransform(f, level, EtaQuotient(tuple(image)), c2)


# ---------------------------------------------------------------------------
# theta functions, lambda, cubic thetas, E2


def _lattice_bound(order: Fraction) -> int:
    return int(mpmath.sqrt(2 * float(order) + 4)) + 2


def theta_expand(which: int, scale=1, order=60) -> QSeries:
    """Jacobi theta_2, theta_3 or theta_4 at ``scale * tau`` as a lattice sum."""
    scale, order = _as_fraction(scale), _as_fraction(order)
    if scale <= 0:
        raise ValueError("scale must be positive")
    base_order = order / scale
    c: dict[int, int] = {}
    if which == 2:
        denom, limit = 8, ceil(base_order * 8)
        n = 0
        while (2 * n + 1) ** 2 < limit:
            c[(2 * n + 1) ** 2] = 2  # n and -n-1 give the same exponent
            n += 1
    elif which in (3, 4):
        denom, limit = 2, ceil(base_order * 2)
        if limit > 0:
            c[0] = 1
        n = 1
        while n * n < limit:
            c[n * n] = 2 if which == 3 or n % 2 == 0 else -2
            n += 1
    else:
        raise ValueError("which must be 2, 3 or 4")
    return QSeries(c, denom, limit).rescale(scale)


THETA_ETA_FORMS = {
    2: (2, EtaQuotient.of((2, 2), (1, -1))),
    3: (1, EtaQuotient.of((1, 5), (Fraction(1, 2), -2), (2, -2))),
    4: (1, EtaQuotient.of((Fraction(1, 2), 2), (1, -1))),
}


def theta_from_eta(which: int, order=60) -> QSeries:
    c, f = THETA_ETA_FORMS[which]
    return f.expand(order).scale(c)


def lambda_expand(order=60) -> QSeries:
    """The modular lambda function ``(theta_2/theta_3)^4``."""
    order = _as_fraction(order)
    t2 = theta_expand(2, 1, order)
    t3 = theta_expand(3, 1, order)
    return ((t2 * t2) * (t2 * t2) * ((t3 * t3) * (t3 * t3)).inverse()).truncate(order)


ONE_MINUS_LAMBDA_ETA = EtaQuotient.of((Fraction(1, 2), 16), (2, 8), (1, -24))
LAMBDA_PRIME_ETA = EtaQuotient.of((Fraction(1, 2), 16), (2, 16), (1, -28))


def cubic_theta_expand(which: str, order=60) -> QSeries:
    """Borwein cubic theta functions ``a``, ``b``, ``c`` as lattice sums."""
    order = _as_fraction(order)
    bound = _lattice_bound(order)
    if which == "a":
        limit = ceil(order)
        c: dict[int, int] = {}
        for n in range(-bound, bound + 1):
            for m in range(-bound, bound + 1):
                e = n * n + n * m + m * m
                if e < limit:
                    c[e] = c.get(e, 0) + 1
        return QSeries(c, 1, limit)
    if which == "b":
        # accumulate in Z[zeta3] as x + y*zeta3, with zeta3^2 = -1 - zeta3
        limit = ceil(order)
        acc: dict[int, list[int]] = {}
        powers = {0: (1, 0), 1: (0, 1), 2: (-1, -1)}
        for n in range(-bound, bound + 1):
            for m in range(-bound, bound + 1):
                e = n * n + n * m + m * m
                if e < limit:
                    x, y = powers[(m - n) % 3]
                    slot = acc.setdefault(e, [0, 0])
                    slot[0] += x
                    slot[1] += y
        c = {}
        for e, (x, y) in acc.items():
            if y:
                raise ArithmeticError(f"non-rational coefficient at q^{e}")
            c[e] = x
        return QSeries(c, 1, limit)
    if which == "c":
        limit = ceil(order * 3)
        c = {}
        for n in range(-bound, bound + 1):
            for m in range(-bound, bound + 1):
                e = 3 * (n * n + n * m + m * m + n + m) + 1
                if e < limit:
                    c[e] = c.get(e, 0) + 1
        return QSeries(c, 3, limit)
    raise ValueError("which must be 'a', 'b' or 'c'")


CUBIC_THETA_ETA_FORMS = {
    "b": EtaQuotient.of((1, 3), (3, -1)),
    "c": EtaQuotient.of((3, 3), (1, -1)),
}


def cubic_theta_from_eta(which: str, order=60) -> QSeries:
    """Eta-quotient forms of the cubic thetas (``a`` as a sum of two quotients)."""
    if which == "b":
        return CUBIC_THETA_ETA_FORMS["b"].expand(order)
    if which == "c":
        return CUBIC_THETA_ETA_FORMS["c"].expand(order).scale(3)
    if which == "a":
        num = (EtaQuotient.of((3, 3), (1, -1)).expand(order).scale(3)
               + EtaQuotient.of((Fraction(1, 3), 3), (1, -1)).expand(order))
        return num
    raise ValueError("which must be 'a', 'b' or 'c'")


def _sigma(k: int, n: int) -> int:
    s = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            s += d ** k
            e = n // d
            if e != d:
                s += e ** k
        d += 1
    return s


def e2_expand(scale=1, order=60) -> QSeries:
    """``E2(scale * tau) = 1 - 24 sum sigma_1(n) q^(scale n)``."""
    scale, order = _as_fraction(scale), _as_fraction(order)
    limit = ceil(order / scale)
    c = {0: 1}
    for n in range(1, limit):
        c[n] = -24 * _sigma(1, n)
    return QSeries(c, 1, limit).rescale(scale)


# ---------------------------------------------------------------------------
# Eisenstein series G*_{k,(1;3)}


@dataclass(frozen=True)
class PiMonomial:
    """The closed form ``coeff * pi^pi_power * i^i_power``."""

    coeff: Fraction
    pi_power: int = 0
    i_power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        object.__setattr__(self, "i_power", self.i_power % 4)

    def __mul__(self, other: "PiMonomial") -> "PiMonomial":
        return PiMonomial(self.coeff * other.coeff, self.pi_power + other.pi_power,
                          self.i_power + other.i_power)

    def __bool__(self) -> bool:
        return self.coeff != 0

    def value(self) -> mpmath.mpc:
        unit = (1, mpmath.j, -1, -mpmath.j)[self.i_power]
        return mpf_of(self.coeff) * mpmath.pi ** self.pi_power * unit

    def __str__(self) -> str:
        parts = [str(self.coeff)]
        if self.pi_power:
            parts.append("pi" if self.pi_power == 1 else f"pi^{self.pi_power}")
        if self.i_power:
            parts.append(("i", "-1", "-i")[self.i_power - 1])
        return "*".join(parts)


ZERO = PiMonomial(Fraction(0))


@dataclass(frozen=True)
class EisensteinSpec:
    """``G*_{k,(a;N)}(tau) = constant_term + prefactor * series(q) + nonholomorphic / Im(tau)``.

    ``series`` has exact rational coefficients; the transcendental constants
    stay symbolic until :meth:`value` is called.
    """

    weight: int
    residue: int
    level: int
    series: QSeries
    prefactor: PiMonomial
    constant_term: PiMonomial
    nonholomorphic: PiMonomial

    def normalized(self) -> QSeries:
        """``series + constant_term / prefactor``: the part compared in q-series identities."""
        if not self.constant_term:
            return self.series
        ratio = self.constant_term.coeff / self.prefactor.coeff
        if (self.constant_term.pi_power, self.constant_term.i_power) != \
                (self.prefactor.pi_power, self.prefactor.i_power):
            raise ValueError("constant term is not a rational multiple of the prefactor")
        return self.series + ratio

    def value(self, tau, precision: int = DEFAULT_PRECISION,
              growth: tuple | None = None) -> SeriesValue:
        with working_precision(precision):
            tau = mpmath.mpmathify(tau)
            s = evaluate_series(self.series, tau, precision, growth)
            pre = self.prefactor.value()
            val = self.constant_term.value() + pre * s.value
            if self.nonholomorphic:
                val += self.nonholomorphic.value() / mpmath.im(tau)
            return SeriesValue(val, abs(pre) * s.error)


def _eisenstein_coefficient(k: int, m: int) -> int:
    s = 0
    d = 1
    while d * d <= m:
        if m % d == 0:
            for n in {d, m // d}:
                r = (m // n) % 3
                if r == 1:
                    s += n ** (k - 1)
                elif r == 2:
                    s += (-1) ** k * n ** (k - 1)
        d += 1
    return s


def eisenstein_expand(k: int, order=60, residue: int = 1, level: int = 3) -> EisensteinSpec:
    """Fourier expansion of ``G*_{k,(1;3)}``.

    The series part is ``sum_n n^(k-1) (q^n + (-1)^k q^(2n)) / (1 - q^(3n))``
    for every ``k >= 1``; the prefactor is ``-2 pi i`` (k=1),
    ``-(2 pi)^2`` (k=2) or ``(-2 pi i)^k / (k-1)!`` (k >= 3).
    """
    k = int(k)
    if k <= 0:
        raise ValueError("weight must be at least 1")
    if (residue, level) != (1, 3):
        raise ValueError(f"unsupported residue class ({residue};{level})")
    limit = ceil(_as_fraction(order))
    series = QSeries({m: _eisenstein_coefficient(k, m) for m in range(1, limit)}, 1, limit)
    if k == 1:
        return EisensteinSpec(k, residue, level, series, PiMonomial(-2, 1, 1),
                              PiMonomial(Fraction(-1, 3), 1, 1), ZERO)
    if k == 2:
        return EisensteinSpec(k, residue, level, series, PiMonomial(-4, 2, 0), ZERO,
                              PiMonomial(Fraction(-1, 3), 1, 0))
    fact = 1
    for j in range(2, k):
        fact *= j
    return EisensteinSpec(k, residue, level, series,
                          PiMonomial(Fraction((-2) ** k, fact), k, k), ZERO, ZERO)


# ---------------------------------------------------------------------------
# phi, phi_1 and the Gamma(3) identities


def phi_expand(order=60) -> tuple[QSeries, QSeries]:
    """``phi = theta2(2t)theta2(6t) + theta3(2t)theta3(6t)`` and ``phi1 = (phi(t/3) - phi(t))/6``."""
    order = _as_fraction(order)
    big = 3 * order
    phi_big = (theta_expand(2, 2, big) * theta_expand(2, 6, big)
               + theta_expand(3, 2, big) * theta_expand(3, 6, big))
    phi = phi_big.truncate(order)
    phi1 = ((phi_big.rescale(Fraction(1, 3)) - phi) / 6).truncate(order)
    return phi.reduce(), phi1.reduce()


PHI_ETA_FORMS = (
    (4, EtaQuotient.of((4, 2), (12, 2), (2, -1), (6, -1))),
    (1, EtaQuotient.of((2, 5), (6, 5), (1, -2), (4, -2), (3, -2), (12, -2))),
)
PHI1_ETA = EtaQuotient.of((3, 3), (1, -1))
T_ETA = EtaQuotient.of((Fraction(1, 3), 3), (3, -3))


def phi_from_eta(order=60) -> QSeries:
    out = QSeries.constant(0)
    for c, f in PHI_ETA_FORMS:
        out = out + f.expand(order).scale(c)
    return out


def t_expand(order=60) -> QSeries:
    """The Hauptmodul ``t = eta(tau/3)^3 / eta(3 tau)^3`` (leading term ``q^(-1/3)``)."""
    return T_ETA.expand(order)


# (phi power, phi1 power) -> coefficient of the weight-k polynomial in phi, phi1
SEBBAR_POLYNOMIALS: dict[int, dict[tuple[int, int], int]] = {
    3: {(0, 3): 1},
    4: {(1, 3): 1},
    5: {(2, 3): 1},
    6: {(3, 3): 1, (0, 6): 12},
    7: {(4, 3): 1, (1, 6): 36},
    8: {(5, 3): 1, (2, 6): 96},
    9: {(6, 3): 1, (3, 6): 216, (0, 9): 720},
    10: {(7, 3): 1, (4, 6): 468, (1, 9): 4752},
    11: {(8, 3): 1, (5, 6): 972, (2, 9): 22896},
}


def sebbar_polynomial(k: int, phi, phi1):
    """Evaluate the weight-``k`` polynomial in ``phi, phi1`` (series or numbers)."""
    total = 0
    for (a, b), c in SEBBAR_POLYNOMIALS[k].items():
        total = total + (phi ** a) * (phi1 ** b) * c
    return total


@dataclass(frozen=True)
class IdentityCheck:
    """Outcome of an exact q-series identity check; truthy when it holds."""

    name: str
    ok: bool
    mismatch: Fraction | None = None
    order: Fraction | None = None
    k: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_identity(name: str, lhs: QSeries, rhs: QSeries, order=None, k=None) -> IdentityCheck:
    if order is not None:
        lhs, rhs = lhs.truncate(order), rhs.truncate(order)
    diff = lhs - rhs
    mismatch = lhs.first_mismatch(rhs)
    return IdentityCheck(name, mismatch is None, mismatch, diff.order, k)


def sebbar_identity_check(k: int, order=60) -> IdentityCheck:
    """``G*_k`` against its polynomial in ``phi, phi1`` with transcendental factors stripped."""
    k = int(k)
    order = _as_fraction(order)
    phi, phi1 = phi_expand(order)
    spec = eisenstein_expand(k, order)
    if k == 1:
        return check_identity("G1 = -2 pi i phi/6", spec.normalized(), phi / 6, order, k)
    if k == 2:
        lhs = (e2_expand(3, order) - phi * phi) / 3
        return check_identity("(E2(3t) - phi^2)/3 = -4 H2", lhs, spec.series.scale(-4), order, k)
    if k not in SEBBAR_POLYNOMIALS:
        raise ValueError(f"no polynomial recorded for weight {k}")
    return check_identity(f"G{k} polynomial in phi, phi1", spec.series,
                          sebbar_polynomial(k, phi, phi1), order, k)


def lambda_derivative_check(order=40, lam: QSeries | None = None) -> IdentityCheck:
    """``2 q dlambda/dq = lambda * theta_4^4``, i.e. ``dlambda/dtau = pi i lambda theta_4^4``."""
    order = _as_fraction(order)
    if lam is None:
        lam = lambda_expand(order)
    t4 = theta_expand(4, 1, order)
    return check_identity("2 q dlambda/dq = lambda theta4^4", lam.qderiv().scale(2),
                          lam * (t4 * t4) * (t4 * t4), order)


def lambda_derivative_e2_check(order=40) -> IdentityCheck:
    """Logarithmic-derivative route: ``q dlambda/dq = lambda (E2(t/2) + 8E2(2t) - 6E2(t))/6``."""
    order = _as_fraction(order)
    lam = lambda_expand(order)
    combo = (e2_expand(Fraction(1, 2), order) + e2_expand(2, order).scale(8)
             - e2_expand(1, order).scale(6)) / 6
    return check_identity("q dlambda/dq via E2", lam.qderiv(), lam * combo, order)


# ---------------------------------------------------------------------------
# numerics


def _eta_value(tau, digits: int) -> tuple:
    """eta(tau) by the pentagonal series, with a bound on the omitted tail."""
    if mpmath.im(tau) <= 0:
        raise ValueError("eta needs Im(tau) > 0")
    q = mpmath.exp(2j * mpmath.pi * tau)
    aq = abs(q)
    eps = tolerance(digits + 5)
    s = mpmath.mpc(1)
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if aq ** g1 < eps * 1e-3:
            break
        sign = -1 if k % 2 else 1
        s += sign * (q ** g1 + q ** (g1 + k))
        k += 1
        if k > 100000:
            raise InsufficientTruncation("eta series did not converge")
    tail = 2 * aq ** (k * (3 * k - 1) // 2) / (1 - aq)
    lead = mpmath.exp(2j * mpmath.pi * tau / 24)
    return lead * s, abs(lead) * tail


def evaluate_series(f, tau, precision: int = DEFAULT_PRECISION,
                    growth: tuple | None = None) -> SeriesValue:
    """Numeric value of a :class:`QSeries` or :class:`EtaQuotient` at ``tau``.

    For a truncated QSeries the omitted tail is bounded assuming
    ``|c_n| <= M (1 + n/denom)^p``; ``growth=(M, p)`` overrides the default,
    which takes ``p = 12`` and fits ``M`` to the stored coefficients.
    Raises :class:`InsufficientTruncation` when the bound exceeds
    ``10^-precision`` (relative to ``max(1, |value|)``).
    """
    with working_precision(precision):
        tau = mpmath.mpmathify(tau)
        if mpmath.im(tau) <= 0:
            raise ValueError("tau must lie in the upper half-plane")
        if isinstance(f, EtaQuotient):
            val = mpmath.mpc(1)
            rel = mpmath.mpf(0)
            for m, r in f.factors:
                e, err = _eta_value(mpf_of(m) * tau, precision)
                val *= e ** r
                rel += abs(r) * err / abs(e)
            return SeriesValue(val, abs(val) * rel)
        if not isinstance(f, QSeries):
            raise TypeError("expected a QSeries or EtaQuotient")
        step = mpmath.exp(2j * mpmath.pi * tau / f.denom)
        val = mpmath.mpc(0)
        for n, c in f.index_items():
            val += mpf_of(Fraction(c)) * step ** n
        if f.trunc is None:
            return SeriesValue(val, mpmath.mpf(0))
        r = abs(step)
        d = f.denom
        if growth is None:
            p = 12
            M = max([abs(mpf_of(Fraction(c))) / (1 + mpmath.mpf(n) / d) ** p
                     for n, c in f.index_items() if n >= 0] or [mpmath.mpf(1)])
        else:
            M, p = mpmath.mpf(growth[0]), growth[1]
        T = max(f.trunc, 0)
        first = M * (1 + mpmath.mpf(T) / d) ** p * r ** T
        ratio = ((1 + mpmath.mpf(T + 1) / d) / (1 + mpmath.mpf(T) / d)) ** p * r
        if ratio >= 1:
            raise InsufficientTruncation(
                f"tail does not contract at q-order {f.order}; |q| too large")
        tail = first / (1 - ratio)
        if tail > tolerance(precision) * max(1, abs(val)):
            raise InsufficientTruncation(
                f"tail bound {mpmath.nstr(tail, 5)} exceeds 1e-{precision}")
        return SeriesValue(val, tail)
