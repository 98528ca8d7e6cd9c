"""Grossencharacters of Q(i) and Q(sqrt(-3)) and the q-expansions they produce.

Ideals are enumerated through canonical generators found by a lattice scan;
character values live in Z[i] or Z[sqrt(-3)] as exact integer pairs, and the
imaginary parts are checked to cancel when summed over each norm.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import isqrt
from typing import NamedTuple, Sequence

from .qseries import EtaQuotient, QSeries


class Field(enum.Enum):
    GAUSSIAN = -4
    EISENSTEIN = -3

    @property
    def disc(self) -> int:
        return self.value


@dataclass(frozen=True)
class GrossCharSpec:
    """``psi^k`` (GAUSSIAN, k in {1, 2}) or ``chi^k`` (EISENSTEIN, 1 <= k <= 11)."""

    field: Field
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("power k must be at least 1")
        if self.field is Field.GAUSSIAN and self.k not in (1, 2):
            raise ValueError("only psi and psi^2 are supported on Q(i)")
        if self.field is Field.EISENSTEIN and self.k > 11:
            raise ValueError("chi^k is supported for k <= 11")

    @property
    def weight(self) -> int:
        return self.k + 1

    @property
    def conductor(self) -> str:
        if self.field is Field.GAUSSIAN:
            return "P^3" if self.k == 1 else "P^2"
        # M2, M3: the primes of Z[zeta6] above 2 and 3
        return {1: "M2*M3", 5: "M2*M3", 2: "M2", 4: "M2", 3: "M3", 0: "O_F"}[self.k % 6]

    def __str__(self) -> str:
        name = "psi" if self.field is Field.GAUSSIAN else "chi"
        return name if self.k == 1 else f"{name}^{self.k}"


class Generator(NamedTuple):
    """``a + b*sqrt(-d)``; ``multiplicity`` counts the associates folded into it."""

    a: int
    b: int
    norm: int
    multiplicity: int = 1


@dataclass(frozen=True)
class CoeffSeq:
    """Coefficients ``a(1..N)``; ``values[n-1]`` is ``a(n)``."""

    values: tuple
    N: int
    spec: GrossCharSpec | None = field(default=None, compare=False)

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.N:
            raise IndexError(n)
        return self.values[n - 1]

    def as_qseries(self) -> QSeries:
        return QSeries({n: a for n, a in enumerate(self.values, 1)}, 1, self.N + 1)


# ---------------------------------------------------------------------------
# exact arithmetic in Z[sqrt(-d)] on pairs (x, y) = x + y sqrt(-d)


def _mul(u: tuple, v: tuple, d: int) -> tuple:
    return (u[0] * v[0] - d * u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def _pow(u: tuple, k: int, d: int) -> tuple:
    out = (1, 0)
    for _ in range(k):
        out = _mul(out, u, d)
    return out


# ---------------------------------------------------------------------------
# canonical generators


def canonical_generators_gaussian(nmax: int) -> list[Generator]:
    """One ``a + bi`` per odd-norm ideal of Z[i]: ``a = 1 mod 4``, ``b`` even."""
    out = []
    r = isqrt(nmax)
    for a in range(-r, r + 1):
        if a % 4 != 1:
            continue
        for b in range(-r, r + 1, 1):
            if b % 2:
                continue
            n = a * a + b * b
            if n <= nmax:
                out.append(Generator(a, b, n))
    out.sort(key=lambda g: (g.norm, g.b))
    return out


def psi_value(g: Generator) -> tuple:
    """``(-1)^(b/2) (a - b i)`` as a pair over Z[i]."""
    s = -1 if (g.b // 2) % 2 else 1
    return (s * g.a, -s * g.b)


def _zeta3_associates(a: int, b: int) -> list[tuple]:
    # multiply by zeta3 = (-1 + sqrt(-3))/2; exact because a, b have equal parity
    out = [(a, b)]
    for _ in range(2):
        a, b = (-a - 3 * b) // 2, (a - b) // 2
        out.append((a, b))
    return out


def canonical_generators_eisenstein(nmax: int, include_even_norms: bool = False) -> list[Generator]:
    """One ``a + b sqrt(-3)`` with ``a = 1 mod 3`` per ideal coprime to 6.

    Exactly one of ``a, b`` is even for those ideals.  With
    ``include_even_norms`` the ideals divisible by 2 (still prime to 3) are
    added; each has three generators ``x, x zeta3, x zeta3^2`` with
    ``a = 1 mod 3``, so one representative is returned with multiplicity 3.
    Character values on them are only well defined for powers divisible by 3.
    """
    out = []
    ra, rb = isqrt(nmax), isqrt(nmax // 3)
    for a in range(-ra, ra + 1):
        if a % 3 != 1:
            continue
        for b in range(-rb, rb + 1):
            n = a * a + 3 * b * b
            if n > nmax:
                continue
            if (a + b) % 2:
                out.append(Generator(a, b, n))
            elif include_even_norms:
                assoc = [p for p in _zeta3_associates(a, b) if p[0] % 3 == 1]
                if (a, b) == min(assoc):
                    out.append(Generator(a, b, n, len(assoc)))
    out.sort(key=lambda g: (g.norm, g.b))
    return out


def chi_value(g: Generator) -> tuple:
    """``a - b sqrt(-3)`` as a pair over Z[sqrt(-3)]."""
    return (g.a, -g.b)


# ---------------------------------------------------------------------------
# coefficients


def _sum_by_norm(pairs: Sequence[tuple[int, tuple]], n: int) -> list[int]:
    re = [0] * (n + 1)
    im = [0] * (n + 1)
    for norm, (x, y) in pairs:
        re[norm] += x
        im[norm] += y
    bad = [m for m in range(1, n + 1) if im[m]]
    if bad:
        raise ArithmeticError(f"imaginary parts fail to cancel at n = {bad[0]}")
    return re


def _geometric_convolve(base: list[int], p: int, ratio: int, n: int) -> list[int]:
    """Multiply the Dirichlet series by ``1 / (1 - ratio * p^-s)``."""
    out = list(base)
    # Euler factor at p: out(m) = base(m) + ratio * out(m/p) for p | m, done in increasing m
    for m in range(p, n + 1):
        if m % p == 0:
            out[m] += ratio * out[m // p]
    return out


def _small_prime_factors(k: int) -> list[tuple[int, int]]:
    r = k % 6
    factors = []
    if r in (0, 2, 4):
        factors.append((3, (-3) ** (k // 2)))
    if r in (0, 3):
        factors.append((4, (-2) ** k))
    return factors


def coefficients(spec: GrossCharSpec, N: int, method: str = "convolution") -> CoeffSeq:
    """Dirichlet coefficients of the normalized Hecke L-series of ``spec``.

    For EISENSTEIN powers the small-prime Euler factors are included:
    ``(1 - (-3)^(k/2) 3^-s)^-1`` when ``k = 0, +-2 mod 6`` and
    ``(1 - (-2)^k 4^-s)^-1`` when ``k = 0 mod 3``.  ``method="lattice"``
    realizes the second factor instead by summing over the even-norm ideals
    directly (only meaningful when ``k = 0 mod 3``).
    """
    N = int(N)
    if N < 1:
        raise ValueError("N must be positive")
    k = spec.k
    if spec.field is Field.GAUSSIAN:
        pairs = [(g.norm, _pow(psi_value(g), k, 1)) for g in canonical_generators_gaussian(N)]
        values = _sum_by_norm(pairs, N)
    else:
        lattice = method == "lattice"
        if lattice and k % 3:
            raise ValueError("the lattice route over even norms needs k divisible by 3")
        if method not in ("convolution", "lattice"):
            raise ValueError("method must be 'convolution' or 'lattice'")
        gens = canonical_generators_eisenstein(N, include_even_norms=lattice)
        # for even norms the three associates share the same k-th power when 3 | k,
        # so one representative carries the ideal
        pairs = [(g.norm, _pow(chi_value(g), k, 3)) for g in gens]
        values = _sum_by_norm(pairs, N)
        for p, ratio in _small_prime_factors(k):
            if lattice and p == 4:
                continue
            values = _geometric_convolve(values, p, ratio, N)
    return CoeffSeq(tuple(values[1:]), N, spec)


# ---------------------------------------------------------------------------
# named forms


class NamedForm(NamedTuple):
    eta: EtaQuotient
    level: int
    weight: int
    character: GrossCharSpec


NAMED_FORMS: dict[str, NamedForm] = {
    "f32": NamedForm(EtaQuotient.of((4, 2), (8, 2)), 32, 2, GrossCharSpec(Field.GAUSSIAN, 1)),
    "g": NamedForm(EtaQuotient.of((4, 6)), 16, 3, GrossCharSpec(Field.GAUSSIAN, 2)),
    "f36": NamedForm(EtaQuotient.of((6, 4)), 36, 2, GrossCharSpec(Field.EISENSTEIN, 1)),
    "h3": NamedForm(EtaQuotient.of((2, 3), (6, 3)), 12, 3, GrossCharSpec(Field.EISENSTEIN, 2)),
    "h4": NamedForm(EtaQuotient.of((3, 8)), 9, 4, GrossCharSpec(Field.EISENSTEIN, 3)),
}


def form_spec(name: str) -> NamedForm:
    try:
        return NAMED_FORMS[name]
    except KeyError:
        raise ValueError(f"unknown form {name!r}; expected one of {sorted(NAMED_FORMS)}") from None


def eta_coefficients(name: str, N: int) -> list[int]:
    """``a(1..N)`` of the named eta product."""
    s = form_spec(name).eta.expand(N + 1)
    return [int(s.coeff(n)) for n in range(1, N + 1)]


class EquivalenceResult(NamedTuple):
    name: str
    N: int
    ok: bool
    first_mismatch: int | None


def eta_equivalence(name: str, N: int = 2000) -> EquivalenceResult:
    """Character coefficients against the eta-product expansion, for all ``n <= N``."""
    form = form_spec(name)
    mine = coefficients(form.character, N).values
    theirs = eta_coefficients(name, N)
    for n, (x, y) in enumerate(zip(mine, theirs), 1):
        if x != y:
            return EquivalenceResult(name, N, False, n)
    return EquivalenceResult(name, N, True, None)


# ---------------------------------------------------------------------------
# congruences between the chi^k series


# h_{k+1} comes from chi^k; h2 = f36 is the k = 1 series
CONGRUENCES = ((3, 3), (4, 8), (5, 9), (6, 240))


class CongruenceResult(NamedTuple):
    form: int
    modulus: int
    ok: bool
    first_violation: int | None


@dataclass(frozen=True)
class CongruenceReport:
    N: int
    results: tuple

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)


def congruence_scan(N: int = 1000, perturb: dict | None = None) -> CongruenceReport:
    """Check ``a_j = a_2 mod m`` for ``(j, m)`` in (3,3), (4,8), (5,9), (6,240).

    ``perturb`` maps ``(j, n)`` to an integer added to ``a_j(n)`` before the
    check; it exists so that the scan can be shown to catch violations.
    """
    series = {j: list(coefficients(GrossCharSpec(Field.EISENSTEIN, j - 1), N).values)
              for j in range(2, 7)}
    for (j, n), delta in (perturb or {}).items():
        series[j][n - 1] += delta
    results = []
    for j, m in CONGRUENCES:
        bad = next((n for n in range(1, N + 1) if (series[j][n - 1] - series[2][n - 1]) % m), None)
        results.append(CongruenceResult(j, m, bad is None, bad))
    return CongruenceReport(N, tuple(results))
