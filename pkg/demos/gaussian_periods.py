"""L(f32, 1) and L(g, 2) for the CM forms of Q(i), by three independent routes.

f32 = eta(4t)^2 eta(8t)^2 has weight 2 and g = eta(4t)^6 has weight 3.  Both
are Hecke eigenforms attached to Grossencharacters of Q(i), and their central
values are tied together by 2 L(f32,1)^2 = L(g,2).

Run:  python3 demos/gaussian_periods.py
"""

from fractions import Fraction

import mpmath

from cmlvalues import heckechar as hc, hyperfun as hf, lvalues as lv

P = 30

# the two eta products really are the character series
for name in ("f32", "g"):
    r = hc.eta_equivalence(name, 500)
    print(f"{name}: Grossencharacter coefficients match the eta product up to n = {r.N}: {r.ok}")

f32 = lv.lvalue_named("f32", 1, P)
g_int = lv.lvalue_named("g", 2, P)
g_fe = lv.lvalue_hypergeometric("g2", P)
print(f"\nL(f32,1) by period integral   {mpmath.nstr(f32.value, P)}  (error <= {mpmath.nstr(f32.error, 3)})")
print(f"          closed form {f32.closed_form:22s} {mpmath.nstr(f32.closed_form_value, P)}")
print(f"L(g,2) by period integral     {mpmath.nstr(g_int.value, P)}")
print(f"L(g,2) by 3F2 + func. eqn.    {mpmath.nstr(g_fe.value, P)}")

with mpmath.workdps(P):
    lhs = 2 * f32.value ** 2
    print(f"\n2 L(f32,1)^2                  {mpmath.nstr(lhs, P)}")
    print(f"relative gap to L(g,2)        {mpmath.nstr(abs(lhs - g_int.value) / g_int.value, 3)}")

b4 = hf.chowla_selberg(4, P)
with mpmath.workdps(P):
    gap = abs(f32.value - b4.value / 8)
print(f"\nthe Chowla-Selberg period {b4.tag} = {mpmath.nstr(b4.value, P)}; |L(f32,1) - b/8| =",
      mpmath.nstr(gap, 3))
print("B(1/4,1/4) by quadrature agrees with Gamma to",
      mpmath.nstr(hf.beta_constant(Fraction(1, 4), Fraction(1, 4), P).spread(), 3))
