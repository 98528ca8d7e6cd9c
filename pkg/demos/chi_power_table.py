"""Rational constants C_{chi,k} with L(chi^k, k/2) = C_{chi,k} L(chi, 1/2)^k.

chi is the Grossencharacter of Q(sqrt(-3)) behind eta(6t)^4.  Each L(chi^k, k/2)
is the value at the CM point sqrt(-3) of a weight-k Eisenstein series with
character mod 3, corrected by the Euler factors at 2 and 3.  Dividing by the
k-th power of L(chi, 1/2) leaves a rational number, recovered here by
continued fractions.

Run:  python3 demos/chi_power_table.py [precision]
"""

import sys

import mpmath

from cmlvalues import lvalues as lv

P = int(sys.argv[1]) if len(sys.argv) > 1 else 30

print(f" k  correction  C_chi,k     residual   (precision {P})")
for row in lv.c_chi_table(11, P):
    rr = row.reconstruction
    print(f"{row.k:2d}  {str(lv.chi_correction_factor(row.k)):>10s}  {str(rr.result):>8s}  "
          f"{mpmath.nstr(rr.residual, 3):>10s}  {rr.status}")

# the same reconstruction on a number that is not rational
rr = lv.rational_reconstruct(mpmath.pi, 50, "1e-10", P)
print(f"\npi with denominators up to 50: best guess {rr.result}, residual {mpmath.nstr(rr.residual, 3)} -> {rr.status}")
