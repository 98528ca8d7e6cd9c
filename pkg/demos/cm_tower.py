"""Singular moduli above sqrt(-3) along the 2-isogeny tower.

Starting from j(zeta3) = 0, the level-2 modular polynomial forces
j(sqrt(-3)) = 54000; each further step solves Phi_2(X, j_prev) = 0 and keeps
the root that matches the numerically evaluated j.  All values live in
Q(sqrt2, sqrt3) and are checked exactly there.

Run:  python3 demos/cm_tower.py
"""

import mpmath

from cmlvalues import cmalg

print("Phi_2(X, 0) = (X - 54000)^3, so j(sqrt(-3)) =", cmalg.j_at_sqrt_m3())
for e in cmalg.solve_cm_tower(30):
    print(f"\nj({e.point}) = {e.j}")
    print(f"    numeric {mpmath.nstr(e.j_numeric, 25)}, residual {mpmath.nstr(e.j_residual, 3)}")
    print(f"u({e.point}) = {e.u}")
for name, ok in cmalg.phi2_tower_relations():
    print(f"{name}: {ok}")

print("\neta values at tau0 = i/sqrt(3):")
for v in cmalg.eta_cm_values(30):
    print(f"  {v.name:12s} = {v.expression}")
    print(f"  {'':12s}   residual {mpmath.nstr(v.residual, 3)}")
