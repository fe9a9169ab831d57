#!/usr/bin/env python3
"""Walk the derivative-test exponent recursion.

Shows the exact order-4 base data, a few recursion steps, the decay of the
T-exponent b_r, and how the four-term bound evaluates numerically.
"""

from fractions import Fraction

from deltalab import base_tuple, bound_eval, derive_tuple, step

print("=" * 72)
print("Derivative-test exponents: base data and recursion")
print("=" * 72)

t = base_tuple()
print(f"\norder 4 (base): {t}")

for _ in range(4):
    t = step(t)
    print(f"order {t.order}: a={t.a}  b={t.b}  alpha={t.alpha}")

print("\nThe division by 2(b+1) halves b each time, roughly:")
ident_hdr = "2(b+1)b' == b"
print(f"{'order':>6} {'b_r':>22} {'float':>12} {ident_hdr:>15}")
prev = base_tuple()
for r in range(5, 17):
    cur = step(prev)
    ident = 2 * (prev.b + 1) * cur.b == prev.b
    print(f"{r:>6} {str(cur.b):>22} {float(cur.b):>12.3e} {str(ident):>15}")
    prev = cur

print("\nalpha_r approaches 1 with the closed form 1 - (1 - 334/411)/2^(r-4):")
for r in (4, 6, 10, 20):
    t = derive_tuple(r)
    assert t.alpha == 1 - (1 - Fraction(334, 411)) / 2 ** (r - 4)
    print(f"  alpha_{r} = {t.alpha} = {float(t.alpha):.10f}")

print("\nNumeric value of the four-term bound at order 5:")
t5 = derive_tuple(5)
for M, T in ((1.0, 1.0), (2.0**10, 2.0**20), (1e5, 1e8)):
    print(f"  M = {M:10.4g}  T = {T:10.4g}  bound = {bound_eval(t5, M, T):12.6g}")
