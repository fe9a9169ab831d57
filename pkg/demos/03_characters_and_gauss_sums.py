#!/usr/bin/env python3
"""Real primitive characters at work: value tables, Gauss sum magnitudes
sqrt(D), the twist identity, and L(1), L'(1) by two independent methods."""

import math

from deltalab import gauss_sum, l_one, l_one_derivative, make_character
from deltalab.characters import fundamental_discriminants, l_one_series

print("=" * 72)
print("Characters, Gauss sums, L-values")
print("=" * 72)

for d in (-4, 5, -8, 12):
    chi = make_character(d)
    vals = " ".join(f"{chi(n):>2}" for n in range(1, 13))
    print(f"\nchi_{d} ({chi.parity}, conductor {chi.conductor}):  {vals}")
    g1 = gauss_sum(1, chi)
    print(f"   G(1) = {g1.real:+.6f} {g1.imag:+.6f}i   |G(1)| = {abs(g1):.12f}"
          f"   sqrt(D) = {math.sqrt(chi.conductor):.12f}")
    m = 3 if math.gcd(3, chi.conductor) == 1 else 5
    gm = gauss_sum(m, chi)
    print(f"   twist: G({m}) = chi({m}) G(1)?  dev = {abs(gm - chi(m) * g1):.2e}")

print("\nL(1, chi): finite classical formula vs accelerated series")
deriv_hdr = "L'(1)"
print(f"{'disc':>6} {'L(1) formula':>16} {'L(1) series':>16} {'dev':>10} {deriv_hdr:>14}")
for d in (-4, 5, -8, 12, 13, -163):
    chi = make_character(d)
    a, b = l_one(chi), l_one_series(chi)
    print(f"{d:>6} {a:>16.12f} {b:>16.12f} {abs(a-b):>10.2e} "
          f"{l_one_derivative(chi):>14.10f}")

print("\nchi_-4 recovers the Leibniz value pi/4 =", f"{math.pi/4:.12f}")

print("\nPositivity of L(1, chi) across all fundamental |D| <= 100:")
vals = [(d, l_one(make_character(d))) for d in fundamental_discriminants(100)]
dmin, vmin = min(vals, key=lambda t: t[1])
print(f"   {len(vals)} characters, all positive; smallest is D={dmin}: {vmin:.6f}")
