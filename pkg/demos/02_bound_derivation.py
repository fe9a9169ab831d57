#!/usr/bin/env python3
"""Run the mechanical derivation of the triple-sum bound and print every
stage: the starting two-term estimate, the order-5 bound applied at
M = N3, T = (Px/D)^(1/3), the elimination of N3 and P, the balancing
choice of N, and the final four monomials with their one-term
simplification under Dmax <= D <= x."""

from deltalab import derive_main_theorem
from deltalab.monomials import COMPARISON_PAIRS

r = derive_main_theorem()  # raises if any stage deviates from its target

print("=" * 72)
print("Mechanical derivation of the triple-sum bound")
print("=" * 72)

print("\nStart (outer factor on the unexpanded sum + truncation tail):")
for t in r.start:
    print(f"   {t}")

print("\nAfter the order-5 derivative test and the outer prefactor:")
for t in r.after_lemma:
    print(f"   {t}")

print("\nAfter eliminating N3 (P^(1/3) <= N3 <= N) and P (P <= N):")
for t in r.eq10:
    print(f"   {t}")

print(f"\nBalancing the tail against the leading term fixes\n   N = {r.n_choice}")

print("\nSubstituting N back merges the balanced pair; four terms remain:")
for t in r.final:
    print(f"   {t}")

print(f"\nDominant term under Dmax <= D <= x:\n   {r.simplified}")

print("\nExact exponent comparisons on record:")
for name, (a, b) in COMPARISON_PAIRS.items():
    rel = "<" if a < b else ">"
    print(f"   {name:32s} {str(a):>16} {rel} {str(b):<16} "
          f"({float(a):.6f} vs {float(b):.6f})")
