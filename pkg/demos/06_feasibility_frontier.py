#!/usr/bin/env python3
"""Explore the exact (theta, r) feasibility frontier.

The short-interval exponent theta must satisfy
    5/(2r) + 492293/1000000 + 507707/(1000000 r) <= theta,
so each theta above 0.492293 has an exact minimal admissible r."""

from fractions import Fraction as F

from deltalab import check, claim_report, minimal_r
from deltalab.feasibility import C0, PAPER_R, PAPER_THETA

print("=" * 72)
print("Feasibility frontier")
print("=" * 72)

print(f"\ncondition constants: c0 = {C0} (infeasible at or below this), "
      f"c1 = {1 - C0}")

print(f"\n{'theta':>12} {'minimal r':>12}")
for theta in (F(4923, 10**4), F(4924, 10**4), F(4930, 10**4), F(4950, 10**4),
              F(1, 2), F(51, 100), F(55, 100)):
    r = minimal_r(theta)
    print(f"{str(theta):>12} {r if r is not None else 'infeasible':>12}")

print(f"\npublished choice: theta = {PAPER_THETA}, r = {PAPER_R}")
print(f"   condition holds: {check(PAPER_THETA, PAPER_R)}")
mr = minimal_r(PAPER_THETA)
print(f"   minimal admissible r at that theta: {mr} "
      f"(the published r leaves slack of {PAPER_R - mr})")
print(f"   one below the minimum fails: check(theta, {mr - 1}) = "
      f"{check(PAPER_THETA, mr - 1)}")

print("\nhypothesis report at a concrete parameter point (D barely above 1,")
print("since x >= D^433433 forces D very close to 1 at terrestrial x):")
rep = claim_report(x=1e120, alpha=PAPER_THETA, D=1.0005, r=PAPER_R)
print(f"   x >= D^r: {rep.x_ge_D_pow_r}")
print(f"   alpha in [0.4923, 1]: {rep.alpha_in_range}")
print(f"   theta condition: {rep.theta_condition}")
print(f"   y-range (D^(5/2) x^(c0 + c1/r) < y = x^alpha): {rep.y_range_ok}")
