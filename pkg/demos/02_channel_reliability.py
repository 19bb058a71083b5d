"""Synthesized-channel quality under puncturing.

Compares the exact erasure recursion with the Gaussian-approximation mean
LLRs, shows which channels die when bits are punctured, and picks
information sets.
"""

import numpy as np

from rcpolar import (
    BiAWGN,
    bec_capacities,
    ga_reliabilities,
    pattern_from_seed,
    seed_sequence,
    select_information_set,
    successive_pattern,
    zero_capacity_set,
)

s = seed_sequence(8, (3, 2, 1))
full = successive_pattern(8, 8)
p2 = pattern_from_seed(s, 5)
p3 = pattern_from_seed(s, 3)

print("exact BEC capacities at erasure 0.5 (no puncturing):")
prof = bec_capacities(full, 0.5)
for i, v in enumerate(prof.values):
    print(f"  channel {i}: I = {v:.4f}")

print("\npuncture x0, x2, x4 -> exactly three channels die:")
prof2 = bec_capacities(p2, 0.5)
print("  capacities:", np.round(prof2.values, 4).tolist())
print("  dead set   :", sorted(zero_capacity_set(p2)))
print("  zero set   :", sorted(p2.zero_set), "(reciprocal pattern: they match)")

sigma2 = BiAWGN.from_esn0_db(0.0).sigma2
print(f"\nGA mean LLRs at Es/N0 = 0 dB (sigma^2 = {sigma2}):")
for name, p in (("full", full), ("5 survivors", p2), ("3 survivors", p3)):
    vals = ga_reliabilities(p, sigma2).values
    print(f"  {name:12s}: {np.round(vals, 2).tolist()}")

print("\ninformation sets of size 2, most reliable channels first:")
for name, p in (("full", full), ("5 survivors", p2), ("3 survivors", p3)):
    chosen = select_information_set(ga_reliabilities(p, sigma2), 2)
    print(f"  {name:12s}: {sorted(chosen)}")

print("\nreliability profile as CSV (first rows):")
print("\n".join(ga_reliabilities(p3, sigma2).to_csv().splitlines()[:5]))
