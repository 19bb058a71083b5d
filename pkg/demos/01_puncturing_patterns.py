"""Puncturing patterns: successive cuts, bit permutations, seed sequences.

Walks through the pattern algebra on a length-8 mother code: how the
successive pattern and a bit permutation generate the quasi-uniform family,
and how one seed sequence yields a whole nested rate-compatible chain.
"""

import numpy as np

from rcpolar import (
    Permutation,
    is_hierarchical,
    is_reciprocal,
    pattern_from_seed,
    permute_pattern,
    rc_chain,
    seed_sequence,
    successive_pattern,
)

N = 8

print("successive pattern, 4 survivors out of 8:")
p4 = successive_pattern(N, 4)
print("  mask      ", p4.mask.tolist())
print("  zero set  ", sorted(p4.zero_set))

print("\nits image under the full bit reversal (3,2,1):")
q4 = permute_pattern(p4, Permutation((3, 2, 1)))
print("  mask      ", q4.mask.tolist())
print("  reciprocal:", is_reciprocal(q4), " hierarchical:", is_hierarchical(q4))

print("\nnot every mask is reciprocal; puncture only the last bit:")
from rcpolar import PuncturingPattern

bad = PuncturingPattern.from_zero_set(N, {7})
print("  zero set {7} reciprocal:", is_reciprocal(bad))

print("\nseed sequence for sigma=(3,2,1):")
s = seed_sequence(N, (3, 2, 1))
print("  order:", s.order.tolist())

print("\nevery rate of a chain is a prefix cut of the seed:")
for n_i in (7, 5, 3):
    p = pattern_from_seed(s, n_i)
    print(f"  {n_i} survivors -> zero set {sorted(p.zero_set)}")

print("\nthe chain is nested (rate-compatibility constraint):")
chain = rc_chain(s, (7, 5, 3))
for a, b in zip(chain, chain[1:]):
    assert a.zero_set < b.zero_set
print("  zero sets:", [sorted(p.zero_set) for p in chain])

print("\nhierarchical cuts at power-of-two survivor counts:")
for k in (4, 2):
    p = pattern_from_seed(s, k)
    print(f"  {k} survivors: hierarchical={is_hierarchical(p)}, "
          f"survivors={p.survivors.tolist()}")
