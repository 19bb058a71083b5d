"""Self-contained property suites runnable from the command line.

Each check returns a result with a counterexample description on failure;
the CLI turns any failure into a nonzero exit.  Sizes are chosen so the
default run finishes in seconds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import puncturing as pc
from .puncturing import (
    Permutation,
    PuncturingPattern,
    pattern_from_seed,
    permute_pattern,
    rc_chain,
    seed_sequence,
    successive_pattern,
)
from .reliability import _dead_channel_masks, ga_reliabilities, zero_capacity_set
from .transform import bit_reverse, bit_reverse_all, gn_matrix, polar_transform


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'}  {self.name}" + (
            f"  [{self.detail}]" if self.detail else ""
        )


def _mask_from_bits(bits: int, N: int) -> np.ndarray:
    return np.array([(bits >> i) & 1 for i in range(N)], dtype=np.int8)


def check_transform_against_dense(n_max: int = 5, trials: int = 20,
                                  seed: int = 0) -> CheckResult:
    """Butterfly encoder equals the dense Kronecker matrix product."""
    rng = np.random.default_rng(seed)
    for n in range(n_max + 1):
        g = gn_matrix(n)
        for _ in range(trials):
            u = rng.integers(0, 2, size=1 << n)
            if not np.array_equal(polar_transform(u), (u @ g) % 2):
                return CheckResult("transform-vs-dense", False, f"n={n} u={u}")
    return CheckResult("transform-vs-dense", True)


def check_reciprocity_exhaustive(N: int = 8) -> CheckResult:
    """is_reciprocal(p) holds exactly when the dead set equals the zero set."""
    n = N.bit_length() - 1
    masks = np.array([_mask_from_bits(b, N) for b in range(1 << N)], dtype=np.int8)
    dead = _dead_channel_masks(masks)
    for b in range(1 << N):
        p = PuncturingPattern(N, masks[b])
        d = frozenset(int(i) for i in np.flatnonzero(dead[b] == 1))
        if pc.is_reciprocal(p) != (d == p.zero_set):
            return CheckResult(
                f"reciprocity-exhaustive-N{N}", False, f"zero_set={sorted(p.zero_set)}"
            )
    return CheckResult(f"reciprocity-exhaustive-N{N}", True)


def check_reciprocity_sampled(N: int = 16, samples: int = 10_000,
                              seed: int = 1) -> CheckResult:
    rng = np.random.default_rng(seed)
    masks = rng.integers(0, 2, size=(samples, N)).astype(np.int8)
    dead = _dead_channel_masks(masks)
    for r in range(samples):
        p = PuncturingPattern(N, masks[r])
        d = frozenset(int(i) for i in np.flatnonzero(dead[r] == 1))
        if pc.is_reciprocal(p) != (d == p.zero_set):
            return CheckResult(
                f"reciprocity-sampled-N{N}", False, f"zero_set={sorted(p.zero_set)}"
            )
        if len(d) != N - p.weight:
            return CheckResult(
                f"reciprocity-sampled-N{N}", False,
                f"dead-count {len(d)} != {N - p.weight}",
            )
    return CheckResult(f"reciprocity-sampled-N{N}", True)


def check_zero_block(N: int = 8) -> CheckResult:
    """Reciprocal patterns never leak punctured inputs into kept outputs."""
    from .transform import gn_submatrix

    for bits in range(1 << N):
        p = PuncturingPattern(N, _mask_from_bits(bits, N))
        if not pc.is_reciprocal(p) or not p.zero_set or p.weight == 0:
            continue
        block = gn_submatrix(p.n, p.zero_set, p.survivors)
        if block.any():
            return CheckResult(
                f"zero-block-N{N}", False, f"zero_set={sorted(p.zero_set)}"
            )
    return CheckResult(f"zero-block-N{N}", True)


def check_hierarchical_family(n_max: int = 4) -> CheckResult:
    """Permuted successive patterns with power-of-two survivors are
    hierarchical for every bit permutation."""
    for n in range(2, n_max + 1):
        N = 1 << n
        for sigma in itertools.permutations(range(1, n + 1)):
            for kk in range(1, n):
                p = permute_pattern(successive_pattern(N, 1 << kk), sigma)
                if not pc.is_hierarchical(p, strict=True):
                    return CheckResult(
                        f"hierarchical-n{n_max}", False, f"sigma={sigma} k={kk}"
                    )
    return CheckResult(f"hierarchical-n{n_max}", True)


def check_chain_nesting(N: int = 64, trials: int = 50, seed: int = 2) -> CheckResult:
    rng = np.random.default_rng(seed)
    n = N.bit_length() - 1
    for _ in range(trials):
        sigma = Permutation(rng.permutation(n) + 1)
        seed_seq = seed_sequence(N, sigma)
        count = int(rng.integers(2, 6))
        lens = sorted(rng.choice(np.arange(1, N + 1), size=count, replace=False),
                      reverse=True)
        chain = rc_chain(seed_seq, lens)
        for a, b in zip(chain, chain[1:]):
            if not (a.zero_set < b.zero_set):
                return CheckResult(
                    f"chain-nesting-N{N}", False, f"sigma={tuple(sigma)} lens={lens}"
                )
    return CheckResult(f"chain-nesting-N{N}", True)


def check_qup_equivalence(n_max: int = 6) -> CheckResult:
    """Seed cuts with the reversal permutation equal the two-step recipe:
    zero the first N-Np mask bits, then bit-reverse the positions."""
    for n in range(1, n_max + 1):
        N = 1 << n
        s = seed_sequence(N, Permutation.reversal(n))
        psi = bit_reverse_all(n)
        for n_p in range(1, N + 1):
            mask = np.ones(N, dtype=np.int8)
            mask[: N - n_p] = 0
            if not np.array_equal(pattern_from_seed(s, n_p).mask, mask[psi]):
                return CheckResult(
                    f"qup-equivalence-n{n_max}", False, f"N={N} Np={n_p}"
                )
    return CheckResult(f"qup-equivalence-n{n_max}", True)


def check_ga_monotone(N: int = 64, trials: int = 10, seed: int = 3) -> CheckResult:
    """Un-puncturing one position never hurts any channel's GA mean."""
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        w = int(rng.integers(1, N))
        keep = rng.choice(N, size=w, replace=False)
        mask = np.zeros(N, dtype=np.int8)
        mask[keep] = 1
        zeros = np.flatnonzero(mask == 0)
        if zeros.size == 0:
            continue
        base = ga_reliabilities(PuncturingPattern(N, mask), 1.0).values
        mask2 = mask.copy()
        mask2[int(zeros[rng.integers(zeros.size)])] = 1
        relaxed = ga_reliabilities(PuncturingPattern(N, mask2), 1.0).values
        if not (relaxed >= base - 1e-9).all():
            return CheckResult(f"ga-monotone-N{N}", False, f"mask={mask.tolist()}")
    return CheckResult(f"ga-monotone-N{N}", True)


def check_decode_order(n_max: int = 6) -> CheckResult:
    """Sorting indices by decode position reproduces the bit-reversed order."""
    for n in range(1, n_max + 1):
        order = sorted(range(1 << n), key=lambda i: bit_reverse(i, n))
        if order != [bit_reverse(i, n) for i in range(1 << n)]:
            return CheckResult("decode-order", False, f"n={n}")
    return CheckResult("decode-order", True)


DEFAULT_SUITE = (
    check_transform_against_dense,
    check_decode_order,
    check_reciprocity_exhaustive,
    check_reciprocity_sampled,
    check_zero_block,
    check_hierarchical_family,
    check_chain_nesting,
    check_qup_equivalence,
    check_ga_monotone,
)


def run_suite(checks=DEFAULT_SUITE, **overrides) -> list:
    """Run every check, passing per-check keyword overrides by name."""
    results = []
    for fn in checks:
        kwargs = overrides.get(fn.__name__, {}) if overrides else {}
        results.append(fn(**kwargs))
    return results
