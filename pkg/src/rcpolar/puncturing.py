"""Puncturing-pattern algebra.

A pattern is a length-N binary mask over coded-bit positions; mask value 0
means the bit is withheld.  The zero-location set, bit-permutation images,
the reciprocal/hierarchical classifications and seed-derived rate-compatible
chains all live here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .transform import bit_reverse_all, gn_submatrix


@dataclass(frozen=True)
class PuncturingPattern:
    """Binary mask plus its zero-location set over a mother length N."""

    mother_len: int
    mask: np.ndarray
    zero_set: frozenset = field(init=False)

    def __post_init__(self):
        mask = np.asarray(self.mask, dtype=np.int8)
        if mask.ndim != 1 or mask.size != self.mother_len:
            raise ValueError("mask length must equal mother_len")
        if self.mother_len & (self.mother_len - 1):
            raise ValueError("mother_len must be a power of two")
        if not np.isin(mask, (0, 1)).all():
            raise ValueError("mask entries must be 0 or 1")
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)
        zeros = frozenset(int(i) for i in np.flatnonzero(mask == 0))
        object.__setattr__(self, "zero_set", zeros)

    @classmethod
    def from_zero_set(cls, mother_len: int, zero_set) -> "PuncturingPattern":
        mask = np.ones(mother_len, dtype=np.int8)
        idx = list(zero_set)
        if idx:
            mask[np.asarray(idx, dtype=np.int64)] = 0
        return cls(mother_len, mask)

    @property
    def n(self) -> int:
        return self.mother_len.bit_length() - 1

    @property
    def survivors(self) -> np.ndarray:
        """Unpunctured coded-bit positions, ascending."""
        return np.flatnonzero(self.mask == 1)

    @property
    def weight(self) -> int:
        return int(self.mask.sum())

    def __eq__(self, other):
        return (
            isinstance(other, PuncturingPattern)
            and self.mother_len == other.mother_len
            and self.zero_set == other.zero_set
        )

    def __hash__(self):
        return hash((self.mother_len, self.zero_set))

    def to_text(self, sigma=None, n_p=None) -> str:
        sig = ",".join(str(s) for s in sigma) if sigma else "-"
        np_ = self.weight if n_p is None else n_p
        zeros = ",".join(str(i) for i in sorted(self.zero_set))
        return f"N={self.mother_len} sigma={sig} Np={np_} zero_set={zeros}"

    @classmethod
    def from_text(cls, text: str) -> "PuncturingPattern":
        fields = dict(tok.split("=", 1) for tok in text.split())
        N = int(fields["N"])
        zeros = [int(t) for t in fields["zero_set"].split(",") if t != ""]
        return cls.from_zero_set(N, zeros)


class Permutation(tuple):
    """A permutation of the bit positions (1, ..., n)."""

    def __new__(cls, sigma):
        sigma = tuple(int(s) for s in sigma)
        if sorted(sigma) != list(range(1, len(sigma) + 1)):
            raise ValueError(f"not a permutation of 1..{len(sigma)}: {sigma}")
        return super().__new__(cls, sigma)

    def __getnewargs__(self):
        return (tuple(self),)

    @property
    def n(self) -> int:
        return len(self)

    def apply_to_index(self, i: int) -> int:
        """Shuffle the bit positions of i: with expansion (b_n, ..., b_1),
        the image has expansion (b_sigma(n), ..., b_sigma(1))."""
        out = 0
        for k in range(1, self.n + 1):
            if (i >> (self[k - 1] - 1)) & 1:
                out |= 1 << (k - 1)
        return out

    def index_map(self, N: int) -> np.ndarray:
        if N != 1 << self.n:
            raise ValueError(f"permutation width {self.n} does not match N={N}")
        return np.array([self.apply_to_index(i) for i in range(N)], dtype=np.int64)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def reversal(cls, n: int) -> "Permutation":
        return cls(range(n, 0, -1))


@dataclass(frozen=True)
class SeedSequence:
    """Permutation-induced ordering of the coded-bit indices.

    Every pattern of a rate-compatible chain is a prefix cut of this order:
    the first N - N_i entries are the punctured positions of the level with
    N_i surviving bits.
    """

    order: np.ndarray
    sigma: Permutation

    def __post_init__(self):
        order = np.asarray(self.order, dtype=np.int64)
        N = order.size
        if sorted(order.tolist()) != list(range(N)):
            raise ValueError("seed order must be a permutation of 0..N-1")
        order.setflags(write=False)
        object.__setattr__(self, "order", order)

    @property
    def mother_len(self) -> int:
        return int(self.order.size)


def successive_pattern(N: int, n_p: int) -> PuncturingPattern:
    """Pattern that punctures the first N - n_p coded bits."""
    if not 0 < n_p <= N:
        raise ValueError(f"surviving count {n_p} must be in (0, {N}]")
    mask = np.ones(N, dtype=np.int8)
    mask[: N - n_p] = 0
    return PuncturingPattern(N, mask)


def permute_pattern(p: PuncturingPattern, sigma: Permutation) -> PuncturingPattern:
    """Image of p under a bit-position permutation of its index space."""
    sigma = Permutation(sigma)
    if sigma.n != p.n:
        raise ValueError(f"permutation width {sigma.n} does not match n={p.n}")
    zeros = {sigma.apply_to_index(i) for i in p.zero_set}
    return PuncturingPattern.from_zero_set(p.mother_len, zeros)


def seed_sequence(N: int, sigma) -> SeedSequence:
    sigma = Permutation(sigma)
    if N != 1 << sigma.n:
        raise ValueError(f"N={N} does not match permutation width {sigma.n}")
    return SeedSequence(sigma.index_map(N), sigma)


def pattern_from_seed(seed: SeedSequence, n_i: int) -> PuncturingPattern:
    """Pattern whose zero set is the first N - n_i entries of the seed order."""
    N = seed.mother_len
    if not 0 < n_i <= N:
        raise ValueError(f"surviving count {n_i} must be in (0, {N}]")
    return PuncturingPattern.from_zero_set(N, seed.order[: N - n_i])


def is_reciprocal(p: PuncturingPattern) -> bool:
    """Zero-inclusion plus one-covering: B contains 0 and is closed under
    clearing any set bit.  The all-ones pattern counts as reciprocal."""
    B = p.zero_set
    if not B:
        return True
    if 0 not in B:
        return False
    for i in B:
        bits = i
        while bits:
            low = bits & -bits
            if (i ^ low) not in B:
                return False
            bits ^= low
    return True


def hierarchy_order(p: PuncturingPattern) -> int | None:
    """log2 of the surviving sub-transform length if p is hierarchical.

    Returns n for the degenerate all-ones pattern, and None when p is not
    hierarchical at all.
    """
    if not is_reciprocal(p):
        return None
    w = p.weight
    if w & (w - 1):
        return None
    nbar = w.bit_length() - 1
    if w == p.mother_len:
        return nbar
    surv = p.survivors
    sub = gn_submatrix(p.n, surv, surv)
    ref = gn_submatrix(nbar, range(w), range(w))
    return nbar if np.array_equal(sub, ref) else None


def is_hierarchical(p: PuncturingPattern, *, strict: bool = False) -> bool:
    """True iff the survivors of p carry a complete smaller polar transform.

    strict=True excludes the degenerate all-ones case (no puncturing).
    """
    nbar = hierarchy_order(p)
    if nbar is None:
        return False
    if strict and p.weight == p.mother_len:
        return False
    return True


def rc_chain(seed: SeedSequence, lens) -> list[PuncturingPattern]:
    """Rate-compatible patterns for strictly decreasing surviving counts.

    The zero sets are nested prefixes of the seed order, so the chain
    satisfies the rate-compatibility constraint by construction.
    """
    lens = [int(x) for x in lens]
    if any(b >= a for a, b in zip(lens, lens[1:])):
        raise ValueError(f"surviving counts must be strictly decreasing: {lens}")
    if lens and lens[0] > seed.mother_len:
        raise ValueError("surviving count exceeds mother length")
    return [pattern_from_seed(seed, n_i) for n_i in lens]
