"""Synthesized-channel quality under puncturing.

Two evaluators share one polarization recursion, oriented to match the
decoder: the successive-cancellation schedule consumes channels in
bit-reversed index order, so channel i's value is the recursion output at
position psi(i) with the coded-side inputs fed in psi-permuted order.

* exact binary-erasure recursion (the small-N oracle, and the exact
  zero-capacity set at erasure 1 on the punctured positions);
* density evolution under a Gaussian approximation for the BI-AWGN channel,
  tracking mean LLRs with a two-piece phi and a bisection inverse.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .puncturing import PuncturingPattern
from .transform import bit_reverse_all

_PHI_KNEE = 7.0633


@dataclass(frozen=True)
class BEC:
    """Binary erasure channel with erasure probability eps."""

    eps: float

    def __post_init__(self):
        if not 0.0 <= self.eps <= 1.0:
            raise ValueError(f"erasure probability out of range: {self.eps}")


@dataclass(frozen=True)
class BiAWGN:
    """Binary-input AWGN channel, BPSK with noise variance sigma2."""

    sigma2: float

    def __post_init__(self):
        if self.sigma2 <= 0.0:
            raise ValueError(f"noise variance must be positive: {self.sigma2}")

    @classmethod
    def from_esn0_db(cls, esn0_db: float) -> "BiAWGN":
        return cls(1.0 / (2.0 * 10.0 ** (esn0_db / 10.0)))

    @property
    def llr_mean(self) -> float:
        return 2.0 / self.sigma2


ChannelModel = BEC | BiAWGN


def phi(x: np.ndarray) -> np.ndarray:
    """Two-piece mean-to-phi map: quadratic-exponential below the knee,
    linear-exponential asymptotic above; continuous and decreasing."""
    x = np.asarray(x, dtype=np.float64)
    out = np.ones_like(x)
    lo = (x > 0) & (x <= _PHI_KNEE)
    hi = x > _PHI_KNEE
    xl = x[lo]
    out[lo] = np.exp(0.0116 * xl * xl - 0.4212 * xl)
    out[hi] = np.exp(-0.2944 * x[hi] - 0.3169)
    return out


def phi_inv(y: np.ndarray) -> np.ndarray:
    """Inverse of phi by bisection, elementwise, relative tolerance 1e-9."""
    y = np.asarray(y, dtype=np.float64)
    out = np.zeros_like(y)
    solve = y < 1.0
    if not solve.any():
        return out
    ys = y[solve]
    ymin = max(ys.min(), 1e-300)
    hi_edge = max(8.0, (-np.log(ymin) - 0.3169) / 0.2944 + 1.0)
    lo = np.zeros_like(ys)
    hi = np.full_like(ys, hi_edge)
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        above = phi(mid) > ys
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
        if np.all(hi - lo <= 1e-9 * np.maximum(1.0, hi)):
            break
    out[solve] = 0.5 * (lo + hi)
    return out


def _check_means(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """GA check-node rule on mean LLRs; exactly zero if either input is."""
    out = phi_inv(1.0 - (1.0 - phi(a)) * (1.0 - phi(b)))
    return np.where((a == 0.0) | (b == 0.0), 0.0, out)


def _polarize(z: np.ndarray, minus, plus) -> np.ndarray:
    """Run the half-split polarization recursion on batched inputs.

    z has shape (..., N); output row r is the recursion profile in schedule
    order (first half of each block from the check combine, second half from
    the variable combine).
    """
    z = np.asarray(z)
    batch_shape = z.shape[:-1]
    N = z.shape[-1]
    arr = z.reshape(-1, 1, N)
    size = N
    while size > 1:
        half = size // 2
        a = arr[:, :, :half]
        b = arr[:, :, half:]
        arr = np.stack([minus(a, b), plus(a, b)], axis=2).reshape(
            arr.shape[0], -1, half
        )
        size = half
    return arr.reshape(*batch_shape, N)


def _schedule_values(z_coded: np.ndarray, minus, plus) -> np.ndarray:
    """Per-channel values for the bit-reversed decoding schedule.

    z_coded holds one entry per coded-bit position (natural index order).
    """
    N = z_coded.shape[-1]
    psi = bit_reverse_all(N.bit_length() - 1)
    prof = _polarize(z_coded[..., psi], minus, plus)
    return prof[..., psi]


@dataclass(frozen=True)
class ReliabilityProfile:
    """Per-channel quality values tied to a pattern and channel model.

    BEC values are symmetric capacities in [0,1]; AWGN values are GA mean
    LLRs.  Zero value means the synthesized channel is unusable.
    """

    values: np.ndarray
    channel: ChannelModel
    pattern: PuncturingPattern

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def mother_len(self) -> int:
        return self.pattern.mother_len

    def dead_set(self) -> frozenset:
        return frozenset(int(i) for i in np.flatnonzero(self.values == 0.0))

    def to_csv(self) -> str:
        psi = bit_reverse_all(self.pattern.n)
        lines = ["index,value,decode_position"]
        for i, v in enumerate(self.values):
            lines.append(f"{i},{float(v)!r},{int(psi[i])}")
        return "\n".join(lines) + "\n"


def bec_capacities(p: PuncturingPattern, eps: float) -> ReliabilityProfile:
    """Exact synthesized-channel capacities on the BEC.

    Punctured coded bits are erased with probability one; the erasure
    recursion then yields I = 1 - Z per channel.
    """
    ch = BEC(eps)
    z = np.where(p.mask == 1, float(eps), 1.0)
    zout = _schedule_values(z, lambda a, b: a + b - a * b, lambda a, b: a * b)
    return ReliabilityProfile(1.0 - zout, ch, p)


def _dead_channel_masks(masks: np.ndarray) -> np.ndarray:
    """Batched exact zero-capacity indicators (perfect channel).

    masks has shape (..., N) with 1 = transmitted; returns an int8 array of
    the same shape with 1 marking a dead synthesized channel.
    """
    z = (np.asarray(masks) == 0).astype(np.int8)
    return _schedule_values(z, lambda a, b: a | b, lambda a, b: a & b)


def zero_capacity_set(p: PuncturingPattern) -> frozenset:
    """Channels with exactly zero capacity when only puncturing degrades
    the channel; computed with closed {0,1} arithmetic, no thresholds."""
    dead = _dead_channel_masks(p.mask[None, :])[0]
    return frozenset(int(i) for i in np.flatnonzero(dead == 1))


def ga_reliabilities(p: PuncturingPattern, sigma2: float) -> ReliabilityProfile:
    """Mean-LLR profile via density evolution under a Gaussian approximation.

    Surviving positions start at mean 2/sigma2, punctured positions at 0;
    the pair rule propagates means level by level in the decoder's
    orientation.
    """
    ch = BiAWGN(sigma2)
    z = np.where(p.mask == 1, ch.llr_mean, 0.0)
    vals = _schedule_values(z, _check_means, lambda a, b: a + b)
    return ReliabilityProfile(vals, ch, p)


def reliability_profile(p: PuncturingPattern, channel: ChannelModel) -> ReliabilityProfile:
    if isinstance(channel, BEC):
        return bec_capacities(p, channel.eps)
    return ga_reliabilities(p, channel.sigma2)


def _ordered_indices(values, candidates, n: int, largest: bool) -> list[int]:
    psi = bit_reverse_all(n)
    key = (lambda i: (-values[i], psi[i])) if largest else (lambda i: (values[i], psi[i]))
    return sorted(candidates, key=key)


def _select_extreme(values, t, candidates, largest):
    values = np.asarray(values, dtype=np.float64)
    n = int(values.size).bit_length() - 1
    cand = list(range(values.size)) if candidates is None else sorted(candidates)
    if t > len(cand):
        raise ValueError("t exceeds candidate count")
    return set(_ordered_indices(values, cand, n, largest=largest)[:t])


def max_ind(values, t: int, candidates=None) -> set:
    """Indices of the t largest values; ties go to the smaller decode position."""
    return _select_extreme(values, t, candidates, largest=True)


def min_ind(values, t: int, candidates=None) -> set:
    """Indices of the t smallest values; ties go to the smaller decode position."""
    return _select_extreme(values, t, candidates, largest=False)


def select_information_set(
    profile: ReliabilityProfile, size: int, forbidden=()
) -> frozenset:
    """The `size` most reliable channels, never touching dead or forbidden ones."""
    banned = set(forbidden) | profile.dead_set()
    candidates = [i for i in range(profile.mother_len) if i not in banned]
    if size > len(candidates):
        raise ValueError(
            f"cannot pick {size} channels, only {len(candidates)} usable"
        )
    chosen = _ordered_indices(profile.values, candidates, profile.pattern.n, True)
    return frozenset(chosen[:size])
