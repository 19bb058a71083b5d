"""Batched successive-cancellation list decoding core.

Everything here works in the *schedule domain*: channel LLRs arrive already
permuted so that the decoder consumes positions 0..N-1 in plain order, and
decisions are returned in that order.  Callers translate between coded-bit /
channel labels and schedule positions (a bit-reverse permutation).

The decoder is vectorized over a frame batch and over list paths.  Per
frame, path metrics use the standard log-likelihood penalty: a decision
against the sign of its LLR costs |LLR|.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

INFO = 0
FROZEN_ZERO = 1
FROZEN_COPY = 2
FROZEN_DEAD = 3


@dataclass(frozen=True)
class ScheduleSpec:
    """Per-position decoding roles in schedule order.

    kinds[p]: INFO, FROZEN_ZERO, FROZEN_COPY or FROZEN_DEAD.
    copy_source[p]: earlier schedule position supplying the value when
        kinds[p] == FROZEN_COPY.
    dead_values[p]: substituted value when kinds[p] == FROZEN_DEAD; the
        position carries no channel information, so any value works.
    """

    kinds: np.ndarray
    copy_source: np.ndarray
    dead_values: np.ndarray

    def __post_init__(self):
        kinds = np.asarray(self.kinds, dtype=np.int8)
        src = np.asarray(self.copy_source, dtype=np.int64)
        sub = np.asarray(self.dead_values, dtype=np.int8)
        N = kinds.size
        if N & (N - 1):
            raise ValueError("length must be a power of two")
        if src.size != N or sub.size != N:
            raise ValueError("spec arrays must share one length")
        for p in np.flatnonzero(kinds == FROZEN_COPY):
            if not 0 <= src[p] < p:
                raise ValueError(
                    f"copy at position {p} reads position {src[p]}, "
                    "which is not decoded earlier"
                )
        for a in (kinds, src, sub):
            a.setflags(write=False)
        object.__setattr__(self, "kinds", kinds)
        object.__setattr__(self, "copy_source", src)
        object.__setattr__(self, "dead_values", sub)

    @property
    def size(self) -> int:
        return int(self.kinds.size)


def f_exact(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact check-node LLR combine, numerically stable form of
    2 atanh(tanh(a/2) tanh(b/2))."""
    return np.logaddexp(0.0, a + b) - np.logaddexp(a, b)


def f_minsum(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))


def _offsets(n: int) -> np.ndarray:
    # depth d slice of the working LLR buffer starts at off[d], width N >> d
    N = 1 << n
    off = np.zeros(n + 2, dtype=np.int64)
    for d in range(n + 1):
        off[d + 1] = off[d] + (N >> d)
    return off


def decode_batch(
    llr: np.ndarray,
    spec: ScheduleSpec,
    list_size: int = 1,
    *,
    use_minsum: bool = False,
):
    """Decode a batch of frames, returning every surviving path.

    Parameters
    ----------
    llr : (B, N) channel LLRs in schedule order, positive favoring bit 0.
    spec : ScheduleSpec for the N positions.
    list_size : number of survivor paths L.

    Returns
    -------
    decisions : (B, L, N) int8, path decisions, best metric first.
    metrics : (B, L) float64 accumulated penalties, ascending per frame.
    """
    f = f_minsum if use_minsum else f_exact
    llr = np.asarray(llr, dtype=np.float64)
    if llr.ndim != 2 or llr.shape[1] != spec.size:
        raise ValueError("llr must be (batch, N) matching the spec")
    B, N = llr.shape
    n = N.bit_length() - 1
    L = int(list_size)
    if L < 1:
        raise ValueError("list size must be >= 1")

    off = _offsets(n)
    # llr_buf[:, l, off[d]:off[d+1]] = active block LLRs at depth d
    llr_buf = np.zeros((B, L, off[n + 1]), dtype=np.float64)
    # bits_buf[:, l, boff[d]//2 ...]: left-child codeword of the active
    # depth-d node, width N >> (d+1); packed back to back
    bw = np.zeros(n + 1, dtype=np.int64)
    bstart = np.zeros(n + 1, dtype=np.int64)
    acc = 0
    for d in range(n):
        bstart[d] = acc
        bw[d] = N >> (d + 1)
        acc += bw[d]
    bits_buf = np.zeros((B, L, max(acc, 1)), dtype=np.int8)
    dec = np.zeros((B, L, N), dtype=np.int8)
    pm = np.full((B, L), np.inf, dtype=np.float64)
    pm[:, 0] = 0.0
    llr_buf[:, 0, off[0] : off[1]] = llr
    nact = 1

    def f_update(d, count):
        size = N >> d
        h = size >> 1
        a = llr_buf[:, :count, off[d] : off[d] + h]
        b = llr_buf[:, :count, off[d] + h : off[d] + size]
        llr_buf[:, :count, off[d + 1] : off[d + 1] + h] = f(a, b)

    def g_update(d, count):
        size = N >> d
        h = size >> 1
        a = llr_buf[:, :count, off[d] : off[d] + h]
        b = llr_buf[:, :count, off[d] + h : off[d] + size]
        s = bits_buf[:, :count, bstart[d] : bstart[d] + h]
        llr_buf[:, :count, off[d + 1] : off[d + 1] + h] = b + (1 - 2 * s.astype(
            np.float64
        )) * a

    def push_bits(p, decided, count):
        cw = decided.astype(np.int8)[:, :, None]
        d = n - 1
        q = p
        while q & 1 and d >= 0:
            left = bits_buf[:, :count, bstart[d] : bstart[d] + bw[d]]
            cw = np.concatenate([left ^ cw, cw], axis=2)
            d -= 1
            q >>= 1
        if d >= 0:
            bits_buf[:, :count, bstart[d] : bstart[d] + bw[d]] = cw

    for p in range(N):
        if p == 0:
            for d in range(n):
                f_update(d, nact)
        else:
            s = (p & -p).bit_length() - 1  # trailing zeros
            g_update(n - 1 - s, nact)
            for d in range(n - s, n):
                f_update(d, nact)
        lam = llr_buf[:, :nact, off[n]]  # (B, nact)
        kind = spec.kinds[p]

        if kind == INFO:
            pen0 = np.where(lam < 0, -lam, 0.0)
            pen1 = np.where(lam >= 0, lam, 0.0)
            cand = 2 * nact
            if L == 1:
                decided = (lam < 0).astype(np.int8)
                dec[:, :1, p] = decided
                push_bits(p, decided, 1)
            elif cand <= L:
                llr_buf[:, nact:cand] = llr_buf[:, :nact]
                bits_buf[:, nact:cand] = bits_buf[:, :nact]
                dec[:, nact:cand] = dec[:, :nact]
                pm[:, nact:cand] = pm[:, :nact] + pen1
                pm[:, :nact] += pen0
                dec[:, :nact, p] = 0
                dec[:, nact:cand, p] = 1
                decided = dec[:, :cand, p]
                nact = cand
                push_bits(p, decided, nact)
            else:
                metric_cand = np.concatenate([pm[:, :nact] + pen0,
                                              pm[:, :nact] + pen1], axis=1)
                order = np.argsort(metric_cand, axis=1, kind="stable")[:, :L]
                parent = order % nact
                bit = (order >= nact).astype(np.int8)
                rows = np.arange(B)[:, None]
                llr_buf = llr_buf[rows, parent]
                bits_buf = bits_buf[rows, parent]
                dec = dec[rows, parent]
                pm = np.take_along_axis(metric_cand, order, axis=1)
                dec[:, :, p] = bit
                nact = L
                push_bits(p, bit, nact)
        else:
            if kind == FROZEN_ZERO:
                decided = np.zeros((B, nact), dtype=np.int8)
            elif kind == FROZEN_DEAD:
                decided = np.full((B, nact), spec.dead_values[p], dtype=np.int8)
            else:  # FROZEN_COPY
                decided = dec[:, :nact, spec.copy_source[p]]
            hard = (lam < 0).astype(np.int8)
            pm[:, :nact] += np.where(hard != decided, np.abs(lam), 0.0)
            dec[:, :nact, p] = decided
            push_bits(p, decided, nact)

    # best metric first, stable for reproducibility
    order = np.argsort(pm[:, :nact], axis=1, kind="stable")
    rows = np.arange(B)[:, None]
    dec_sorted = dec[rows, order]
    pm_sorted = np.take_along_axis(pm[:, :nact], order, axis=1)
    return dec_sorted, pm_sorted
