"""End-to-end encoding and per-level decoding.

LLR convention throughout: positive favors bit 0; a position that was never
transmitted carries LLR exactly 0.

Encoding is a single pass for all rates: CRC attach, copy-group precoding
into the mother input vector, the polar transform, and a transmission
schedule that cuts the coded bits into incremental chunks.  Decoding level i
re-indexes the surviving sub-transform into a standalone shorter polar code
whose frozen channels are zeros, copies of earlier decisions, or dead
positions whose value cannot matter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .construct import RcppFamily
from .engine import (
    FROZEN_COPY,
    FROZEN_DEAD,
    FROZEN_ZERO,
    INFO,
    ScheduleSpec,
    decode_batch,
)
from .puncturing import PuncturingPattern, is_hierarchical, pattern_from_seed
from .transform import bit_reverse_all, polar_transform

CRC_POLY = 0x07  # x^8 + x^2 + x + 1


def _crc8_remainder(bits: np.ndarray, poly: int = CRC_POLY) -> np.ndarray:
    """Bitwise CRC-8 remainder over rows; zero initial value, no reflection."""
    B, k = bits.shape
    reg = np.zeros(B, dtype=np.int64)
    for col in range(k):
        fb = ((reg >> 7) & 1) ^ bits[:, col]
        reg = ((reg << 1) & 0xFF) ^ (fb * poly)
    out = np.zeros((B, 8), dtype=np.int8)
    for i in range(8):
        out[:, i] = (reg >> (7 - i)) & 1
    return out


def attach_crc(info, crc_len: int = 8, poly: int = CRC_POLY) -> np.ndarray:
    """Append the CRC remainder; crc_len 0 passes the bits through."""
    info = np.asarray(info, dtype=np.int8)
    if crc_len == 0:
        return info.copy()
    if crc_len != 8:
        raise ValueError("only 8-bit CRC is supported")
    rem = _crc8_remainder(info[None, :], poly)[0]
    return np.concatenate([info, rem])


def check_crc(bits, crc_len: int = 8, poly: int = CRC_POLY) -> bool:
    bits = np.asarray(bits, dtype=np.int8)
    if crc_len == 0:
        return True
    rem = _crc8_remainder(bits[None, : bits.size - 8], poly)[0]
    return bool(np.array_equal(rem, bits[-8:]))


def _check_crc_batch(bits: np.ndarray, crc_len: int, poly: int = CRC_POLY) -> np.ndarray:
    if crc_len == 0:
        return np.ones(bits.shape[0], dtype=bool)
    rem = _crc8_remainder(bits[:, :-8], poly)
    return (rem == bits[:, -8:]).all(axis=1)


def precode(bits, pmap) -> np.ndarray:
    """Spread the |A| input bits over their copy groups into the mother input."""
    bits = np.asarray(bits, dtype=np.int8)
    if bits.size != pmap.bit_count:
        raise ValueError(f"expected {pmap.bit_count} bits, got {bits.size}")
    u = np.zeros(pmap.width, dtype=np.int8)
    for b, group in enumerate(pmap.groups):
        u[list(group)] = bits[b]
    return u


@dataclass(frozen=True)
class TransmissionSchedule:
    """Coded-bit indices sent at each (re)transmission, first chunk first."""

    chunks: tuple

    @property
    def rounds(self) -> int:
        return len(self.chunks)

    def cumulative(self, stage: int) -> np.ndarray:
        """All positions on air after `stage` transmissions (1-based)."""
        return np.concatenate(self.chunks[:stage])


def schedule(family: RcppFamily) -> TransmissionSchedule:
    """Chunk i carries the seed-order slice that upgrades the code from
    level m-i+2 to level m-i+1; chunk 1 is the highest-rate code itself."""
    order = family.seed.order
    N = family.mother_len
    lens = family.ladder.lens
    m = len(lens)
    chunks = []
    for i in range(1, m + 1):
        lo = N - lens[m - i]
        hi = N - (lens[m - i + 1] if m - i + 1 < m else 0)
        chunks.append(order[lo:hi].copy())
    return TransmissionSchedule(chunks=tuple(chunks))


@dataclass(frozen=True)
class ReducedCode:
    """A family level re-indexed onto its surviving sub-transform.

    index_map[j] is the mother channel of reduced channel j; the reduced
    pattern is the level's mask restricted to the envelope survivors.
    bit_to_label maps global information-bit ids to reduced info channels
    (-1 when the bit has no usable channel at this level, which only
    happens for benchmark sets that collide with punctured-dead channels).
    """

    level: int
    length: int
    index_map: np.ndarray
    info_set: frozenset
    pattern: PuncturingPattern
    spec: ScheduleSpec
    bit_to_label: np.ndarray
    crc_len: int
    k: int

    @property
    def n(self) -> int:
        return self.length.bit_length() - 1

    def channel_llrs(self, mother_llrs: np.ndarray) -> np.ndarray:
        """Restrict mother-position LLRs (..., mother_len) to this level."""
        return np.asarray(mother_llrs, dtype=np.float64)[..., self.index_map]


def reduce_code(family: RcppFamily, level: int, *, mother_view: bool = False
                ) -> ReducedCode:
    """Build the standalone decoder view of one family level.

    mother_view=True keeps the full mother length instead of shrinking to
    the surviving sub-transform; decisions must not change either way.
    """
    if not 1 <= level <= family.m:
        raise ValueError(f"level must be in 1..{family.m}")
    lens = family.ladder.lens
    nbar_len = (
        family.mother_len
        if mother_view
        else 1 << (lens[level - 1] - 1).bit_length()
    )
    envelope = pattern_from_seed(family.seed, nbar_len)
    if not is_hierarchical(envelope):
        raise AssertionError("envelope pattern lost the hierarchical property")
    index_map = envelope.survivors  # ascending mother labels
    pos_of = {int(c): j for j, c in enumerate(index_map)}

    a_level = family.effective_set(level)
    mask = family.pattern(level).mask[index_map]
    reduced_pattern = PuncturingPattern(nbar_len, mask)
    owner = family.precoding.channel_to_bit()

    kinds = np.zeros(nbar_len, dtype=np.int8)
    copy_source = np.zeros(nbar_len, dtype=np.int64)
    info_labels = set()
    head_of_group = {}
    for b, group in enumerate(family.precoding.groups):
        heads = [c for c in group if c in a_level]
        if heads:
            head_of_group[b] = heads[0]

    bit_to_label = np.full(family.ladder.info_size, -1, dtype=np.int64)
    for j, c in enumerate(map(int, index_map)):
        if c in a_level:
            kinds[j] = INFO
            info_labels.add(j)
            bit_to_label[owner[c]] = j
        elif mask[j] == 0:
            kinds[j] = FROZEN_DEAD
        elif c in owner and owner[c] in head_of_group:
            kinds[j] = FROZEN_COPY
            copy_source[j] = pos_of[head_of_group[owner[c]]]
        else:
            kinds[j] = FROZEN_ZERO

    psi = bit_reverse_all(nbar_len.bit_length() - 1)
    spec = ScheduleSpec(
        kinds=kinds[psi],
        copy_source=psi[copy_source[psi]],
        dead_values=np.zeros(nbar_len, dtype=np.int8),
    )
    return ReducedCode(
        level=level,
        length=nbar_len,
        index_map=index_map,
        info_set=frozenset(info_labels),
        pattern=reduced_pattern,
        spec=spec,
        bit_to_label=bit_to_label,
        crc_len=family.ladder.crc_len,
        k=family.ladder.k,
    )


@dataclass(frozen=True)
class EncodeResult:
    u: np.ndarray
    x: np.ndarray
    schedule: TransmissionSchedule


def encode_session(info, family: RcppFamily) -> EncodeResult:
    """One-pass encoding valid for every rate in the family."""
    info = np.asarray(info, dtype=np.int8)
    if info.size != family.ladder.k:
        raise ValueError(f"expected {family.ladder.k} info bits, got {info.size}")
    abits = attach_crc(info, family.ladder.crc_len)
    u = precode(abits, family.precoding)
    x = polar_transform(u)
    return EncodeResult(u=u, x=x, schedule=schedule(family))


@dataclass(frozen=True)
class DecodeResult:
    """List-decoding outcome; `ok` is the CRC verdict of the chosen path."""

    abits: np.ndarray
    ok: bool
    metric: float
    crc_len: int = 0

    @property
    def info(self) -> np.ndarray | None:
        if not self.ok:
            return None
        return self.abits[: self.abits.size - self.crc_len]


def sc_decode(frame, code: ReducedCode, *, use_minsum: bool = False) -> np.ndarray:
    """Plain successive cancellation; returns the reduced input-vector decisions."""
    frame = np.asarray(frame, dtype=np.float64)
    if frame.shape != (code.length,):
        raise ValueError(f"frame must have length {code.length}")
    psi = bit_reverse_all(code.n)
    dec, _ = decode_batch(frame[None, psi], code.spec, 1, use_minsum=use_minsum)
    return dec[0, 0][psi]


def _extract_abits(dec_sched: np.ndarray, code: ReducedCode) -> np.ndarray:
    """Per-path information bits, zero-filling bits with no channel here."""
    psi = bit_reverse_all(code.n)
    cols = np.where(code.bit_to_label >= 0, psi[code.bit_to_label], 0)
    abits = dec_sched[..., cols]
    abits[..., code.bit_to_label < 0] = 0
    return abits


def scl_decode_batch(
    llrs: np.ndarray,
    code: ReducedCode,
    list_size: int,
    *,
    use_minsum: bool = False,
):
    """Batched CRC-aided list decoding.

    Returns (abits, ok, metric): per frame the information-plus-CRC bits of
    the best CRC-passing path, or of the best-metric path with ok False
    when no path passes.  Without a CRC the best-metric path wins and ok is
    always True.
    """
    llrs = np.asarray(llrs, dtype=np.float64)
    psi = bit_reverse_all(code.n)
    dec, pm = decode_batch(llrs[:, psi], code.spec, list_size, use_minsum=use_minsum)
    B, L, _ = dec.shape
    abits = _extract_abits(dec, code)
    flat_ok = _check_crc_batch(abits.reshape(B * L, -1), code.crc_len)
    ok = flat_ok.reshape(B, L)
    pick = np.where(ok.any(axis=1), ok.argmax(axis=1), 0)
    rows = np.arange(B)
    return (
        abits[rows, pick],
        ok.any(axis=1) if code.crc_len else np.ones(B, dtype=bool),
        pm[rows, pick],
    )


def scl_decode(
    frame,
    code: ReducedCode,
    list_size: int,
    *,
    use_minsum: bool = False,
) -> DecodeResult:
    """Single-frame CRC-aided list decoding; failure is a value, not an error."""
    frame = np.asarray(frame, dtype=np.float64)
    abits, ok, metric = scl_decode_batch(
        frame[None, :], code, list_size, use_minsum=use_minsum
    )
    return DecodeResult(
        abits=abits[0], ok=bool(ok[0]), metric=float(metric[0]), crc_len=code.crc_len
    )
