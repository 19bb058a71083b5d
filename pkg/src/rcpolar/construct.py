"""Rate-compatible code-family construction.

Builds the full family for a rate ladder: the per-level optimized
information sets, the effective sets obtained by copying information bits
onto carefully chosen frozen channels (the level-by-level pairing
algorithm), and the sparse precoding map that realizes the
information-dependent frozen vector at the encoder.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .puncturing import (
    Permutation,
    PuncturingPattern,
    SeedSequence,
    rc_chain,
    seed_sequence,
)
from .reliability import (
    BEC,
    BiAWGN,
    ChannelModel,
    ReliabilityProfile,
    reliability_profile,
    select_information_set,
    zero_capacity_set,
)
from .transform import bit_reverse_all

PROPOSED = "proposed"
BENCHMARK_I = "benchmark-I"
BENCHMARK_II = "benchmark-II"


@dataclass(frozen=True)
class RateLadder:
    """k information bits sent at cumulative coded lengths lens[0] > ... > lens[-1]."""

    k: int
    lens: tuple
    crc_len: int = 0

    def __post_init__(self):
        lens = tuple(int(x) for x in self.lens)
        object.__setattr__(self, "lens", lens)
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.crc_len not in (0, 8):
            raise ValueError("crc_len must be 0 or 8")
        if not lens or any(b >= a for a, b in zip(lens, lens[1:])):
            raise ValueError(f"lens must be strictly decreasing: {lens}")
        if self.info_size > lens[-1]:
            raise ValueError(
                f"k + crc_len = {self.info_size} exceeds shortest length {lens[-1]}"
            )

    @property
    def m(self) -> int:
        return len(self.lens)

    @property
    def info_size(self) -> int:
        return self.k + self.crc_len

    @property
    def mother_len(self) -> int:
        return 1 << (self.lens[0] - 1).bit_length()

    @property
    def rates(self) -> tuple:
        return tuple(self.k / n for n in self.lens)


@dataclass(frozen=True)
class CopyPair:
    """A single information-copy: new_channel repeats the bit that currently
    lives on dropped_channel; recorded at 1-based level."""

    level: int
    new_channel: int
    dropped_channel: int


@dataclass(frozen=True)
class EffectiveSetChain:
    """Common set, per-level effective sets, and the copy pairs between them."""

    optimal: tuple          # T^(1..m)
    effective: tuple        # A^(1..m)
    pairs: tuple            # CopyPair, recorded from level m-1 down to 1

    @property
    def common(self) -> frozenset:
        return self.effective[-1]


@dataclass(frozen=True)
class PrecodingMap:
    """Bit-to-channel copy groups realizing the information-dependent frozen
    vector: input bit b drives every channel in groups[b]."""

    width: int
    groups: tuple           # tuple of sorted channel tuples, index = bit id

    def __post_init__(self):
        seen = set()
        for g in self.groups:
            for c in g:
                if c in seen:
                    raise ValueError(f"channel {c} appears in two copy groups")
                seen.add(c)

    @property
    def bit_count(self) -> int:
        return len(self.groups)

    def channel_to_bit(self) -> dict:
        return {c: b for b, g in enumerate(self.groups) for c in g}

    def as_matrix(self) -> np.ndarray:
        P = np.zeros((len(self.groups), self.width), dtype=np.int8)
        for b, g in enumerate(self.groups):
            P[b, list(g)] = 1
        return P


@dataclass(frozen=True)
class RcppFamily:
    """Everything needed to encode and decode one rate-compatible family."""

    ladder: RateLadder
    sigma: Permutation
    seed: SeedSequence
    patterns: tuple
    profiles: tuple
    chain: EffectiveSetChain
    precoding: PrecodingMap
    design_channel: ChannelModel
    kind: str = PROPOSED
    guard_swaps: bool = True
    warnings: tuple = ()

    @property
    def m(self) -> int:
        return self.ladder.m

    @property
    def mother_len(self) -> int:
        return self.ladder.mother_len

    def effective_set(self, level: int) -> frozenset:
        return self.chain.effective[level - 1]

    def pattern(self, level: int) -> PuncturingPattern:
        return self.patterns[level - 1]

    def __eq__(self, other):
        if not isinstance(other, RcppFamily):
            return NotImplemented
        return (
            self.ladder == other.ladder
            and tuple(self.sigma) == tuple(other.sigma)
            and self.patterns == other.patterns
            and self.chain == other.chain
            and self.precoding == other.precoding
            and self.design_channel == other.design_channel
            and self.kind == other.kind
            and self.guard_swaps == other.guard_swaps
        )

    __hash__ = None


def optimal_sets(patterns, size: int, design_channel: ChannelModel,
                 profiles=None) -> list:
    """Per-pattern information sets of the given size, highest reliability
    first, never touching a dead channel."""
    if profiles is None:
        profiles = [reliability_profile(p, design_channel) for p in patterns]
    return [select_information_set(prof, size) for prof in profiles]


def effective_sets(optimal, patterns, profiles, *, guard_swaps: bool = True
                   ) -> EffectiveSetChain:
    """Derive per-level effective sets from the common one by pairing.

    Walking levels high-rate to low-rate, channels that the level's own
    optimized set wants, that the next pattern punctures anyway, may take a
    copy of the bit living on the weakest current channel, provided the
    copy target is decoded before the channel it replaces.
    """
    m = len(optimal)
    sizes = {len(t) for t in optimal}
    if len(sizes) != 1:
        raise ValueError(f"optimized sets must share one size, got {sizes}")
    N = patterns[0].mother_len
    psi = bit_reverse_all(N.bit_length() - 1)

    effective = [None] * m
    effective[m - 1] = frozenset(optimal[m - 1])
    pairs = []
    for j in range(m - 2, -1, -1):
        a_next = effective[j + 1]
        b_next = patterns[j + 1].zero_set
        i1 = sorted((frozenset(optimal[j]) - a_next) & b_next, key=lambda c: psi[c])
        rel = profiles[j].values
        pool = sorted(a_next, key=lambda c: (rel[c], psi[c]))[: len(i1)]
        copied, dropped = [], set()
        for new in i1:
            cand = [q for q in pool if q not in dropped and psi[q] > psi[new]]
            if not cand:
                continue
            q = min(cand, key=lambda c: psi[c])
            if guard_swaps and rel[new] < rel[q]:
                continue
            copied.append(new)
            dropped.add(q)
            pairs.append(CopyPair(level=j + 1, new_channel=new, dropped_channel=q))
        effective[j] = frozenset(copied) | (a_next - dropped)
        if len(effective[j]) != len(a_next):
            raise AssertionError("effective set size drifted")
    return EffectiveSetChain(
        optimal=tuple(frozenset(t) for t in optimal),
        effective=tuple(effective),
        pairs=tuple(pairs),
    )


def precoding_map(chain: EffectiveSetChain, width: int) -> PrecodingMap:
    """Replay the copy pairs into disjoint copy groups.

    Groups start as singletons over the sorted common set (bit b on the
    b-th smallest channel); each pair then attaches the new channel to the
    group that currently holds the dropped one.
    """
    roots = sorted(chain.common)
    owner = {c: b for b, c in enumerate(roots)}
    groups = [[c] for c in roots]
    for pair in chain.pairs:
        if pair.dropped_channel not in owner:
            raise ValueError(
                f"copy pair at level {pair.level} references channel "
                f"{pair.dropped_channel} outside every group"
            )
        b = owner[pair.dropped_channel]
        groups[b].append(pair.new_channel)
        owner[pair.new_channel] = b
    return PrecodingMap(width=width, groups=tuple(tuple(sorted(g)) for g in groups))


def _validate_family(fam: RcppFamily) -> list:
    warnings = []
    N = fam.mother_len
    psi = bit_reverse_all(N.bit_length() - 1)
    for j, (a, p) in enumerate(zip(fam.chain.effective, fam.patterns), start=1):
        dead = zero_capacity_set(p)
        if a & dead:
            warnings.append(
                f"level {j}: information set hits {len(a & dead)} dead "
                f"channels; expect an error floor"
            )
    for pair in fam.chain.pairs:
        if psi[pair.dropped_channel] <= psi[pair.new_channel]:
            raise AssertionError(f"copy pair breaks decode order: {pair}")
        t_j = fam.chain.optimal[pair.level - 1]
        a_next = fam.chain.effective[pair.level]
        b_next = fam.patterns[pair.level].zero_set
        if pair.new_channel not in t_j - a_next:
            raise AssertionError(f"copy target violates admissibility: {pair}")
        if pair.new_channel not in b_next:
            raise AssertionError(f"copy target outside next zero set: {pair}")
    groups = fam.precoding.groups
    common = fam.chain.common
    for b, g in enumerate(groups):
        hits = [c for c in g if c in common]
        if len(hits) != 1:
            raise AssertionError(f"group {b} holds {len(hits)} common channels")
    return warnings


def build_family(
    k: int,
    crc_len: int,
    lens,
    sigma,
    design_channel: ChannelModel | None = None,
    *,
    guard_swaps: bool = True,
) -> RcppFamily:
    """Construct the proposed family for one rate ladder.

    Steps: pick the mother length, derive the seed-based rate-compatible
    patterns, optimize the common set for the highest-rate code, run the
    copy pairing to get per-level effective sets, and build the precoding
    map.
    """
    ladder = RateLadder(k=k, lens=tuple(lens), crc_len=crc_len)
    if design_channel is None:
        design_channel = BiAWGN.from_esn0_db(0.0)
    sigma = Permutation(sigma)
    N = ladder.mother_len
    if 1 << sigma.n != N:
        raise ValueError(f"sigma width {sigma.n} does not match mother length {N}")
    seed = seed_sequence(N, sigma)
    patterns = rc_chain(seed, ladder.lens)
    profiles = [reliability_profile(p, design_channel) for p in patterns]
    t_sets = optimal_sets(patterns, ladder.info_size, design_channel, profiles)
    chain = effective_sets(t_sets, patterns, profiles, guard_swaps=guard_swaps)
    pmap = precoding_map(chain, N)
    fam = RcppFamily(
        ladder=ladder,
        sigma=sigma,
        seed=seed,
        patterns=tuple(patterns),
        profiles=tuple(profiles),
        chain=chain,
        precoding=pmap,
        design_channel=design_channel,
        kind=PROPOSED,
        guard_swaps=guard_swaps,
    )
    warnings = _validate_family(fam)
    if warnings:
        fam = replace(fam, warnings=tuple(warnings))
    return fam


def benchmark_family(
    kind: str,
    k: int,
    crc_len: int,
    lens,
    sigma,
    design_channel: ChannelModel | None = None,
) -> RcppFamily:
    """Conventional families with one fixed set and an all-zero frozen vector.

    benchmark-I optimizes the set for the highest-rate code, benchmark-II
    for the lowest-rate code; neither copies bits.  A benchmark-II family
    whose set hits punctured-dead channels at some level is flagged as
    error-floor-prone rather than rejected.
    """
    if kind not in (BENCHMARK_I, BENCHMARK_II):
        raise ValueError(f"unknown benchmark kind: {kind}")
    ladder = RateLadder(k=k, lens=tuple(lens), crc_len=crc_len)
    if design_channel is None:
        design_channel = BiAWGN.from_esn0_db(0.0)
    sigma = Permutation(sigma)
    N = ladder.mother_len
    if 1 << sigma.n != N:
        raise ValueError(f"sigma width {sigma.n} does not match mother length {N}")
    seed = seed_sequence(N, sigma)
    patterns = rc_chain(seed, ladder.lens)
    profiles = [reliability_profile(p, design_channel) for p in patterns]
    t_sets = optimal_sets(patterns, ladder.info_size, design_channel, profiles)
    common = t_sets[-1] if kind == BENCHMARK_I else t_sets[0]
    chain = EffectiveSetChain(
        optimal=tuple(frozenset(t) for t in t_sets),
        effective=tuple(frozenset(common) for _ in t_sets),
        pairs=(),
    )
    pmap = precoding_map(chain, N)
    fam = RcppFamily(
        ladder=ladder,
        sigma=sigma,
        seed=seed,
        patterns=tuple(patterns),
        profiles=tuple(profiles),
        chain=chain,
        precoding=pmap,
        design_channel=design_channel,
        kind=kind,
    )
    warnings = _validate_family(fam)
    if warnings:
        fam = replace(fam, warnings=tuple(warnings))
    return fam


def make_family(kind: str, *args, **kwargs) -> RcppFamily:
    if kind == PROPOSED:
        return build_family(*args, **kwargs)
    return benchmark_family(kind, *args, **kwargs)


# ---------------------------------------------------------------------------
# manifest serialization
# ---------------------------------------------------------------------------

def _channel_to_text(ch: ChannelModel) -> str:
    if isinstance(ch, BEC):
        return f"bec:{ch.eps!r}"
    return f"awgn_sigma2:{ch.sigma2!r}"


def _channel_from_text(text: str) -> ChannelModel:
    tag, value = text.split(":", 1)
    if tag == "bec":
        return BEC(float(value))
    if tag == "awgn_sigma2":
        return BiAWGN(float(value))
    raise ValueError(f"unknown channel spec: {text}")


def _fmt_set(s) -> str:
    return ",".join(str(i) for i in sorted(s))


def family_manifest(fam: RcppFamily) -> str:
    """Human-readable, lossless description of a constructed family."""
    L = fam.ladder
    lines = [
        "[family]",
        f"kind = {fam.kind}",
        f"k = {L.k}",
        f"crc_len = {L.crc_len}",
        f"lens = {','.join(str(x) for x in L.lens)}",
        f"sigma = {','.join(str(x) for x in fam.sigma)}",
        f"mother_len = {fam.mother_len}",
        f"design = {_channel_to_text(fam.design_channel)}",
        f"guard_swaps = {str(fam.guard_swaps).lower()}",
        "",
        "[zero_sets]",
    ]
    for j, p in enumerate(fam.patterns, start=1):
        lines.append(f"level{j} = {_fmt_set(p.zero_set)}")
    lines += ["", "[optimized_sets]"]
    for j, t in enumerate(fam.chain.optimal, start=1):
        lines.append(f"T{j} = {_fmt_set(t)}")
    lines += ["", "[effective_sets]"]
    for j, a in enumerate(fam.chain.effective, start=1):
        lines.append(f"A{j} = {_fmt_set(a)}")
    lines += ["", "[copy_pairs]"]
    for pair in fam.chain.pairs:
        lines.append(
            f"pair = level:{pair.level} new:{pair.new_channel} "
            f"dropped:{pair.dropped_channel}"
        )
    lines += ["", "[copy_groups]"]
    for b, g in enumerate(fam.precoding.groups):
        lines.append(f"bit{b} = {_fmt_set(g)}")
    if fam.warnings:
        lines += ["", "[warnings]"]
        for w in fam.warnings:
            lines.append(f"warning = {w}")
    return "\n".join(lines) + "\n"


def family_from_manifest(text: str) -> RcppFamily:
    """Rebuild a family from its manifest without re-running construction."""
    sections: dict[str, list] = {}
    current = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1]
            sections[current] = []
            continue
        key, value = (tok.strip() for tok in line.split("=", 1))
        sections[current].append((key, value))

    fam_kv = dict(sections["family"])
    k = int(fam_kv["k"])
    crc_len = int(fam_kv["crc_len"])
    lens = tuple(int(x) for x in fam_kv["lens"].split(","))
    sigma = Permutation(int(x) for x in fam_kv["sigma"].split(","))
    design = _channel_from_text(fam_kv["design"])
    guard = fam_kv["guard_swaps"] == "true"
    kind = fam_kv["kind"]

    ladder = RateLadder(k=k, lens=lens, crc_len=crc_len)
    N = ladder.mother_len
    seed = seed_sequence(N, sigma)

    def parse_set(value):
        return frozenset(int(x) for x in value.split(",") if x != "")

    patterns = tuple(
        PuncturingPattern.from_zero_set(N, parse_set(v))
        for _, v in sections["zero_sets"]
    )
    t_sets = tuple(parse_set(v) for _, v in sections["optimized_sets"])
    a_sets = tuple(parse_set(v) for _, v in sections["effective_sets"])
    pairs = []
    for _, v in sections.get("copy_pairs", []):
        kv = dict(tok.split(":", 1) for tok in v.split())
        pairs.append(
            CopyPair(int(kv["level"]), int(kv["new"]), int(kv["dropped"]))
        )
    groups = tuple(
        tuple(sorted(parse_set(v))) for _, v in sections["copy_groups"]
    )
    warnings = tuple(v for _, v in sections.get("warnings", []))
    profiles = tuple(reliability_profile(p, design) for p in patterns)
    return RcppFamily(
        ladder=ladder,
        sigma=sigma,
        seed=seed,
        patterns=patterns,
        profiles=profiles,
        chain=EffectiveSetChain(optimal=t_sets, effective=a_sets, pairs=tuple(pairs)),
        precoding=PrecodingMap(width=N, groups=groups),
        design_channel=design,
        kind=kind,
        guard_swaps=guard,
        warnings=warnings,
    )
