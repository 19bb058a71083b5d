"""Monte-Carlo link simulation: AWGN, standalone FER, IR/CC HARQ sessions.

Reproducibility contract: every frame owns a counter-based random substream
keyed by (master_seed, frame_index), so results are bit-identical for any
worker count and any batch split.  All statistics are merged as integer
counters; derived floats are computed once from the totals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from multiprocessing import Pool

import numpy as np

from .codec import _crc8_remainder, reduce_code, schedule as _schedule, scl_decode_batch
from .construct import RcppFamily
from .transform import polar_transform

_MASK64 = (1 << 64) - 1
_DECODE_BATCH = 256


def frame_rng(master_seed: int, frame_index: int) -> np.random.Generator:
    """Counter-based substream for one frame."""
    key = np.array([master_seed & _MASK64, frame_index & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def awgn_llrs(bits, sigma2: float, rng: np.random.Generator) -> np.ndarray:
    """BPSK(0 -> +1) over AWGN; returns LLRs 2y/sigma2."""
    if sigma2 <= 0:
        raise ValueError("noise variance must be positive")
    bits = np.asarray(bits)
    y = (1.0 - 2.0 * bits) + rng.normal(0.0, math.sqrt(sigma2), size=bits.shape)
    return 2.0 * y / sigma2


def esn0_db_to_sigma2(esn0_db: float) -> float:
    return 1.0 / (2.0 * 10.0 ** (esn0_db / 10.0))


def ebn0_db(esn0_db: float, rate: float) -> float:
    return esn0_db - 10.0 * math.log10(rate)


def wilson_interval(errors: int, trials: int, z: float = 1.96):
    """(point, half-width) of the Wilson score interval."""
    if trials == 0:
        return 0.0, 0.0
    phat = errors / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    centre = (phat + z2 / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials))
    return centre, half


def throughput(k: int, lens, p_stages) -> float:
    """Expected information bits per transmitted coded bit.

    p_stages[i] is the conditional failure probability of transmission i+1
    given every earlier transmission failed; lens are the cumulative coded
    lengths, highest first, so lens[-1] bits are on air after the first
    transmission.
    """
    lens = tuple(int(x) for x in lens)
    m = len(lens)
    p = [float(x) for x in p_stages]
    if len(p) != m:
        raise ValueError("need one conditional failure probability per stage")
    if any(not 0.0 <= x <= 1.0 for x in p):
        raise ValueError("probabilities must lie in [0, 1]")
    p_f = math.prod(p)
    denom = 0.0
    for i in range(1, m):
        prefix = math.prod(p[: i - 1])
        denom += lens[m - i] * (1.0 - p[i - 1]) * prefix
    denom += lens[0] * math.prod(p[: m - 1])
    return k * (1.0 - p_f) / denom


# ---------------------------------------------------------------------------
# per-frame sample generation
# ---------------------------------------------------------------------------

def _frame_samples(master_seed, index, k, n_mother, extra_noise=0):
    """Draw (payload, standard normals) for one frame, fixed order."""
    rng = frame_rng(master_seed, index)
    payload = rng.integers(0, 2, size=k).astype(np.int8)
    noise = rng.standard_normal(n_mother + extra_noise)
    return payload, noise


def _encode_batch(payloads: np.ndarray, family: RcppFamily) -> np.ndarray:
    B = payloads.shape[0]
    crc_len = family.ladder.crc_len
    if crc_len:
        rem = _crc8_remainder(payloads)
        abits = np.concatenate([payloads, rem], axis=1)
    else:
        abits = payloads
    u = np.zeros((B, family.mother_len), dtype=np.int8)
    for b, group in enumerate(family.precoding.groups):
        u[:, list(group)] = abits[:, b : b + 1]
    return polar_transform(u)


# ---------------------------------------------------------------------------
# chunk workers
# ---------------------------------------------------------------------------

_CTX: dict = {}


def _set_ctx(ctx):
    global _CTX
    _CTX = ctx


def _fer_chunk(span):
    """Standalone FER over frame indices [start, stop)."""
    ctx = _CTX
    fam: RcppFamily = ctx["family"]
    code = ctx["code"]
    positions = ctx["positions"]
    sigma = math.sqrt(ctx["sigma2"])
    scale = 2.0 / ctx["sigma2"]
    k = fam.ladder.k
    N = fam.mother_len
    start, stop = span
    errors = undetected = 0
    for lo in range(start, stop, _DECODE_BATCH):
        hi = min(lo + _DECODE_BATCH, stop)
        B = hi - lo
        payloads = np.zeros((B, k), dtype=np.int8)
        noise = np.zeros((B, N))
        for r, idx in enumerate(range(lo, hi)):
            payloads[r], noise[r] = _frame_samples(ctx["seed"], idx, k, N)
        x = _encode_batch(payloads, fam)
        mllr = np.zeros((B, N))
        tx = x[:, positions]
        mllr[:, positions] = scale * (
            (1.0 - 2.0 * tx) + sigma * noise[:, positions]
        )
        abits, ok, _ = scl_decode_batch(
            code.channel_llrs(mllr), code, ctx["list_size"],
            use_minsum=ctx["use_minsum"],
        )
        wrong = (abits[:, :k] != payloads).any(axis=1)
        errors += int((wrong | ~ok).sum())
        undetected += int((wrong & ok).sum())
    return stop - start, errors, undetected


def _session_chunk(span):
    """IR or CC sessions over frame indices [start, stop)."""
    ctx = _CTX
    fam: RcppFamily = ctx["family"]
    scheme = ctx["scheme"]
    sigma2 = ctx["sigma2"]
    sigma = math.sqrt(sigma2)
    scale = 2.0 / sigma2
    k = fam.ladder.k
    N = fam.mother_len
    m = ctx["rounds"]
    crc_len = fam.ladder.crc_len
    start, stop = span
    reached = np.zeros(m, dtype=np.int64)
    failures = np.zeros(m, dtype=np.int64)
    fail_all = np.zeros(m, dtype=np.int64)
    successes = undetected = 0
    bits_sent = 0
    profiling = ctx["profiling"]

    cum_lens = ctx["cum_lens"]
    if scheme == "IR":
        codes = ctx["codes"]  # stage s decodes level m - s
        stage_positions = ctx["stage_positions"]
        extra = 0
    else:
        code = ctx["codes"][0]
        chunk1 = ctx["stage_positions"][0]
        n_m = chunk1.size
        extra = (m - 1) * n_m

    for lo in range(start, stop, _DECODE_BATCH):
        hi = min(lo + _DECODE_BATCH, stop)
        B = hi - lo
        payloads = np.zeros((B, k), dtype=np.int8)
        noise = np.zeros((B, N + extra))
        for r, idx in enumerate(range(lo, hi)):
            payloads[r], noise[r] = _frame_samples(ctx["seed"], idx, k, N, extra)
        x = _encode_batch(payloads, fam)
        alive = np.ones(B, dtype=bool)
        llr_acc = np.zeros((B, N))
        for s in range(m):
            if scheme == "IR":
                pos = stage_positions[s]
                tx = x[:, pos]
                llr_acc[:, pos] = scale * ((1.0 - 2.0 * tx) + sigma * noise[:, pos])
                code_s = codes[s]
            else:
                tx = x[:, chunk1]
                if s == 0:
                    nz = noise[:, chunk1]
                else:
                    base = N + (s - 1) * n_m
                    nz = noise[:, base : base + n_m]
                llr_acc[:, chunk1] += scale * ((1.0 - 2.0 * tx) + sigma * nz)
                code_s = code
            run = np.ones(B, dtype=bool) if profiling else alive
            idx_run = np.flatnonzero(run)
            if idx_run.size == 0:
                break
            abits, ok, _ = scl_decode_batch(
                code_s.channel_llrs(llr_acc[idx_run]), code_s, ctx["list_size"],
                use_minsum=ctx["use_minsum"],
            )
            if crc_len == 0:
                ok = (abits[:, :k] == payloads[idx_run]).all(axis=1)
            wrong = (abits[:, :k] != payloads[idx_run]).any(axis=1)
            live_of_run = alive[idx_run]
            reached[s] += int(live_of_run.sum())
            failures[s] += int((~ok & live_of_run).sum())
            fail_all[s] += int((~ok).sum())
            newly_done = idx_run[ok & live_of_run]
            successes += newly_done.size
            undetected += int((ok & wrong & live_of_run).sum())
            bits_sent += newly_done.size * cum_lens[s]
            alive[newly_done] = False
            if not profiling and not alive.any():
                break
        bits_sent += int(alive.sum()) * cum_lens[m - 1]
    return (
        stop - start,
        reached,
        failures,
        successes,
        undetected,
        bits_sent,
        fail_all,
    )


def _run_chunks(task, ctx, spans, workers: int):
    if workers <= 1:
        _set_ctx(ctx)
        return [task(s) for s in spans]
    with Pool(workers, initializer=_set_ctx, initargs=(ctx,)) as pool:
        return pool.map(task, spans)


def _spans(start: int, count: int, workers: int):
    """Split [start, start+count) into at most `workers` contiguous spans."""
    step = (count + workers - 1) // workers
    out = []
    lo = start
    while lo < start + count:
        hi = min(lo + step, start + count)
        out.append((lo, hi))
        lo = hi
    return out


# ---------------------------------------------------------------------------
# public drivers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FerPoint:
    level: int
    esn0_db: float
    frames: int
    errors: int
    undetected: int

    @property
    def fer(self) -> float:
        return self.errors / self.frames if self.frames else 0.0

    @property
    def ci_half(self) -> float:
        return wilson_interval(self.errors, self.frames)[1]


def estimate_fer(
    family: RcppFamily,
    level: int,
    esn0_db: float,
    *,
    max_frames: int,
    max_errors: int = 0,
    list_size: int = 8,
    master_seed: int = 0,
    workers: int = 1,
    use_minsum: bool = False,
    check_every: int = 4096,
) -> FerPoint:
    """One-shot FER of a family level: all chunks up to that level arrive at
    once, then the reduced code decodes them.

    Stops at max_frames, or earlier at a fixed frame milestone once
    max_errors accumulated; milestones are worker-count independent.
    """
    code = reduce_code(family, level)
    ctx = dict(
        family=family,
        code=code,
        positions=family.pattern(level).survivors,
        sigma2=esn0_db_to_sigma2(esn0_db),
        seed=master_seed,
        list_size=list_size,
        use_minsum=use_minsum,
    )
    frames = errors = undetected = 0
    while frames < max_frames:
        count = min(check_every, max_frames - frames)
        for f, e, u in _run_chunks(
            _fer_chunk, ctx, _spans(frames, count, workers), workers
        ):
            frames += f
            errors += e
            undetected += u
        if max_errors and errors >= max_errors:
            break
    return FerPoint(level, esn0_db, frames, errors, undetected)


@dataclass(frozen=True)
class HarqStats:
    """Aggregated session statistics for one scheme at one SNR.

    failures[i] counts detected stage-(i+1) failures among sessions whose
    earlier stages all failed (the conditional chain); stage_fail_all holds
    unconditional per-stage failure counts when profiling evaluated every
    stage of every session, else None.
    """

    scheme: str
    esn0_db: float
    frames: int
    k: int
    cum_lens: tuple
    reached: tuple
    failures: tuple
    successes: int
    undetected: int
    bits_sent: int
    stage_fail_all: tuple | None = None

    @property
    def p_stages(self) -> tuple:
        return tuple(
            f / r if r else 0.0 for f, r in zip(self.failures, self.reached)
        )

    @property
    def p_f(self) -> float:
        return math.prod(self.p_stages)

    @property
    def eta_formula(self) -> float:
        lens_desc = tuple(sorted(self.cum_lens, reverse=True))
        return throughput(self.k, lens_desc, self.p_stages)

    @property
    def eta_empirical(self) -> float:
        return self.k * self.successes / self.bits_sent if self.bits_sent else 0.0

    @property
    def frame_failure_rate(self) -> float:
        return 1.0 - self.successes / self.frames if self.frames else 0.0


def run_sessions(
    family: RcppFamily,
    esn0_db: float,
    *,
    scheme: str = "IR",
    frames: int,
    list_size: int = 8,
    master_seed: int = 0,
    workers: int = 1,
    use_minsum: bool = False,
    max_rounds: int | None = None,
    profiling: bool = False,
) -> HarqStats:
    """Simulate HARQ sessions.

    IR sends incremental chunks and decodes progressively lower-rate codes
    with the accumulated observations; CC repeats the highest-rate code and
    adds LLRs.  A session ends at the first CRC pass (unless profiling) or
    after the last transmission.
    """
    if scheme not in ("IR", "CC"):
        raise ValueError(f"unknown scheme: {scheme}")
    m = family.m
    from .codec import schedule as make_schedule

    sch = make_schedule(family)
    if scheme == "IR":
        rounds = m
        codes = [reduce_code(family, m - s) for s in range(m)]
        stage_positions = [sch.chunks[s] for s in range(m)]
        cum_lens = [family.ladder.lens[m - 1 - s] for s in range(m)]
    else:
        rounds = m if max_rounds is None else max_rounds
        if rounds < 1:
            raise ValueError("max_rounds must be >= 1")
        codes = [reduce_code(family, m)]
        stage_positions = [sch.chunks[0]]
        cum_lens = [(s + 1) * int(sch.chunks[0].size) for s in range(rounds)]
    ctx = dict(
        family=family,
        scheme=scheme,
        codes=codes,
        stage_positions=stage_positions,
        cum_lens=cum_lens,
        rounds=rounds,
        sigma2=esn0_db_to_sigma2(esn0_db),
        seed=master_seed,
        list_size=list_size,
        use_minsum=use_minsum,
        profiling=profiling,
    )
    reached = np.zeros(rounds, dtype=np.int64)
    failures = np.zeros(rounds, dtype=np.int64)
    fail_all = np.zeros(rounds, dtype=np.int64)
    successes = undetected = bits_sent = done = 0
    for f, r, fl, s, u, b, fa in _run_chunks(
        _session_chunk, ctx, _spans(0, frames, workers), workers
    ):
        done += f
        reached += r
        failures += fl
        fail_all += fa
        successes += s
        undetected += u
        bits_sent += b
    return HarqStats(
        scheme=scheme,
        esn0_db=esn0_db,
        frames=done,
        k=family.ladder.k,
        cum_lens=tuple(cum_lens),
        reached=tuple(int(x) for x in reached),
        failures=tuple(int(x) for x in failures),
        successes=successes,
        undetected=undetected,
        bits_sent=bits_sent,
        stage_fail_all=tuple(int(x) for x in fail_all) if profiling else None,
    )


def _single_session(family, sigma2, scheme, master_seed, list_size, max_rounds):
    esn0_db = 10.0 * math.log10(1.0 / (2.0 * sigma2))
    stats = run_sessions(family, esn0_db, scheme=scheme, frames=1,
                         list_size=list_size, master_seed=master_seed,
                         max_rounds=max_rounds)
    stage = None
    for s, (r, f) in enumerate(zip(stats.reached, stats.failures), start=1):
        if r and not f:
            stage = s
            break
    return stage, stats.bits_sent


def run_ir_session(family: RcppFamily, sigma2: float, *,
                   master_seed: int = 0, list_size: int = 8):
    """Single IR session; returns (success_stage or None, bits_sent)."""
    return _single_session(family, sigma2, "IR", master_seed, list_size, None)


def run_cc_session(family: RcppFamily, sigma2: float, *,
                   master_seed: int = 0, max_rounds: int | None = None,
                   list_size: int = 8):
    """Single CC session; returns (success_round or None, bits_sent)."""
    return _single_session(family, sigma2, "CC", master_seed, list_size, max_rounds)


# ---------------------------------------------------------------------------
# CSV and manifest output
# ---------------------------------------------------------------------------

CSV_HEADER = "scheme,family,level,esn0_db,ebn0_db,frames,errors,fer,fer_ci,throughput"


def fer_csv_row(label: str, family: RcppFamily, point: FerPoint) -> str:
    rate = family.ladder.k / family.ladder.lens[point.level - 1]
    return ",".join(
        [
            "fer",
            label,
            str(point.level),
            repr(float(point.esn0_db)),
            repr(ebn0_db(point.esn0_db, rate)),
            str(point.frames),
            str(point.errors),
            repr(point.fer),
            repr(point.ci_half),
            "",
        ]
    )


def throughput_csv_row(label: str, family: RcppFamily, stats: HarqStats) -> str:
    rate = family.ladder.k / stats.cum_lens[0]
    fer, ci = wilson_interval(stats.frames - stats.successes, stats.frames)
    return ",".join(
        [
            stats.scheme,
            label,
            "0",
            repr(float(stats.esn0_db)),
            repr(ebn0_db(stats.esn0_db, rate)),
            str(stats.frames),
            str(stats.frames - stats.successes),
            repr(stats.frame_failure_rate),
            repr(ci),
            repr(stats.eta_empirical),
        ]
    )
