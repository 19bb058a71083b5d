"""Acceptance suite.

Each criterion prints one PASS/FAIL line (run with `pytest -s` to see them
live).  Tolerances and sample sizes are fixed here, not configurable.
"""

import itertools
import math
import time
from contextlib import contextmanager
from dataclasses import replace

import numpy as np
import pytest

from rcpolar.codec import reduce_code, scl_decode_batch, schedule
from rcpolar.construct import (
    BENCHMARK_I,
    benchmark_family,
    build_family,
    family_from_manifest,
)
from rcpolar.engine import FROZEN_DEAD, ScheduleSpec
from rcpolar.harqsim import (
    estimate_fer,
    run_sessions,
    throughput,
    wilson_interval,
)
from rcpolar.cli import main as cli_main
from rcpolar.transform import bit_reverse_all
from rcpolar.verify import (
    check_hierarchical_family,
    check_reciprocity_exhaustive,
    check_reciprocity_sampled,
    check_zero_block,
)

K52_ARGS = (52, 8, (256, 192, 128, 64), tuple(range(8, 0, -1)))
K32_ARGS = (32, 8, (256, 192, 144, 96, 64), tuple(range(8, 0, -1)))
NOISELESS_ESN0 = 10.0 * math.log10(1.0 / (2.0e-4))  # sigma^2 = 1e-4
WORKERS = 2


@contextmanager
def criterion(tag: str):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {tag}: FAIL")
        raise
    print(f"ACCEPTANCE {tag}: PASS")


@pytest.fixture(scope="module")
def toy():
    return build_family(2, 0, (8, 5, 3), (3, 2, 1))


@pytest.fixture(scope="module")
def fam52():
    return build_family(*K52_ARGS)


@pytest.fixture(scope="module")
def bench52():
    return benchmark_family(BENCHMARK_I, *K52_ARGS)


@pytest.fixture(scope="module")
def fam32():
    return build_family(*K32_ARGS)


# ---------------------------------------------------------------------------
# criterion 1: worked-example fidelity (k=2, lens (8,5,3), sigma=(3,2,1))
# ---------------------------------------------------------------------------

class TestCriterion1:
    def test_runtime_under_one_second(self):
        with criterion("1-runtime"):
            t0 = time.perf_counter()
            build_family(2, 0, (8, 5, 3), (3, 2, 1))
            assert time.perf_counter() - t0 < 1.0

    def test_level3_optimized_set(self, toy):
        with criterion("1-T3"):
            assert toy.chain.optimal[2] == {3, 7}

    def test_reduced_level3_code(self, toy):
        with criterion("1-reduced-level3"):
            code = reduce_code(toy, 3)
            assert code.length == 4
            assert code.info_set == {1, 3}
            assert code.pattern.mask.tolist() == [0, 1, 1, 1]
            # both frozen channels carry the known value zero
            psi = bit_reverse_all(2)
            kinds = code.spec.kinds[psi]
            assert all(int(kinds[t]) in (1, 3) for t in (0, 2))

    def test_high_rate_optimized_sets_as_quoted(self, toy):
        with criterion("1-T1-T2"):
            assert toy.chain.optimal[0] == {6, 7} and toy.chain.optimal[1] == {6, 7}, (
                "quoted sets {6,7} are schedule-position labels, not channel "
                "labels: under the bit-reversed decoding order fixed by "
                "decode_position, the top-2 channels of these patterns are "
                f"{sorted(toy.chain.optimal[0])} and {sorted(toy.chain.optimal[1])} "
                "(= {psi(6), psi(7)} read back through the schedule)"
            )

    def test_effective_set_level2_as_quoted(self, toy):
        with criterion("1-A2"):
            assert toy.effective_set(2) == {6, 7}, (
                "with every per-level optimum equal to {3,7} in channel labels, "
                "no copy pair forms and A2 stays "
                f"{sorted(toy.effective_set(2))}"
            )

    def test_precoding_groups_as_quoted(self, toy):
        with criterion("1-groups"):
            assert toy.precoding.groups == ((3, 4, 6), (7,)), (
                "a copy onto channel 4 requires 4 inside the level-1 optimized "
                "set, but channels 3, 5, 6 and 7 all rank above channel 4 on "
                "every unpunctured profile (their binary supports cover or "
                "outrank its single bit), so no ranking rule can produce it; "
                f"groups built: {toy.precoding.groups}"
            )


# ---------------------------------------------------------------------------
# criterion 2: theory suites
# ---------------------------------------------------------------------------

def test_criterion2_theory_suites():
    with criterion("2-theory-suites"):
        t0 = time.perf_counter()
        results = [
            check_reciprocity_exhaustive(N=8),
            check_reciprocity_sampled(N=16, samples=10_000),
            check_zero_block(N=8),
            check_hierarchical_family(n_max=4),
        ]
        elapsed = time.perf_counter() - t0
        for r in results:
            assert r.ok, r.line()
        assert elapsed < 60.0, f"suite took {elapsed:.1f}s"


# ---------------------------------------------------------------------------
# criterion 3: reduced-vs-mother equality and dead-value invariance
# ---------------------------------------------------------------------------

def _noisy_llrs(family, level, frames, sigma2, seed):
    rng = np.random.default_rng(seed)
    k = family.ladder.k
    N = family.mother_len
    pos = family.pattern(level).survivors
    payloads = rng.integers(0, 2, size=(frames, k)).astype(np.int8)
    from rcpolar.harqsim import _encode_batch

    x = _encode_batch(payloads, family)
    mllr = np.zeros((frames, N))
    tx = x[:, pos]
    noise = rng.standard_normal((frames, pos.size))
    mllr[:, pos] = (2.0 / sigma2) * ((1.0 - 2.0 * tx) + math.sqrt(sigma2) * noise)
    return payloads, mllr


def test_criterion3_decoder_equivalences(fam52, fam32):
    with criterion("3-decoder-checks"):
        t0 = time.perf_counter()
        frames = 10_000
        sigma2 = 0.5
        jobs = [(fam52, 3), (fam52, 4), (fam32, 4)]
        for fam, level in jobs:
            width = fam.ladder.info_size
            small = reduce_code(fam, level)
            big = reduce_code(fam, level, mother_view=True)
            _, mllr = _noisy_llrs(fam, level, frames, sigma2,
                                  seed=100 + level + fam.ladder.k)
            a_small = np.zeros((frames, width), dtype=np.int8)
            a_big = np.zeros((frames, width), dtype=np.int8)
            for lo in range(0, frames, 1000):
                hi = lo + 1000
                a_small[lo:hi], _, _ = scl_decode_batch(
                    small.channel_llrs(mllr[lo:hi]), small, 1
                )
                a_big[lo:hi], _, _ = scl_decode_batch(
                    big.channel_llrs(mllr[lo:hi]), big, 1
                )
            assert np.array_equal(a_small, a_big), (
                f"k={fam.ladder.k} level {level} diverged"
            )

        # toggling the substituted value at every dead channel moves nothing;
        # only ladders with non-power-of-two lengths have such channels
        code = reduce_code(fam32, 4)
        flipped = replace(
            code,
            spec=ScheduleSpec(
                kinds=code.spec.kinds,
                copy_source=code.spec.copy_source,
                dead_values=np.where(
                    code.spec.kinds == FROZEN_DEAD, 1, 0
                ).astype(np.int8),
            ),
        )
        assert (code.spec.kinds == FROZEN_DEAD).any()
        _, mllr = _noisy_llrs(fam32, 4, frames, sigma2, seed=300)
        for minsum in (False, True):
            a0, ok0, _ = scl_decode_batch(
                code.channel_llrs(mllr), code, 1, use_minsum=minsum
            )
            a1, ok1, _ = scl_decode_batch(
                flipped.channel_llrs(mllr), flipped, 1, use_minsum=minsum
            )
            assert np.array_equal(a0, a1) and np.array_equal(ok0, ok1)
        assert time.perf_counter() - t0 < 300.0


# ---------------------------------------------------------------------------
# criterion 4: noiseless round trips
# ---------------------------------------------------------------------------

def test_criterion4_noiseless_round_trips(toy, fam52, fam32):
    with criterion("4-noiseless-round-trips"):
        # exhaustive payloads for the toy family
        toy_sched = schedule(toy)
        rng = np.random.default_rng(7)
        for level in (1, 2, 3):
            code = reduce_code(toy, level)
            pos = toy_sched.cumulative(toy.m - level + 1)
            for bits in itertools.product((0, 1), repeat=2):
                info = np.array(bits, dtype=np.int8)
                from rcpolar.codec import encode_session

                enc = encode_session(info, toy)
                mllr = np.zeros(8)
                tx = enc.x[pos]
                mllr[pos] = (2.0 / 1e-4) * (
                    (1.0 - 2.0 * tx) + 1e-2 * rng.standard_normal(pos.size)
                )
                abits, ok, _ = scl_decode_batch(
                    code.channel_llrs(mllr)[None], code, 8
                )
                assert np.array_equal(abits[0][:2], info)
        # a thousand random payloads per level for the two ladder families
        for fam in (fam52, fam32):
            for level in range(1, fam.m + 1):
                pt = estimate_fer(
                    fam, level, NOISELESS_ESN0, max_frames=1000,
                    master_seed=11, workers=WORKERS,
                )
                assert pt.errors == 0, f"k={fam.ladder.k} level {level}"


# ---------------------------------------------------------------------------
# criterion 5: low-rate FER gain and highest-rate coincidence
# ---------------------------------------------------------------------------

def _crossing_db(points, target=1e-2):
    """Es/N0 where the FER curve crosses the target, by log interpolation."""
    pts = sorted(points, key=lambda p: p.esn0_db)
    floor = 0.5 / pts[0].frames
    for a, b in zip(pts, pts[1:]):
        fa = max(a.fer, floor)
        fb = max(b.fer, floor)
        if fa >= target >= fb:
            if fa == fb:
                return a.esn0_db
            frac = (math.log10(target) - math.log10(fa)) / (
                math.log10(fb) - math.log10(fa)
            )
            return a.esn0_db + frac * (b.esn0_db - a.esn0_db)
    raise AssertionError(f"no crossing of {target} on the grid: "
                         f"{[(p.esn0_db, p.fer) for p in pts]}")


def test_criterion5_fer_curves(fam52, bench52):
    with criterion("5-fer-reproduction"):
        t0 = time.perf_counter()
        frames = 10_000
        grid_low = [-6.0, -5.5, -5.0, -4.5, -4.0, -3.5, -3.0, -2.5, -2.0, -1.5]
        prop_pts, bench_pts = [], []
        for esn0 in grid_low:
            prop_pts.append(estimate_fer(
                fam52, 1, esn0, max_frames=frames, list_size=8,
                master_seed=500, workers=WORKERS,
            ))
            bench_pts.append(estimate_fer(
                bench52, 1, esn0, max_frames=frames, list_size=8,
                master_seed=500, workers=WORKERS,
            ))
        cross_prop = _crossing_db(prop_pts)
        cross_bench = _crossing_db(bench_pts)
        gain_db = cross_bench - cross_prop
        print(f"  level-1 crossings at FER 1e-2: proposed {cross_prop:.2f} dB, "
              f"benchmark-I {cross_bench:.2f} dB, gain {gain_db:.2f} dB")
        assert gain_db >= 1.0, f"gain {gain_db:.2f} dB below 1.0 dB"

        for esn0 in (3.5, 4.0, 4.5):
            a = estimate_fer(fam52, 4, esn0, max_frames=frames, list_size=8,
                             master_seed=501, workers=WORKERS)
            b = estimate_fer(bench52, 4, esn0, max_frames=frames, list_size=8,
                             master_seed=501, workers=WORKERS)
            fa, ha = wilson_interval(a.errors, a.frames)
            fb, hb = wilson_interval(b.errors, b.frames)
            assert abs(fa - fb) <= ha + hb, (
                f"level-4 curves split at {esn0} dB: {a.fer} vs {b.fer}"
            )
        elapsed = time.perf_counter() - t0
        print(f"  criterion-5 runtime {elapsed:.0f}s")
        assert elapsed < 3600.0


# ---------------------------------------------------------------------------
# criterion 6: throughput ordering and estimator agreement
# ---------------------------------------------------------------------------

def test_criterion6_throughput_curves(fam52, bench52):
    with criterion("6-throughput-reproduction"):
        frames = 5000
        grid = [-6.0, -5.0, -4.0, -3.0, -2.0, -1.0, 0.0]
        rows = {}
        for label, fam, scheme in (
            ("proposed", fam52, "IR"),
            ("benchmark-I", bench52, "IR"),
            ("cc", fam52, "CC"),
        ):
            rows[label] = [
                run_sessions(fam, esn0, scheme=scheme, frames=frames,
                             list_size=8, master_seed=600, workers=WORKERS)
                for esn0 in grid
            ]
        for stats_list in rows.values():
            for st in stats_list:
                if st.eta_formula > 0:
                    rel = abs(st.eta_formula - st.eta_empirical) / st.eta_formula
                    assert rel <= 0.02
        low_snr = [i for i, e in enumerate(grid) if e <= -1.0]
        for i in low_snr:
            ep = rows["proposed"][i].eta_empirical
            eb = rows["benchmark-I"][i].eta_empirical
            ec = rows["cc"][i].eta_empirical
            assert ep >= eb, f"IR ordering broken at {grid[i]} dB: {ep} < {eb}"
            assert ep >= ec, f"CC ordering broken at {grid[i]} dB: {ep} < {ec}"
        print("  throughput at grid (proposed / benchmark-I / CC):")
        for i, esn0 in enumerate(grid):
            print(f"    {esn0:+.0f} dB: "
                  f"{rows['proposed'][i].eta_empirical:.4f} / "
                  f"{rows['benchmark-I'][i].eta_empirical:.4f} / "
                  f"{rows['cc'][i].eta_empirical:.4f}")


# ---------------------------------------------------------------------------
# criterion 7: throughput formula unit checks and session oracle
# ---------------------------------------------------------------------------

def test_criterion7_formula_checks():
    with criterion("7-throughput-formula"):
        lens = (256, 192, 128, 64)
        assert throughput(52, lens, (0, 0, 0, 0)) == 52 / 64
        assert throughput(52, lens, (1, 1, 1, 1)) == 0.0
        rng = np.random.default_rng(77)
        sessions = 1_000_000
        p = (0.62, 0.35, 0.18, 0.07)
        m = len(lens)
        fail = rng.random((sessions, m)) < np.asarray(p)[None, :]
        bits = np.zeros(sessions, dtype=np.int64)
        success = np.zeros(sessions, dtype=bool)
        for i in range(m):
            active = fail[:, :i].all(axis=1)
            stops = active & ~fail[:, i]
            bits[stops] = lens[m - 1 - i]
            success |= stops
        bits[~success] = lens[0]
        eta_emp = 52 * success.sum() / bits.sum()
        eta_formula = throughput(52, lens, p)
        rel = abs(eta_emp - eta_formula) / eta_formula
        assert rel < 0.01, f"relative error {rel:.4%}"


# ---------------------------------------------------------------------------
# criterion 8: byte-identical regeneration across worker counts
# ---------------------------------------------------------------------------

def test_criterion8_reproducibility(tmp_path):
    with criterion("8-reproducibility"):
        base_args = [
            "fer", "--k", "24", "--crc-len", "8", "--lens", "64,48,32",
            "--snrs", "2,4", "--frames", "1500", "--levels", "1,3",
            "--seed", "321",
        ]
        first = tmp_path / "w1.csv"
        assert cli_main([*base_args, "--out", str(first), "--workers", "1"]) == 0
        manifest = str(first) + ".manifest"
        for w in (4, 16):
            out = tmp_path / f"w{w}.csv"
            rc = cli_main(["fer", "--config", manifest, "--out", str(out),
                           "--workers", str(w)])
            assert rc == 0
            assert out.read_bytes() == first.read_bytes(), f"workers={w} differs"

        tp1 = tmp_path / "tp1.csv"
        tp_args = [
            "throughput", "--k", "24", "--crc-len", "8", "--lens", "64,48,32",
            "--snrs", "1", "--frames", "800", "--seed", "321",
            "--schemes", "proposed:IR,proposed:CC",
        ]
        assert cli_main([*tp_args, "--out", str(tp1), "--workers", "1"]) == 0
        for w in (4, 16):
            out = tmp_path / f"tp{w}.csv"
            rc = cli_main(["throughput", "--config", str(tp1) + ".manifest",
                           "--out", str(out), "--workers", str(w)])
            assert rc == 0
            assert out.read_bytes() == tp1.read_bytes(), f"workers={w} differs"
