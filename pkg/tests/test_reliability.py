import itertools

import numpy as np
import pytest

from rcpolar.puncturing import (
    Permutation,
    PuncturingPattern,
    is_reciprocal,
    pattern_from_seed,
    seed_sequence,
    successive_pattern,
)
from rcpolar.reliability import (
    BEC,
    BiAWGN,
    bec_capacities,
    ga_reliabilities,
    max_ind,
    min_ind,
    phi,
    phi_inv,
    reliability_profile,
    select_information_set,
    zero_capacity_set,
)
from rcpolar.transform import bit_reverse, gn_matrix


# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------

def gf2_left_kernel(M):
    """Basis of {w : w M = 0 (mod 2)} by Gaussian elimination."""
    M = np.array(M, dtype=np.int8) % 2
    rows, cols = M.shape
    aug = np.concatenate([M, np.eye(rows, dtype=np.int8)], axis=1)
    pivot_row = 0
    for c in range(cols):
        pivots = [r for r in range(pivot_row, rows) if aug[r, c]]
        if not pivots:
            continue
        aug[[pivot_row, pivots[0]]] = aug[[pivots[0], pivot_row]]
        for r in range(rows):
            if r != pivot_row and aug[r, c]:
                aug[r] ^= aug[pivot_row]
        pivot_row += 1
        if pivot_row == rows:
            break
    return [aug[r, cols:] for r in range(rows) if not aug[r, :cols].any()]


def exact_bec_capacity_oracle(pattern, eps):
    """Brute-force synthesized-channel capacities on the BEC.

    For every erasure outcome on the surviving coded bits, channel i is
    usable iff bit u_i is linearly determined by the unerased outputs and
    the bits decoded before it (bit-reversed order), i.e. iff every left
    kernel vector of the remaining generator columns vanishes at i.
    """
    N = pattern.mother_len
    n = N.bit_length() - 1
    g = gn_matrix(n)
    surv = list(pattern.survivors)
    caps = np.zeros(N)
    for i in range(N):
        prior = [j for j in range(N) if bit_reverse(j, n) < bit_reverse(i, n)]
        free = [j for j in range(N) if j not in prior]
        row_of = {j: r for r, j in enumerate(free)}
        total = 0.0
        for keep_bits in itertools.product([0, 1], repeat=len(surv)):
            observed = [s for s, keep in zip(surv, keep_bits) if keep]
            weight = 1.0
            for keep in keep_bits:
                weight *= (1.0 - eps) if keep else eps
            M = g[np.ix_(free, observed)] if observed else np.zeros((len(free), 0), dtype=np.int8)
            determined = all(w[row_of[i]] == 0 for w in gf2_left_kernel(M))
            total += weight * determined
        caps[i] = total
    return caps


def mc_density_evolution(pattern, sigma2, samples, seed=0):
    """Sampled LLR means per channel via exact f/g updates (all-zero word)."""
    rng = np.random.default_rng(seed)
    N = pattern.mother_len
    n = N.bit_length() - 1
    psi = np.array([bit_reverse(i, n) for i in range(N)])
    base_mean = 2.0 / sigma2
    llr = rng.normal(base_mean, np.sqrt(2.0 * base_mean), size=(samples, N))
    llr *= np.asarray(pattern.mask)[None, :]
    llr = llr[:, psi]  # schedule-domain inputs

    def rec(block):
        size = block.shape[1]
        if size == 1:
            return [block[:, 0]]
        h = size // 2
        a, b = block[:, :h], block[:, h:]
        f = 2.0 * np.arctanh(np.clip(np.tanh(a / 2) * np.tanh(b / 2), -1 + 1e-15, 1 - 1e-15))
        out = rec(f)
        out += rec(a + b)  # genie: all-zero codeword makes g additive
        return out

    sched = rec(llr)
    means = np.array([s.mean() for s in sched])
    return means[psi]


def all_masks(N):
    for bits in range(1 << N):
        mask = np.array([(bits >> i) & 1 for i in range(N)], dtype=np.int8)
        yield PuncturingPattern(N, mask)


# ---------------------------------------------------------------------------
# BEC recursion
# ---------------------------------------------------------------------------

class TestBecCapacities:
    def test_perfect_channel_no_puncturing(self):
        prof = bec_capacities(successive_pattern(8, 8), 0.0)
        assert np.array_equal(prof.values, np.ones(8))

    def test_everything_punctured_all_dead(self):
        prof = bec_capacities(PuncturingPattern.from_zero_set(8, range(8)), 0.3)
        assert (prof.values == 0).all()

    def test_alternating_pattern_dead_count(self):
        p = PuncturingPattern(8, np.array([0, 1, 0, 1, 0, 1, 0, 1]))
        prof = bec_capacities(p, 0.0)
        assert (prof.values == 0).sum() == 4

    @pytest.mark.parametrize(
        "zeros,eps",
        [(set(), 0.5), ({0, 2, 4}, 0.5), ({0, 1, 2, 4, 6}, 0.25), ({0, 3}, 0.5)],
    )
    def test_matches_brute_force_oracle_n8(self, zeros, eps):
        p = PuncturingPattern.from_zero_set(8, zeros)
        got = bec_capacities(p, eps).values
        want = exact_bec_capacity_oracle(p, eps)
        assert np.allclose(got, want, atol=1e-12)

    def test_matches_brute_force_oracle_n16(self):
        p = pattern_from_seed(seed_sequence(16, Permutation.reversal(4)), 11)
        got = bec_capacities(p, 0.5).values
        want = exact_bec_capacity_oracle(p, 0.5)
        assert np.allclose(got, want, atol=1e-12)


class TestZeroCapacitySet:
    def test_reciprocal_gives_back_zero_set(self):
        p = pattern_from_seed(seed_sequence(8, (3, 2, 1)), 5)
        assert zero_capacity_set(p) == p.zero_set

    def test_all_ones_empty(self):
        assert zero_capacity_set(successive_pattern(16, 16)) == frozenset()

    def test_size_matches_punctured_count_n8_exhaustive(self):
        for p in all_masks(8):
            assert len(zero_capacity_set(p)) == 8 - p.weight

    def test_size_matches_punctured_count_n16_sampled(self):
        rng = np.random.default_rng(42)
        for _ in range(300):
            w = int(rng.integers(1, 17))
            keep = rng.choice(16, size=w, replace=False)
            mask = np.zeros(16, dtype=np.int8)
            mask[keep] = 1
            p = PuncturingPattern(16, mask)
            assert len(zero_capacity_set(p)) == 16 - w

    def test_reciprocity_equivalence_n8_exhaustive(self):
        for p in all_masks(8):
            assert is_reciprocal(p) == (zero_capacity_set(p) == p.zero_set)

    def test_dead_channels_stay_dead_at_positive_erasure(self):
        p = PuncturingPattern.from_zero_set(16, {0, 1, 2, 3, 8})
        dead = zero_capacity_set(p)
        prof = bec_capacities(p, 0.37)
        assert all(prof.values[i] == 0.0 for i in dead)


# ---------------------------------------------------------------------------
# GA / phi machinery
# ---------------------------------------------------------------------------

class TestPhi:
    def test_endpoints(self):
        assert phi(np.array(0.0)) == 1.0
        assert phi(np.array([50.0])) < 1e-6

    def test_monotone_decreasing(self):
        x = np.linspace(0, 40, 4001)
        y = phi(x)
        assert (np.diff(y) < 0).all()

    def test_continuous_at_knee(self):
        lo = phi(np.array([7.0633 - 1e-9]))
        hi = phi(np.array([7.0633 + 1e-9]))
        assert abs(lo - hi) < 1e-6

    def test_inverse_round_trip(self):
        x = np.concatenate([np.linspace(0.01, 6.9, 40), np.linspace(7.2, 60, 40)])
        back = phi_inv(phi(x))
        assert np.allclose(back, x, rtol=1e-7)

    def test_inverse_of_one_is_zero(self):
        assert phi_inv(np.array([1.0]))[0] == 0.0


class TestGaReliabilities:
    def test_punctured_positions_yield_zero_means(self):
        p = pattern_from_seed(seed_sequence(8, (3, 2, 1)), 5)
        prof = ga_reliabilities(p, 1.0)
        assert prof.dead_set() == p.zero_set

    def test_no_puncturing_index7_highest(self):
        prof = ga_reliabilities(successive_pattern(8, 8), 1.0)
        assert prof.values.argmax() == 7

    def test_rank_agreement_with_monte_carlo_de(self):
        p = successive_pattern(8, 8)
        ga = ga_reliabilities(p, 1.0).values
        mc = mc_density_evolution(p, 1.0, samples=1_000_000, seed=3)
        # identical ranking of all eight channels
        assert list(np.argsort(ga)) == list(np.argsort(mc))

    def test_rank_agreement_with_monte_carlo_de_punctured(self):
        p = pattern_from_seed(seed_sequence(8, (3, 2, 1)), 5)
        ga = ga_reliabilities(p, 1.0).values
        mc = mc_density_evolution(p, 1.0, samples=1_000_000, seed=4)
        live = sorted(set(range(8)) - p.zero_set)
        assert list(np.argsort(ga[live])) == list(np.argsort(mc[live]))

    def test_monotone_under_mask_relaxation(self):
        rng = np.random.default_rng(11)
        for N in (16, 64):
            for _ in range(5):
                w = int(rng.integers(1, N))
                keep = rng.choice(N, size=w, replace=False)
                mask = np.zeros(N, dtype=np.int8)
                mask[keep] = 1
                p = PuncturingPattern(N, mask)
                base = ga_reliabilities(p, 0.8).values
                zeros = np.flatnonzero(mask == 0)
                if zeros.size == 0:
                    continue
                flip = int(zeros[rng.integers(zeros.size)])
                mask2 = mask.copy()
                mask2[flip] = 1
                relaxed = ga_reliabilities(PuncturingPattern(N, mask2), 0.8).values
                assert (relaxed >= base - 1e-9).all()

    def test_sigma2_validation(self):
        with pytest.raises(ValueError):
            ga_reliabilities(successive_pattern(8, 8), 0.0)


# ---------------------------------------------------------------------------
# selection helpers
# ---------------------------------------------------------------------------

class TestSelection:
    def test_max_min_ind_basic(self):
        vals = [0.1, 0.5, 0.5, 0.9]
        assert max_ind(vals, 1) == {3}
        assert min_ind(vals, 0) == set()
        assert max_ind(vals, 4) == {0, 1, 2, 3}

    def test_tie_break_prefers_small_decode_position(self):
        # indices 1 and 2 tie; decode positions at n=2 are psi(1)=2, psi(2)=1
        vals = [0.0, 0.7, 0.7, 0.9]
        assert max_ind(vals, 2) == {3, 2}
        assert min_ind(vals, 2, candidates={1, 2, 3}) == {2, 1}

    def test_weaker_of_two_under_pattern(self):
        p2 = pattern_from_seed(seed_sequence(8, (3, 2, 1)), 5)
        prof = ga_reliabilities(p2, 1.0)
        sub = {3, 7}
        assert min_ind(prof.values, 1, candidates=sub) == {3}

    def test_select_information_sets_worked_example(self):
        s = seed_sequence(8, (3, 2, 1))
        sigma2 = BiAWGN.from_esn0_db(0.0).sigma2
        p3 = pattern_from_seed(s, 3)
        t3 = select_information_set(ga_reliabilities(p3, sigma2), 2)
        assert t3 == {3, 7}

    def test_select_full_set(self):
        prof = ga_reliabilities(successive_pattern(8, 8), 1.0)
        assert select_information_set(prof, 8) == frozenset(range(8))

    def test_select_excludes_dead_and_forbidden(self):
        p = pattern_from_seed(seed_sequence(8, (3, 2, 1)), 5)
        prof = ga_reliabilities(p, 1.0)
        chosen = select_information_set(prof, 3, forbidden={7})
        assert 7 not in chosen
        assert not (chosen & p.zero_set)

    def test_bec_zero_erasure_tie_break_deterministic(self):
        prof = bec_capacities(successive_pattern(8, 8), 0.0)
        # all capacities are one; smallest decode positions win
        assert select_information_set(prof, 2) == {0, 4}

    def test_infeasible_size(self):
        p = pattern_from_seed(seed_sequence(8, (3, 2, 1)), 3)
        prof = ga_reliabilities(p, 1.0)
        with pytest.raises(ValueError):
            select_information_set(prof, 4)


class TestProfileExport:
    def test_csv_shape(self):
        prof = reliability_profile(successive_pattern(4, 4), BEC(0.5))
        lines = prof.to_csv().strip().splitlines()
        assert lines[0] == "index,value,decode_position"
        assert len(lines) == 5
        assert lines[1].startswith("0,")
