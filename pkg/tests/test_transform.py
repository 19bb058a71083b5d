import itertools

import numpy as np
import pytest

from rcpolar.transform import (
    bit_reverse,
    bit_reverse_all,
    decode_position,
    dominates,
    gn_matrix,
    gn_submatrix,
    polar_transform,
)


def dense_gn(n):
    """Independent dense construction straight from the Kronecker definition."""
    g = np.array([[1]], dtype=np.int64)
    k = np.array([[1, 0], [1, 1]], dtype=np.int64)
    for _ in range(n):
        g = np.kron(g, k)
    return g


class TestPolarTransform:
    def test_zero_vector(self):
        assert np.array_equal(polar_transform(np.zeros(8, dtype=int)), np.zeros(8))

    def test_last_row_all_ones(self):
        u = np.zeros(8, dtype=int)
        u[7] = 1
        assert np.array_equal(polar_transform(u), np.ones(8))

    @pytest.mark.parametrize("n", [0, 1, 2, 3, 4, 5])
    def test_matches_dense_matrix_product(self, n):
        rng = np.random.default_rng(1234 + n)
        g = dense_gn(n)
        for _ in range(20):
            u = rng.integers(0, 2, size=1 << n)
            expect = u @ g % 2
            assert np.array_equal(polar_transform(u), expect)

    def test_involution(self):
        # G_N is self-inverse over GF(2)
        rng = np.random.default_rng(7)
        u = rng.integers(0, 2, size=64)
        assert np.array_equal(polar_transform(polar_transform(u)), u)

    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValueError):
            polar_transform(np.zeros(6, dtype=int))


class TestGnSubmatrix:
    def test_full_kernel(self):
        assert np.array_equal(gn_submatrix(1, {0, 1}, {0, 1}), [[1, 0], [1, 1]])

    def test_empty_rows(self):
        assert gn_submatrix(3, set(), {0, 1}).shape == (0, 2)

    def test_odd_block_of_g8_is_g4(self):
        odd = {1, 3, 5, 7}
        assert np.array_equal(gn_submatrix(3, odd, odd), dense_gn(2))

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_matches_dense(self, n):
        rng = np.random.default_rng(n)
        g = dense_gn(n)
        for _ in range(10):
            rows = sorted(rng.choice(1 << n, size=rng.integers(1, 1 << n), replace=False))
            cols = sorted(rng.choice(1 << n, size=rng.integers(1, 1 << n), replace=False))
            assert np.array_equal(gn_submatrix(n, rows, cols), g[np.ix_(rows, cols)] % 2)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            gn_submatrix(2, {4}, {0})

    def test_full_matrix_matches_gn_matrix(self):
        n = 5
        assert np.array_equal(gn_matrix(n), gn_submatrix(n, range(32), range(32)))

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_row_weights_follow_kronecker_structure(self, n):
        g = gn_matrix(n)
        for i in range(1 << n):
            assert g[i].sum() == 1 << bin(i).count("1")


class TestBitReverse:
    def test_palindrome(self):
        assert bit_reverse(0, 3) == 0

    def test_hand_value(self):
        assert bit_reverse(1, 3) == 4

    def test_sc_order_n3(self):
        order = sorted(range(8), key=lambda i: bit_reverse(i, 3))
        assert order == [0, 4, 2, 6, 1, 5, 3, 7]

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
    def test_involution_and_bijection(self, n):
        seen = set()
        for i in range(1 << n):
            r = bit_reverse(i, n)
            assert bit_reverse(r, n) == i
            seen.add(r)
        assert seen == set(range(1 << n))

    def test_bit_reverse_all(self):
        for n in range(7):
            assert np.array_equal(
                bit_reverse_all(n), [bit_reverse(i, n) for i in range(1 << n)]
            )

    def test_range_check(self):
        with pytest.raises(ValueError):
            bit_reverse(8, 3)


class TestDecodePosition:
    def test_spec_values(self):
        assert decode_position(6, 3) == 3
        assert decode_position(3, 3) == 6

    @pytest.mark.parametrize("n", [1, 3, 5])
    def test_zero_first(self, n):
        assert decode_position(0, n) == 0


class TestDominates:
    def test_support_cover(self):
        assert dominates(7, 5, 3)
        assert not dominates(5, 2, 3)

    def test_everything_dominates_zero(self):
        for i in range(8):
            assert dominates(i, 0, 3)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_partial_order(self, n):
        N = 1 << n
        for i in range(N):
            assert dominates(i, i, n)
        for i, j in itertools.permutations(range(N), 2):
            if dominates(i, j, n) and dominates(j, i, n):
                pytest.fail(f"antisymmetry violated at ({i},{j})")
        for i, j, k in itertools.product(range(N), repeat=3):
            if dominates(i, j, n) and dominates(j, k, n):
                assert dominates(i, k, n)

    def test_matches_generator_entries(self):
        # G_N[i, j] = 1 exactly when i dominates j
        n = 4
        g = dense_gn(n)
        for i in range(16):
            for j in range(16):
                assert bool(g[i, j]) == dominates(i, j, n)
