"""GF(2) polar transform and index arithmetic.

The encoder is the plain Kronecker power of the 2x2 kernel; the bit-reverse
permutation lives entirely on the decoding side, so coded-bit indices here
always refer to the untouched Kronecker output.
"""

from __future__ import annotations

import numpy as np

KERNEL = np.array([[1, 0], [1, 1]], dtype=np.int8)


def _check_pow2(N: int) -> int:
    if N <= 0 or (N & (N - 1)) != 0:
        raise ValueError(f"length must be a power of two, got {N}")
    return N.bit_length() - 1


def polar_transform(u) -> np.ndarray:
    """Encode x = u . G_N over GF(2) with the O(N log N) butterfly.

    Parameters
    ----------
    u : array-like of {0,1}; the last axis is the block of length N = 2^n,
        leading axes are treated as a batch.

    Returns
    -------
    ndarray of int8, the codeword(s) x.
    """
    x = np.array(u, dtype=np.int8)
    if x.ndim == 0:
        raise ValueError("input must have at least one dimension")
    shape = x.shape
    N = shape[-1]
    n = _check_pow2(N)
    x = x.reshape(-1, N)
    for level in range(n):
        step = 1 << (level + 1)
        half = 1 << level
        blocks = x.reshape(x.shape[0], N // step, step)
        blocks[:, :, :half] ^= blocks[:, :, half:]
    return x.reshape(shape)


def gn_matrix(n: int) -> np.ndarray:
    """Dense G_N = G_2^{(x)n} as an int8 matrix."""
    if n < 0:
        raise ValueError("n must be >= 0")
    g = np.array([[1]], dtype=np.int8)
    for _ in range(n):
        g = np.kron(g, KERNEL)
    return g


def gn_submatrix(n: int, row_set, col_set) -> np.ndarray:
    """Submatrix of G_N with rows/columns taken in ascending index order.

    Uses the closed form G_N[i, j] = 1 iff the support of j is contained in
    the support of i, so no full matrix is materialised.
    """
    N = 1 << n
    rows = np.asarray(sorted(row_set), dtype=np.int64)
    cols = np.asarray(sorted(col_set), dtype=np.int64)
    for idx in (rows, cols):
        if idx.size and (idx.min() < 0 or idx.max() >= N):
            raise ValueError(f"index out of range for N={N}")
    if rows.size == 0 or cols.size == 0:
        return np.zeros((rows.size, cols.size), dtype=np.int8)
    return ((rows[:, None] & cols[None, :]) == cols[None, :]).astype(np.int8)


def bit_reverse(i: int, n: int) -> int:
    """Reverse the n-bit expansion of i (an involution on [0, 2^n))."""
    if not 0 <= i < (1 << n):
        raise ValueError(f"index {i} out of range for n={n}")
    out = 0
    for _ in range(n):
        out = (out << 1) | (i & 1)
        i >>= 1
    return out


def bit_reverse_all(n: int) -> np.ndarray:
    """Vector psi with psi[i] = bit_reverse(i, n)."""
    N = 1 << n
    out = np.zeros(N, dtype=np.int64)
    half = 1
    # standard doubling construction
    step = N
    while step > 1:
        step >>= 1
        out[half : 2 * half] = out[:half] + step
        half <<= 1
    return out


def decode_position(i: int, n: int) -> int:
    """0-based position of channel i in the successive-cancellation order.

    The decoder consumes channels in bit-reversed index order, so this is
    simply bit_reverse(i, n).
    """
    return bit_reverse(i, n)


def dominates(i: int, j: int, n: int) -> bool:
    """True iff every set bit of j is also set in i (support inclusion)."""
    for idx in (i, j):
        if not 0 <= idx < (1 << n):
            raise ValueError(f"index {idx} out of range for n={n}")
    return (i & j) == j
