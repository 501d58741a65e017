"""Seedable 64-bit generator shared by the Python API and the jitted kernels.

The generator is xoshiro256** seeded through splitmix64. Its whole state is
a ``uint64[4]`` array, so numba kernels can draw from it in place and a run
is reproducible bit-for-bit from ``(seed, stream)``.
"""

import numpy as np
from numba import njit

ALGORITHM = "xoshiro256** (splitmix64 seeding)"

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(x):
    x = (x + _GOLDEN) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return x, z ^ (z >> 31)


def seed_state(seed, stream=0):
    """Expand ``(seed, stream)`` into a xoshiro256** state array."""
    x = (int(seed) ^ ((int(stream) * _GOLDEN) & _MASK)) & _MASK
    words = []
    for _ in range(4):
        x, z = _splitmix64(x)
        words.append(z)
    if not any(words):
        words[0] = 1
    return np.array(words, dtype=np.uint64)


@njit(cache=True, nogil=True)
def _rotl(x, k):
    return (x << np.uint64(k)) | (x >> np.uint64(64 - k))


@njit(cache=True, nogil=True)
def next_u64(st):
    s0 = st[0]
    s1 = st[1]
    s2 = st[2]
    s3 = st[3]
    result = _rotl(s1 * np.uint64(5), 7) * np.uint64(9)
    t = s1 << np.uint64(17)
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = _rotl(s3, 45)
    st[0] = s0
    st[1] = s1
    st[2] = s2
    st[3] = s3
    return result


@njit(cache=True, nogil=True)
def next_double(st):
    """Uniform double in [0, 1) from the top 53 bits."""
    return (next_u64(st) >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@njit(cache=True, nogil=True)
def randbelow(st, n):
    """Uniform integer in [0, n); bias is at most n / 2**53."""
    r = np.int64(next_double(st) * n)
    if r >= n:
        r = n - 1
    return r


@njit(cache=True, nogil=True)
def next_bit(st):
    return (next_u64(st) >> np.uint64(63)) == np.uint64(1)


class Rng:
    """Deterministic generator; identical ``(seed, stream)`` gives identical draws."""

    algorithm = ALGORITHM

    def __init__(self, seed=0, stream=0):
        self.seed = int(seed)
        self.stream = int(stream)
        self.state = seed_state(self.seed, self.stream)

    def __repr__(self):
        return f"Rng(seed={self.seed}, stream={self.stream})"

    def next_u64(self):
        return int(next_u64(self.state))

    def random(self):
        return float(next_double(self.state))

    def randbelow(self, n):
        if n < 1:
            raise ValueError("randbelow requires n >= 1")
        return int(randbelow(self.state, n))

    def choice(self, seq):
        return seq[self.randbelow(len(seq))]

    def copy(self):
        other = Rng.__new__(Rng)
        other.seed = self.seed
        other.stream = self.stream
        other.state = self.state.copy()
        return other
