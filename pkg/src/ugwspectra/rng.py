"""Counter-based random words, addressable by (seed, domain, generation, index, draw).

All randomness in the package flows through this module. A "stream" is the
key derived from (seed, domain, generation); a word inside the stream is a
pure function of (index, draw). Because no state is carried between calls,
any evaluation order, any chunking across threads, and the scalar and
vectorised implementations all yield bit-identical output.

The scalar functions here are the reference; the compiled kernels repeat
the same arithmetic in C, and the NumPy helpers evaluate it on uint64
arrays. The finaliser is the well-known 64-bit xor-multiply-shift mixer
(splitmix-style), which is bijective on 64-bit words.
"""

from __future__ import annotations

import numpy as np

MASK = 0xFFFFFFFFFFFFFFFF
GOLD = 0x9E3779B97F4A7C15
MIX_A = 0xBF58476D1CE4E5B9
MIX_B = 0x94D049BB133111EB
SALT = 0xD1B54A32D192ED03

# Domain separators. Every consumer owns one so that identical seeds never
# alias streams across unrelated parts of the pipeline.
DOM_OFFSPRING = 1
DOM_ROOT = 2
DOM_DEGREE = 3
DOM_STUB = 4
DOM_ER = 5
DOM_PRIME = 6
DOM_BOOT = 7
DOM_ESTIMATE = 8

_INV_2_53 = 2.0 ** -53

_U64 = np.uint64
_GOLD_NP = _U64(GOLD)
_MIX_A_NP = _U64(MIX_A)
_MIX_B_NP = _U64(MIX_B)
_SALT_NP = _U64(SALT)


def mix64(x: int) -> int:
    x &= MASK
    x ^= x >> 30
    x = (x * MIX_A) & MASK
    x ^= x >> 27
    x = (x * MIX_B) & MASK
    x ^= x >> 31
    return x


def derive_key(seed: int, domain: int, generation: int) -> int:
    """Stream key for one (seed, domain, generation) triple."""
    k = mix64((seed ^ ((domain * GOLD) & MASK)) & MASK)
    return mix64((k + ((generation * SALT) & MASK)) & MASK)


def word(key: int, index: int, draw: int) -> int:
    w = mix64((key + ((index * GOLD) & MASK)) & MASK)
    return mix64(w ^ ((draw * SALT) & MASK))


def uniform(key: int, index: int, draw: int) -> float:
    """One double in [0, 1) with 53 random bits."""
    return (word(key, index, draw) >> 11) * _INV_2_53


def mix64_np(x: np.ndarray) -> np.ndarray:
    # operates in place on a uint64 copy; wraparound is the intended semantics
    x = x.astype(_U64, copy=True)
    x ^= x >> _U64(30)
    x *= _MIX_A_NP
    x ^= x >> _U64(27)
    x *= _MIX_B_NP
    x ^= x >> _U64(31)
    return x


def words_np(key: int, index: np.ndarray, draw: int) -> np.ndarray:
    idx = index.astype(_U64, copy=False)
    w = mix64_np(_U64(key) + idx * _GOLD_NP)
    w ^= _U64((draw * SALT) & MASK)
    return mix64_np(w)


def uniforms_np(key: int, index: np.ndarray, draw: int) -> np.ndarray:
    return (words_np(key, index, draw) >> _U64(11)).astype(np.float64) * _INV_2_53


class RngStream:
    """Thin handle bundling a derived key; what samplers receive.

    Carrying the key rather than (seed, domain, generation) keeps hot loops
    free of rederivation while preserving the counter-based contract.
    """

    __slots__ = ("key", "seed", "domain", "generation")

    def __init__(self, seed: int, domain: int = DOM_ESTIMATE, generation: int = 0):
        self.seed = seed
        self.domain = domain
        self.generation = generation
        self.key = derive_key(seed, domain, generation)

    def uniform(self, index: int, draw: int = 0) -> float:
        return uniform(self.key, index, draw)

    def uniforms(self, index: np.ndarray, draw: int = 0) -> np.ndarray:
        return uniforms_np(self.key, index, draw)
