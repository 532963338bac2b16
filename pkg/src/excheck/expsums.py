"""Prefix-scrambled binary van der Corput sequence and its exponential sums.

Point ``x_n`` is built from the binary digits d_0, d_1, ... of n (least
significant first): digit i is flipped by the oracle bit attached to the word
d_0 ... d_{i-1}, and the flipped digit becomes binary place i+1 of x_n.  Points
are carried as B-bit integer numerators, so x_n = X / 2**B exactly and the
phase of e(k x_n) is (k X mod 2**B) / 2**B, computed with wrapping uint64
multiplication.

A word u_0 ... u_{L-1} is encoded as the pair (L, sum u_i 2**i).
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidArgument, InvalidParameter

DEFAULT_DEPTH = 64
MIN_DEPTH = 48

# 256-bit seed used for calibration and the default report
REFERENCE_SEED = "9b3c1f0e5a7d2c4b8e6f1a3d5c7b9e0f2a4c6e8d0b1f3a5c7e9d2b4f6a8c0e1d"

# max over k <= 256 of sup_{N <= 2^20} |S_N(k)| / sqrt(k log 2k) for
# REFERENCE_SEED, measured by the pilot run and frozen here
PILOT_ENVELOPE_CONSTANT = 2.813622099895252

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_ONE = np.uint64(1)


def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _as_words(values):
    return np.asarray(values, dtype=np.uint64)


class ScrambleOracle:
    """Keyed pseudorandom bit per binary word.

    Each word length L gets two 64-bit keys derived from SHA-256(seed || L);
    the bit is the top bit of a two-round splitmix finaliser of the encoded
    word.  ``zero=True`` gives the all-zero oracle (plain van der Corput).
    """

    def __init__(self, seed: bytes | str | None = None, depth: int = DEFAULT_DEPTH,
                 zero: bool = False):
        if not MIN_DEPTH <= depth <= 64:
            raise InvalidParameter(f"truncation depth must lie in [{MIN_DEPTH}, 64], got {depth}")
        self.depth = depth
        self.zero = zero
        if zero:
            self.seed = bytes(32)
            self._keys = None
            return
        if seed is None:
            seed = REFERENCE_SEED
        if isinstance(seed, str):
            seed = bytes.fromhex(seed.removeprefix("0x").rjust(64, "0"))
        if len(seed) != 32:
            raise InvalidParameter("seed must be 256 bits")
        self.seed = seed
        keys = np.zeros((depth + 1, 2), dtype=np.uint64)
        for length in range(depth + 1):
            h = hashlib.sha256(seed + length.to_bytes(2, "big")).digest()
            keys[length, 0] = int.from_bytes(h[:8], "big")
            keys[length, 1] = int.from_bytes(h[8:16], "big")
        self._keys = keys

    @classmethod
    def zeros(cls, depth: int = DEFAULT_DEPTH) -> "ScrambleOracle":
        return cls(depth=depth, zero=True)

    @property
    def seed_hex(self) -> str:
        return self.seed.hex()

    def bits(self, length: int, values):
        """Oracle bits for words of one common length (vectorised)."""
        values = _as_words(values)
        if not 0 <= length <= self.depth:
            raise InvalidArgument(f"word length {length} exceeds depth {self.depth}")
        if self.zero:
            return np.zeros_like(values)
        h = _mix(values ^ self._keys[length, 0])
        h = _mix(h ^ self._keys[length, 1])
        return h >> np.uint64(63)

    def __repr__(self):
        kind = "zero" if self.zero else self.seed_hex[:12] + "..."
        return f"ScrambleOracle({kind}, depth={self.depth})"


def _word_bits(word) -> list:
    bits = [int(c) for c in word]
    if set(bits) - {0, 1}:
        raise InvalidArgument(f"not a binary word: {word!r}")
    return bits


def eta(oracle: ScrambleOracle, word) -> int:
    bits = _word_bits(word)
    length, value = len(bits), sum(b << i for i, b in enumerate(bits))
    if length > oracle.depth:
        raise InvalidArgument(f"word length {length} exceeds depth {oracle.depth}")
    return int(oracle.bits(length, np.array([value], dtype=np.uint64))[0])


@dataclass(frozen=True)
class SequencePoint:
    n: int
    numerator: int
    depth: int

    @property
    def x(self) -> float:
        return self.numerator / 2.0 ** self.depth

    @property
    def exact(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.depth)


def numerators(oracle: ScrambleOracle, ns) -> np.ndarray:
    """B-bit numerators of x_n for an array of indices."""
    ns = _as_words(ns)
    B = oracle.depth
    X = np.zeros_like(ns)
    for i in range(B):
        prefix = ns & np.uint64((1 << i) - 1)
        digit = (ns >> np.uint64(i)) & _ONE
        X |= (digit ^ oracle.bits(i, prefix)) << np.uint64(B - 1 - i)
    return X


def x_n(oracle: ScrambleOracle, n: int) -> SequencePoint:
    if n < 0:
        raise InvalidArgument("index must be non-negative")
    X = numerators(oracle, np.array([n % (1 << 64)], dtype=np.uint64))
    return SequencePoint(n=n, numerator=int(X[0]), depth=oracle.depth)


def j_r(oracle: ScrambleOracle, w) -> int:
    """Scrambled value of the r-bit word w, read as an r-bit binary fraction numerator."""
    bits = _word_bits(w)
    length = len(bits)
    out = 0
    prefix = 0
    for i, b in enumerate(bits):
        flip = int(oracle.bits(i, np.array([prefix], dtype=np.uint64))[0])
        out |= (b ^ flip) << (length - 1 - i)
        prefix |= b << i
    return out


def j_r_all(oracle: ScrambleOracle, r: int) -> np.ndarray:
    """j_r(w) for every word, indexed by the integer m = sum w_i 2^i."""
    ms = np.arange(1 << r, dtype=np.uint64)
    out = np.zeros_like(ms)
    for i in range(r):
        prefix = ms & np.uint64((1 << i) - 1)
        bit = ((ms >> np.uint64(i)) & _ONE) ^ oracle.bits(i, prefix)
        out |= bit << np.uint64(r - 1 - i)
    return out


def tail_numerators(oracle: ScrambleOracle, P: int, r: int) -> np.ndarray:
    """(B - r)-bit numerators of the scrambled tail T_{w,P}, for all w.

    Tail digit l is p_l flipped by the oracle bit of the word w p_0 ... p_{l-1}.
    Keeping B - r digits gives x_n its full B-bit resolution.
    """
    B = oracle.depth
    if r > B:
        raise InvalidArgument(f"block exponent r={r} exceeds depth {B}")
    ms = np.arange(1 << r, dtype=np.uint64)
    width = B - r
    T = np.zeros_like(ms)
    for ell in range(width):
        p_low = P & ((1 << ell) - 1)
        word = ms | np.uint64(p_low << r) if ell else ms
        digit = np.uint64((P >> ell) & 1)
        T |= (digit ^ oracle.bits(r + ell, word)) << np.uint64(width - 1 - ell)
    return T


def _phases(X, k: int, depth: int) -> np.ndarray:
    kX = X * np.uint64(k)
    if depth < 64:
        kX &= np.uint64((1 << depth) - 1)
    return kX.astype(np.float64) / 2.0 ** depth


def _e(phases) -> np.ndarray:
    return np.exp(2j * np.pi * phases)


def block_sum(oracle: ScrambleOracle, P: int, r: int, k: int) -> complex:
    """Sum over r-bit words w of e(k (j_r(w) + T_{w,P}) / 2^r)."""
    if P < 0 or r < 0 or k < 1:
        raise InvalidArgument("need P, r >= 0 and k >= 1")
    B = oracle.depth
    j = j_r_all(oracle, r)
    Y = (j << np.uint64(B - r)) | tail_numerators(oracle, P, r) if r < B else j
    return complex(_e(_phases(Y, k, B)).sum())


def direct_sum(oracle: ScrambleOracle, start: int, stop: int, k: int) -> complex:
    """Sum of e(k x_n) for start <= n < stop, straight from the sequence."""
    X = numerators(oracle, np.arange(start, stop, dtype=np.uint64))
    return complex(_e(_phases(X, k, oracle.depth)).sum())


def block_tolerance(k: int, r: int, depth: int = DEFAULT_DEPTH) -> float:
    return 2 * math.pi * k * 2.0 ** (r - depth)


@dataclass(frozen=True)
class DyadicBlock:
    P: int
    r: int

    @property
    def start(self) -> int:
        return self.P << self.r

    @property
    def stop(self) -> int:
        return (self.P + 1) << self.r


def decompose(N: int) -> list:
    """Split [0, N) into dyadic blocks, one per set bit of N, largest first."""
    if N < 1:
        raise InvalidArgument("N must be positive")
    blocks = []
    start = 0
    for r in range(N.bit_length() - 1, -1, -1):
        if N >> r & 1:
            blocks.append(DyadicBlock(P=start >> r, r=r))
            start += 1 << r
    return blocks


@dataclass
class SumSeries:
    k: int
    N_max: int
    running_sum: complex
    sup_abs: float
    argmax_N: int

    @property
    def envelope(self) -> float:
        return envelope(self.k)

    @property
    def ratio(self) -> float:
        return self.sup_abs / self.envelope


def envelope(k: int) -> float:
    return math.sqrt(k * math.log(2 * k))


def sup_partial_sums_many(oracle: ScrambleOracle, ks, N_max: int,
                          chunk: int = 1 << 16) -> list:
    """Stream n = 0 .. N_max-1 once, tracking sup_N |S_N(k)| for every k."""
    ks = list(ks)
    if N_max < 1 or any(k < 1 for k in ks):
        raise InvalidArgument("need N_max >= 1 and every k >= 1")
    running = {k: 0j for k in ks}
    best = {k: (0.0, 0) for k in ks}
    for start in range(0, N_max, chunk):
        stop = min(N_max, start + chunk)
        X = numerators(oracle, np.arange(start, stop, dtype=np.uint64))
        for k in ks:
            partial = np.cumsum(_e(_phases(X, k, oracle.depth))) + running[k]
            mags = np.abs(partial)
            i = int(mags.argmax())
            if mags[i] > best[k][0]:
                best[k] = (float(mags[i]), start + i + 1)
            running[k] = complex(partial[-1])
    return [SumSeries(k=k, N_max=N_max, running_sum=running[k],
                      sup_abs=best[k][0], argmax_N=best[k][1]) for k in ks]


def sup_partial_sums(oracle: ScrambleOracle, k: int, N_max: int) -> SumSeries:
    return sup_partial_sums_many(oracle, [k], N_max)[0]


def envelope_table(oracle: ScrambleOracle, kmax: int, nmax: int) -> list:
    """Rows (k, sup_abs, envelope, ratio) for k = 1 .. kmax."""
    series = sup_partial_sums_many(oracle, range(1, kmax + 1), nmax)
    return [(s.k, s.sup_abs, s.envelope, s.ratio) for s in series]


def derived_seeds(base: str = REFERENCE_SEED, count: int = 5) -> list:
    """The base seed followed by count-1 seeds hashed from it."""
    seeds = [base]
    for i in range(1, count):
        seeds.append(hashlib.sha256(bytes.fromhex(base) + i.to_bytes(4, "big")).hexdigest())
    return seeds


def relative_spread(values) -> float:
    """Largest deviation from the mean, relative to the mean."""
    values = list(values)
    mean = sum(values) / len(values)
    return max(abs(v - mean) for v in values) / mean


# Clunie's deterministic unit-modulus sequence, indexed from n = 1:
# x_1 = 1 and x_{a + 2^r} = x_a e^{i pi / 2^r} for 1 <= a <= 2^r, so that
# x_n = exp(i pi phi_n) with phi_n = sum of 2^{-r} over the set bits r of n-1.

def clunie_angles(N_max: int) -> tuple:
    """Integers a_n with x_n = exp(i pi a_n / 2^R), n = 1 .. N_max."""
    R = max(1, (N_max - 1).bit_length())
    m = np.arange(N_max, dtype=np.int64)
    acc = np.zeros(N_max, dtype=np.int64)
    for r in range(R):
        acc += ((m >> r) & 1) << (R - r)
    return acc, R


def clunie_terms(k: int, N_max: int) -> np.ndarray:
    angles, R = clunie_angles(N_max)
    return np.exp(1j * np.pi * ((k * angles) % (2 << R)) / 2.0 ** R)


def clunie_baseline(k: int, N_max: int) -> float:
    """sup over N <= N_max of |sum_{n<=N} x_n^k| for Clunie's sequence."""
    if k < 1 or N_max < 1:
        raise InvalidArgument("need k >= 1 and N_max >= 1")
    return float(np.abs(np.cumsum(clunie_terms(k, N_max))).max())


def vdc_baseline(k: int, N_max: int, depth: int = DEFAULT_DEPTH) -> float:
    return sup_partial_sums(ScrambleOracle.zeros(depth), k, N_max).sup_abs
