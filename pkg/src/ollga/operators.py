"""Seed plumbing and the variation/selection primitives shared by all optimizers.

Every stochastic operation takes an explicit numpy ``Generator``; there is no
global random state. Child seeds for run i are derived from a master seed with
a SplitMix64 mix, so batches of runs are reproducible and mutually independent.
"""

from __future__ import annotations

import math
from typing import Sequence, Tuple, TypeVar

import numpy as np

RandomSource = np.random.Generator

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

T = TypeVar("T")


def mix64(z: int) -> int:
    """SplitMix64 finalizer; a fixed bijection on 64-bit integers."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def derive_seed(master_seed: int, index: int) -> int:
    """Child seed for run `index`: mix64(master + (index+1) * golden gamma)."""
    if index < 0:
        raise ValueError(f"run index must be nonnegative, got {index}")
    return mix64((master_seed + (index + 1) * _GOLDEN) & _MASK64)


def rng_from_seed(seed: int) -> RandomSource:
    return np.random.Generator(np.random.PCG64(seed))


def nint(r: float) -> int:
    """Nearest integer, with halves rounding up: nint(2.5) = 3."""
    if r < 0:
        raise ValueError(f"nint is defined for nonnegative values, got {r}")
    f = math.floor(r)
    return f + 1 if r - f >= 0.5 else f


class ConditionalBinomial:
    """Binomial(n, p) conditioned on a strictly positive outcome.

    pmf(k) = C(n,k) p^k (1-p)^(n-k) / (1 - (1-p)^n) on k = 1..n.
    """

    def __init__(self, n: int, p: float) -> None:
        if n < 1:
            raise ValueError(f"n must be at least 1, got {n}")
        if not 0.0 < p < 1.0:
            raise ValueError(f"p must lie strictly in (0, 1), got {p}")
        self.n = int(n)
        self.p = float(p)
        self._norm = 1.0 - (1.0 - self.p) ** self.n

    def pmf(self, k: int) -> float:
        if k < 1 or k > self.n:
            return 0.0
        n, p = self.n, self.p
        return math.comb(n, k) * p**k * (1.0 - p) ** (n - k) / self._norm

    def mean(self) -> float:
        return self.n * self.p / self._norm

    def sample(self, rng: RandomSource, size: int | None = None):
        """Draw by rejection from the unconditioned binomial (resample on 0)."""
        if size is None:
            while True:
                k = int(rng.binomial(self.n, self.p))
                if k > 0:
                    return k
        out = rng.binomial(self.n, self.p, size=size)
        zero = out == 0
        while zero.any():
            out[zero] = rng.binomial(self.n, self.p, size=int(zero.sum()))
            zero = out == 0
        return out


def sample_bin_gt0(n: int, p: float, rng: RandomSource, size: int | None = None):
    """Sample from Binomial(n, p) conditioned on being positive."""
    return ConditionalBinomial(n, p).sample(rng, size)


def _fisher_yates_subset(rng: RandomSource, n: int, k: int) -> np.ndarray:
    """Uniform k-subset of range(n) via a partial Fisher-Yates shuffle."""
    positions = list(range(n))
    js = rng.integers(np.arange(k), n)
    for i in range(k):
        j = int(js[i])
        positions[i], positions[j] = positions[j], positions[i]
    return np.asarray(positions[:k])


def mutate_exact(x, ell: int, rng: RandomSource):
    """Flip exactly `ell` positions of x, the flipped set uniform over all C(n, ell) sets."""
    from .genome import BitString

    n = len(x)
    if not 1 <= ell <= n:
        raise ValueError(f"flip count must lie in [1, {n}], got {ell}")
    bits = x.bits.copy()
    idx = _fisher_yates_subset(rng, n, ell)
    bits[idx] ^= 1
    return BitString(bits)


def crossover_biased(x, xp, c: float, rng: RandomSource):
    """Positionwise crossover: copy from xp with probability c, else from x."""
    from .genome import BitString

    if len(x) != len(xp):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(xp)}")
    if not 0.0 < c < 1.0:
        raise ValueError(f"crossover bias must lie strictly in (0, 1), got {c}")
    mask = rng.random(len(x)) < c
    return BitString(np.where(mask, xp.bits, x.bits))


def best_of_uar(
    candidates: Sequence[Tuple[T, int]], rng: RandomSource
) -> Tuple[T, int]:
    """Entry with maximum fitness; ties broken uniformly at random."""
    if not candidates:
        raise ValueError("candidate list must be nonempty")
    best = max(f for _, f in candidates)
    ties = [i for i, (_, f) in enumerate(candidates) if f == best]
    pick = ties[0] if len(ties) == 1 else ties[int(rng.integers(len(ties)))]
    return candidates[pick]
