"""Binary genomes, the OneMax fitness function, and Hamming distance."""

from __future__ import annotations

import numpy as np


class BitString:
    """Immutable fixed-length string of 0/1 values.

    The underlying array is copied on construction and marked read-only,
    so instances can be shared freely across concurrent runs.
    """

    __slots__ = ("bits",)

    def __init__(self, bits) -> None:
        arr = np.array(bits, dtype=np.uint8, copy=True)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("bits must be a nonempty one-dimensional sequence")
        if arr.max() > 1:
            raise ValueError("bits must contain only 0 and 1")
        arr.setflags(write=False)
        self.bits = arr

    @classmethod
    def from01(cls, s: str) -> "BitString":
        """Build from a literal like ``"10110100"``."""
        return cls([int(ch) for ch in s])

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "BitString":
        """Uniform random string of length n."""
        if n < 1:
            raise ValueError(f"dimension must be positive, got {n}")
        return cls(rng.integers(0, 2, size=n, dtype=np.uint8))

    @property
    def n(self) -> int:
        return self.bits.size

    def complement(self) -> "BitString":
        return BitString(1 - self.bits)

    def __len__(self) -> int:
        return self.bits.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return self.bits.shape == other.bits.shape and bool(
            np.array_equal(self.bits, other.bits)
        )

    def __hash__(self) -> int:
        return hash(self.bits.tobytes())

    def __repr__(self) -> str:
        head = "".join(str(int(v)) for v in self.bits[:16])
        if self.n > 16:
            head += "..."
        return f"BitString({head}, n={self.n})"


def onemax(x: BitString) -> int:
    """Number of 1-bits in x (fitness against the all-ones target)."""
    return int(x.bits.sum())


def hamming(x: BitString, y: BitString) -> int:
    """Number of positions where x and y differ."""
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(y)}")
    return int(np.count_nonzero(x.bits != y.bits))
