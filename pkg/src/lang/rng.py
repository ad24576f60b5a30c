"""
Seeded random number generation: xoshiro256++ with its state expanded
from a 64 bit seed by splitmix64. Uniform doubles use the upper 53 bits,
normal variates use the Box-Muller transform on pairs of uniforms.
"""

import math
from typing import Callable, List, Optional

import numpy as np

from src.values.keys import MASK64, SplitMix64

TWO_POW_MINUS_53 = 2.0**-53
# Draws between two deadline checks.
CHECK_INTERVAL = 4096


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Xoshiro256PlusPlus:
    """
    The xoshiro256++ generator over four 64 bit state words.
    """

    def __init__(self, state: List[int]) -> None:
        """
        Create the generator from an explicit state.

        :param state: Four 64 bit words, not all zero.
        :raise ValueError: If the state is malformed.
        """
        if len(state) != 4 or not any(state):
            raise ValueError("xoshiro256++ needs four words, not all zero!")
        self.state = [word & MASK64 for word in state]

    @classmethod
    def from_seed(cls, seed: int) -> "Xoshiro256PlusPlus":
        """
        Expand a seed into the generator state.

        :param seed: Any integer, reduced modulo 2^64.
        :return: The seeded generator.
        """
        expander = SplitMix64(seed)
        return cls([expander.next() for _ in range(4)])

    def next(self) -> int:
        """
        Advance the generator.

        :return: The next 64 bit output.
        """
        s = self.state
        result = (_rotl((s[0] + s[3]) & MASK64, 23) + s[0]) & MASK64
        t = (s[1] << 17) & MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def uniform(self) -> float:
        """
        Draw a uniform double in [0, 1).

        :return: The uniform variate.
        """
        return (self.next() >> 11) * TWO_POW_MINUS_53


class Rng:
    """
    Random number state of one evaluation context. Remembers the seed it
    was last seeded with so the request can be replayed.
    """

    def __init__(
        self, seed: int, check: Optional[Callable[[], None]] = None
    ) -> None:
        """
        Seed the generator.

        :param seed: The seed.
        :param check: Called every CHECK_INTERVAL draws, raises to abort
            long draws, e.g. when the deadline of the evaluation passed.
        """
        self.check = check
        self.set_seed(seed)

    def set_seed(self, seed: int) -> None:
        self.seed = int(seed)
        self.generator = Xoshiro256PlusPlus.from_seed(self.seed)

    def _checkpoint(self, drawn: int) -> None:
        if self.check is not None and drawn % CHECK_INTERVAL == 0:
            self.check()

    def uniforms(self, n: int) -> np.ndarray:
        """
        Draw n uniforms in [0, 1).

        :param n: Number of draws.
        :return: Array of uniforms.
        """
        values = np.empty(n, dtype=np.float64)
        for index in range(n):
            self._checkpoint(index)
            values[index] = self.generator.uniform()
        return values

    def runif(self, n: int, low: float = 0.0, high: float = 1.0) -> np.ndarray:
        return low + (high - low) * self.uniforms(n)

    def rnorm(self, n: int, mean: float = 0.0, sd: float = 1.0) -> np.ndarray:
        """
        Draw n normal variates, consuming one pair of uniforms for every two
        values. For odd n the second value of the last pair is dropped.

        :param n: Number of draws.
        :param mean: Mean of the distribution.
        :param sd: Standard deviation of the distribution.
        :return: Array of normal variates.
        """
        values = []
        for index in range((n + 1) // 2):
            self._checkpoint(index)
            u1 = self.generator.uniform()
            u2 = self.generator.uniform()
            radius = math.sqrt(-2.0 * math.log(1.0 - u1))
            values.append(radius * math.cos(2.0 * math.pi * u2))
            values.append(radius * math.sin(2.0 * math.pi * u2))
        return mean + sd * np.array(values[:n], dtype=np.float64)
