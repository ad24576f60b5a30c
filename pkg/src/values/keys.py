""" Session keys: unguessable tokens naming session containers. """

import re
import secrets
import threading
from abc import ABC, abstractmethod
from typing import Optional

KEY_PATTERN = re.compile(r"^x[0-9a-f]{19}$")
KEY_REFERENCE_PATTERN = re.compile(
    r"^(x[0-9a-f]{19})::([A-Za-z.][A-Za-z0-9._]*)$"
)
MASK64 = (1 << 64) - 1


class SplitMix64:
    """
    The splitmix64 generator. Used to expand seeds for the language RNG and
    to generate reproducible keys in deterministic test mode.
    """

    GAMMA = 0x9E3779B97F4A7C15

    def __init__(self, seed: int) -> None:
        """
        Create the generator.

        :param seed: The seed, reduced modulo 2^64.
        """
        self.state = seed & MASK64

    def next(self) -> int:
        """
        Advance the generator.

        :return: The next 64 bit output.
        """
        self.state = (self.state + self.GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)


class SessionKey:
    """
    A session key of the form x + 19 lower case hex digits (76 bits).
    """

    def __init__(self, text: str) -> None:
        """
        Wrap a key string.

        :param text: The key text.
        :raise ValueError: If the text is not a well formed key.
        """
        if not KEY_PATTERN.match(text):
            raise ValueError(f'"{text}" is not a session key!')
        self.text = text

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        return f"SessionKey({self.text!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SessionKey) and other.text == self.text

    def __hash__(self) -> int:
        return hash(self.text)


def is_key(text: str) -> bool:
    """
    Check whether a string is a well formed session key.

    :param text: The string to check.
    :return: True for well formed keys.
    """
    return bool(KEY_PATTERN.match(text))


class KeyGenerator(ABC):
    """
    Interface of the entropy sources for session keys.
    """

    @abstractmethod
    def random_bits(self) -> int:
        """
        Return 76 random bits.

        :return: Integer in [0, 2^76).
        """
        raise NotImplementedError("Abstract method!")  # pragma: no cover


class SecureKeyGenerator(KeyGenerator):
    """
    Key generator backed by the operating system's secure random source.
    """

    def random_bits(self) -> int:
        return secrets.randbits(76)


class DeterministicKeyGenerator(KeyGenerator):
    """
    Reproducible key generator for tests: a splitmix64 stream, two outputs
    per key, hex encoded and truncated to 19 digits.
    """

    def __init__(self, seed: int = 0) -> None:
        """
        Create the generator.

        :param seed: Seed of the splitmix64 stream.
        """
        self.stream = SplitMix64(seed)
        self.lock = threading.Lock()

    def random_bits(self) -> int:
        with self.lock:
            first = self.stream.next()
            second = self.stream.next()
        digits = f"{first:016x}{second:016x}"[:19]
        return int(digits, 16)


_default_generator = SecureKeyGenerator()


def new_session_key(entropy: Optional[KeyGenerator] = None) -> SessionKey:
    """
    Generate a new session key.

    :param entropy: Entropy source, defaults to the secure generator.
    :raise RuntimeError: If the entropy source is unavailable.
    :return: The new key.
    """
    entropy = entropy or _default_generator
    try:
        bits = entropy.random_bits()
    except OSError as error:
        raise RuntimeError(f"Entropy source unavailable: {error}")
    return SessionKey(f"x{bits:019x}")
