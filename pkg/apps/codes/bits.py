"""
Packed binary strings.

Bits are stored 64 per little-endian ``uint64`` word together with an explicit
length. Bits past ``length`` in the last word are always zero, so word-wise
XOR, equality and popcount need no masking.
"""

import numpy as np

from sp_recon.exceptions import DimensionError

WORD_BITS = 64
WORD_DTYPE = np.dtype("<u8")


def _pack(bits):
    n_words = -(-bits.size // WORD_BITS)
    padded = np.zeros(n_words * WORD_BITS, dtype=np.uint8)
    padded[: bits.size] = bits
    return np.packbits(padded, bitorder="little").view(WORD_DTYPE).copy()


class BitString:
    __slots__ = ("_words", "_length")

    def __init__(self, words, length):
        words = np.asarray(words, dtype=WORD_DTYPE)
        if words.size != -(-length // WORD_BITS):
            raise DimensionError(
                f"{words.size} words cannot hold exactly {length} bits"
            )
        words = words.copy()
        words.flags.writeable = False
        self._words = words
        self._length = int(length)

    @classmethod
    def from_array(cls, bits):
        arr = np.asarray(bits).ravel()
        if arr.size and (arr.min() < 0 or arr.max() > 1):
            raise ValueError("bit strings only hold 0 and 1")
        return cls(_pack(arr.astype(np.uint8)), arr.size)

    @classmethod
    def from_str(cls, text):
        text = text.strip()
        if set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls.from_array(np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0"))

    @classmethod
    def zeros(cls, length):
        return cls(np.zeros(-(-length // WORD_BITS), dtype=WORD_DTYPE), length)

    @classmethod
    def random(cls, length, rng):
        return cls.from_array(rng.integers(0, 2, size=length, dtype=np.uint8))

    @classmethod
    def concat(cls, *parts):
        if not parts:
            return cls.zeros(0)
        return cls.from_array(np.concatenate([p.to_array() for p in parts]))

    @property
    def words(self):
        return self._words

    @property
    def length(self):
        return self._length

    def __len__(self):
        return self._length

    def to_array(self):
        """Unpacked ``uint8`` view, one element per bit."""
        return np.unpackbits(self._words.view(np.uint8), bitorder="little")[: self._length]

    def take(self, indices):
        return BitString.from_array(self.to_array()[np.asarray(indices, dtype=np.int64)])

    def weight(self):
        return int(np.bitwise_count(self._words).sum())

    def hamming_distance(self, other):
        return (self ^ other).weight()

    def __getitem__(self, index):
        if not -self._length <= index < self._length:
            raise IndexError(index)
        index %= self._length
        word, offset = divmod(index, WORD_BITS)
        return int((int(self._words[word]) >> offset) & 1)

    def __xor__(self, other):
        if self._length != other._length:
            raise DimensionError(
                f"cannot xor strings of length {self._length} and {other._length}"
            )
        return BitString(self._words ^ other._words, self._length)

    def __eq__(self, other):
        if not isinstance(other, BitString):
            return NotImplemented
        return self._length == other._length and np.array_equal(self._words, other._words)

    def __hash__(self):
        return hash((self._length, self._words.tobytes()))

    def __str__(self):
        return (self.to_array() + ord("0")).astype(np.uint8).tobytes().decode("ascii")

    def __repr__(self):
        if self._length <= 64:
            return f"BitString('{self}')"
        return f"BitString(length={self._length}, weight={self.weight()})"
