"""Bit strings and the two-sorted coding utilities.

Strings carry an explicit length, so ``"010"`` and ``"01"`` are different
values. Bit 0 is the leftmost written character.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


@dataclass(frozen=True, order=True)
class BitString:
    """An immutable string over {0,1} with explicit length."""

    value: str = ""

    def __post_init__(self):
        if not isinstance(self.value, str):
            raise TypeError(f"BitString value must be str, got {type(self.value).__name__}")
        if self.value.strip("01"):
            raise ValueError(f"not a bit string: {self.value!r}")

    @classmethod
    def from_bits(cls, bits: Iterable[int | bool]) -> BitString:
        return cls("".join("1" if b else "0" for b in bits))

    @classmethod
    def from_int(cls, i: int, width: int) -> BitString:
        """Big-endian binary of ``i`` padded to ``width`` bits."""
        if i < 0 or width < 0:
            raise ValueError("from_int needs nonnegative arguments")
        if i >= 1 << width:
            raise ValueError(f"{i} does not fit in {width} bits")
        return cls(format(i, "b").zfill(width) if width else "")

    @classmethod
    def from_positions(cls, positions: Iterable[int], length: int) -> BitString:
        """String of the given length whose set bits are ``positions``."""
        bits = ["0"] * length
        for p in positions:
            if not 0 <= p < length:
                raise IndexError(f"bit {p} outside length {length}")
            bits[p] = "1"
        return cls("".join(bits))

    @classmethod
    def zeros(cls, length: int) -> BitString:
        return cls("0" * length)

    def __len__(self) -> int:
        return len(self.value)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return BitString(self.value[i])
        return 1 if self.value[i] == "1" else 0

    def __iter__(self) -> Iterator[int]:
        return (1 if c == "1" else 0 for c in self.value)

    def __add__(self, other: BitString) -> BitString:
        return BitString(self.value + other.value)

    def __str__(self) -> str:
        return self.value

    def __repr__(self) -> str:
        return f"BitString({self.value!r})"

    def bit(self, i: int) -> int:
        """Bit ``i``, reading 0 beyond the end (set semantics for Z(i))."""
        return 1 if 0 <= i < len(self.value) and self.value[i] == "1" else 0

    def to_int(self) -> int:
        return int(self.value, 2) if self.value else 0

    def positions(self) -> list[int]:
        return [i for i, c in enumerate(self.value) if c == "1"]

    def with_bit(self, i: int, b: int) -> BitString:
        return BitString(self.value[:i] + ("1" if b else "0") + self.value[i + 1:])


def all_strings(n: int) -> Iterator[BitString]:
    """All strings of length ``n`` in lexicographic (= numeric) order."""
    for i in range(1 << n):
        yield BitString.from_int(i, n)


def pair(y: int, z: int) -> int:
    """The pairing term (y+z)(y+z+1)+2z."""
    if y < 0 or z < 0:
        raise ValueError("pair is defined on natural numbers only")
    s = y + z
    return s * (s + 1) + 2 * z


def unpair(p: int) -> tuple[int, int] | None:
    """Inverse of :func:`pair`, or None when ``p`` is not in its image."""
    if p < 0:
        raise ValueError("unpair is defined on natural numbers only")
    s = 0
    while (s + 1) * (s + 2) <= p:
        s += 1
    rest = p - s * (s + 1)
    if rest % 2 or rest // 2 > s:
        return None
    z = rest // 2
    return s - z, z


def loglen(a: int) -> int:
    """ceil(log2(a+1)), the bit length of ``a``."""
    if a < 0:
        raise ValueError("loglen of a negative number")
    return a.bit_length()


def row(x: int, Z: BitString) -> BitString:
    """Row ``x`` of Z viewed as a 2-d bit array; the result has length |Z|."""
    n = len(Z)
    return BitString.from_bits(Z.bit(pair(x, i)) for i in range(n))


def seq_at(x: int, Z: BitString) -> int:
    """(Z)^x: the least y < |Z| with Z(x, y), else |Z|."""
    n = len(Z)
    for y in range(n):
        if Z.bit(pair(x, y)):
            return y
    return n


def encode_seq(values: Sequence[int]) -> BitString:
    """Smallest-length Z with ``seq_at(x, Z) == values[x]`` for every x."""
    if not values:
        return BitString()
    points = [pair(x, y) for x, y in enumerate(values)]
    return BitString.from_positions(points, max(points) + 1)


@dataclass(frozen=True)
class NumberSeq:
    """A bit string read as a sequence of numbers via :func:`seq_at`."""

    backing: BitString

    @classmethod
    def of(cls, values: Sequence[int]) -> NumberSeq:
        return cls(encode_seq(values))

    def __getitem__(self, x: int) -> int:
        return seq_at(x, self.backing)

    def take(self, count: int) -> list[int]:
        return [self[x] for x in range(count)]


def index_code(i: int, n: int) -> BitString:
    """Canonical code of ``i < n``: big-endian, exactly loglen(n) bits."""
    if not 0 <= i < n:
        raise ValueError(f"index {i} out of range for n={n}")
    return BitString.from_int(i, loglen(n))


def parse_bits(text: str) -> BitString:
    """Parse a bit string from text; ``""`` and ``-`` denote the empty string."""
    text = text.strip()
    if text in ('""', "-"):
        return BitString()
    return BitString(text)
