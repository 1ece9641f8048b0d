"""Witness computations for the counting and sentence-value axioms.

Each function returns the full trace (the axiom's Y string, decoded) rather
than only the final answer.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .encoding import BitString, NumberSeq, encode_seq

AND, OR = "and", "or"


@dataclass(frozen=True)
class CountTrace:
    x: int
    entries: tuple[int, ...]

    def to_bitstring(self) -> BitString:
        """Y with (Y)^z = entries[z]."""
        return encode_seq(self.entries)

    @property
    def final(self) -> int:
        return self.entries[-1]


def numones(x: int, X: BitString) -> CountTrace:
    """entries[z] = number of 1 bits among X(0), ..., X(z-1), for z <= x."""
    entries = [0]
    for z in range(x):
        entries.append(entries[-1] + X.bit(z))
    return CountTrace(x, tuple(entries))


def modcount(m: int, x: int, X: BitString) -> CountTrace:
    if m < 2:
        raise ValueError(f"modulus must be at least 2, got {m}")
    entries = [0]
    for z in range(x):
        entries.append((entries[-1] + X.bit(z)) % m)
    return CountTrace(x, tuple(entries))


def is_power_of_two(a: int) -> bool:
    return a >= 1 and a & (a - 1) == 0


def _kind(G, x: int) -> str:
    k = G[x] if not isinstance(G, Mapping) or x in G else None
    if isinstance(k, bool):
        return AND if k else OR
    if k not in (AND, OR):
        raise ValueError(f"node {x} needs kind 'and' or 'or', got {k!r}")
    return k


def mfv(a: int, G: Mapping[int, str] | Sequence, I: BitString) -> dict[int, int]:
    """Bottom-up value of a balanced monotone sentence.

    Nodes 1..a-1 are internal with children 2x, 2x+1; leaves a..2a-1 read I.
    ``G[x]`` is "and"/"or" (or True for and). Returns Y over nodes 1..2a-1.
    """
    if not is_power_of_two(a):
        raise ValueError(f"balanced tree needs a power of two leaves, got {a}")
    if len(I) != a:
        raise ValueError(f"expected {a} leaf values, got {len(I)}")
    Y = {x + a: I[x] for x in range(a)}
    for x in range(a - 1, 0, -1):
        left, right = Y[2 * x], Y[2 * x + 1]
        Y[x] = left & right if _kind(G, x) == AND else left | right
    return Y


def count_trace_from_bitstring(Y: BitString, x: int) -> list[int]:
    return NumberSeq(Y).take(x + 1)
