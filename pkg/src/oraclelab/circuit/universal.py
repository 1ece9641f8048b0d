"""Universal circuit for width-w, depth-d single-oracle circuits.

One component per simulated gate (z, x) computes its value from the wire
bits, the one-hot kind bits, and the components of layer z-1. Oracle gates
are simulated with one oracle application per candidate arity, guarded by
the arity predicate.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..encoding import BitString
from .builder import CircuitBuilder, Signal
from .evaluate import EvalWitness
from .model import AND, KINDS, NOT, OR, ORACLE, CircuitError, LayeredCircuit


@dataclass(frozen=True)
class UniversalCircuit:
    """The compiled circuit plus the layout of its inputs and simulated gates."""

    w: int
    d: int
    circuit: LayeredCircuit
    gate_at: dict[tuple[int, int], tuple[int, int]]
    oracle_name: str = "alpha"

    # input layout: wire bits, then one-hot kind bits, then the w input bits
    def wire_bit(self, z: int, u: int, t: int, x: int) -> int:
        w = self.w
        return ((z * w + u) * w + t) * w + x

    def kind_bit(self, z: int, x: int, kind: str) -> int:
        w = self.w
        return self.d * w ** 3 + ((z - 1) * w + x) * len(KINDS) + KINDS.index(kind)

    def input_bit(self, x: int) -> int:
        return self.d * self.w ** 3 + self.d * self.w * len(KINDS) + x

    @property
    def n_inputs(self) -> int:
        return self.input_bit(self.w)

    def encode(self, c: LayeredCircuit, I: BitString | str) -> BitString:
        """Input string for U describing (E, G, I) of ``c``."""
        if isinstance(I, str):
            I = BitString(I)
        if c.width != self.w or c.depth != self.d:
            raise CircuitError(f"universal circuit is for w={self.w}, d={self.d}")
        names = c.oracle_names()
        if len(names) > 1:
            raise CircuitError("universal circuit simulates a single oracle")
        bits = [0] * self.n_inputs
        for e in c.wires:
            bits[self.wire_bit(*e)] = 1
        for (z, x), g in c.gates.items():
            bits[self.kind_bit(z, x, g.kind)] = 1
        for x in range(c.n_inputs):
            bits[self.input_bit(x)] = I[x]
        return BitString.from_bits(bits)

    def decode(self, witness: EvalWitness) -> dict[tuple[int, int], int]:
        """Simulated Y(z, x) read off an evaluation of U."""
        return {g: witness.Y[pos] for g, pos in self.gate_at.items()}


def compile_universal(w: int, d: int, oracle_name: str = "alpha") -> UniversalCircuit:
    if w < 1 or d < 0:
        raise ValueError("need w >= 1 and d >= 0")
    layout = UniversalCircuit(w, d, None, {}, oracle_name)  # layout only
    b = CircuitBuilder(layout.n_inputs)
    E = lambda z, u, t, x: b.input(layout.wire_bit(z, u, t, x))  # noqa: E731
    kind = lambda z, x, k: b.input(layout.kind_bit(z, x, k))  # noqa: E731

    K: dict[tuple[int, int], Signal] = {(0, x): b.input(layout.input_bit(x)) for x in range(w)}
    for z in range(d):
        for x in range(w):
            K[(z + 1, x)] = _component(b, E, kind, K, w, z, x, oracle_name)

    # every simulated value is carried to the last layer of U
    last = max(s.layer for s in K.values())
    gate_at = {g: tuple(b.delay(s, last)) if g[0] == d else tuple(s) for g, s in K.items()}
    circuit = b.build(depth=last)
    return UniversalCircuit(w, d, circuit, gate_at, oracle_name)


def _component(b, E, kind, K, w, z, x, name) -> Signal:
    """Value of simulated gate (z+1, x)."""
    ne = lambda *e: b.not_(E(*e))  # noqa: E731

    and_part = b.and_([kind(z + 1, x, AND)] + [
        b.or_([ne(z, u, t, x), K[(z, u)]]) for t in range(w) for u in range(w)])
    or_part = b.and_([kind(z + 1, x, OR), b.or_([
        b.and_([E(z, u, t, x), K[(z, u)]]) for t in range(w) for u in range(w)])])
    not_part = b.and_([kind(z + 1, x, NOT), b.or_([
        b.and_([E(z, u, 0, x), b.not_(K[(z, u)])]) for u in range(w)])])

    slot = [b.or_([b.and_([E(z, u, t, x), K[(z, u)]]) for u in range(w)]) for t in range(w)]
    branches = []
    for s in range(1, w + 1):
        branches.append(b.and_([_arity(b, E, ne, w, z, x, s), b.oracle(slot[:s], name)]))
    oracle_part = b.and_([kind(z + 1, x, ORACLE), b.or_(branches)])
    return b.or_([and_part, or_part, not_part, oracle_part])


def _arity(b, E, ne, w, z, x, s) -> Signal:
    """Slots t < s each have exactly one source and slots t >= s have none."""
    terms = []
    for t in range(w):
        if t < s:
            terms.append(b.or_([
                b.and_([E(z, u, t, x)] + [ne(z, v, t, x) for v in range(w) if v != u])
                for u in range(w)]))
        else:
            terms.extend(ne(z, u, t, x) for u in range(w))
    return b.and_(terms)
