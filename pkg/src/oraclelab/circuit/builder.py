"""Incremental construction of strictly layered circuits.

Wires only connect adjacent layers, so a signal used later than the layer
after its own is carried forward through 1-ary ``or`` buffers. Gates are
placed at the earliest layer their sources allow and deduplicated
structurally.
"""
from __future__ import annotations

from typing import NamedTuple, Sequence

from .model import AND, NOT, OR, ORACLE, Gate, LayeredCircuit


class Signal(NamedTuple):
    layer: int
    index: int


class CircuitBuilder:
    def __init__(self, n_inputs: int = 0):
        self.n_inputs = n_inputs
        self._layer0 = n_inputs
        self._layers: list[list[tuple[Gate, tuple[Signal, ...]]]] = [[]]
        self._zero: Signal | None = None
        self._one: Signal | None = None
        self._seen: dict[tuple, Signal] = {}

    def input(self, i: int) -> Signal:
        if not 0 <= i < self.n_inputs:
            raise IndexError(f"input {i} out of range")
        return Signal(0, i)

    def inputs(self) -> list[Signal]:
        return [Signal(0, i) for i in range(self.n_inputs)]

    def zero(self) -> Signal:
        # positions past n_inputs on layer 0 read as 0
        if self._zero is None:
            self._zero = Signal(0, self._layer0)
            self._layer0 += 1
        return self._zero

    def one(self) -> Signal:
        if self._one is None:
            self._one = self.not_(self.zero())
        return self._one

    def delay(self, s: Signal, layer: int) -> Signal:
        """The value of ``s`` made available on ``layer``."""
        if layer < s.layer:
            raise ValueError(f"cannot move signal on layer {s.layer} back to {layer}")
        while s.layer < layer:
            s = self._place(Gate(OR), (s,), s.layer + 1)
        return s

    def _place(self, gate: Gate, srcs: tuple[Signal, ...], layer: int) -> Signal:
        key = (gate, srcs, layer)
        hit = self._seen.get(key)
        if hit is not None:
            return hit
        while len(self._layers) <= layer:
            self._layers.append([])
        self._layers[layer].append((gate, srcs))
        s = Signal(layer, len(self._layers[layer]) - 1)
        self._seen[key] = s
        return s

    def gate(self, kind: str, srcs: Sequence[Signal], oracle: str | None = None,
             layer: int | None = None) -> Signal:
        if not srcs:
            raise ValueError("a gate needs at least one input")
        top = max(s.layer for s in srcs) + 1
        layer = top if layer is None else max(layer, top)
        moved = tuple(self.delay(s, layer - 1) for s in srcs)
        return self._place(Gate(kind, oracle), moved, layer)

    def not_(self, s: Signal) -> Signal:
        return self.gate(NOT, [s])

    def and_(self, srcs: Sequence[Signal]) -> Signal:
        srcs = list(dict.fromkeys(srcs))
        if not srcs:
            return self.one()
        if len(srcs) == 1:
            return srcs[0]
        return self.gate(AND, srcs)

    def or_(self, srcs: Sequence[Signal]) -> Signal:
        srcs = list(dict.fromkeys(srcs))
        if not srcs:
            return self.zero()
        if len(srcs) == 1:
            return srcs[0]
        return self.gate(OR, srcs)

    def oracle(self, srcs: Sequence[Signal], name: str = "alpha") -> Signal:
        """Oracle gate; slot order follows ``srcs`` (duplicates allowed)."""
        return self.gate(ORACLE, list(srcs), oracle=name)

    def const(self, b: int) -> Signal:
        return self.one() if b else self.zero()

    def build(self, output: Signal | None = None, depth: int | None = None) -> LayeredCircuit:
        d = len(self._layers) - 1
        while d > 0 and not self._layers[d]:
            d -= 1
        if depth is not None:
            if depth < d:
                raise ValueError(f"circuit needs depth {d}")
            d = depth
        if output is not None and output.layer < d:
            output = self.delay(output, d)
        d = max(d, len(self._layers) - 1 if output is not None else d)
        layers = self._layers + [[] for _ in range(d + 1 - len(self._layers))]
        arity = max((len(srcs) for layer in layers for _, srcs in layer), default=0)
        width = max([self._layer0, arity, 1] + [len(layer) for layer in layers[1:d + 1]])
        gates = {}
        wires = set()
        for z in range(1, d + 1):
            row = layers[z]
            for x in range(width):
                if x < len(row):
                    g, srcs = row[x]
                else:
                    g, srcs = Gate(OR), (Signal(z - 1, 0),)
                gates[(z, x)] = g
                for t, s in enumerate(srcs):
                    wires.add((z - 1, s.index, t, x))
        out = tuple(output) if output is not None else None
        return LayeredCircuit(width, d, gates, frozenset(wires), self.n_inputs, out)
