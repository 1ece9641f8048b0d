"""Layered oracle circuits: encoding, validity predicates, oracle depth."""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field

AND, OR, NOT, ORACLE = "and", "or", "not", "oracle"
KINDS = (AND, OR, NOT, ORACLE)

Gate_ = tuple[int, int]


class CircuitError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    kind: str
    oracle: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        if self.kind == ORACLE and not self.oracle:
            object.__setattr__(self, "oracle", "alpha")
        if self.kind != ORACLE and self.oracle is not None:
            raise CircuitError(f"{self.kind} gate cannot name an oracle")

    def __str__(self):
        return f"oracle({self.oracle})" if self.kind == ORACLE else self.kind


@dataclass(frozen=True)
class LayeredCircuit:
    """Circuit (w, d, E, G) with inputs on layer 0.

    ``wires`` holds tuples (z, u, t, x): gate (z, u) is the t-th input of
    gate (z+1, x). ``gates`` maps (z, x), 1 <= z <= d, to a :class:`Gate`.
    """

    width: int
    depth: int
    gates: dict[Gate_, Gate]
    wires: frozenset[tuple[int, int, int, int]]
    n_inputs: int = 0
    output: Gate_ | None = None
    _slots: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        w, d = self.width, self.depth
        if w < 1 or d < 0:
            raise CircuitError(f"bad dimensions w={w}, d={d}")
        if not 0 <= self.n_inputs <= w:
            raise CircuitError(f"n_inputs={self.n_inputs} must lie in 0..{w}")
        gates = {}
        for (z, x), g in self.gates.items():
            if not (1 <= z <= d and 0 <= x < w):
                raise CircuitError(f"gate ({z},{x}) outside layers 1..{d} x width {w}")
            gates[(z, x)] = g if isinstance(g, Gate) else Gate(*g)
        object.__setattr__(self, "gates", gates)
        wires = frozenset(tuple(e) for e in self.wires)
        slots: dict[Gate_, dict[int, list[int]]] = defaultdict(lambda: defaultdict(list))
        for z, u, t, x in wires:
            if not (0 <= z < d and 0 <= u < w and 0 <= t < w and 0 <= x < w):
                raise CircuitError(f"wire {(z, u, t, x)} out of bounds")
            slots[(z + 1, x)][t].append(u)
        object.__setattr__(self, "wires", wires)
        object.__setattr__(self, "_slots", {g: {t: sorted(us) for t, us in s.items()}
                                            for g, s in slots.items()})
        out = self.output if self.output is not None else (d, 0)
        out = (int(out[0]), int(out[1]))
        if not (0 <= out[0] <= d and 0 <= out[1] < w):
            raise CircuitError(f"output {out} is not a gate")
        object.__setattr__(self, "output", out)

    def slots(self, z: int, x: int) -> dict[int, list[int]]:
        """slot t -> sources u on layer z-1 for gate (z, x)."""
        return self._slots.get((z, x), {})

    def arity(self, z: int, x: int) -> int | None:
        """s with Arity(z, x, s, E), or None if no such s exists."""
        slots = self.slots(z, x)
        s = len(slots)
        if any(t >= s for t in slots) or any(len(us) != 1 for us in slots.values()):
            return None
        return s

    def inputs(self, z: int, x: int) -> list[int]:
        """Sources of a Proper gate in slot order."""
        slots = self.slots(z, x)
        return [slots[t][0] for t in range(len(slots))]

    def kind(self, z: int, x: int) -> str | None:
        g = self.gates.get((z, x))
        return g.kind if g else None

    def positions(self):
        for z in range(1, self.depth + 1):
            for x in range(self.width):
                yield z, x

    def oracle_gates(self) -> list[Gate_]:
        return [p for p, g in sorted(self.gates.items()) if g.kind == ORACLE]

    def oracle_names(self) -> set[str]:
        return {g.oracle for g in self.gates.values() if g.kind == ORACLE}

    @property
    def size(self) -> int:
        return self.width * self.depth

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        gates = []
        for (z, x), g in sorted(self.gates.items()):
            entry = {"layer": z, "index": x, "kind": g.kind}
            if g.kind == ORACLE:
                entry["oracle"] = g.oracle
            gates.append(entry)
        wires = [{"layer": z, "src": u, "slot": t, "dst": x} for z, u, t, x in sorted(self.wires)]
        return {"width": self.width, "depth": self.depth, "n_inputs": self.n_inputs,
                "output": list(self.output), "gates": gates, "wires": wires}

    @classmethod
    def from_dict(cls, data: dict) -> LayeredCircuit:
        gates = {(g["layer"], g["index"]): Gate(g["kind"], g.get("oracle")) for g in data["gates"]}
        wires = frozenset((e["layer"], e["src"], e["slot"], e["dst"]) for e in data["wires"])
        out = data.get("output")
        return cls(data["width"], data["depth"], gates, wires, data.get("n_inputs", 0),
                   tuple(out) if out is not None else None)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def load_circuit(path) -> LayeredCircuit:
    with open(path) as fh:
        return LayeredCircuit.from_dict(json.load(fh))


def proper_violations(c: LayeredCircuit) -> list[str]:
    out = []
    for z, x in c.positions():
        g = c.gates.get((z, x))
        if g is None:
            out.append(f"gate ({z},{x}) has no kind")
            continue
        s = c.arity(z, x)
        if s is None:
            slots = c.slots(z, x)
            multi = [t for t, us in sorted(slots.items()) if len(us) > 1]
            if multi:
                out.append(f"gate ({z},{x}) slot {multi[0]} has {len(slots[multi[0]])} sources")
            else:
                out.append(f"gate ({z},{x}) has non-contiguous slots {sorted(slots)}")
        elif s < 1:
            out.append(f"gate ({z},{x}) has no inputs")
        elif g.kind == NOT and s != 1:
            out.append(f"not gate ({z},{x}) has arity {s}")
    return out


def validate_proper(c: LayeredCircuit) -> bool:
    return not proper_violations(c)


def fanin2_violations(c: LayeredCircuit) -> list[str]:
    """And/or gates must have arity exactly 2; not and oracle gates are exempt."""
    out = []
    for (z, x), g in sorted(c.gates.items()):
        if g.kind in (AND, OR) and c.arity(z, x) != 2:
            out.append(f"{g.kind} gate ({z},{x}) does not have arity 2")
    return out


def validate_fanin2(c: LayeredCircuit) -> bool:
    return not fanin2_violations(c)


def oracle_depth(c: LayeredCircuit) -> dict[Gate_, int]:
    """Nested oracle depth of every gate, layer 0 included."""
    D = {(0, x): 0 for x in range(c.width)}
    for z, x in c.positions():
        srcs = {u for us in c.slots(z, x).values() for u in us}
        below = max((D[(z - 1, u)] for u in srcs), default=0)
        D[(z, x)] = below + 1 if c.kind(z, x) == ORACLE else below
    return D


def max_oracle_depth(c: LayeredCircuit) -> int:
    return max(oracle_depth(c).values(), default=0)


def oheight_ok(c: LayeredCircuit, bound: int) -> bool:
    return max_oracle_depth(c) <= bound
