"""Evaluation of layered oracle circuits and one-oracle-layer sentences."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from ..encoding import BitString
from ..graph import ONESTCONN_ORACLE, STCONN_ORACLE
from ..oracle import Oracle
from ..witness import AND, OR, is_power_of_two
from .model import NOT, ORACLE, CircuitError, LayeredCircuit, proper_violations

BUILTIN_ORACLES: dict[str, Oracle] = {"stconn": STCONN_ORACLE, "1stconn": ONESTCONN_ORACLE}


class OracleContext:
    """Resolves oracle gate names.

    Lookup order: explicit names, the built-ins ``stconn``/``1stconn``, then
    ``default`` if one was given.
    """

    def __init__(self, named: Mapping[str, Oracle] | None = None, default: Oracle | None = None):
        self.named = dict(named or {})
        self.default = default

    @classmethod
    def coerce(cls, oracles) -> OracleContext:
        if isinstance(oracles, OracleContext):
            return oracles
        if oracles is None:
            return cls()
        if isinstance(oracles, Oracle):
            return cls(default=oracles)
        return cls(oracles)

    def resolve(self, name: str) -> Oracle:
        if name in self.named:
            return self.named[name]
        if name in BUILTIN_ORACLES:
            return BUILTIN_ORACLES[name]
        if self.default is not None:
            return self.default
        raise KeyError(f"no oracle bound to name {name!r}")


@dataclass(frozen=True)
class EvalWitness:
    """The pair (Q, Y): query rows of layers 1..d and values of layers 0..d."""

    Q: dict[tuple[int, int], BitString]
    Y: dict[tuple[int, int], int]

    def layer(self, z: int, width: int) -> BitString:
        return BitString.from_bits(self.Y[(z, x)] for x in range(width))


def _gate_value(kind: str, q: BitString, oracle: Oracle | None) -> int:
    if kind == AND:
        return int(all(q))
    if kind == OR:
        return int(any(q))
    if kind == NOT:
        return 1 - q[0]
    return int(oracle(q))


def evaluate(c: LayeredCircuit, I: BitString | str = "", oracles=None) -> EvalWitness:
    """Layer-by-layer evaluation returning the full (Q, Y) witness."""
    if isinstance(I, str):
        I = BitString(I)
    if len(I) != c.n_inputs:
        raise CircuitError(f"circuit takes {c.n_inputs} inputs, got {len(I)}")
    bad = proper_violations(c)
    if bad:
        raise CircuitError(f"circuit is not Proper: {bad[0]}")
    ctx = OracleContext.coerce(oracles)
    resolved = {name: ctx.resolve(name) for name in c.oracle_names()}
    Y = {(0, x): (I[x] if x < c.n_inputs else 0) for x in range(c.width)}
    Q = {}
    for z, x in c.positions():
        q = BitString.from_bits(Y[(z - 1, u)] for u in c.inputs(z, x))
        g = c.gates[(z, x)]
        Q[(z, x)] = q
        Y[(z, x)] = _gate_value(g.kind, q, resolved.get(g.oracle))
    return EvalWitness(Q, Y)


def output_bit(c: LayeredCircuit, I: BitString | str = "", oracles=None) -> int:
    return evaluate(c, I, oracles).Y[c.output]


def locv_violations(c: LayeredCircuit, I: BitString | str, witness: EvalWitness, oracles=None) -> list[str]:
    """Check every clause of the layered-oracle-circuit-value formula literally.

    Quantifies over all t, u < w directly on the wire set, independently of
    :func:`evaluate`. Returns the violated clauses (empty when satisfied).
    """
    if isinstance(I, str):
        I = BitString(I)
    ctx = OracleContext.coerce(oracles)
    w, d, E = c.width, c.depth, c.wires
    Y, Q = witness.Y, witness.Q
    out = []
    for x in range(w):
        if Y.get((0, x)) != (I.bit(x) if x < c.n_inputs else 0):
            out.append(f"Y(0,{x}) != I({x})")
    for z in range(d):
        for x in range(w):
            row = Q.get((z + 1, x), BitString())
            for t in range(w):
                fed = any((z, u, t, x) in E and Y[(z, u)] for u in range(w))
                if row.bit(t) != int(fed):
                    out.append(f"Q[{z + 1},{x}]({t}) mismatch")
            g = c.gates[(z + 1, x)]
            if g.kind == AND:
                val = all(Y[(z, u)] for u in range(w) for t in range(w) if (z, u, t, x) in E)
            elif g.kind == OR:
                val = any(Y[(z, u)] for u in range(w) for t in range(w) if (z, u, t, x) in E)
            elif g.kind == NOT:
                val = any((z, u, 0, x) in E and not Y[(z, u)] for u in range(w))
            else:
                val = ctx.resolve(g.oracle)(row)
            if Y.get((z + 1, x)) != int(val):
                out.append(f"Y({z + 1},{x}) does not match its {g} clause")
    return out


# -- sentences with one layer of oracle gates at the leaves ---------------------

ALPHA, NEG_ALPHA, CONST = "alpha", "neg_alpha", "const"


@dataclass(frozen=True)
class Nc1Sentence:
    """Balanced tree: nodes 1..a-1 are and/or, leaves a..2a-1 are alpha/neg_alpha/const.

    Leaf a+x reads I(x) (const) or the oracle on J[x].
    """

    a: int
    G: Mapping[int, str]
    I: BitString
    J: Mapping[int, BitString]

    def check(self) -> None:
        if not is_power_of_two(self.a):
            raise CircuitError(f"sentence needs a power-of-two leaf count, got {self.a}")
        for x in range(1, self.a):
            if self.G.get(x) not in (AND, OR):
                raise CircuitError(f"internal node {x} must be and/or")
        for x in range(self.a):
            kind = self.G.get(x + self.a)
            if kind not in (ALPHA, NEG_ALPHA, CONST):
                raise CircuitError(f"leaf {x + self.a} must be alpha/neg_alpha/const")
            if kind == CONST and x >= len(self.I):
                raise CircuitError(f"const leaf {x} has no input bit")
            if kind != CONST and x not in self.J:
                raise CircuitError(f"oracle leaf {x} has no query row")


def evaluate_nc1_sentence(s: Nc1Sentence, alpha: Oracle) -> tuple[int, dict[int, int]]:
    s.check()
    a = s.a
    Y = {}
    for x in range(a):
        kind = s.G[x + a]
        if kind == CONST:
            Y[x + a] = s.I[x]
        elif kind == ALPHA:
            Y[x + a] = int(alpha(s.J[x]))
        else:
            Y[x + a] = 1 - int(alpha(s.J[x]))
    for x in range(a - 1, 0, -1):
        l, r = Y[2 * x], Y[2 * x + 1]
        Y[x] = l & r if s.G[x] == AND else l | r
    return Y[1], Y
