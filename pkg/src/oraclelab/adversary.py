"""Fooling shallow oracle circuits on function iteration, and diagonalizing.

A circuit of oracle depth d sees at most d steps of the chain 0, f(0), ...
through its queries. :func:`fool` builds f level by level so that this is
literally true, then picks f^(d+1)(0) against the circuit's answer.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .circuit import (CircuitBuilder, CircuitError, LayeredCircuit, evaluate, max_oracle_depth,
                      oracle_depth, proper_violations)
from .circuit.model import ORACLE
from .encoding import BitString, index_code, loglen
from .oracle import (EMPTY, FunctionOracle, Oracle, PartialFn, TotalFn, afun, extend_sequential,
                     is_sequential, query_width, reconstruct, section, smallest_outside,
                     union_oracle)

log = logging.getLogger(__name__)


class CapacityError(ValueError):
    pass


@dataclass
class FoolingResult:
    alpha: FunctionOracle
    f: TotalFn
    chain: list[BitString]
    circuit_output: int
    target_bit: int
    ell: int
    depth: int
    stages: list[PartialFn] = field(default_factory=list)
    staged_values: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def fooled(self) -> bool:
        return self.circuit_output != self.target_bit


def iterate(f: PartialFn, ell: int) -> BitString:
    """f^ell(0^n) by literal iteration."""
    cur = BitString.zeros(f.n)
    for _ in range(ell):
        cur = f.table[cur]
    return cur


def last_bit(s: BitString) -> int:
    return s[len(s) - 1]


def fool(c: LayeredCircuit, n: int, inputs: BitString | str | None = None,
         ell: int | None = None, background: Oracle | None = None) -> FoolingResult:
    """Construct f: {0,1}^n -> {0,1}^n on which ``c`` gets the last bit of f^ell(0) wrong.

    ``ell`` defaults to d+1 where d is the circuit's nested oracle depth and
    must exceed d. Queries whose length is not n + loglen(n) are answered by
    ``background`` (false when absent).
    """
    bad = proper_violations(c)
    if bad:
        raise CircuitError(f"circuit is not Proper: {bad[0]}")
    names = c.oracle_names()
    if len(names) > 1:
        raise CircuitError(f"fool needs a single oracle name, got {sorted(names)}")
    if inputs is None:
        if c.n_inputs:
            raise CircuitError("circuit has inputs; supply a constant input vector")
        inputs = BitString()
    elif isinstance(inputs, str):
        inputs = BitString(inputs)
    if len(inputs) != c.n_inputs:
        raise CircuitError(f"expected {c.n_inputs} input bits, got {len(inputs)}")

    D = oracle_depth(c)
    d = max(D.values(), default=0)
    ell = d + 1 if ell is None else ell
    if ell <= d:
        raise ValueError(f"cannot fool at ell={ell} <= oracle depth {d}")
    n_oracle = len(c.oracle_gates())
    if n_oracle + ell + 1 >= 1 << n:
        raise CapacityError(f"{n_oracle} oracle gates + {ell + 1} >= 2^{n}")
    background = background or EMPTY
    qlen = query_width(n)

    # gates grouped by nesting depth, each group in layer order
    by_depth: list[list[tuple[int, int]]] = [[] for _ in range(d + 1)]
    for z, x in c.positions():
        by_depth[D[(z, x)]].append((z, x))

    Y = {(0, x): (inputs[x] if x < c.n_inputs else 0) for x in range(c.width)}

    def query(g):
        return BitString.from_bits(Y[(g[0] - 1, u)] for u in c.inputs(*g))

    def split(q):
        if len(q) != qlen:
            return None
        i = q[n:].to_int()
        return (q[:n], i) if i < n else None

    f = PartialFn(n)
    stages = [f]
    for k in range(d + 1):
        if k > 0:
            pending = [g for g in by_depth[k] if c.gates[g].kind == ORACLE]
            M = set()
            for g in pending:
                hit = split(query(g))
                if hit:
                    M.add(hit[0])
            f = extend_sequential(f, M, k - 1)
            stages.append(f)
        for g in by_depth[k]:
            gate = c.gates[g]
            q = query(g)
            if gate.kind == ORACLE:
                if len(q) == qlen:
                    hit = split(q)
                    Y[g] = f.table[hit[0]][hit[1]] if hit else 0
                else:
                    Y[g] = int(background(q))
            elif gate.kind == "and":
                Y[g] = int(all(q))
            elif gate.kind == "or":
                Y[g] = int(any(q))
            else:
                Y[g] = 1 - q[0]
    o = Y[c.output]

    # walk the chain to f^(ell-1)(0) with fresh values, then aim f^ell(0) at not-o
    table = dict(f.table)
    cur = BitString.zeros(n)
    chain = [cur]
    for _ in range(ell - 1):
        if cur not in table:
            table[cur] = smallest_outside(n, set(table) | set(chain))
        cur = table[cur]
        chain.append(cur)
    if cur in f:
        raise AssertionError("chain re-entered the staged domain")
    target = BitString.zeros(n - 1) + BitString("0" if o else "1")
    table[cur] = target
    chain.append(target)
    total = PartialFn(n, table).completed()
    return FoolingResult(afun(total), total, chain, o, last_bit(target), ell, d, stages, Y)


def check_fooling(c: LayeredCircuit, result: FoolingResult, inputs=None,
                  background: Oracle | None = None) -> list[str]:
    """Independent re-check of a fooling run; returns problems found."""
    problems = []
    alpha = result.alpha if background is None else union_oracle([background, result.alpha])
    w = evaluate(c, inputs if inputs is not None else BitString.zeros(c.n_inputs), alpha)
    if w.Y[c.output] != result.circuit_output:
        problems.append("re-evaluation disagrees with staged output")
    for g, v in result.staged_values.items():
        if w.Y[g] != v:
            problems.append(f"gate {g} changed after completion")
            break
    if last_bit(iterate(result.f, result.ell)) != result.target_bit:
        problems.append("target bit is not the last bit of f^ell(0)")
    if w.Y[c.output] == last_bit(iterate(result.f, result.ell)):
        problems.append("circuit is not fooled")
    for k, fk in enumerate(result.stages):
        if not is_sequential(fk, k):
            problems.append(f"stage {k} is not {k}-sequential")
    return problems


def itlang_member(x_len: int, a: Oracle, g: Callable[[int], int]) -> bool:
    """Is some (every) string of length x_len in the iteration language L_it(a, g)?"""
    n = x_len
    f = reconstruct(section(n, a), n)
    return last_bit(iterate(f, g(n))) == 1


def iteration_circuit(n: int, ell: int, n_inputs: int = 0, oracle: str = "alpha") -> LayeredCircuit:
    """Natural depth-``ell`` circuit for the last bit of f^ell(0), reading A_f.

    Each step makes n oracle queries x.code(i), one per bit of the next value.
    Inputs, if any, are ignored.
    """
    b = CircuitBuilder(n_inputs)
    codes = [[b.const(bit) for bit in index_code(i, n)] for i in range(n)]
    x = [b.zero()] * n
    for _ in range(ell):
        x = [b.oracle(x + codes[i], oracle) for i in range(n)]
    return b.build(output=x[n - 1])


# -- diagonalization ------------------------------------------------------------

@dataclass
class Stage:
    index: int
    triple: tuple[int, int, int]
    n: int
    circuit: LayeredCircuit
    alpha: Oracle
    skipped: bool
    fooling: FoolingResult | None = None


@dataclass
class Diagonalization:
    oracle: Oracle
    stages: list[Stage]


def max_oracle_fanin(c: LayeredCircuit) -> int:
    return max((c.arity(*g) or 0 for g in c.oracle_gates()), default=0)


def diagonalize(families: Sequence[Callable[[int], LayeredCircuit]],
                d: Sequence[Callable[[int], int]], s: Sequence[Callable[[int], int]],
                triples: Sequence[tuple[int, int, int]], search_bound: int = 64,
                start: int = 1) -> Diagonalization:
    """Build one oracle defeating each (k, c, m) triple in turn.

    Stage i uses family ``m`` at a fresh length n_i with c*s_k(n_i) < 2^n_i and
    c*d_k(n_i) < d_{k+1}(n_i). A circuit within budget is fooled against the
    union of earlier stages so that it misjudges L_it(alpha, d_{k+1}) at n_i.
    """
    stages: list[Stage] = []
    prev_n = start - 1
    max_fanin = 0
    for i, (k, cc, m) in enumerate(triples):
        dk, dk1, sk = d[k], d[k + 1], s[k]
        background = union_oracle(st.alpha for st in stages)
        for n in range(prev_n + 1, search_bound + 1):
            if query_width(n) <= max_fanin:
                continue
            if not (cc * sk(n) < 1 << n and cc * dk(n) < dk1(n)):
                continue
            C = families[m](n)
            if max_oracle_depth(C) > cc * dk(n) or C.size > cc * sk(n):
                log.info("stage %d: circuit at n=%d exceeds its budget, alpha empty", i, n)
                stage = Stage(i, (k, cc, m), n, C, EMPTY, True)
                break
            try:
                res = fool(C, n, BitString.zeros(C.n_inputs), ell=dk1(n), background=background)
            except CapacityError:
                continue
            stage = Stage(i, (k, cc, m), n, C, res.alpha, False, res)
            break
        else:
            raise ValueError(f"stage {i}: no admissible length up to {search_bound}")
        stages.append(stage)
        prev_n = stage.n
        max_fanin = max(max_fanin, max_oracle_fanin(stage.circuit))
    return Diagonalization(union_oracle(st.alpha for st in stages), stages)


# -- g presets ("logk:<k>", "const:<c>", "poly:<e>") ---------------------------

def growth(spec: str) -> Callable[[int], int]:
    kind, _, arg = spec.partition(":")
    if kind == "const":
        c = int(arg)
        return lambda n: c
    if kind == "logk":
        k = int(arg)
        return lambda n: loglen(n) ** k
    if kind == "poly":
        e = int(arg)
        return lambda n: n ** e
    if kind == "exphalf":
        return lambda n: 1 << ((n + 1) // 2)
    raise ValueError(f"unknown growth preset {spec!r}")
