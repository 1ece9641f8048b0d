"""Seeded random instances for property suites and the ``sample`` command."""
from __future__ import annotations

import random

from .circuit import AND, NOT, OR, ORACLE, Gate, LayeredCircuit, max_oracle_depth
from .encoding import BitString, all_strings
from .graph import Digraph
from .machine import SYMBOLS, Action, StackMachine, Step
from .oracle import FiniteOracle, TotalFn, query_width


def random_bits(rng: random.Random, n: int) -> BitString:
    return BitString.from_bits(rng.getrandbits(1) for _ in range(n))


def random_total_fn(rng: random.Random, n: int) -> TotalFn:
    return TotalFn(n, {x: random_bits(rng, n) for x in all_strings(n)})


def random_finite_oracle(rng: random.Random, max_len: int, density: float = 0.5) -> FiniteOracle:
    support = [w for m in range(max_len + 1) for w in all_strings(m) if rng.random() < density]
    return FiniteOracle(support)


def random_proper_circuit(rng: random.Random, w: int, d: int, n_inputs: int | None = None,
                          kinds=(AND, OR, NOT, ORACLE), oracle: str = "alpha") -> LayeredCircuit:
    """Every gate gets a random kind, a random arity in 1..w and random sources."""
    n_inputs = w if n_inputs is None else n_inputs
    gates, wires = {}, set()
    for z in range(1, d + 1):
        for x in range(w):
            kind = rng.choice(kinds)
            gates[(z, x)] = Gate(kind, oracle if kind == ORACLE else None)
            s = 1 if kind == NOT else rng.randint(1, w)
            for t in range(s):
                wires.add((z - 1, rng.randrange(w), t, x))
    return LayeredCircuit(w, d, gates, frozenset(wires), n_inputs, (d, rng.randrange(w)))


def random_fooling_circuit(rng: random.Random, n: int, depth: int, tries: int = 10_000) -> LayeredCircuit:
    """Input-free Proper circuit of nested oracle depth exactly ``depth`` that
    satisfies the capacity bound (#oracle gates + depth + 2 < 2^n).

    Oracle gates mostly take n + loglen(n) inputs so their queries land in the
    bit graph's section.
    """
    qw = query_width(n)
    cap = (1 << n) - depth - 3
    for _ in range(tries):
        w = qw + rng.randint(0, 2)
        layers = rng.randint(max(depth, 1), depth + 3)
        p_oracle = min(0.9, (depth + 0.5) / (layers * w) * rng.uniform(1, 2.5))
        gates, wires = {}, set()
        for z in range(1, layers + 1):
            for x in range(w):
                if rng.random() < p_oracle:
                    kind, s = ORACLE, (qw if rng.random() < 0.85 else rng.randint(1, w))
                else:
                    kind = rng.choice((AND, OR, NOT, OR))
                    s = 1 if kind == NOT else rng.randint(1, 3)
                gates[(z, x)] = Gate(kind, "alpha" if kind == ORACLE else None)
                for t in range(s):
                    wires.add((z - 1, rng.randrange(w), t, x))
        c = LayeredCircuit(w, layers, gates, frozenset(wires), 0, (layers, rng.randrange(w)))
        if max_oracle_depth(c) == depth and len(c.oracle_gates()) <= cap:
            return c
    raise RuntimeError(f"no circuit found for n={n}, depth={depth}")


def random_graph(rng: random.Random, a: int, p: float = 0.3) -> Digraph:
    edges = {(u, v) for u in range(a) for v in range(a) if rng.random() < p}
    return Digraph(a, frozenset(edges))


def random_functional_graph(rng: random.Random, a: int) -> Digraph:
    return Digraph(a, frozenset((u, rng.randrange(a)) for u in range(a)))


def random_partial_graph(rng: random.Random, a: int) -> Digraph:
    """Outdegree at most one."""
    return Digraph(a, frozenset((u, rng.randrange(a)) for u in range(a) if rng.random() < 0.7))


def _random_step(rng, targets, work=True) -> Step:
    return Step(rng.choice(targets), rng.choice((None, "0", "1")) if work else None,
                rng.choice((-1, 0, 1)), rng.choice((-1, 0, 1)))


def random_machine(rng: random.Random, n_states: int = 6, h: int = 2, work_space: int = 1,
                   step_budget: int = 5000) -> StackMachine:
    """A valid csNL machine built level by level.

    Each state lives at a fixed stack height; pushes go one level up, pops
    one level down, and only height-0 states branch.
    """
    n_states = max(n_states, 2)
    names = [f"q{i}" for i in range(n_states - 1)] + ["acc"]
    level = {"q0": 0, "acc": 0}
    top = 0
    for q in names[1:-1]:
        level[q] = rng.randint(0, min(h, top + 1))
        top = max(top, level[q])
    at = {k: [q for q in names if level[q] == k] for k in range(h + 1)}
    transitions = {}
    for q in names[:-1]:
        k = level[q]
        for a in SYMBOLS:
            for b in SYMBOLS:
                if rng.random() < 0.15:
                    continue
                ops = ["none"]
                if k >= 1:
                    ops += ["write", "pop", "pop"]
                if k < h and at.get(k + 1):
                    ops += ["push", "push"]
                op = rng.choice(ops)
                if op == "none":
                    same = at[k]
                    acts = [Action("none", _random_step(rng, same))]
                    if k == 0 and rng.random() < 0.4:
                        acts.append(Action("none", _random_step(rng, same)))
                elif op == "write":
                    acts = [Action("write", _random_step(rng, at[k]), rng.getrandbits(1))]
                elif op == "push":
                    acts = [Action("push", _random_step(rng, at[k + 1]), rng.getrandbits(1))]
                else:
                    acts = [Action("pop", on_true=_random_step(rng, at[k - 1]),
                                   on_false=_random_step(rng, at[k - 1]))]
                transitions[(q, a, b)] = tuple(acts)
    return StackMachine(tuple(names), "q0", "acc", h, work_space, step_budget, transitions)


__all__ = [
    "random_bits", "random_finite_oracle", "random_fooling_circuit",
    "random_functional_graph", "random_graph", "random_machine", "random_partial_graph",
    "random_proper_circuit", "random_total_fn",
]
