"""Reachability solvers and the CONN / PATH witnesses."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .encoding import BitString, NumberSeq
from .oracle import PredicateOracle


class InvalidInstance(ValueError):
    pass


@dataclass(frozen=True)
class Digraph:
    """Vertices 0..a-1 and a set of ordered edges."""

    a: int
    edges: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        edges = frozenset((int(u), int(v)) for u, v in self.edges)
        for u, v in edges:
            if not (0 <= u < self.a and 0 <= v < self.a):
                raise ValueError(f"edge {u}->{v} outside 0..{self.a - 1}")
        object.__setattr__(self, "edges", edges)

    def successors(self, u: int) -> list[int]:
        return sorted(v for (x, v) in self.edges if x == u)

    def adjacency(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.a)]
        for u, v in sorted(self.edges):
            out[u].append(v)
        return out

    def outdegrees(self) -> list[int]:
        return [len(s) for s in self.adjacency()]

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges


def _check_vertex(g: Digraph, *vs: int) -> None:
    for v in vs:
        if not 0 <= v < g.a:
            raise ValueError(f"vertex {v} outside 0..{g.a - 1}")


def reachable_from(g: Digraph, s: int) -> set[int]:
    _check_vertex(g, s)
    adj = g.adjacency()
    seen = {s}
    todo = deque([s])
    while todo:
        u = todo.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return seen


def stconn(g: Digraph, s: int, t: int) -> bool:
    """Is there a path (possibly empty) from s to t?"""
    _check_vertex(g, s, t)
    return t in reachable_from(g, s)


def onestconn(g: Digraph, s: int, t: int) -> bool:
    """Pointer chase for graphs of outdegree at most one."""
    _check_vertex(g, s, t)
    nxt: list[int | None] = [None] * g.a
    for u, v in g.edges:
        if nxt[u] is not None:
            raise InvalidInstance(f"vertex {u} has outdegree > 1")
        nxt[u] = v
    cur: int | None = s
    for _ in range(g.a):
        if cur == t:
            return True
        cur = nxt[cur]
        if cur is None:
            return False
    return cur == t


def conn_witness(g: Digraph) -> list[list[int]]:
    """Y[z][x] = 1 iff some path from 0 to x has length <= z, for z in 0..a."""
    if g.a == 0:
        return [[]]
    adj = g.adjacency()
    cur = [1 if x == 0 else 0 for x in range(g.a)]
    Y = [cur]
    for _ in range(g.a):
        nxt = list(cur)
        for y in range(g.a):
            if cur[y]:
                for x in adj[y]:
                    nxt[x] = 1
        Y.append(nxt)
        cur = nxt
    return Y


def path_witness(g: Digraph) -> NumberSeq:
    """P with (P)^0 = 0 and an edge (P)^v -> (P)^(v+1) for every v < a.

    Requires outdegree exactly one everywhere.
    """
    degrees = g.outdegrees()
    bad = [x for x, d in enumerate(degrees) if d != 1]
    if bad:
        raise InvalidInstance(f"vertex {bad[0]} has outdegree {degrees[bad[0]]}, expected 1")
    adj = g.adjacency()
    values = [0]
    for _ in range(g.a):
        values.append(adj[values[-1]][0])
    return NumberSeq.of(values)


# -- built-in oracle encoding: row-major a x a adjacency matrix, source 0, target a-1

def decode_matrix_query(w: BitString) -> Digraph | None:
    m = len(w)
    a = math.isqrt(m)
    if a < 1 or a * a != m:
        return None
    edges = frozenset((i // a, i % a) for i in w.positions())
    return Digraph(a, edges)


def encode_matrix_query(g: Digraph) -> BitString:
    return BitString.from_positions((u * g.a + v for u, v in g.edges), g.a * g.a)


def _stconn_query(w: BitString) -> bool:
    g = decode_matrix_query(w)
    return g is not None and stconn(g, 0, g.a - 1)


def _onestconn_query(w: BitString) -> bool:
    g = decode_matrix_query(w)
    if g is None or any(d > 1 for d in g.outdegrees()):
        return False
    return onestconn(g, 0, g.a - 1)


STCONN_ORACLE = PredicateOracle(_stconn_query, "stconn")
ONESTCONN_ORACLE = PredicateOracle(_onestconn_query, "1stconn")


# -- text format ---------------------------------------------------------------

def parse_graph(text: str) -> Digraph:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("a="):
        raise ValueError("graph file must start with 'a=<count>'")
    a = int(lines[0][2:])
    edges = []
    for ln in lines[1:]:
        u, v = ln.split()
        edges.append((int(u), int(v)))
    return Digraph(a, frozenset(edges))


def format_graph(g: Digraph) -> str:
    return f"a={g.a}\n" + "".join(f"{u} {v}\n" for u, v in sorted(g.edges))


def load_graph(path) -> Digraph:
    with open(path) as fh:
        return parse_graph(fh.read())
