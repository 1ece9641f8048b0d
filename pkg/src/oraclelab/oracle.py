"""Oracles, partial functions on {0,1}^n, bit graphs and sequential extension."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .encoding import BitString, all_strings, index_code, loglen, parse_bits


class MalformedQuery(ValueError):
    pass


class DomainFull(ValueError):
    pass


class NotSequential(ValueError):
    pass


class Oracle:
    """A predicate on bit strings. Subclasses implement :meth:`query`."""

    def query(self, w: BitString) -> bool:
        raise NotImplementedError

    def __call__(self, w: BitString | str) -> bool:
        if isinstance(w, str):
            w = BitString(w)
        return self.query(w)


@dataclass(frozen=True, eq=False)
class FiniteOracle(Oracle):
    """True exactly on the listed strings (length-sensitive)."""

    support: frozenset[BitString] = frozenset()

    def __init__(self, support: Iterable[BitString | str] = ()):
        items = frozenset(BitString(s) if isinstance(s, str) else s for s in support)
        object.__setattr__(self, "support", items)

    def query(self, w):
        return w in self.support


@dataclass(frozen=True, eq=False)
class PredicateOracle(Oracle):
    """Wraps an arbitrary Python predicate."""

    fn: Callable[[BitString], bool]
    name: str = "predicate"

    def query(self, w):
        return bool(self.fn(w))


@dataclass(frozen=True, eq=False)
class UnionOracle(Oracle):
    members: tuple[Oracle, ...] = ()

    def query(self, w):
        return any(m(w) for m in self.members)


@dataclass(frozen=True, eq=False)
class SectionOracle(Oracle):
    n: int
    base: Oracle

    def query(self, w):
        return len(w) == self.n + loglen(self.n) and self.base(w)


EMPTY = FiniteOracle()


@dataclass(frozen=True)
class PartialFn:
    """A partial function {0,1}^n -> {0,1}^n. Treat as immutable."""

    n: int
    table: Mapping[BitString, BitString] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("width must be nonnegative")
        for x, y in self.table.items():
            if len(x) != self.n or len(y) != self.n:
                raise ValueError(f"assignment {x}->{y} does not have width {self.n}")
        object.__setattr__(self, "table", dict(self.table))

    @classmethod
    def from_pairs(cls, n: int, pairs: Mapping[str, str] | Iterable[tuple[str, str]]):
        items = pairs.items() if isinstance(pairs, Mapping) else pairs
        return cls(n, {BitString(x): BitString(y) for x, y in items})

    def __contains__(self, x: BitString) -> bool:
        return x in self.table

    def __call__(self, x: BitString | str) -> BitString | None:
        if isinstance(x, str):
            x = BitString(x)
        return self.table.get(x)

    def __len__(self):
        return len(self.table)

    @property
    def domain(self) -> frozenset[BitString]:
        return frozenset(self.table)

    def is_total(self) -> bool:
        return len(self.table) == 1 << self.n

    def extended(self, assignments: Mapping[BitString, BitString]) -> PartialFn:
        merged = dict(self.table)
        merged.update(assignments)
        return PartialFn(self.n, merged)

    def completed(self, default: BitString | None = None) -> TotalFn:
        """Total function agreeing with self, sending every other point to ``default`` (0^n)."""
        fill = default if default is not None else BitString.zeros(self.n)
        table = {x: self.table.get(x, fill) for x in all_strings(self.n)}
        return TotalFn(self.n, table)


@dataclass(frozen=True)
class TotalFn(PartialFn):
    def __post_init__(self):
        super().__post_init__()
        if not self.is_total():
            raise ValueError(f"function of width {self.n} is defined on {len(self.table)} "
                             f"of {1 << self.n} points")

    @classmethod
    def from_values(cls, n: int, values: Iterable[BitString | str]) -> TotalFn:
        """Value table listed in lexicographic order of the arguments."""
        vals = [BitString(v) if isinstance(v, str) else v for v in values]
        return cls(n, dict(zip(all_strings(n), vals, strict=True)))

    def values(self) -> list[BitString]:
        return [self.table[x] for x in all_strings(self.n)]


def query_width(n: int) -> int:
    """Length of bit-graph queries for width-``n`` functions."""
    return n + loglen(n)


def split_query(w: BitString, n: int) -> tuple[BitString, int]:
    """Split a bit-graph query into (argument, bit index); raises MalformedQuery."""
    if len(w) != query_width(n):
        raise MalformedQuery(f"query {w} has length {len(w)}, expected {query_width(n)}")
    x, v = w[:n], w[n:]
    i = v.to_int()
    if i >= n:
        raise MalformedQuery(f"query {w} names bit {i} of a width-{n} value")
    return x, i


def bitgraph_lookup(f: PartialFn, w: BitString) -> int | None:
    """Bit i of f(x) for w = x.code(i); None where f(x) is undefined."""
    x, i = split_query(w, f.n)
    y = f(x)
    if y is None:
        return None
    return y[i]


@dataclass(frozen=True, eq=False)
class FunctionOracle(Oracle):
    """The oracle A_f: true on x.code(i) iff bit i of f(x) is 1, false elsewhere."""

    f: TotalFn

    @property
    def n(self) -> int:
        return self.f.n

    def query(self, w):
        if len(w) != query_width(self.f.n):
            return False
        try:
            return bitgraph_lookup(self.f, w) == 1
        except MalformedQuery:
            return False

    def support(self) -> list[BitString]:
        n = self.f.n
        out = []
        for x in all_strings(n):
            y = self.f.table[x]
            out.extend(x + index_code(i, n) for i in range(n) if y[i])
        return out


def afun(f: TotalFn) -> FunctionOracle:
    if not f.is_total():
        raise ValueError("afun needs a total function")
    return FunctionOracle(f)


def reconstruct(a: Oracle, n: int) -> TotalFn:
    """The unique f whose bit graph agrees with ``a`` on length n + loglen(n)."""
    codes = [index_code(i, n) for i in range(n)]
    table = {}
    for x in all_strings(n):
        table[x] = BitString.from_bits(a(x + v) for v in codes)
    return TotalFn(n, table)


def section(n: int, a: Oracle) -> Oracle:
    """Restriction of ``a`` to strings of length n + loglen(n)."""
    if isinstance(a, FunctionOracle) and a.n == n:
        return a
    if isinstance(a, SectionOracle) and a.n == n:
        return a
    if isinstance(a, FiniteOracle):
        width = query_width(n)
        return FiniteOracle(w for w in a.support if len(w) == width)
    return SectionOracle(n, a)


def union_oracle(members: Iterable[Oracle]) -> Oracle:
    flat: list[Oracle] = []
    for m in members:
        if isinstance(m, UnionOracle):
            flat.extend(m.members)
        else:
            flat.append(m)
    if all(isinstance(m, FiniteOracle) for m in flat):
        return FiniteOracle(w for m in flat for w in m.support)
    return UnionOracle(tuple(flat))


def iterate_chain(f: PartialFn, limit: int) -> list[BitString]:
    """0^n, f(0^n), ... while defined, at most ``limit`` applications."""
    cur = BitString.zeros(f.n)
    chain = [cur]
    for _ in range(limit):
        nxt = f(cur)
        if nxt is None:
            break
        chain.append(nxt)
        cur = nxt
    return chain


def is_sequential(f: PartialFn, ell: int) -> bool:
    """Some k <= ell has 0, f(0), ..., f^k(0) defined and f^k(0) outside dom f."""
    cur = BitString.zeros(f.n)
    for _ in range(ell + 1):
        if cur not in f:
            return True
        cur = f.table[cur]
    return False


def smallest_outside(n: int, excluded) -> BitString:
    for s in all_strings(n):
        if s not in excluded:
            return s
    raise DomainFull(f"every string of width {n} is excluded")


def extend_sequential(f: PartialFn, M: Iterable[BitString], ell: int) -> PartialFn:
    """(ell+1)-sequential extension of an ell-sequential ``f`` to dom f | M.

    New points all map to the lexicographically smallest string outside M | dom f.
    """
    M = {BitString(x) if isinstance(x, str) else x for x in M}
    for x in M:
        if len(x) != f.n:
            raise ValueError(f"{x} does not have width {f.n}")
    if not is_sequential(f, ell):
        raise NotSequential(f"function is not {ell}-sequential")
    blocked = f.domain | M
    if len(blocked) >= 1 << f.n:
        raise DomainFull(f"|dom f | M| = {len(blocked)} leaves no fresh value of width {f.n}")
    new = M - f.domain
    if not new:
        return f
    a = smallest_outside(f.n, blocked)
    return f.extended({x: a for x in new})


# -- text format ---------------------------------------------------------------

def parse_oracle(text: str) -> Oracle:
    """Finite support (one string per line) or a function table headed by ``n=<width>``."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if lines and lines[0].startswith("n="):
        n = int(lines[0][2:])
        table = {}
        for ln in lines[1:]:
            if "->" not in ln:
                raise ValueError(f"expected 'x -> f(x)', got {ln!r}")
            x, y = (parse_bits(p) for p in ln.split("->"))
            if x in table:
                raise ValueError(f"duplicate argument {x}")
            table[x] = y
        return afun(TotalFn(n, table))
    return FiniteOracle(parse_bits(ln) for ln in lines)


def format_oracle(a: Oracle) -> str:
    if isinstance(a, FunctionOracle):
        rows = [f"n={a.n}"] + [f"{x} -> {a.f.table[x]}" for x in all_strings(a.n)]
        return "\n".join(rows) + "\n"
    if isinstance(a, FiniteOracle):
        items = sorted(a.support, key=lambda s: (len(s), s.value))
        return "".join(f"{s.value or '-'}\n" for s in items)
    raise TypeError(f"cannot serialize {type(a).__name__}; use finite_support first")


def finite_support(a: Oracle, lengths: Iterable[int]) -> FiniteOracle:
    """Materialize ``a`` on all strings of the given lengths."""
    return FiniteOracle(w for m in lengths for w in all_strings(m) if a(w))


def load_oracle(path) -> Oracle:
    with open(path) as fh:
        return parse_oracle(fh.read())
