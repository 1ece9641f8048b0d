"""Log-space machines with a constant-height stack of write-only oracle tapes.

The simulator tracks the full state, stack contents included. The
reduction side builds the level-indexed configuration graphs, whose nodes
carry no stack information, and decides acceptance by reachability in the
level-0 graph.
"""
from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field

from .encoding import BitString
from .graph import Digraph, stconn
from .oracle import Oracle

BLANK = "_"
SYMBOLS = ("0", "1", BLANK)
OPS = ("none", "write", "push", "pop")
MAX_CONFIGS = 200_000


class MachineError(RuntimeError):
    pass


@dataclass(frozen=True)
class Step:
    """Tape effects of a transition: new state, work write, head moves."""

    next: str
    write: str | None = None
    input_move: int = 0
    work_move: int = 0

    def __post_init__(self):
        if self.write is not None and self.write not in SYMBOLS:
            raise ValueError(f"bad work symbol {self.write!r}")
        if self.input_move not in (-1, 0, 1) or self.work_move not in (-1, 0, 1):
            raise ValueError("head moves must be -1, 0 or +1")


@dataclass(frozen=True)
class Action:
    """One transition choice. Pop actions carry an outcome per oracle answer."""

    op: str = "none"
    step: Step | None = None
    bit: int | None = None
    on_true: Step | None = None
    on_false: Step | None = None

    def __post_init__(self):
        if self.op not in OPS:
            raise ValueError(f"unknown oracle action {self.op!r}")
        if self.op == "pop":
            if self.on_true is None or self.on_false is None:
                raise ValueError("pop needs on_true and on_false outcomes")
        elif self.step is None:
            raise ValueError(f"{self.op} action needs a step")
        if self.op in ("write", "push") and self.bit not in (0, 1):
            raise ValueError(f"{self.op} needs a bit")

    def targets(self) -> list[str]:
        if self.op == "pop":
            return [self.on_true.next, self.on_false.next]
        return [self.step.next]


@dataclass(frozen=True)
class Config:
    """State, input head, work tape and work head; no stack contents."""

    state: str
    in_pos: int
    work: str
    work_pos: int


@dataclass
class StackMachine:
    states: tuple[str, ...]
    start: str
    accept: str
    h: int
    work_space: int
    step_budget: int
    transitions: dict[tuple[str, str, str], tuple[Action, ...]] = field(default_factory=dict)

    def __post_init__(self):
        self.states = tuple(self.states)
        known = set(self.states)
        if self.start not in known or self.accept not in known:
            raise ValueError("start and accept must be listed states")
        if self.work_space < 1 or self.h < 0 or self.step_budget < 0:
            raise ValueError("need work_space >= 1, h >= 0, step_budget >= 0")
        for (q, a, b), acts in self.transitions.items():
            if q not in known or a not in SYMBOLS or b not in SYMBOLS:
                raise ValueError(f"bad transition key {(q, a, b)}")
            for act in acts:
                for t in act.targets():
                    if t not in known:
                        raise ValueError(f"transition to unknown state {t!r}")

    def initial(self) -> Config:
        return Config(self.start, 0, BLANK * self.work_space, 0)

    def actions(self, c: Config, x: BitString) -> tuple[Action, ...]:
        a = x.value[c.in_pos] if 0 <= c.in_pos < len(x) else BLANK
        return self.transitions.get((c.state, a, c.work[c.work_pos]), ())

    def apply(self, c: Config, s: Step, x: BitString) -> Config:
        work = c.work
        if s.write is not None:
            work = work[:c.work_pos] + s.write + work[c.work_pos + 1:]
        in_pos = min(max(c.in_pos + s.input_move, -1), len(x))
        work_pos = min(max(c.work_pos + s.work_move, 0), self.work_space - 1)
        return Config(s.next, in_pos, work, work_pos)

    def configs(self, x: BitString):
        count = len(self.states) * (len(x) + 2) * 3 ** self.work_space * self.work_space
        if count > MAX_CONFIGS:
            raise MachineError(f"{count} configurations exceed the cap of {MAX_CONFIGS}")
        for q in self.states:
            for p in range(-1, len(x) + 1):
                for work in itertools.product(SYMBOLS, repeat=self.work_space):
                    for wp in range(self.work_space):
                        yield Config(q, p, "".join(work), wp)

    # -- serialization ---------------------------------------------------------

    @classmethod
    def from_dict(cls, data: dict) -> StackMachine:
        table: dict[tuple[str, str, str], tuple[Action, ...]] = {}
        for entry in data["transitions"]:
            ins = SYMBOLS if entry.get("input", "*") == "*" else (entry["input"],)
            wks = SYMBOLS if entry.get("work", "*") == "*" else (entry["work"],)
            acts = tuple(_action_from(a) for a in entry["actions"])
            for a, b in itertools.product(ins, wks):
                table[(entry["state"], a, b)] = acts
        return cls(tuple(data["states"]), data["start"], data["accept"], data["h"],
                   data.get("work_space", 1), data.get("step_budget", 1000), table)

    def to_dict(self) -> dict:
        rows = []
        for (q, a, b), acts in sorted(self.transitions.items()):
            rows.append({"state": q, "input": a, "work": b, "actions": [_action_to(x) for x in acts]})
        return {"states": list(self.states), "start": self.start, "accept": self.accept,
                "h": self.h, "work_space": self.work_space, "step_budget": self.step_budget,
                "transitions": rows}


def _step_from(d: dict) -> Step:
    return Step(d["next"], d.get("write"), d.get("input_move", 0), d.get("work_move", 0))


def _step_to(s: Step) -> dict:
    out = {"next": s.next}
    if s.write is not None:
        out["write"] = s.write
    if s.input_move:
        out["input_move"] = s.input_move
    if s.work_move:
        out["work_move"] = s.work_move
    return out


def _action_from(d: dict) -> Action:
    op = d.get("op", "none")
    if op == "pop":
        return Action("pop", on_true=_step_from(d["on_true"]), on_false=_step_from(d["on_false"]))
    return Action(op, _step_from(d), d.get("bit"))


def _action_to(a: Action) -> dict:
    if a.op == "pop":
        return {"op": "pop", "on_true": _step_to(a.on_true), "on_false": _step_to(a.on_false)}
    out = {"op": a.op, **_step_to(a.step)}
    if a.bit is not None:
        out["bit"] = a.bit
    return out


def load_machine(path) -> StackMachine:
    with open(path) as fh:
        return StackMachine.from_dict(json.load(fh))


# -- validity -------------------------------------------------------------------

def stack_depths(m: StackMachine) -> dict[str, set[int]]:
    """Conservative set of stack heights each state may be entered with."""
    depths: dict[str, set[int]] = {q: set() for q in m.states}
    depths[m.start].add(0)
    by_state: dict[str, list[tuple[Action, ...]]] = {q: [] for q in m.states}
    for (q, _, _), acts in m.transitions.items():
        by_state[q].append(acts)
    todo = deque([(m.start, 0)])
    while todo:
        q, k = todo.popleft()
        for acts in by_state[q]:
            for act in acts:
                delta = {"none": 0, "write": 0, "push": 1, "pop": -1}[act.op]
                k2 = k + delta
                if not 0 <= k2 <= m.h:
                    continue
                for t in act.targets():
                    if k2 not in depths[t]:
                        depths[t].add(k2)
                        todo.append((t, k2))
    return depths


def csnl_violations(m: StackMachine) -> list[str]:
    """Syntactic csNL check backed by :func:`stack_depths`.

    Entries containing a push, and entries of states that may run with a
    nonempty stack, must be single actions. ACCEPT must have no transitions
    and may only be entered with an empty stack.
    """
    depths = stack_depths(m)
    out = []
    for (q, a, b), acts in sorted(m.transitions.items()):
        if q == m.accept and acts:
            out.append(f"accept state has a transition on ({a},{b})")
        if len(acts) > 1:
            if any(act.op == "push" for act in acts):
                out.append(f"state {q} on ({a},{b}) branches on a push")
            elif any(k >= 1 for k in depths[q]):
                out.append(f"state {q} on ({a},{b}) branches with a nonempty stack")
    if any(k >= 1 for k in depths[m.accept]):
        out.append("accept state reachable with a nonempty stack")
    return out


def validate_csnl(m: StackMachine) -> bool:
    return not csnl_violations(m)


def stack_discipline_violations(m: StackMachine) -> list[str]:
    """Possible overflows and empty-stack writes/pops (runs hitting them are rejected)."""
    depths = stack_depths(m)
    out = []
    for (q, a, b), acts in sorted(m.transitions.items()):
        for act in acts:
            if act.op == "push" and m.h in depths[q]:
                out.append(f"state {q} may push at height {m.h}")
            if act.op in ("write", "pop") and 0 in depths[q]:
                out.append(f"state {q} may {act.op} with an empty stack")
    return out


# -- direct simulation ----------------------------------------------------------

@dataclass
class RunResult:
    accepted: bool
    reason: str
    steps: int
    trace: list[tuple[int, Config]] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)


def _stack_step(m, c, stack, act, x, alpha):
    """One transition on the full state; returns (config, stack) or raises MachineError."""
    if act.op == "none":
        return m.apply(c, act.step, x), stack
    if act.op == "write":
        if not stack:
            raise MachineError(f"write with an empty stack in state {c.state}")
        return m.apply(c, act.step, x), stack[:-1] + (stack[-1] + str(act.bit),)
    if act.op == "push":
        if len(stack) >= m.h:
            raise MachineError(f"stack overflow beyond height {m.h} in state {c.state}")
        return m.apply(c, act.step, x), stack + (str(act.bit),)
    if not stack:
        raise MachineError(f"pop with an empty stack in state {c.state}")
    answer = alpha(BitString(stack[-1]))
    return m.apply(c, act.on_true if answer else act.on_false, x), stack[:-1]


def run(m: StackMachine, x: BitString | str, alpha: Oracle, mode: str = "direct",
        trace: bool = False) -> RunResult:
    """Simulate on the full state. ``mode`` is "direct" or "exhaustive"."""
    if isinstance(x, str):
        x = BitString(x)
    if mode == "direct":
        return _run_direct(m, x, alpha, trace)
    if mode == "exhaustive":
        return _run_exhaustive(m, x, alpha)
    raise ValueError(f"unknown mode {mode!r}")


def _run_direct(m, x, alpha, trace) -> RunResult:
    c, stack = m.initial(), ()
    log = [(0, c)] if trace else []
    for steps in range(m.step_budget + 1):
        if c.state == m.accept:
            return RunResult(True, "accept", steps, log)
        if steps == m.step_budget:
            break
        acts = m.actions(c, x)
        if not acts:
            return RunResult(False, "halt", steps, log)
        if len(acts) > 1:
            raise MachineError(f"nondeterministic choice in state {c.state} during a direct run")
        c, stack = _stack_step(m, c, stack, acts[0], x, alpha)
        assert len(stack) <= m.h
        if trace:
            log.append((len(stack), c))
    return RunResult(False, "budget", m.step_budget, log)


def _run_exhaustive(m, x, alpha) -> RunResult:
    # BFS over full states: a state is reachable within the budget iff its
    # BFS distance is, so the verdict does not depend on branch order.
    start = (m.initial(), ())
    frontier = [start]
    seen = {start}
    errors: list[str] = []
    for steps in range(m.step_budget + 1):
        if any(c.state == m.accept for c, _ in frontier):
            return RunResult(True, "accept", steps, errors=errors)
        if not frontier:
            return RunResult(False, "halt", steps, errors=errors)
        if steps == m.step_budget:
            break
        nxt = []
        for c, stack in frontier:
            acts = m.actions(c, x)
            if len(acts) > 1 and stack:
                raise MachineError(f"state {c.state} branches with a nonempty stack")
            for act in acts:
                try:
                    s = _stack_step(m, c, stack, act, x, alpha)
                except MachineError as exc:
                    errors.append(str(exc))
                    continue
                if s not in seen:
                    seen.add(s)
                    nxt.append(s)
        frontier = nxt
    return RunResult(False, "budget", m.step_budget, errors=errors)


def simulate(m: StackMachine, x: BitString | str, alpha: Oracle, mode: str = "direct") -> bool:
    return run(m, x, alpha, mode).accepted


# -- configuration graphs ---------------------------------------------------------

@dataclass
class ConfigGraph:
    level: int
    nodes: list[Config]
    e0: set[tuple[Config, Config]]
    e1: set[tuple[Config, Config]]

    @property
    def edges(self) -> set[tuple[Config, Config]]:
        return self.e0 | self.e1

    def successors(self) -> dict[Config, list[Config]]:
        out: dict[Config, list[Config]] = {}
        for u, v in self.edges:
            out.setdefault(u, []).append(v)
        return out


def build_config_graphs(m: StackMachine, x: BitString | str, alpha: Oracle,
                        check: bool = True) -> list[ConfigGraph]:
    """Graphs G_0..G_h, computed from level h downwards."""
    if isinstance(x, str):
        x = BitString(x)
    if check:
        bad = csnl_violations(m)
        if bad:
            raise MachineError(f"not a valid csNL machine: {bad[0]}")
    nodes = list(m.configs(x))
    acts_of = {c: m.actions(c, x) for c in nodes}
    graphs: dict[int, ConfigGraph] = {}
    for k in range(m.h, -1, -1):
        e0 = set()
        for u in nodes:
            acts = acts_of[u]
            if u.state == m.accept or (k >= 1 and len(acts) != 1):
                continue
            for act in acts:
                if act.op == "none" or (act.op == "write" and k >= 1):
                    e0.add((u, m.apply(u, act.step, x)))
        e1 = set()
        if k < m.h:
            upper = graphs[k + 1].successors()
            for u in nodes:
                acts = acts_of[u]
                if u.state == m.accept or len(acts) != 1 or acts[0].op != "push":
                    continue
                target = _excursion(m, x, alpha, acts_of, upper, u, acts[0])
                if target is not None:
                    e1.add((u, target))
        graphs[k] = ConfigGraph(k, nodes, e0, e1)
    return [graphs[k] for k in range(m.h + 1)]


def _excursion(m, x, alpha, acts_of, upper, u, push):
    """Follow the unique level k+1 path after ``push``; the level-k successor or None."""
    v = m.apply(u, push.step, x)
    query = [str(push.bit)]
    seen = set()
    for _ in range(m.step_budget + 1):
        if v in seen:
            return None
        seen.add(v)
        acts = acts_of[v]
        if len(acts) != 1:
            return None
        act = acts[0]
        if act.op == "pop":
            answer = alpha(BitString("".join(query)))
            return m.apply(v, act.on_true if answer else act.on_false, x)
        nxt = upper.get(v)
        if not nxt:
            return None
        if act.op == "write":
            query.append(str(act.bit))
        v = nxt[0]
    return None


def level0_digraph(m: StackMachine, g0: ConfigGraph, x: BitString) -> tuple[Digraph, int, int]:
    """G_0 as an integer digraph plus a sink fed by every accepting configuration."""
    index = {c: i for i, c in enumerate(g0.nodes)}
    sink = len(index)
    edges = {(index[u], index[v]) for u, v in g0.edges}
    edges |= {(index[c], sink) for c in g0.nodes if c.state == m.accept}
    return Digraph(sink + 1, frozenset(edges)), index[m.initial()], sink


def decide_via_reachability(m: StackMachine, x: BitString | str, alpha: Oracle) -> bool:
    if isinstance(x, str):
        x = BitString(x)
    g0 = build_config_graphs(m, x, alpha)[0]
    g, s, t = level0_digraph(m, g0, x)
    return stconn(g, s, t)
