"""Command-line front end.

Exit status: 0 = success / verdict true, 1 = verdict false, 2 = error.
Reports print a stable verdict section followed by a timing section.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import adversary, generate
from .circuit import (LayeredCircuit, OracleContext, evaluate, fanin2_violations, load_circuit,
                      locv_violations, max_oracle_depth, proper_violations)
from .encoding import BitString, all_strings, parse_bits
from .graph import conn_witness, load_graph, path_witness, stconn
from .machine import (StackMachine, build_config_graphs, csnl_violations, decide_via_reachability,
                      load_machine, run, stack_discipline_violations)
from .oracle import (EMPTY, FunctionOracle, finite_support, format_oracle, load_oracle, query_width)
from .witness import mfv, modcount, numones

TIMING_HEADER = "--- timings ---"
DEFAULT_SEED = 20240601


class CliError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    digest: str
    verdicts: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    trace_paths: list[str] = field(default_factory=list)

    def add(self, line: str) -> None:
        self.verdicts.append(line)

    def render(self) -> str:
        lines = [f"command: {self.command}", f"inputs: {self.digest}"]
        lines += self.verdicts
        lines += [f"trace: {p}" for p in self.trace_paths]
        lines.append(TIMING_HEADER)
        lines += [f"{k}: {v:.1f}" for k, v in self.timings.items()]
        return "\n".join(lines) + "\n"


def stable_section(text: str) -> str:
    return text.split(TIMING_HEADER, 1)[0]


def _digest(paths=(), extra=()) -> str:
    h = hashlib.sha256()
    for p in paths:
        h.update(Path(p).read_bytes())
    for e in extra:
        h.update(str(e).encode())
    return h.hexdigest()[:16]


def _bits(text: str | None) -> BitString:
    return parse_bits(text) if text else BitString()


def _oracle_context(specs: list[str] | None) -> tuple[OracleContext, list[str]]:
    """``--oracle PATH`` binds every oracle name; ``--oracle name=PATH`` binds one."""
    named, default, paths = {}, None, []
    for spec in specs or []:
        name, sep, path = spec.partition("=")
        if not sep:
            name, path = "", spec
        paths.append(path)
        oracle = load_oracle(path)
        if name:
            named[name] = oracle
        else:
            default = oracle
    return OracleContext(named, default), paths


def _single_oracle(path: str | None):
    return (load_oracle(path), [path]) if path else (EMPTY, [])


# -- commands ---------------------------------------------------------------------

def cmd_validate(args) -> tuple[RunReport, int]:
    data = json.loads(Path(args.path).read_text())
    report = RunReport("validate", _digest([args.path], [args.strict]))
    if "transitions" in data:
        m = StackMachine.from_dict(data)
        bad = csnl_violations(m)
        if bad and args.force:
            report.add("warning: csNL check overridden by --force (unsound)")
            bad = []
        report.add("kind: machine")
        report.add(f"csnl: {'yes' if not bad else 'no'}")
        if bad:
            report.add(f"first_violation: {bad[0]}")
        for v in sorted(set(stack_discipline_violations(m))):
            report.add(f"stack_warning: {v}")
        ok = not bad
    else:
        c = LayeredCircuit.from_dict(data)
        proper = proper_violations(c)
        report.add("kind: circuit")
        report.add(f"proper: {'yes' if not proper else 'no'}")
        ok = not proper
        if proper:
            report.add(f"first_violation: {proper[0]}")
        else:
            fan = fanin2_violations(c)
            report.add(f"fanin2: {'yes' if not fan else 'no'}")
            if fan:
                report.add(f"fanin2_violation: {fan[0]}")
            depth = max_oracle_depth(c)
            report.add(f"oracle_depth: {depth}")
            if args.oheight is not None:
                report.add(f"oheight<={args.oheight}: {'yes' if depth <= args.oheight else 'no'}")
                ok = ok and depth <= args.oheight
            if args.strict:
                ok = ok and not fan
    report.add(f"verdict: {'valid' if ok else 'invalid'}")
    return report, 0 if ok else 1


def _witness_lines(c: LayeredCircuit, w) -> list[str]:
    lines = []
    for z in range(c.depth + 1):
        lines.append(f"Y[{z}] = {w.layer(z, c.width)}")
    for (z, x), g in sorted(c.gates.items()):
        kind = f"oracle({g.oracle})" if g.kind == "oracle" else g.kind
        lines.append(f"Q({z},{x}) {kind} = {w.Q[(z, x)].value or '-'}")
    return lines


def cmd_eval(args) -> tuple[RunReport, int]:
    c = load_circuit(args.circuit)
    ctx, paths = _oracle_context(args.oracle)
    I = _bits(args.input)
    report = RunReport("eval", _digest([args.circuit, *paths], [I]))
    w = evaluate(c, I, ctx)
    for line in _witness_lines(c, w):
        report.add(line)
    report.add(f"output Y({c.output[0]},{c.output[1]}) = {w.Y[c.output]}")
    if args.out:
        trace = {"Y": {f"{z},{x}": v for (z, x), v in sorted(w.Y.items())},
                 "Q": {f"{z},{x}": q.value for (z, x), q in sorted(w.Q.items())}}
        Path(args.out).write_text(json.dumps(trace, indent=1))
        report.trace_paths.append(args.out)
    return report, 0


def cmd_fool(args) -> tuple[RunReport, int]:
    c = load_circuit(args.circuit)
    report = RunReport("fool", _digest([args.circuit], [args.n, args.input, args.ell]))
    inputs = _bits(args.input) if args.input is not None else None
    res = adversary.fool(c, args.n, inputs, args.ell)
    report.add(f"n: {args.n}")
    report.add(f"oracle_depth: {res.depth}")
    report.add(f"ell: {res.ell}")
    report.add("f:")
    for x in all_strings(args.n):
        report.add(f"  {x} -> {res.f.table[x]}")
    report.add("chain: " + " ".join(s.value for s in res.chain))
    report.add(f"circuit_output: {res.circuit_output}")
    report.add(f"target_bit: {res.target_bit}")
    problems = adversary.check_fooling(c, res, inputs)
    report.add("circuit_output ≠ target_bit" if res.fooled and not problems else "NOT FOOLED")
    for p in problems:
        report.add(f"problem: {p}")
    if args.out:
        Path(args.out).write_text(format_oracle(res.alpha))
        report.trace_paths.append(args.out)
    return report, 0 if res.fooled and not problems else 1


def cmd_simulate(args) -> tuple[RunReport, int]:
    m = load_machine(args.machine)
    alpha, paths = _single_oracle(args.oracle)
    x = _bits(args.input)
    report = RunReport("simulate", _digest([args.machine, *paths], [x, args.mode]))
    report.add(f"mode: {args.mode}")
    if args.mode == "reduce":
        graphs = build_config_graphs(m, x, alpha, check=not args.force)
        for g in graphs:
            report.add(f"G_{g.level}: |E0|={len(g.e0)} |E1|={len(g.e1)}")
        accepted = decide_via_reachability(m, x, alpha) if not args.force else _reach(m, x, graphs)
    else:
        res = run(m, x, alpha, args.mode)
        accepted = res.accepted
        report.add(f"steps: {res.steps}")
        report.add(f"reason: {res.reason}")
        for e in sorted(set(res.errors)):
            report.add(f"dead_branch: {e}")
    report.add(f"verdict: {'accept' if accepted else 'reject'}")
    return report, 0 if accepted else 1


def _reach(m, x, graphs):
    from .machine import level0_digraph
    g, s, t = level0_digraph(m, graphs[0], x)
    return stconn(g, s, t)


def _diag_config(path: str):
    cfg = json.loads(Path(path).read_text())
    families = []
    for spec in cfg["families"]:
        kind, _, arg = spec.partition(":")
        if kind != "iteration":
            raise CliError(f"unknown circuit family {spec!r}")
        ell = int(arg)
        families.append(lambda n, ell=ell: adversary.iteration_circuit(n, ell, n_inputs=n))
    d = [adversary.growth(g) for g in cfg["d"]]
    s = [adversary.growth(g) for g in cfg["s"]]
    triples = [tuple(t) for t in cfg["triples"]]
    return cfg, families, d, s, triples


def cmd_diagonalize(args) -> tuple[RunReport, int]:
    cfg, families, d, s, triples = _diag_config(args.config)
    report = RunReport("diagonalize", _digest([args.config]))
    result = adversary.diagonalize(families, d, s, triples, cfg.get("search_bound", 64),
                                   cfg.get("start", 1))
    ok = True
    for st in result.stages:
        k = st.triple[0]
        g = d[k + 1]
        member = adversary.itlang_member(st.n, result.oracle, g)
        out = evaluate(st.circuit, BitString.zeros(st.circuit.n_inputs), result.oracle).Y[st.circuit.output]
        differs = int(member) != out
        ok = ok and (differs or st.skipped)
        report.add(f"stage {st.index}: triple={list(st.triple)} n={st.n} "
                   f"skipped={'yes' if st.skipped else 'no'} circuit={out} itlang={int(member)} "
                   f"{'differs' if differs else 'agrees'}")
    report.add(f"verdict: {'separated' if ok else 'FAILED'}")
    if args.out:
        lengths = sorted({query_width(st.n) for st in result.stages})
        Path(args.out).write_text(format_oracle(finite_support(result.oracle, lengths)))
        report.trace_paths.append(args.out)
    return report, 0 if ok else 1


def cmd_itlang(args) -> tuple[RunReport, int]:
    alpha = load_oracle(args.oracle)
    report = RunReport("itlang", _digest([args.oracle], [args.n, args.g]))
    g = adversary.growth(args.g)
    member = adversary.itlang_member(args.n, alpha, g)
    report.add(f"n: {args.n}")
    report.add(f"g(n): {g(args.n)}")
    report.add(f"verdict: {'member' if member else 'non-member'}")
    return report, 0 if member else 1


def cmd_reach(args) -> tuple[RunReport, int]:
    g = load_graph(args.graph)
    report = RunReport("reach", _digest([args.graph], [args.s, args.t]))
    yes = stconn(g, args.s, args.t)
    # one solver decides both the instance and its complement
    report.add(f"stconn({args.s},{args.t}): {'yes' if yes else 'no'}")
    report.add(f"complement({args.s},{args.t}): {'no' if yes else 'yes'}")
    return report, 0 if yes else 1


def cmd_witness(args) -> tuple[RunReport, int]:
    kind = args.which
    paths = [p for p in (getattr(args, "graph", None), getattr(args, "circuit", None)) if p]
    report = RunReport(f"witness {kind}", _digest(paths, [vars(args).get(k) for k in
                                                          ("x", "bits", "m", "kinds", "input")]))
    if kind in ("numones", "mod"):
        X = _bits(args.bits)
        x = args.x if args.x is not None else len(X)
        trace = numones(x, X) if kind == "numones" else modcount(args.m, x, X)
        for z, v in enumerate(trace.entries):
            report.add(f"(Y)^{z} = {v}")
    elif kind == "mfv":
        I = _bits(args.bits)
        G = {i + 1: k for i, k in enumerate(args.kinds.split(","))} if args.kinds else {}
        Y = mfv(len(I), G, I)
        for node in sorted(Y):
            report.add(f"Y({node}) = {Y[node]}")
    elif kind == "conn":
        Y = conn_witness(load_graph(args.graph))
        for z, row in enumerate(Y):
            report.add(f"Y({z},*) = {''.join(map(str, row))}")
    elif kind == "path":
        g = load_graph(args.graph)
        P = path_witness(g)
        for v in range(g.a + 1):
            report.add(f"(P)^{v} = {P[v]}")
    elif kind == "locv":
        c = load_circuit(args.circuit)
        ctx, opaths = _oracle_context(args.oracle)
        I = _bits(args.input)
        w = evaluate(c, I, ctx)
        for line in _witness_lines(c, w):
            report.add(line)
        bad = locv_violations(c, I, w, ctx)
        report.add(f"clauses: {'all satisfied' if not bad else bad[0]}")
    return report, 0


def cmd_sample(args) -> tuple[RunReport, int]:
    rng = random.Random(args.seed)
    report = RunReport("sample", _digest(extra=[args.seed, args.what]))
    if args.what == "circuit":
        obj = generate.random_fooling_circuit(rng, args.n, args.depth).to_dict()
    elif args.what == "machine":
        obj = generate.random_machine(rng).to_dict()
    else:
        obj = {"support": sorted(w.value for w in generate.random_finite_oracle(rng, 3).support)}
    text = json.dumps(obj, indent=1)
    if args.out:
        Path(args.out).write_text(text)
        report.trace_paths.append(args.out)
    else:
        report.add(text)
    return report, 0


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oraclelab", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a circuit (Proper/fan-in 2/oracle depth) or machine (csNL)")
    v.add_argument("path")
    v.add_argument("--strict", action="store_true", help="also require fan-in 2")
    v.add_argument("--oheight", type=int, help="bound on nested oracle depth")
    v.add_argument("--force", action="store_true", help="accept machines failing the csNL check (unsound)")
    v.set_defaults(func=cmd_validate)

    e = sub.add_parser("eval", help="evaluate a circuit and dump (Q, Y)")
    e.add_argument("circuit")
    e.add_argument("--input", default="")
    e.add_argument("--oracle", action="append", help="PATH or NAME=PATH")
    e.add_argument("--out")
    e.set_defaults(func=cmd_eval)

    f = sub.add_parser("fool", help="build an oracle on which the circuit misses f^(d+1)(0)")
    f.add_argument("circuit")
    f.add_argument("n", type=int)
    f.add_argument("--input")
    f.add_argument("--ell", type=int)
    f.add_argument("--out")
    f.set_defaults(func=cmd_fool)

    s = sub.add_parser("simulate", help="run a stack machine")
    s.add_argument("machine")
    s.add_argument("--input", default="")
    s.add_argument("--oracle")
    s.add_argument("--mode", choices=("direct", "exhaustive", "reduce"), default="direct")
    s.add_argument("--force", action="store_true", help="skip the csNL check (unsound)")
    s.set_defaults(func=cmd_simulate)

    d = sub.add_parser("diagonalize", help="run a desk-scale diagonalization")
    d.add_argument("config")
    d.add_argument("--out")
    d.set_defaults(func=cmd_diagonalize)

    i = sub.add_parser("itlang", help="decide membership in the iteration language")
    i.add_argument("oracle")
    i.add_argument("n", type=int)
    i.add_argument("--g", default="const:1", help="logk:<k>, const:<c> or poly:<e>")
    i.set_defaults(func=cmd_itlang)

    r = sub.add_parser("reach", help="STCONN and its complement with one solver")
    r.add_argument("graph")
    r.add_argument("s", type=int)
    r.add_argument("t", type=int)
    r.set_defaults(func=cmd_reach)

    w = sub.add_parser("witness", help="print an axiom witness trace")
    wsub = w.add_subparsers(dest="which", required=True)
    for name in ("numones", "mod"):
        q = wsub.add_parser(name)
        q.add_argument("--bits", required=True)
        q.add_argument("--x", type=int)
        if name == "mod":
            q.add_argument("--m", type=int, required=True)
    q = wsub.add_parser("mfv")
    q.add_argument("--bits", required=True, help="leaf values")
    q.add_argument("--kinds", default="", help="comma-separated and/or for nodes 1..a-1")
    for name in ("conn", "path"):
        q = wsub.add_parser(name)
        q.add_argument("graph")
    q = wsub.add_parser("locv")
    q.add_argument("circuit")
    q.add_argument("--input", default="")
    q.add_argument("--oracle", action="append")
    w.set_defaults(func=cmd_witness)

    sm = sub.add_parser("sample", help="emit a seeded random circuit, machine or oracle")
    sm.add_argument("what", choices=("circuit", "machine", "oracle"))
    sm.add_argument("--n", type=int, default=3)
    sm.add_argument("--depth", type=int, default=1)
    sm.add_argument("--out")
    sm.set_defaults(func=cmd_sample)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        report, status = args.func(args)
    except (CliError, ValueError, KeyError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report.timings["elapsed_ms"] = (time.perf_counter() - t0) * 1000
    sys.stdout.write(report.render())
    return status


if __name__ == "__main__":
    sys.exit(main())
