import json
import random
from functools import lru_cache

import pytest

from conftest import FIXTURES
from oraclelab.circuit import (ALPHA, CONST, NEG_ALPHA, AND, NOT, OR, ORACLE, CircuitBuilder,
                               CircuitError, Gate, LayeredCircuit, Nc1Sentence, OracleContext,
                               evaluate, evaluate_nc1_sentence, fanin2_violations, load_circuit,
                               locv_violations, max_oracle_depth, oracle_depth, validate_fanin2,
                               validate_proper)
from oraclelab.encoding import BitString, all_strings
from oraclelab.generate import random_bits, random_finite_oracle, random_proper_circuit
from oraclelab.graph import Digraph, encode_matrix_query, stconn
from oraclelab.oracle import EMPTY, FiniteOracle, PredicateOracle

CIRCUITS = FIXTURES / "circuits"
PROPER_POS = ["single_oracle", "and2", "not_oracle", "oracle_chain", "wide_oracle",
              "fanin2_tree", "iteration_d1", "iteration_d2"]
PROPER_NEG = ["bad_duplicate_slot", "bad_not_arity", "bad_slot_gap", "bad_no_inputs",
              "bad_missing_kind", "bad_slot_missing_zero"]
FANIN_POS = ["single_oracle", "and2", "not_oracle", "oracle_chain", "wide_oracle", "fanin2_tree"]
FANIN_NEG = ["nf_and3", "nf_or1", "nf_and1", "nf_or3_deep", "nf_oracle_buffer"]


def load(name):
    return load_circuit(CIRCUITS / f"{name}.json")


def single(kind, arity, w=None):
    w = w or max(arity, 1)
    """One gate of ``kind`` at (1, 0); the rest of the layer is NOT fillers."""
    gates = {(1, x): Gate(NOT) for x in range(1, w)}
    gates[(1, 0)] = Gate(kind, "alpha" if kind == ORACLE else None)
    return LayeredCircuit(w, 1, gates,
                          frozenset({(0, t, t, 0) for t in range(arity)} | {(0, 0, 0, x) for x in range(1, w)}), w)


@pytest.mark.parametrize("name", PROPER_POS)
def test_proper_accepts(name):
    assert validate_proper(load(name))


@pytest.mark.parametrize("name", PROPER_NEG)
def test_proper_rejects(name):
    assert not validate_proper(load(name))


@pytest.mark.parametrize("name", FANIN_POS)
def test_fanin2_accepts(name):
    c = load(name)
    assert validate_proper(c) and validate_fanin2(c)


@pytest.mark.parametrize("name", FANIN_NEG)
def test_fanin2_rejects(name):
    c = load(name)
    assert validate_proper(c) and not validate_fanin2(c)


def test_validator_examples():
    assert validate_proper(single(AND, 2))
    dup = LayeredCircuit(2, 1, {(1, 0): Gate(AND), (1, 1): Gate(OR)},
                         frozenset({(0, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, 1)}), 2)
    assert not validate_proper(dup)
    assert not validate_proper(single(NOT, 2))
    assert not validate_fanin2(single(AND, 3))
    assert validate_fanin2(single(ORACLE, 5))
    nots = LayeredCircuit(2, 2, {(z, x): Gate(NOT) for z in (1, 2) for x in (0, 1)},
                          frozenset({(z, x, 0, x) for z in (0, 1) for x in (0, 1)}), 2)
    assert validate_fanin2(nots)


def test_bounds_checked_on_construction():
    with pytest.raises(CircuitError):
        LayeredCircuit(2, 1, {(1, 0): Gate(AND)}, frozenset({(0, 2, 0, 0)}), 2)
    with pytest.raises(CircuitError):
        LayeredCircuit(2, 1, {(2, 0): Gate(AND)}, frozenset(), 2)


def test_oracle_depth_examples():
    assert set(oracle_depth(load("fanin2_tree")).values()) == {0}
    assert oracle_depth(load("single_oracle"))[(1, 0)] == 1
    D = oracle_depth(load("oracle_chain"))
    assert (D[(1, 0)], D[(2, 0)], D[(3, 0)]) == (1, 1, 2)


def test_oracle_depth_bounded_by_layers():
    rng = random.Random(40)
    for _ in range(200):
        c = random_proper_circuit(rng, rng.randint(1, 4), rng.randint(1, 4))
        D = oracle_depth(c)
        assert max(D.values()) <= c.depth
        assert (max(D.values()) == 0) == (not c.oracle_gates())


def test_evaluate_examples():
    c = load("single_oracle")
    w = evaluate(c, "1", FiniteOracle(["1"]))
    assert w.Y[(1, 0)] == 1 and w.Q[(1, 0)] == BitString("1")
    a = load("and2")
    assert evaluate(a, "11").Y[(1, 0)] == 1
    assert evaluate(a, "10").Y[(1, 0)] == 0
    n = load("not_oracle")
    w = evaluate(n, "00", EMPTY)
    assert w.Q[(1, 0)] == BitString("00") and w.Y[(2, 0)] == 1


def test_evaluate_errors():
    c = load("single_oracle")
    with pytest.raises(CircuitError):
        evaluate(c, "11", EMPTY)
    with pytest.raises(KeyError):
        evaluate(c, "1", OracleContext({"beta": EMPTY}))
    with pytest.raises(CircuitError):
        evaluate(load("bad_slot_gap"), "000", EMPTY)


def reference_value(c, I, ctx):
    """Demand-driven recursive evaluation straight from the wire set."""
    @lru_cache(maxsize=None)
    def val(z, x):
        if z == 0:
            return I.bit(x) if x < c.n_inputs else 0
        srcs = sorted((t, u) for (zz, u, t, xx) in c.wires if zz == z - 1 and xx == x)
        bits = [val(z - 1, u) for _, u in srcs]
        g = c.gates[(z, x)]
        if g.kind == AND:
            return int(all(bits))
        if g.kind == OR:
            return int(any(bits))
        if g.kind == NOT:
            return 1 - bits[0]
        return int(ctx.resolve(g.oracle)(BitString.from_bits(bits)))
    return val


def test_evaluate_satisfies_locv_and_reference():
    rng = random.Random(41)
    for _ in range(300):
        w, d = rng.randint(1, 4), rng.randint(1, 4)
        c = random_proper_circuit(rng, w, d, n_inputs=rng.randint(0, w))
        alpha = random_finite_oracle(rng, w)
        I = random_bits(rng, c.n_inputs)
        wit = evaluate(c, I, alpha)
        assert locv_violations(c, I, wit, alpha) == []
        ref = reference_value(c, I, OracleContext(default=alpha))
        assert all(wit.Y[g] == ref(*g) for g in c.positions())
        # a tampered witness is caught
        g = rng.choice(list(c.positions()))
        bad_Y = dict(wit.Y)
        bad_Y[g] ^= 1
        assert locv_violations(c, I, type(wit)(wit.Q, bad_Y), alpha)


def test_oracle_extensional():
    rng = random.Random(42)
    for _ in range(100):
        w = rng.randint(1, 4)
        c = random_proper_circuit(rng, w, rng.randint(1, 3))
        a = random_finite_oracle(rng, w)
        # agrees with a below length w + 1, differs above
        b = FiniteOracle(set(a.support) | {BitString("1" * (w + 1 + k)) for k in range(3)})
        I = random_bits(rng, c.n_inputs)
        assert evaluate(c, I, a) == evaluate(c, I, b)


def test_builtin_stconn_gate():
    rng = random.Random(43)
    a = 3
    b = CircuitBuilder(a * a)
    out = b.oracle(b.inputs(), "stconn")
    c = b.build(output=out)
    for _ in range(50):
        edges = frozenset((u, v) for u in range(a) for v in range(a) if rng.random() < 0.3)
        g = Digraph(a, edges)
        assert evaluate(c, encode_matrix_query(g)).Y[c.output] == int(stconn(g, 0, a - 1))


def test_json_round_trip():
    for name in PROPER_POS + PROPER_NEG + FANIN_NEG:
        c = load(name)
        assert LayeredCircuit.from_dict(json.loads(c.to_json())) == c


# -- one-oracle-layer sentences ---------------------------------------------------

def sentence_to_circuit(s):
    """Layered translation: inputs are I followed by the J rows; one oracle
    layer at the leaves, then the and/or tree."""
    rows = [s.J.get(x, BitString()) for x in range(s.a)]
    offsets, n = [], len(s.I)
    for r in rows:
        offsets.append(n)
        n += len(r)
    b = CircuitBuilder(n)
    leaves = []
    for x in range(s.a):
        kind = s.G[x + s.a]
        if kind == CONST:
            leaves.append(b.input(x))
        else:
            q = b.oracle([b.input(offsets[x] + i) for i in range(len(rows[x]))])
            leaves.append(q if kind == ALPHA else b.not_(q))
    node = {x + s.a: leaves[x] for x in range(s.a)}
    for x in range(s.a - 1, 0, -1):
        pair = [node[2 * x], node[2 * x + 1]]
        node[x] = b.and_(pair) if s.G[x] == AND else b.or_(pair)
    inputs = s.I + BitString("".join(r.value for r in rows))
    return b.build(output=node[1]), inputs


def test_nc1_examples():
    s = Nc1Sentence(2, {1: AND, 2: CONST, 3: CONST}, BitString("11"), {})
    assert evaluate_nc1_sentence(s, EMPTY)[0] == 1
    alpha = FiniteOracle(["101"])
    s = Nc1Sentence(2, {1: OR, 2: ALPHA, 3: NEG_ALPHA}, BitString("00"),
                    {0: BitString("101"), 1: BitString("101")})
    assert evaluate_nc1_sentence(s, alpha)[0] == 1
    s = Nc1Sentence(4, {1: OR, 2: AND, 3: AND, 4: CONST, 5: CONST, 6: CONST, 7: CONST},
                    BitString("1101"), {})
    roots = {evaluate_nc1_sentence(s, a)[0] for a in (EMPTY, PredicateOracle(lambda w: True))}
    assert roots == {1}


def test_nc1_malformed():
    with pytest.raises(CircuitError):
        evaluate_nc1_sentence(Nc1Sentence(3, {1: AND, 2: OR}, BitString("000"), {}), EMPTY)
    with pytest.raises(CircuitError):
        evaluate_nc1_sentence(Nc1Sentence(2, {1: AND, 2: ALPHA, 3: CONST}, BitString("00"), {}), EMPTY)


def test_nc1_matches_layered_translation():
    rng = random.Random(44)
    for _ in range(200):
        a = rng.choice((1, 2, 4, 8))
        G = {x: rng.choice((AND, OR)) for x in range(1, a)}
        J = {}
        for x in range(a):
            kind = rng.choice((ALPHA, NEG_ALPHA, CONST))
            G[x + a] = kind
            if kind != CONST:
                J[x] = random_bits(rng, rng.randint(1, 3))
        s = Nc1Sentence(a, G, random_bits(rng, a), J)
        alpha = random_finite_oracle(rng, 3)
        c, inputs = sentence_to_circuit(s)
        assert evaluate_nc1_sentence(s, alpha)[0] == evaluate(c, inputs, alpha).Y[c.output]


def test_builder_layers_and_constants():
    b = CircuitBuilder(2)
    x, y = b.inputs()
    out = b.and_([b.or_([x, y]), b.not_(x), b.one()])
    c = b.build(output=out)
    assert validate_proper(c)
    for I in all_strings(2):
        assert evaluate(c, I).Y[c.output] == int((I[0] or I[1]) and not I[0])
