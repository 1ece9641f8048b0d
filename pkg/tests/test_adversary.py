import random

import pytest

from checks import brute_iterate, fooling_runs, sharpness
from conftest import FIXTURES
from oraclelab import adversary
from oraclelab.adversary import (CapacityError, diagonalize, fool, growth, itlang_member, iterate,
                                 iteration_circuit)
from oraclelab.circuit import CircuitBuilder, CircuitError, evaluate, load_circuit
from oraclelab.encoding import BitString, all_strings
from oraclelab.generate import random_fooling_circuit
from oraclelab.oracle import (EMPTY, FiniteOracle, PartialFn, TotalFn, afun, query_width, section)


def constant_one():
    b = CircuitBuilder(0)
    return b.build(output=b.one())


def test_fool_constant_circuit():
    c = constant_one()
    res = fool(c, 3)
    assert res.depth == 0 and res.ell == 1
    assert res.f.table[BitString("000")][2] == 0
    assert evaluate(c, BitString(), res.alpha).Y[c.output] == 1
    assert res.fooled


def test_fool_depth1_iteration_fixture():
    c = load_circuit(FIXTURES / "circuits" / "iteration_d1.json")
    res = fool(c, 3)
    assert res.ell == 2
    out = evaluate(c, BitString(), res.alpha).Y[c.output]
    assert out == res.circuit_output
    assert out != int(brute_iterate(res.f, 2)[-1])
    assert [s.value for s in res.chain] == ["000", brute_iterate(res.f, 1), brute_iterate(res.f, 2)]


def test_fool_replays_and_stages():
    rng = random.Random(60)
    for _ in range(120):
        n = rng.choice((3, 4, 5))
        c = random_fooling_circuit(rng, n, rng.choice((0, 1, 2)))
        res = fool(c, n)
        assert adversary.check_fooling(c, res) == []
        assert all(res.chain[i + 1] == res.f.table[res.chain[i]] for i in range(len(res.chain) - 1))


def test_fool_with_input_vector():
    c = load_circuit(FIXTURES / "circuits" / "not_oracle.json")
    res = fool(c, 3, BitString("10"))
    assert adversary.check_fooling(c, res, BitString("10")) == []
    with pytest.raises(CircuitError):
        fool(c, 3)


def test_fool_preconditions():
    with pytest.raises(CapacityError):
        fool(iteration_circuit(2, 1), 2)
    b = CircuitBuilder(0)
    z = b.zero()
    two = b.and_([b.oracle([z], "a"), b.oracle([z], "b")])
    with pytest.raises(CircuitError):
        fool(b.build(output=two), 3)
    with pytest.raises(ValueError):
        fool(iteration_circuit(3, 2), 3, ell=2)


def test_fool_background_answers_other_lengths():
    b = CircuitBuilder(0)
    z = b.zero()
    c = b.build(output=b.oracle([b.one(), z]))
    bg = FiniteOracle(["10"])
    res = fool(c, 3, background=bg)
    assert res.circuit_output == 1
    assert adversary.check_fooling(c, res, background=bg) == []


def test_iterate_examples():
    f = TotalFn.from_values(2, ["01", "10", "00", "00"])
    assert iterate(f, 0) == BitString("00")
    assert iterate(f, 2) == BitString("10")
    ident = TotalFn(3, {x: x for x in all_strings(3)})
    assert iterate(ident, 5) == BitString("000")


def test_itlang_examples():
    f = TotalFn.from_values(2, ["01", "10", "00", "00"])
    assert not itlang_member(2, afun(f), lambda n: 2)
    assert itlang_member(2, afun(f), lambda n: 1)
    assert not itlang_member(3, EMPTY, growth("const:4"))
    g0 = growth("const:0")
    rng = random.Random(61)
    for _ in range(20):
        h = TotalFn(3, {x: BitString.from_bits(rng.getrandbits(1) for _ in range(3)) for x in all_strings(3)})
        assert not itlang_member(3, afun(h), g0)


def test_growth_presets():
    assert growth("const:3")(100) == 3
    assert growth("logk:2")(7) == 9
    assert growth("poly:2")(5) == 25
    with pytest.raises(ValueError):
        growth("nope:1")


@pytest.mark.parametrize("d", [1, 2])
def test_iteration_circuit_sharpness(d):
    ok, total = sharpness(d, trials=50)
    assert ok == total


def test_bundled_iteration_fixtures_match_generator():
    for d in (1, 2):
        assert load_circuit(FIXTURES / "circuits" / f"iteration_d{d}.json") == iteration_circuit(3, d)


def test_fooling_batch():
    fooled, stage_bad, total, _ = fooling_runs(count=90, seed=5)
    assert fooled == total and stage_bad == 0


# -- diagonalization ----------------------------------------------------------

def iteration_family(ell):
    return lambda n: iteration_circuit(n, ell, n_inputs=n)


def test_diagonalize_empty():
    res = diagonalize([], [], [], [])
    assert res.stages == []
    assert not any(res.oracle(w) for m in range(5) for w in all_strings(m))


def test_diagonalize_single_stage():
    d = [growth("const:1"), growth("const:2")]
    s = [growth("poly:3")]
    res = diagonalize([iteration_family(1)], d, s, [(0, 1, 0)], start=4)
    (st,) = res.stages
    assert not st.skipped
    out = evaluate(st.circuit, BitString.zeros(st.n), res.oracle).Y[st.circuit.output]
    assert out != int(itlang_member(st.n, res.oracle, d[1]))


def test_diagonalize_two_stages_do_not_interfere():
    d = [growth("const:1"), growth("const:2"), growth("const:3")]
    s = [growth("poly:3"), growth("poly:3")]
    res = diagonalize([iteration_family(1), iteration_family(2)], d, s, [(0, 1, 0), (1, 1, 1)], start=4)
    assert len(res.stages) == 2 and res.stages[0].n < res.stages[1].n
    for st in res.stages:
        k = st.triple[0]
        assert not st.skipped
        out = evaluate(st.circuit, BitString.zeros(st.n), res.oracle).Y[st.circuit.output]
        f = adversary.reconstruct(section(st.n, res.oracle), st.n)
        assert out != int(brute_iterate(f, d[k + 1](st.n))[-1])
        L = query_width(st.n)
        assert all(res.oracle(w) == st.alpha(w) for w in all_strings(L))


def test_diagonalize_skips_over_budget_circuits():
    d = [growth("const:1"), growth("const:2")]
    s = [growth("const:1")]  # no circuit fits in size 1
    res = diagonalize([iteration_family(1)], d, s, [(0, 1, 0)])
    assert res.stages[0].skipped and res.stages[0].alpha is EMPTY


def test_diagonalize_search_bound():
    d = [growth("const:5"), growth("const:2")]
    with pytest.raises(ValueError):
        diagonalize([iteration_family(1)], d, [growth("poly:3")], [(0, 1, 0)], search_bound=8)
