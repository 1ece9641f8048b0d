import random

import pytest

from oraclelab.encoding import BitString
from oraclelab.witness import count_trace_from_bitstring, mfv, modcount, numones


def popcount_prefixes(x, X):
    return [sum(X.bit(i) for i in range(z)) for z in range(x + 1)]


def recursive_value(node, a, G, I):
    if node >= a:
        return I[node - a]
    l = recursive_value(2 * node, a, G, I)
    r = recursive_value(2 * node + 1, a, G, I)
    return (l and r) if G[node] == "and" else (l or r)


def test_numones_examples():
    assert numones(4, BitString.from_positions([0, 2], 4)).entries == (0, 1, 1, 2, 2)
    assert numones(0, BitString("1")).entries == (0,)
    assert numones(3, BitString("111")).entries == (0, 1, 2, 3)


def test_modcount_examples():
    assert modcount(2, 3, BitString("111")).entries == (0, 1, 0, 1)
    assert set(modcount(5, 6, BitString("000000")).entries) == {0}
    with pytest.raises(ValueError):
        modcount(1, 3, BitString("111"))


def test_count_traces_against_popcount():
    rng = random.Random(31)
    for _ in range(300):
        n = rng.randint(0, 64)
        X = BitString.from_bits(rng.getrandbits(1) for _ in range(n))
        x = rng.randint(0, n + 3)
        t = numones(x, X)
        assert list(t.entries) == popcount_prefixes(x, X)
        assert all(t.entries[z + 1] - t.entries[z] in (0, 1) for z in range(x))
        m = rng.randint(2, 7)
        assert list(modcount(m, x, X).entries) == [v % m for v in t.entries]
        assert count_trace_from_bitstring(t.to_bitstring(), x) == list(t.entries)


def test_mfv_examples():
    assert mfv(2, {1: "and"}, BitString("11"))[1] == 1
    assert mfv(2, {1: "or"}, BitString("00"))[1] == 0
    with pytest.raises(ValueError):
        mfv(3, {1: "and", 2: "or"}, BitString("101"))


def random_tree(rng, a):
    return {x: rng.choice(("and", "or")) for x in range(1, a)}


def test_mfv_against_recursive_evaluator():
    rng = random.Random(32)
    for _ in range(300):
        a = rng.choice((2, 4, 8))
        G = random_tree(rng, a)
        I = BitString.from_bits(rng.getrandbits(1) for _ in range(a))
        Y = mfv(a, G, I)
        for node in range(1, 2 * a):
            assert Y[node] == int(recursive_value(node, a, G, I))


def test_mfv_monotone():
    rng = random.Random(33)
    for _ in range(300):
        a = rng.choice((2, 4, 8))
        G = random_tree(rng, a)
        I = BitString.from_bits(rng.getrandbits(1) for _ in range(a))
        zeros = [i for i in range(a) if I[i] == 0]
        if not zeros:
            continue
        J = I.with_bit(rng.choice(zeros), 1)
        assert mfv(a, G, I)[1] <= mfv(a, G, J)[1]
