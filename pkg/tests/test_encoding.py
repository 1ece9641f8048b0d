import math
import random

import pytest
from hypothesis import given, strategies as st

from oraclelab.encoding import (BitString, NumberSeq, all_strings, encode_seq, index_code, loglen,
                                pair, parse_bits, row, seq_at, unpair)


@pytest.mark.parametrize("y,z,expected", [(0, 0, 0), (1, 0, 2), (2, 3, 36)])
def test_pair_values(y, z, expected):
    assert pair(y, z) == expected


def test_pair_injective_below_64():
    seen = {}
    for y in range(64):
        for z in range(64):
            p = pair(y, z)
            assert p not in seen, (y, z, seen.get(p))
            seen[p] = (y, z)
            assert unpair(p) == (y, z)


def test_unpair_off_image():
    images = {pair(y, z) for y in range(20) for z in range(20)}
    for p in range(100):
        if p not in images:
            assert unpair(p) is None


@pytest.mark.parametrize("a,expected", [(0, 0), (1, 1), (7, 3), (2, 2), (3, 2), (8, 4)])
def test_loglen(a, expected):
    assert loglen(a) == expected


def test_loglen_matches_float_ceiling():
    for a in range(1, 5000):
        assert loglen(a) == math.ceil(math.log2(a + 1))


def test_row_examples():
    Z = BitString.from_positions([2, 4], 5)
    assert row(0, Z).positions() == [1]
    assert row(1, Z).positions() == [0]
    assert len(row(0, Z)) == 5
    assert row(3, BitString()) == BitString()


def test_seq_at_examples():
    assert seq_at(7, BitString()) == 0
    p = pair(3, 5)
    Z = BitString.from_positions([p], p + 1)
    assert seq_at(3, Z) == 5
    assert seq_at(2, Z) == len(Z)


def brute_seq_at(x, Z):
    for y in range(len(Z)):
        if Z.bit(pair(x, y)):
            return y
    return len(Z)


def test_seq_at_matches_scan():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(0, 512)
        Z = BitString.from_bits(rng.random() < 0.1 for _ in range(n))
        for x in range(6):
            assert seq_at(x, Z) == brute_seq_at(x, Z)


@given(st.lists(st.integers(0, 30), max_size=8))
def test_encode_seq_round_trip(values):
    Z = encode_seq(values)
    assert [seq_at(x, Z) for x in range(len(values))] == values
    assert NumberSeq.of(values).take(len(values)) == values


@given(st.integers(0, 6), st.binary(max_size=8))
def test_row_depends_only_on_its_row(x, raw):
    bits = "".join(format(b, "08b") for b in raw)
    Z = BitString(bits)
    scrambled = BitString.from_bits(
        Z.bit(i) if unpair(i) and unpair(i)[0] == x else 1 - Z.bit(i) for i in range(len(Z)))
    assert row(x, Z) == row(x, scrambled)


@pytest.mark.parametrize("i,n,expected", [(0, 2, "00"), (1, 2, "01"), (3, 4, "011")])
def test_index_code(i, n, expected):
    assert index_code(i, n).value == expected


def test_index_code_injective_and_fixed_width():
    for n in range(1, 40):
        codes = [index_code(i, n) for i in range(n)]
        assert len(set(codes)) == n
        assert {len(c) for c in codes} == {loglen(n)}
    with pytest.raises(ValueError):
        index_code(4, 4)


def test_bitstring_basics():
    s = BitString("0110")
    assert len(s) == 4 and s[1] == 1 and s[0] == 0
    assert s.bit(10) == 0
    assert s[1:3] == BitString("11")
    assert s + BitString("1") == BitString("01101")
    assert BitString("0") != BitString("00")
    assert BitString.from_int(5, 4).value == "0101"
    assert BitString.from_int(5, 4).to_int() == 5
    assert s.with_bit(0, 1).value == "1110"
    assert [w.value for w in all_strings(2)] == ["00", "01", "10", "11"]
    assert parse_bits("-") == BitString()
    with pytest.raises(ValueError):
        BitString("012")
