import random
from fractions import Fraction

import pytest

from tokhard.core import AddChainInstance, Max2SatInstance, ValidationError, VcInstance
from tokhard.encoders import total_length
from tokhard.harness import random_max2sat
from tokhard.oracles import solve_ope_exact
from tokhard.reductions import (
    B2TOK,
    D2TOK,
    BottomupConstants,
    DirectConstants,
    b2tok_delta,
    b2tok_parts,
    base_digits,
    check_vc_structure,
    d2tok_delta,
    d2tok_parts,
    gap_ratio_b2tok,
    gap_ratio_d2tok,
    make_gap_b2tok,
    make_gap_d2tok,
    reduce_addchain_to_uope,
    reduce_max2sat_to_b2tok,
    reduce_max2sat_to_d2tok,
    reduce_vc_to_d1tok,
    vc_encoding,
    vc_lengths,
)

SAMPLE = Max2SatInstance(2, ((1, 2), (-1, 2), (1, -2)), 3)


def test_constants_recurrences():
    D2TOK.check()
    B2TOK.check()
    with pytest.raises(AssertionError):
        DirectConstants(7, 22, 63).check()
    with pytest.raises(AssertionError):
        BottomupConstants(4, 23, 115, 576).check()


def test_d2tok_sample():
    red = reduce_max2sat_to_d2tok(SAMPLE)
    assert (red.kappa, red.delta, red.mode) == (10, 664, "direct")
    parts = d2tok_parts(SAMPLE)
    assert [len(parts[k]) for k in ("D1", "D2", "D3", "D4")] == [8, 4, 2, 3]
    assert {m for _, m in parts["D1"]} == {63}
    assert {m for _, m in parts["D2"]} == {21}
    assert {m for _, m in parts["D3"]} == {7}
    clause = reduce_max2sat_to_d2tok(Max2SatInstance(2, ((1, -2), (1, -2), (1, -2)), 0))
    assert clause.dataset.entries[-1] == ("10100001", 1)
    assert len("1" + "0" + "1" + "0000" + "1") == 8


def test_d2tok_raw_size_closed_form():
    rng = random.Random(0)
    for J in (2, 4, 6, 8):
        inst = random_max2sat(J, rng)
        summed = sum(len(p) * m for p, m in reduce_max2sat_to_d2tok(inst).dataset.entries)
        d1 = 63 * sum(2 * (2 * j) + 2 * (2 * j + 1) for j in range(1, J + 1))
        d2 = 21 * sum((2 * j + 1) + (2 * j + 2) for j in range(1, J + 1))
        d3 = 7 * sum(4 * j + 2 for j in range(1, J + 1))
        d4 = sum(3 + (2 * abs(a) - (a > 0)) + (2 * abs(b) - (b > 0)) for a, b in inst.clauses)
        assert summed == d1 + d2 + d3 + d4


def test_b2tok_sample():
    red = reduce_max2sat_to_b2tok(SAMPLE)
    assert (red.kappa, red.delta, red.mode) == (20, 11377, "bottomup")
    parts = b2tok_parts(SAMPLE)
    assert len(parts["D1"]) == 8 * 2 + 1 and {m for _, m in parts["D1"]} == {575}
    assert ("11", 575) in parts["D1"]
    neg = b2tok_parts(Max2SatInstance(2, ((-1, -2), (-1, -2), (-1, -2)), 0))["D5"]
    assert neg[0] == ("11" + "00" + "1" + "0000" + "1", 1)


def test_b2tok_fixed_part_sums():
    k = B2TOK
    J = 3
    assert (8 * J + 1) * k.c + 6 * J * k.c1 + 4 * J * k.c2 + 4 * J * k.c3 == 5398 * J + 575


def test_delta_formulas_accept_fractions():
    assert d2tok_delta(2, 3, 3) == 664
    assert b2tok_delta(2, 3, 3) == 11377
    assert d2tok_delta(1344, 2016, Fraction(8045, 4)) == 329 * 1344 + 6048 - Fraction(8045, 4)


def test_vc_sample_numbers():
    inst = VcInstance(2, ((1, 2),), 1)
    red = reduce_vc_to_d1tok(inst)
    e = vc_encoding(inst)
    assert e.N == 256 and e.B == 256**4
    assert e.vertex(1) == 65793
    assert (red.kappa, red.delta) == (4, 8)
    assert e.edge(1, 2) == e.vertex(1) + e.vertex(2) + e.B
    assert red.dataset.is_length and len(red.dataset) == 2 + 1 + 2 + 1


def test_vc_structure_on_random_graphs():
    rng = random.Random(3)
    for _ in range(30):
        n = rng.randint(1, 9)
        pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
        inst = VcInstance(n, tuple(rng.sample(pairs, rng.randint(0, len(pairs)))), 0)
        check_vc_structure(inst)
        lengths = sum(vc_lengths(inst).values(), [])
        assert len(set(lengths)) == len(lengths)


def test_base_digits():
    assert base_digits(1 * 10**4 + 3 * 10 + 2, 10) == (1, 0, 0, 3, 2)
    with pytest.raises(ValidationError):
        base_digits(10**5, 10)


def test_vc_explicit_cap_round_trip():
    inst = VcInstance(1, (), 0)
    small = reduce_vc_to_d1tok(inst, explicit_cap=10**9)
    assert not small.dataset.is_length
    big = reduce_vc_to_d1tok(inst, explicit_cap=10)
    assert big.dataset.is_length
    lengths = {vc_encoding(inst).vertex(1), vc_encoding(inst).B}
    assert total_length(big.dataset, "direct", lengths) == big.delta == 4
    assert [(len(p), m) for p, m in small.dataset.entries] == list(big.dataset.entries)


def test_addchain_reduction():
    red = reduce_addchain_to_uope(AddChainInstance(frozenset({3, 5}), 3))
    assert (red.kappa, red.delta, red.mode) == (3, 2, "ope")
    one = reduce_addchain_to_uope(AddChainInstance(frozenset({1}), 0))
    assert solve_ope_exact(one.dataset, one.kappa)[1] <= one.delta
    two = reduce_addchain_to_uope(AddChainInstance(frozenset({2}), 0))
    assert solve_ope_exact(two.dataset, two.kappa)[1] > two.delta


def test_gap_limit_ratios():
    assert gap_ratio_d2tok() == Fraction(446213, 446212) > Fraction(1000002, 1000000)
    assert gap_ratio_b2tok() == Fraction(7258949, 7258948) > Fraction(10000001, 10000000)
    assert gap_ratio_d2tok(Fraction(1, 4)) == (446213 - Fraction(1, 4)) / (446212 + Fraction(1, 4))


def test_gap_limit_from_substitution():
    # C = 3J/2, doubled: 2 delta = 10805 J + 1150 - 2F for the bottom-up side
    for J in (2, 4, 1344):
        C = 3 * J // 2
        assert 2 * b2tok_delta(J, C, 0) == 10805 * J + 1150
        assert 2 * d2tok_delta(J, C, 0) == 667 * J
    num, den = 10805 * 2016 - 6033, 10805 * 2016 - 6036
    assert Fraction(num, den) == gap_ratio_b2tok()
    assert Fraction(667 * 2016 - 6033, 667 * 2016 - 6036) == gap_ratio_d2tok()


def test_gap_instances():
    inst = random_max2sat(1344, random.Random(1))
    g = make_gap_d2tok(inst)
    assert g.ratio == Fraction(446213, 446212) == g.ratio_bound
    assert g.delta_minus - g.delta_plus == 1
    gb = make_gap_b2tok(inst)
    assert gb.ratio_bound == Fraction(7258949, 7258948)
    assert 1 < gb.ratio < gb.ratio_bound
    q = make_gap_d2tok(inst, Fraction(1, 4), n_bk=1)
    assert q.delta_plus == d2tok_delta(1344, 2016, Fraction(8047, 4))
    assert q.delta_minus - q.delta_plus == Fraction(1, 2)
    assert not q.integral
    with pytest.raises(ValidationError):
        q.decision("plus")


def test_gap_rejects_nonconforming():
    with pytest.raises(ValidationError):
        make_gap_d2tok(SAMPLE)
    inst = random_max2sat(1344, random.Random(1))
    with pytest.raises(ValidationError):
        make_gap_d2tok(inst, n_bk=2)
    with pytest.raises(ValidationError):
        make_gap_b2tok(inst, epsilon=Fraction(1, 2))
