import random

import pytest
from hypothesis import given, settings, strategies as st

from ref import apply_merges, min_coins, min_segmentation
from tokhard.core import Alphabet, Dataset, ValidationError, Vocabulary, concat
from tokhard.encoders import (
    bottomup_apply,
    direct_count,
    direct_encode,
    encode_counts,
    greedy_change,
    ope_encode,
    ope_vocab,
    total_length,
    unary_direct_encode,
)
from tokhard.reductions import reduce_vc_to_d1tok, vc_encoding
from tokhard.core import VcInstance

B = Alphabet.binary()
U = Alphabet.unary()


def vocab(*toks, alphabet=B):
    return Vocabulary(frozenset(toks), alphabet)


def test_direct_examples():
    assert direct_encode(vocab("aa", "aaa", alphabet=U), "aaa") == ("aaa",)
    assert direct_count(vocab(), "0110100") == 7
    out = direct_encode(vocab("10", "01", "101"), "10101")
    assert len(out) == 2 and concat(out) == "10101"


def test_direct_tie_break_is_canonical():
    # (start, length) order: the shorter opening token wins among optima
    assert direct_encode(vocab("10", "01", "101"), "10101") == ("10", "101")


def test_direct_rejects_foreign_symbols():
    with pytest.raises(ValidationError):
        direct_encode(vocab("01"), "012")


def test_direct_matches_split_mask_oracle():
    rng = random.Random(7)
    for _ in range(150):
        c = "".join(rng.choice("01") for _ in range(rng.randint(1, 10)))
        toks = {"".join(rng.choice("01") for _ in range(rng.randint(2, 4))) for _ in range(rng.randint(0, 5))}
        got = direct_encode(vocab(*toks), c)
        assert concat(got) == c
        assert len(got) == min_segmentation(toks | {"0", "1"}, c)


def test_bottomup_examples():
    assert bottomup_apply([("0", "0")], "000") == ("00", "0")
    assert bottomup_apply([], "0101") == ("0", "1", "0", "1")
    # a merge whose pair never occurs is a no-op
    assert bottomup_apply([("1", "1")], "0101") == ("0", "1", "0", "1")


@settings(max_examples=200, deadline=None)
@given(
    st.text("01", min_size=1, max_size=12),
    st.lists(st.tuples(st.sampled_from(["0", "1", "00", "01", "10", "11", "010"]),
                       st.sampled_from(["0", "1", "00", "01", "10", "11"])), max_size=5),
)
def test_bottomup_matches_naive_and_dominates_direct(c, merges):
    got = bottomup_apply(merges, c)
    assert list(got) == apply_merges(merges, c)
    assert concat(got) == c
    assert direct_count(ope_vocab(merges, B), c) <= len(got) <= len(c)


def test_ope_vocab_examples():
    assert ope_vocab([("a", "a"), ("aa", "a")], U).tokens == {"a", "aa", "aaa"}
    assert ope_vocab([], B).tokens == {"0", "1"}
    assert ope_vocab([("1", "1"), ("0", "0")], B).tokens == {"0", "1", "11", "00"}


def test_ope_encode_examples():
    assert len(ope_encode([("a", "a")], "aaaa", U)) == 2
    assert len(ope_encode([("a", "a"), ("aa", "aa")], "aaaa", U)) == 1
    chain = [1, 2, 3, 6, 12, 15]
    merges = [("a", "a"), ("aa", "a"), ("aaa", "aaa"), ("a" * 6, "a" * 6), ("a" * 12, "aaa")]
    assert [len(l) + len(r) for l, r in merges] == chain[1:]
    assert len(ope_encode(merges, "a" * 15, U)) == 1


def test_ope_is_direct_on_extracted_vocab():
    rng = random.Random(3)
    for _ in range(50):
        merges = [(rng.choice(["0", "1", "01"]), rng.choice(["0", "1", "10"])) for _ in range(3)]
        c = "".join(rng.choice("01") for _ in range(9))
        assert ope_encode(merges, c) == direct_encode(ope_vocab(merges, B), c)


def test_unary_examples():
    assert unary_direct_encode({1, 3, 4}, 6).count == 2
    assert unary_direct_encode({1}, 7).count == 7
    e = vc_encoding(VcInstance(2, ((1, 2),), 1))
    L = e.vertex(1) + e.B
    assert unary_direct_encode({1, e.vertex(1), e.B, L}, L).count == 1


def test_unary_coin_vector_sums_to_target():
    enc = unary_direct_encode({1, 5, 7}, 24)
    assert sum(l * k for l, k in enc.coins) == 24
    assert sum(k for _, k in enc.coins) == enc.count == 4
    assert sum(k * c for k, c in zip(enc.coin_vector([1, 5, 7]), [1, 5, 7])) == 24


def test_unary_engines_agree_with_plain_dp():
    rng = random.Random(11)
    for _ in range(200):
        lengths = {1} | {rng.randint(2, 30) for _ in range(rng.randint(0, 4))}
        L = rng.randint(1, 120)
        want = min_coins(lengths, L)
        assert unary_direct_encode(lengths, L).count == want
        assert unary_direct_encode(lengths, L, dp_bound=0).count == want
        assert greedy_change(lengths, L) >= want


def test_unary_coin_cap():
    assert unary_direct_encode({1, 10}, 25, max_coins=7).count == 7
    assert unary_direct_encode({1, 10}, 25, max_coins=6) is None


def test_dataset_level_encoding():
    d = Dataset.explicit([("0101", 2), ("11", 3)])
    assert encode_counts(d, "direct", vocab("01")) == [2, 2]
    assert total_length(d, "direct", vocab("01", "11")) == 2 * 2 + 3 * 1
    assert total_length(d, "bottomup", [("0", "1")]) == 2 * 2 + 3 * 2
    lengths = Dataset.lengths([(6, 1), (7, 2)])
    assert total_length(lengths, "direct", {3, 4}) == 2 + 2 * 2
    assert total_length(lengths, "ope", [(1, 1), (2, 1), (3, 3)]) == 1 + 2 * 2


def test_reduced_vc_lengths_encode_to_spec_counts():
    inst = VcInstance(2, ((1, 2),), 1)
    red = reduce_vc_to_d1tok(inst)
    e = vc_encoding(inst)
    lengths = {e.vertex(1), e.vertex(2), e.B, e.cover(1)}
    assert total_length(red.dataset, "direct", lengths) == red.delta
