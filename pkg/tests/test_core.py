from fractions import Fraction

import pytest

from tokhard.core import (
    AddChainInstance,
    Alphabet,
    BudgetExceeded,
    Dataset,
    GapInstance,
    Max2SatInstance,
    SearchBudget,
    TokenisationInstance,
    ValidationError,
    VcInstance,
    Vocabulary,
    approximation_ratio,
    concat,
    objective_length,
    objective_reduce,
)


def test_alphabet_checks_glyphs():
    Alphabet.binary().check("0110")
    with pytest.raises(ValidationError):
        Alphabet.binary().check("012")
    with pytest.raises(ValidationError):
        Alphabet(("0", "0"))


def test_vocabulary_always_holds_alphabet():
    v = Vocabulary(frozenset({"01"}), Alphabet.binary())
    assert "0" in v and "1" in v
    assert v.kappa == 1
    assert v.extra() == ["01"]
    with pytest.raises(ValidationError):
        Vocabulary(frozenset({"02"}), Alphabet.binary())


def test_dataset_sizes_and_expansion():
    d = Dataset.lengths([(3, 2), (5, 1)])
    assert d.is_length
    assert d.raw_size() == 11
    assert d.total_multiplicity() == 3
    e = d.to_explicit()
    assert e.entries == (("aaa", 2), ("aaaaa", 1))
    assert e.raw_size() == 11


def test_dataset_rejects_bad_entries():
    with pytest.raises(ValidationError):
        Dataset.explicit([("01", 0)])
    with pytest.raises(ValidationError):
        Dataset.lengths([(-1, 1)])
    with pytest.raises(ValidationError):
        Dataset.lengths([("aa", 1)])


def test_objectives():
    d = Dataset.explicit([("0101", 2), ("11", 1)])
    assert objective_length([2, 1], d) == 5
    assert objective_reduce([2, 1], d) == 10 - 5
    assert concat(["01", "0", "1"]) == "0101"


def test_approximation_ratio_is_exact_and_inverted_for_reduce():
    assert approximation_ratio(12, 10, "length") == Fraction(6, 5)
    assert approximation_ratio(8, 10, "reduce") == Fraction(5, 4)
    assert approximation_ratio(12, 10, "length") >= 1
    with pytest.raises(ValidationError):
        approximation_ratio(9, 10, "entropy")


def test_max2sat_requires_three_occurrences():
    inst = Max2SatInstance(2, ((1, 2), (-1, 2), (1, -2)), 3)
    assert (inst.J, inst.C) == (2, 3)
    assert inst.satisfied((True, True)) == 3
    assert inst.satisfied((False, False)) == 2
    with pytest.raises(ValidationError):
        Max2SatInstance(2, ((1, 2), (-1, 2)), 0)


def test_vc_instance_normalises_edges():
    g = VcInstance(3, ((2, 1), (3, 2)), 1)
    assert g.edges == ((1, 2), (2, 3))
    assert g.is_cover({2}) and not g.is_cover({1})
    with pytest.raises(ValidationError):
        VcInstance(2, ((1, 1),), 0)
    with pytest.raises(ValidationError):
        VcInstance(2, ((1, 2), (2, 1)), 0)


def test_addchain_instance():
    a = AddChainInstance(frozenset({3, 5}), 3)
    assert a.targets == {3, 5}
    with pytest.raises(ValidationError):
        AddChainInstance(frozenset({0}), 1)


def test_gap_instance_keeps_fractions():
    d = Dataset.explicit([("01", 1)])
    g = GapInstance(d, 1, Fraction(7, 2), Fraction(3), "direct")
    assert g.ratio == Fraction(7, 6)
    assert not g.integral
    with pytest.raises(ValidationError):
        GapInstance(d, 1, Fraction(2), Fraction(3), "direct")


def test_tokenisation_instance_validates():
    d = Dataset.explicit([("01", 1)])
    with pytest.raises(ValidationError):
        TokenisationInstance(d, -1, 1, "direct")
    with pytest.raises(ValidationError):
        TokenisationInstance(d, 1, 1, "greedy")


def test_budget_meter_trips():
    meter = SearchBudget(max_nodes=5).meter()
    with pytest.raises(BudgetExceeded):
        for _ in range(10):
            meter.tick()


def test_ratio_worked_example():
    # 1000 symbols, optimum 100, a tokeniser reaching 200
    raw, opt, got = 1000, 100, 200
    assert approximation_ratio(got, opt, "length") == 2
    assert approximation_ratio(raw - got, raw - opt, "reduce") == Fraction(9, 8)
    assert approximation_ratio(7, 7, "length") == 1


def test_length_plus_reduce_is_raw_size():
    d = Dataset.explicit([("aaa", 5), ("aa", 2)], Alphabet.unary())
    for counts in ([3, 2], [1, 1], [2, 1]):
        assert objective_length(counts, d) + objective_reduce(counts, d) == d.raw_size() == 19
    assert objective_length([3, 2], d) == 19 and objective_reduce([3, 2], d) == 0
    assert concat(["a", "aa"]) == "aaa" and concat([]) == "" and concat(["10", "01"]) == "1001"
    with pytest.raises(ValidationError):
        objective_length([1], d)
