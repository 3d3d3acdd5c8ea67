import random

import pytest

from ref import (
    brute_bottomup,
    brute_direct,
    brute_ope_unary,
    brute_unary,
    min_cover_by_branching,
    shortest_chain,
)
from tokhard.core import (
    AddChainInstance,
    Alphabet,
    BudgetExceeded,
    Dataset,
    Max2SatInstance,
    SearchBudget,
    VcInstance,
)
from tokhard.encoders import total_length
from tokhard.oracles import (
    solve_addchain_exact,
    solve_bottomup_exact,
    solve_direct_exact,
    solve_max2sat_exact,
    solve_ope_exact,
    solve_unary_direct_exact,
    solve_vc_exact,
    substring_candidates,
)

U = Alphabet.unary()


def unary(*pairs):
    return Dataset.explicit([("a" * L, m) for L, m in pairs], U)


def random_binary_dataset(rng, n_entries=3, max_len=6):
    return [("".join(rng.choice("01") for _ in range(rng.randint(2, max_len))), rng.randint(1, 3))
            for _ in range(n_entries)]


# ---------------------------------------------------------------- direct


def test_direct_examples():
    assert solve_direct_exact(unary((3, 1)), 1)[1] == 1
    # both candidates enumerated by hand: "aa" gives 3*1 + 2*2, "aaa" gives 3*2 + 2*1
    assert solve_direct_exact(unary((2, 3), (3, 2)), 1)[1] == 7
    d = Dataset.explicit([("0110", 2), ("101", 1)])
    assert solve_direct_exact(d, 0)[1] == d.raw_size()


def test_direct_matches_subset_oracle():
    rng = random.Random(5)
    for _ in range(25):
        entries = random_binary_dataset(rng)
        d = Dataset.explicit(entries)
        for kappa in (1, 2):
            vocab, value = solve_direct_exact(d, kappa)
            assert value == brute_direct(entries, kappa)
            assert total_length(d, "direct", vocab) == value


def test_direct_ignores_foreign_candidates():
    d = Dataset.explicit([("0110", 2), ("0101", 1)])
    base = solve_direct_exact(d, 2)[1]
    extra = substring_candidates(d) + ["111", "0000", "1001"]
    assert solve_direct_exact(d, 2, candidates=extra)[1] == base


def test_direct_budget_is_loud():
    d = Dataset.explicit([("0110100111010", 1)])
    with pytest.raises(BudgetExceeded):
        solve_direct_exact(d, 3, budget=SearchBudget(max_nodes=10))
    with pytest.raises(BudgetExceeded):
        solve_direct_exact(d, 3, budget=SearchBudget(max_candidates=5))


# ---------------------------------------------------------------- bottom-up


def test_bottomup_examples():
    assert solve_bottomup_exact(Dataset.explicit([("0000", 1)]), 2)[1] == 1
    assert solve_bottomup_exact(Dataset.explicit([("000", 1)]), 1)[1] == 2
    d = Dataset.explicit([("10101", 4)])
    value = solve_bottomup_exact(d, 2)[1]
    assert value == brute_bottomup([("10101", 4)], 2)
    assert value == 8


def test_bottomup_matches_full_enumeration():
    rng = random.Random(9)
    for _ in range(20):
        entries = random_binary_dataset(rng, 2, 6)
        d = Dataset.explicit(entries)
        for kappa in (1, 2):
            merges, value = solve_bottomup_exact(d, kappa)
            assert len(merges) == kappa
            assert value == brute_bottomup(entries, kappa)
            assert total_length(d, "bottomup", merges) == value


# ---------------------------------------------------------------- OPE


def test_ope_examples():
    d4 = Dataset.lengths([(4, 1)])
    assert solve_ope_exact(d4, 2)[1] == 1
    d15 = Dataset.lengths([(15, 1)])
    assert solve_ope_exact(d15, 4)[1] == 2
    assert solve_ope_exact(d15, 5)[1] == 1
    assert solve_ope_exact(d15, 0)[1] == 15
    assert solve_addchain_exact(AddChainInstance(frozenset({15})))[1] == 5


def test_ope_matches_reachable_set_search():
    rng = random.Random(2)
    for _ in range(30):
        targets = [(rng.randint(2, 14), rng.randint(1, 3)) for _ in range(rng.randint(1, 3))]
        d = Dataset.lengths(targets)
        for kappa in range(4):
            merges, value = solve_ope_exact(d, kappa)
            assert value == brute_ope_unary(targets, kappa)
            assert total_length(d, "ope", merges) == value


def test_ope_threshold_mode():
    d = Dataset.lengths([(15, 1)])
    assert solve_ope_exact(d, 4, threshold=1) == (None, None)
    merges, value = solve_ope_exact(d, 5, threshold=1)
    assert value <= 1


def test_ope_binary_not_worse_than_direct_bound():
    d = Dataset.explicit([("010101", 2), ("0110", 1)])
    for kappa in range(3):
        assert solve_direct_exact(d, kappa)[1] <= solve_ope_exact(d, kappa)[1]
        assert solve_direct_exact(d, kappa)[1] <= solve_bottomup_exact(d, kappa)[1]


# ---------------------------------------------------------------- unary direct


def test_unary_examples():
    assert solve_unary_direct_exact(Dataset.lengths([(2, 1), (3, 1)]), 2)[1] == 2
    assert solve_unary_direct_exact(Dataset.lengths([(2, 1), (3, 1), (5, 1)]), 2)[1] == 4
    assert solve_unary_direct_exact(Dataset.lengths([(2, 1), (3, 1), (5, 1)]), 0)[1] == 10


def test_unary_matches_subset_oracle():
    rng = random.Random(4)
    for _ in range(60):
        targets = [(rng.randint(1, 40), rng.randint(1, 3)) for _ in range(rng.randint(1, 5))]
        d = Dataset.lengths(targets)
        pool = sorted({L for L, _ in targets if L > 1})
        for kappa in range(4):
            lengths, value = solve_unary_direct_exact(d, kappa)
            assert value == brute_unary(targets, kappa, pool)
            assert len(lengths) <= kappa


def test_unary_with_free_candidates():
    targets = [(12, 1), (18, 1), (30, 1)]
    d = Dataset.lengths(targets)
    for kappa in (1, 2):
        cand = range(2, 31)
        assert solve_unary_direct_exact(d, kappa, candidates=cand)[1] == brute_unary(targets, kappa)


def test_unary_threshold_mode():
    d = Dataset.lengths([(2, 1), (3, 1), (5, 1)])
    assert solve_unary_direct_exact(d, 2, threshold=3) == (None, None)
    lengths, value = solve_unary_direct_exact(d, 2, threshold=4)
    assert value <= 4


def test_monotone_in_kappa():
    d = Dataset.lengths([(7, 2), (11, 1), (13, 1)])
    vals = [solve_unary_direct_exact(d, k)[1] for k in range(4)]
    assert vals == sorted(vals, reverse=True)
    vals = [solve_ope_exact(d, k)[1] for k in range(5)]
    assert vals == sorted(vals, reverse=True)


# ---------------------------------------------------------------- sources


def test_max2sat_examples():
    inst = Max2SatInstance(2, ((1, 2), (-1, 2), (1, -2)), 0)
    s, f = solve_max2sat_exact(inst)
    assert f == 3 and inst.satisfied(s) == 3
    assert solve_max2sat_exact(Max2SatInstance(0, (), 0))[1] == 0


def test_vc_examples_and_branching_oracle():
    assert solve_vc_exact(VcInstance(3, ((1, 2), (1, 3), (2, 3)), 0))[1] == 2
    assert solve_vc_exact(VcInstance(3, (), 0))[1] == 0
    assert solve_vc_exact(VcInstance(2, ((1, 2),), 0))[1] == 1
    rng = random.Random(1)
    for _ in range(40):
        n = rng.randint(1, 7)
        pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
        edges = rng.sample(pairs, rng.randint(0, len(pairs)))
        cover, size = solve_vc_exact(VcInstance(n, tuple(edges), 0))
        assert size == min_cover_by_branching(n, edges)
        assert VcInstance(n, tuple(edges), 0).is_cover(cover)


def test_addchain_examples_and_bfs_oracle():
    assert solve_addchain_exact(AddChainInstance(frozenset({1})))[1] == 0
    assert solve_addchain_exact(AddChainInstance(frozenset({2})))[1] == 1
    chain, R = solve_addchain_exact(AddChainInstance(frozenset({15})))
    assert R == 5 and chain[0] == 1 and chain[-1] == 15
    for i, b in enumerate(chain[1:], 1):
        assert any(b == x + y for x in chain[:i] for y in chain[:i])
    for targets in ({7}, {11, 13}, {5, 9, 17}, {23}, {19, 24}):
        assert solve_addchain_exact(AddChainInstance(frozenset(targets)))[1] == shortest_chain(targets)
