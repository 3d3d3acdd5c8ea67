"""
Gap ratios and the greedy baseline
==================================

The gap thresholds come from MAX2SAT instances with 2016 n clauses whose
optimum is known to sit either above (2012-eps)n or below (2011+eps)n.
Their ratio bounds how well any polynomial tokeniser can approximate.
Greedy BPE is measured against exact optima on small instances.
"""

import random
from fractions import Fraction

from tokhard.core import Dataset, Max2SatInstance, SearchBudget
from tokhard.harness import bench_ratio, random_max2sat
from tokhard.reductions import gap_ratio_b2tok, gap_ratio_d2tok, make_gap_b2tok, make_gap_d2tok, reduce_max2sat_to_d2tok

print("direct    ", gap_ratio_d2tok(), float(gap_ratio_d2tok()))
print("bottom-up ", gap_ratio_b2tok(), float(gap_ratio_b2tok()))
print("direct at eps=1/100", gap_ratio_d2tok(Fraction(1, 100)))

##############################################################################
# A conforming instance: J = 1344 variables, C = 2016 clauses.

inst = random_max2sat(1344, random.Random(0))
g = make_gap_d2tok(inst)
print("delta-", g.delta_minus, "delta+", g.delta_plus, "ratio", g.ratio)
gb = make_gap_b2tok(inst)
print("bottom-up ratio at this size", gb.ratio, "<", gb.ratio_bound)

##############################################################################
# Greedy BPE against the exact optimum.

d = Dataset.explicit([("0101101001", 3), ("1101", 2), ("000111", 1)])
for mode in ("direct", "bottomup", "ope"):
    r = bench_ratio(d, 2, mode)
    print(mode, "achieved", r.achieved, "optimal", r.optimal, "ratio", r.ratio_length)

##############################################################################
# On the reduced sample the direct optimum is out of reach, so the known
# witness value serves as the reference and the ratio is a lower bound.

sample = Max2SatInstance(2, ((1, 2), (-1, 2), (1, -2)), 3)
red = reduce_max2sat_to_d2tok(sample)
r = bench_ratio(red.dataset, red.kappa, "direct", SearchBudget(max_nodes=20000), reference=664)
print(r.to_text())
