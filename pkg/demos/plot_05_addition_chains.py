"""
OPE merges and addition chains
==============================

With one letter, a merge adds two lengths already built. Covering a set of
targets with one token each is then the same as finding an addition chain.
"""

from tokhard.core import AddChainInstance, Dataset
from tokhard.harness import verify_uope_equivalence
from tokhard.oracles import solve_addchain_exact, solve_ope_exact
from tokhard.witnesses import build_addchain_witness, extract_addchain

inst = AddChainInstance(frozenset({15}), 5)
chain, R = solve_addchain_exact(inst)
print("shortest chain for 15:", chain, "steps", R)

merges = build_addchain_witness(chain, lengths=True)
print("as merges:", merges)
print("read back:", extract_addchain(merges))

##############################################################################
# Token count for a^15 as the merge budget grows.

d = Dataset.lengths([(15, 1)])
for kappa in range(6):
    print(kappa, solve_ope_exact(d, kappa)[1])

##############################################################################
# The pipeline compares both minima and sweeps the budget.

for targets in ({15}, {2, 4}, {7, 13}, {5, 11, 19}):
    rep = verify_uope_equivalence(AddChainInstance(frozenset(targets), 0))
    print(sorted(targets), rep.status, rep.source_optimum, rep.reduced_optimum)
