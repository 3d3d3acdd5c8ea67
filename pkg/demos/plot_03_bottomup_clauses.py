"""
Bottom-up merges on clause strings
==================================

The bottom-up witness builds every zero run first, then glues separators
on in an order that depends on the assignment. A satisfied clause string
ends up as 2 tokens, an unsatisfied one as 3.
"""

from tokhard.core import Max2SatInstance
from tokhard.encoders import bottomup_apply
from tokhard.reductions import d5_string
from tokhard.witnesses import build_bottomup_witness, build_zero_run_merges, replay_clause_table

inst = Max2SatInstance(2, ((1, 2), (-1, 2), (1, -2)), 3)

##############################################################################
# 2J-1 merges make every run 0^1 .. 0^(2J) a single token.

for J in (1, 2, 3, 5):
    m = build_zero_run_merges(J)
    print(J, len(m), [len(bottomup_apply(m, "0" * j)) for j in range(1, 2 * J + 1)])

##############################################################################
# One clause string traced through the witness for two assignments.

string = d5_string(1, -2)
for s in ((True, True), (False, True)):
    print(s, bottomup_apply(build_bottomup_witness(inst, s), string))

##############################################################################
# All sixteen polarity and assignment rows.

for pol, val, got, want in replay_clause_table(inst, 1, 2):
    print("polarity", pol, "values", val, "tokens", got, "expected", want)
