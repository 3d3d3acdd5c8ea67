"""
From MAX2SAT to direct tokenisation
===================================

A small 3-occurrence MAX2SAT instance becomes a binary dataset. Each
assignment gives a vocabulary whose compressed length drops by one for
every satisfied clause.
"""

import itertools

from tokhard.core import Max2SatInstance
from tokhard.encoders import total_length
from tokhard.harness import verify_d2tok_equivalence
from tokhard.reductions import d2tok_delta, d2tok_parts, reduce_max2sat_to_d2tok
from tokhard.witnesses import build_direct_witness, extract_assignment

inst = Max2SatInstance(2, ((1, 2), (-1, 2), (1, -2)), 3)
red = reduce_max2sat_to_d2tok(inst)
print(f"kappa={red.kappa} delta={red.delta} strings={len(red.dataset)} raw={red.dataset.raw_size()}")

##############################################################################
# The clause strings separate the two literals with '1'.

for string, mult in d2tok_parts(inst)["D4"]:
    print("clause string", string)

##############################################################################
# Every assignment, its witness vocabulary and the resulting length.

for s in itertools.product((True, False), repeat=2):
    vocab = build_direct_witness(inst, s)
    value = total_length(red.dataset, "direct", vocab)
    assert extract_assignment(vocab, 2) == s
    print(s, "satisfies", inst.satisfied(s), "-> length", value, "=", d2tok_delta(2, 3, inst.satisfied(s)))

##############################################################################
# The full check also probes single-token swaps around the best vocabulary.

print(verify_d2tok_equivalence(inst).to_text())
