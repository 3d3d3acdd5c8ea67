"""
Vertex cover as unary tokenisation
==================================

Vertices, covers and edges become string lengths built from base-N
digits. Picking a cover token for a vertex lets every incident edge string
be written with two tokens instead of three.
"""

from tokhard.core import VcInstance
from tokhard.harness import verify_d1tok_equivalence
from tokhard.oracles import solve_unary_direct_exact, solve_vc_exact
from tokhard.reductions import base_digits, reduce_vc_to_d1tok, vc_encoding, vc_lengths
from tokhard.witnesses import build_vc_witness, certificate_for, extract_cover, verify_unary_certificate

triangle = VcInstance(3, ((1, 2), (1, 3), (2, 3)), 2)
enc = vc_encoding(triangle)
print("N =", enc.N, " B = N^4 =", enc.B)

##############################################################################
# Digits of every length, most significant first.

for kind, lengths in vc_lengths(triangle).items():
    for L in lengths:
        print(f"{kind:6s} {L:>30d} {base_digits(L, enc.N)}")

##############################################################################
# The exact search over target lengths against the graph oracle.

cover, size = solve_vc_exact(triangle)
red = reduce_vc_to_d1tok(triangle)
lengths, value = solve_unary_direct_exact(red.dataset, red.kappa)
print("min cover", size, "| best total", value, "delta", red.delta)
print("cover read back from the tokeniser:", sorted(extract_cover(lengths, triangle)))

##############################################################################
# A certificate is a coin vector per string; checking it is arithmetic.

cert = certificate_for(red.dataset, build_vc_witness(triangle, cover))
print("certificate ok:", bool(verify_unary_certificate(red.dataset, cert, red.kappa, red.delta)))

print(verify_d1tok_equivalence(triangle).to_text())
