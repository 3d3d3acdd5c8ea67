"""
Three ways to apply a tokeniser
===============================

Direct encoding picks the fewest tokens from a vocabulary. Bottom-up
encoding replays a merge list left to right. OPE takes the vocabulary a
merge list builds and then encodes directly.
"""

from tokhard.core import Alphabet, Vocabulary
from tokhard.encoders import bottomup_apply, direct_encode, ope_encode, ope_vocab, unary_direct_encode

binary = Alphabet.binary()

##############################################################################
# Direct encoding is a shortest path over string positions.

vocab = Vocabulary(frozenset({"10", "01", "101"}), binary)
print("direct   10101 ->", direct_encode(vocab, "10101"))

##############################################################################
# Bottom-up application is greedy: one merge at a time, left to right.
# The same tokens can compress worse than the direct optimum.

merges = [("0", "1"), ("1", "0"), ("10", "1")]
print("bottomup 10101 ->", bottomup_apply(merges, "10101"))
print("ope      10101 ->", ope_encode(merges, "10101", binary))
print("extracted vocabulary:", sorted(ope_vocab(merges, binary).extra()))

##############################################################################
# Over a one-letter alphabet a string is just its length, and direct
# encoding becomes change-making with coin values equal to token lengths.

enc = unary_direct_encode({1, 3, 4}, 6)
print("a^6 with lengths {1,3,4}:", enc.count, "tokens, coins", enc.coins)

# Greedy change would take 4+1+1; the optimum is 3+3.
