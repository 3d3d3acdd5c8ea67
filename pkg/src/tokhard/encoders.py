"""Direct, bottom-up and OPE encoders, plus unary change-making."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import (
    Alphabet,
    BudgetMeter,
    Dataset,
    Merge,
    SearchBudget,
    ValidationError,
    Vocabulary,
    _meter,
)

DP_BOUND = 10**6


class _Trie:
    __slots__ = ("root",)

    def __init__(self, tokens: Iterable[str]) -> None:
        self.root: dict = {}
        for t in tokens:
            node = self.root
            for ch in t:
                node = node.setdefault(ch, {})
            node[None] = True

    def match_lengths(self, c: str, i: int) -> list[int]:
        """Lengths of every token that matches c at position i."""
        out = []
        node = self.root
        for j in range(i, len(c)):
            node = node.get(c[j])
            if node is None:
                break
            if None in node:
                out.append(j - i + 1)
        return out


_TRIES: dict[frozenset, _Trie] = {}


def _trie_for(vocab: Vocabulary) -> _Trie:
    trie = _TRIES.get(vocab.tokens)
    if trie is None:
        if len(_TRIES) > 4096:
            _TRIES.clear()
        trie = _TRIES[vocab.tokens] = _Trie(vocab.tokens)
    return trie


def direct_encode(vocab: Vocabulary, c: str) -> tuple[str, ...]:
    """Minimum-token segmentation of c over vocab.

    Among optimal segmentations the one with the lexicographically smallest
    sequence of (start, length) pairs is returned.
    """
    missing = set(c) - vocab.tokens
    if missing:
        raise ValidationError(f"alphabet symbols {sorted(missing)} missing from vocabulary")
    trie = _trie_for(vocab)
    n = len(c)
    matches = [trie.match_lengths(c, i) for i in range(n)]
    best = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        best[i] = 1 + min(best[i + l] for l in matches[i])
    out = []
    i = 0
    while i < n:
        for l in matches[i]:
            if best[i + l] == best[i] - 1:
                out.append(c[i:i + l])
                i += l
                break
    return tuple(out)


def direct_count(vocab: Vocabulary, c: str) -> int:
    return len(direct_encode(vocab, c))


def bottomup_apply(merges: Sequence[Merge], c: str) -> tuple[str, ...]:
    """Apply each merge exhaustively in order, greedy left to right."""
    toks = list(c)
    for left, right in merges:
        if len(toks) < 2:
            break
        out = []
        i = 0
        n = len(toks)
        while i < n:
            if i + 1 < n and toks[i] == left and toks[i + 1] == right:
                out.append(left + right)
                i += 2
            else:
                out.append(toks[i])
                i += 1
        toks = out
    return tuple(toks)


def ope_vocab(merges: Sequence[Merge], alphabet: Alphabet) -> Vocabulary:
    """Alphabet plus the product of every merge. Reachability is not checked."""
    return Vocabulary(frozenset(l + r for l, r in merges), alphabet)


def ope_encode(merges: Sequence[Merge], c: str, alphabet: Alphabet | None = None) -> tuple[str, ...]:
    if alphabet is None:
        alphabet = Alphabet.of(c + "".join(l + r for l, r in merges) or "a")
    return direct_encode(ope_vocab(merges, alphabet), c)


@dataclass(frozen=True)
class UnaryEncoding:
    count: int
    coins: tuple[tuple[int, int], ...]  # (length, how many), by decreasing length

    def coin_vector(self, lengths: Sequence[int]) -> tuple[int, ...]:
        d = dict(self.coins)
        return tuple(d.get(l, 0) for l in lengths)


def _pack(used: dict[int, int]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(((k, v) for k, v in used.items() if v), reverse=True))


def _dp_change(coins: list[int], L: int) -> UnaryEncoding:
    inf = L + 1
    best = list(range(L + 1))
    last = [1] * (L + 1)
    for coin in coins:
        if coin == 1:
            continue
        for x in range(coin, L + 1):
            v = best[x - coin] + 1
            if v < best[x]:
                best[x] = v
                last[x] = coin
    used: dict[int, int] = {}
    x = L
    while x > 0:
        used[last[x]] = used.get(last[x], 0) + 1
        x -= last[x]
    assert best[L] < inf
    return UnaryEncoding(best[L], _pack(used))


def _search_change(big: list[int], L: int, cap: int, meter: BudgetMeter) -> UnaryEncoding | None:
    """Fewest coins summing to L with at most cap coins, or None.

    big holds the coins other than 1, sorted descending; any remainder is
    paid in unit coins. Iterative deepening on the number of big coins.
    """
    if L <= cap:
        best: tuple[int, list[int]] | None = (L, [])
    else:
        best = None
    for depth in range(1, cap + 1):
        if best is not None and depth >= best[0]:
            break
        limit = (best[0] if best is not None else cap + 1) - 1
        found = _exact_big(big, L, depth, 0, limit, [], meter)
        if found is not None and (best is None or found[0] < best[0]):
            best = found
    if best is None:
        return None
    used: dict[int, int] = {}
    for coin in best[1]:
        used[coin] = used.get(coin, 0) + 1
    ones = L - sum(best[1])
    if ones:
        used[1] = ones
    return UnaryEncoding(best[0], _pack(used))


def _exact_big(big, rem, depth, start, limit, chosen, meter):
    # exactly `depth` big coins, rest in units, total coins <= limit
    meter.tick()
    if depth == 0:
        total = len(chosen) + rem
        return (total, list(chosen)) if total <= limit else None
    best = None
    for i in range(start, len(big)):
        coin = big[i]
        if coin > rem:
            continue
        # remaining depth coins are all <= coin; units then fill the rest
        if rem - coin * depth > limit - len(chosen) - depth:
            break
        chosen.append(coin)
        got = _exact_big(big, rem - coin, depth - 1, i, limit, chosen, meter)
        chosen.pop()
        if got is not None and (best is None or got[0] < best[0]):
            best = got
            limit = got[0] - 1
            if got[0] == len(chosen) + depth:
                break
    return best


def greedy_change(lengths: Iterable[int], L: int) -> int:
    """Coin count of largest-first change making. An upper bound only."""
    count = 0
    for coin in sorted(set(lengths), reverse=True):
        q, L = divmod(L, coin)
        count += q
    if L:
        raise ValidationError("greedy change left a remainder; is 1 a coin?")
    return count


def unary_direct_encode(
    vocab_lengths: Iterable[int],
    L: int,
    *,
    max_coins: int | None = None,
    dp_bound: int = DP_BOUND,
    budget: SearchBudget | BudgetMeter | None = None,
) -> UnaryEncoding | None:
    """Fewest coins from vocab_lengths that sum exactly to L.

    With max_coins set, returns None when every solution needs more coins.
    Small L uses a DP table; large L uses iterative deepening whose depth
    is capped by max_coins or by the greedy count.
    """
    coins = sorted({int(x) for x in vocab_lengths}, reverse=True)
    if 1 not in coins:
        raise ValidationError("length 1 must be in the vocabulary")
    if L < 0:
        raise ValidationError("negative length")
    if L == 0:
        return UnaryEncoding(0, ())
    if L in coins:
        return UnaryEncoding(1, ((L, 1),)) if max_coins is None or max_coins >= 1 else None
    big = [c for c in coins if 1 < c <= L]
    if max_coins is None and L <= dp_bound:
        return _dp_change(big, L)
    cap = greedy_change(big + [1], L) if max_coins is None else max_coins
    return _search_change(big, L, cap, _meter(budget))


def encode_counts(dataset: Dataset, mode: str, tokeniser, budget=None) -> list[int]:
    """Token count of every dataset entry under a tokeniser.

    tokeniser is a Vocabulary or length set for mode 'direct' and a merge
    sequence for 'bottomup' and 'ope'.
    """
    if dataset.is_length:
        if mode == "direct":
            lengths = set(tokeniser) | {1}
        elif mode == "ope":
            lengths = {l + r for l, r in tokeniser} | {1}
        else:
            raise ValidationError("bottom-up encoding needs the explicit representation")
        meter = _meter(budget)
        return [unary_direct_encode(lengths, p, budget=meter).count for p, _ in dataset.entries]
    if mode == "direct":
        vocab = tokeniser if isinstance(tokeniser, Vocabulary) else Vocabulary(frozenset(tokeniser), dataset.alphabet)
        return [len(direct_encode(vocab, p)) for p, _ in dataset.entries]
    if mode == "ope":
        vocab = ope_vocab(tokeniser, dataset.alphabet)
        return [len(direct_encode(vocab, p)) for p, _ in dataset.entries]
    if mode == "bottomup":
        return [len(bottomup_apply(tokeniser, p)) for p, _ in dataset.entries]
    raise ValidationError(f"unknown mode {mode!r}")


def total_length(dataset: Dataset, mode: str, tokeniser, budget=None) -> int:
    counts = encode_counts(dataset, mode, tokeniser, budget)
    return sum(m * c for (_, m), c in zip(dataset.entries, counts))
