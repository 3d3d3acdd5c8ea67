"""Exhaustive exact solvers for tokenisation and for the source problems.

Every search either returns a proven optimum or raises BudgetExceeded.
"""

from __future__ import annotations

import itertools
from typing import Iterable

from .core import (
    AddChainInstance,
    Assignment,
    BudgetExceeded,
    BudgetMeter,
    Dataset,
    Max2SatInstance,
    Merge,
    SearchBudget,
    ValidationError,
    VcInstance,
    Vocabulary,
    _meter,
)
from .encoders import direct_encode, unary_direct_encode

__all__ = [
    "BudgetExceeded",
    "SearchBudget",
    "substring_candidates",
    "solve_direct_exact",
    "solve_bottomup_exact",
    "solve_ope_exact",
    "solve_unary_direct_exact",
    "solve_max2sat_exact",
    "solve_vc_exact",
    "solve_addchain_exact",
]


def _grouped(dataset: Dataset) -> list[tuple[object, int]]:
    """Merge duplicate payloads, keeping first-seen order."""
    acc: dict[object, int] = {}
    for p, m in dataset.entries:
        acc[p] = acc.get(p, 0) + m
    return list(acc.items())


def substring_candidates(dataset: Dataset) -> list[str]:
    """Distinct substrings of length >= 2 of the dataset strings."""
    seen: set[str] = set()
    for p, _ in dataset.entries:
        n = len(p)
        for i in range(n):
            for j in range(i + 2, n + 1):
                seen.add(p[i:j])
    return sorted(seen, key=lambda t: (len(t), t))


def _max_occurrences(t: str, c: str) -> int:
    """Most non-overlapping occurrences of t in c (leftmost greedy is optimal)."""
    count = 0
    i = c.find(t)
    while i >= 0:
        count += 1
        i = c.find(t, i + len(t))
    return count


# ---------------------------------------------------------------- direct


def solve_direct_exact(
    dataset: Dataset,
    kappa: int,
    candidates: Iterable[str] | None = None,
    budget: SearchBudget | BudgetMeter | None = None,
) -> tuple[Vocabulary, int]:
    """Best vocabulary of kappa extra tokens under direct encoding.

    Branch and bound over candidate subsets. A token t used u times can be
    swapped for single symbols at a cost of u(|t|-1), so adding t to any
    vocabulary saves at most its non-overlapping occurrence count times
    (|t|-1). Summing that over the unpicked candidates gives the bound.
    """
    if kappa < 0:
        raise ValidationError("kappa must be nonnegative")
    if dataset.is_length:
        dataset = dataset.to_explicit()
    meter = _meter(budget)
    entries = _grouped(dataset)
    alphabet = dataset.alphabet
    pool = substring_candidates(dataset) if candidates is None else sorted(
        {t for t in candidates if len(t) >= 2}, key=lambda t: (len(t), t)
    )
    limit = meter.budget.max_candidates
    if len(pool) > limit:
        raise BudgetExceeded(f"{len(pool)} candidates exceed max_candidates={limit}")
    saving = {
        t: sum(m * _max_occurrences(t, p) * (len(t) - 1) for p, m in entries) for t in pool
    }
    pool.sort(key=lambda t: (-saving[t], len(t), t))
    picks = min(kappa, len(pool))

    def cost(tokens: frozenset[str]) -> int:
        vocab = Vocabulary(tokens, alphabet)
        return sum(m * len(direct_encode(vocab, p)) for p, m in entries)

    best_val = cost(frozenset(pool[:picks]))
    best_set = frozenset(pool[:picks])
    sav = [saving[t] for t in pool]

    def dfs(start: int, chosen: list[str], current: int) -> None:
        nonlocal best_val, best_set
        meter.tick()
        left = picks - len(chosen)
        if left == 0:
            if current < best_val:
                best_val, best_set = current, frozenset(chosen)
            return
        for i in range(start, len(pool) - left + 1):
            if current - sum(sav[i:i + left]) >= best_val:
                break
            chosen.append(pool[i])
            dfs(i + 1, chosen, cost(frozenset(chosen)))
            chosen.pop()

    dfs(0, [], cost(frozenset()))
    return Vocabulary(best_set, alphabet), best_val


# ---------------------------------------------------------------- bottom-up


def _halving_bound(state, mults, r: int) -> int:
    # each merge pass at most halves a token sequence
    div = 1 << r
    return sum(m * -(-len(toks) // div) for toks, m in zip(state, mults))


def solve_bottomup_exact(
    dataset: Dataset,
    kappa: int,
    budget: SearchBudget | BudgetMeter | None = None,
) -> tuple[tuple[Merge, ...], int]:
    """Best merge sequence of length kappa under bottom-up application.

    Depth-first over pairs that are adjacent somewhere in the current
    tokenised corpus. Merges that change nothing are never branched on;
    when no adjacent pair is left the sequence is padded with no-ops.
    """
    if kappa < 0:
        raise ValidationError("kappa must be nonnegative")
    meter = _meter(budget)
    entries = _grouped(dataset)
    mults = [m for _, m in entries]
    start = tuple(tuple(p) for p, _ in entries)
    best_val = sum(m * len(t) for t, m in zip(start, mults))
    best_seq: list[Merge] = []
    seen: dict[tuple, int] = {}

    def dfs(state, seq: list[Merge]) -> None:
        nonlocal best_val, best_seq
        meter.tick()
        value = sum(m * len(t) for t, m in zip(state, mults))
        if value < best_val:
            best_val, best_seq = value, list(seq)
        r = kappa - len(seq)
        if r == 0 or _halving_bound(state, mults, r) >= best_val:
            return
        key = state
        if seen.get(key, -1) >= r:
            return
        seen[key] = r
        pairs = sorted({(t[i], t[i + 1]) for t in state for i in range(len(t) - 1)})
        for pair in pairs:
            nxt = tuple(_apply_tokens(t, pair) for t in state)
            seq.append(pair)
            dfs(nxt, seq)
            seq.pop()

    dfs(start, [])
    pad = (dataset.alphabet.symbols[0], dataset.alphabet.symbols[0])
    seq = tuple(best_seq) + (pad,) * (kappa - len(best_seq))
    return seq, best_val


def _apply_tokens(toks: tuple[str, ...], pair: Merge) -> tuple[str, ...]:
    left, right = pair
    out = []
    i, n = 0, len(toks)
    while i < n:
        if i + 1 < n and toks[i] == left and toks[i + 1] == right:
            out.append(left + right)
            i += 2
        else:
            out.append(toks[i])
            i += 1
    return tuple(out)


# ---------------------------------------------------------------- OPE


def solve_ope_exact(
    dataset: Dataset,
    kappa: int,
    budget: SearchBudget | BudgetMeter | None = None,
    threshold: int | None = None,
) -> tuple[tuple, int | None]:
    """Best reachable merge sequence of at most kappa merges under OPE.

    The merge-extracted vocabulary is all that matters, and a vocabulary is
    reachable iff its tokens can be listed by increasing (length, content)
    with each one the concatenation of two earlier tokens or symbols. The
    search adds tokens in exactly that order, so every reachable vocabulary
    is visited once.

    With threshold set, stops at the first vocabulary whose total is at
    most threshold and returns (None, None) when there is none.
    Length-representation datasets use integer tokens.
    """
    if kappa < 0:
        raise ValidationError("kappa must be nonnegative")
    meter = _meter(budget)
    entries = _grouped(dataset)
    unary = dataset.is_length
    if unary:
        maxlen = max(p for p, _ in entries)
        base: tuple = (1,)
        size = lambda t: t  # noqa: E731
        key = lambda t: t  # noqa: E731
        useful = lambda t: t <= maxlen  # noqa: E731
    else:
        base = dataset.alphabet.symbols
        subs = set()
        for p, _ in entries:
            for i in range(len(p)):
                for j in range(i + 2, len(p) + 1):
                    subs.add(p[i:j])
        size = len
        key = lambda t: (len(t), t)  # noqa: E731
        useful = subs.__contains__

    def cost_entry(tokens: frozenset, p) -> int:
        if unary:
            return unary_direct_encode(tokens, p, budget=meter).count
        return len(direct_encode(Vocabulary(tokens, dataset.alphabet), p))

    def total(tokens: frozenset) -> list[int]:
        return [cost_entry(tokens, p) for p, _ in entries]

    def lower_bound(tokens: frozenset, costs: list[int], r: int, last) -> int:
        if r == 0:
            return sum(m * c for (_, m), c in zip(entries, costs))
        top = max(size(t) for t in tokens) << r
        lb = 0
        gains = []
        for (p, m), c in zip(entries, costs):
            if c == 1:
                lb += m
                continue
            n = size(p)
            rest = min(c, max(2, -(-n // top)))
            lb += m * rest
            if n <= top and (last is None or key(p) > key(last)):
                gains.append(m * (rest - 1))
        gains.sort(reverse=True)
        return lb - sum(gains[:r])

    start = frozenset(base)
    costs0 = total(start)
    best_val = sum(m * c for (_, m), c in zip(entries, costs0))
    best_seq: list = []
    if threshold is not None:
        if best_val <= threshold:
            return (), best_val
        best_val = threshold + 1
        found = False
    else:
        found = True

    class _Stop(Exception):
        pass

    def dfs(tokens: frozenset, order: list, seq: list, costs: list[int]) -> None:
        nonlocal best_val, best_seq, found
        meter.tick()
        value = sum(m * c for (_, m), c in zip(entries, costs))
        if value < best_val:
            best_val, best_seq = value, list(seq)
            found = True
            if threshold is not None:
                raise _Stop
        r = kappa - len(seq)
        if r == 0:
            return
        last = order[-1] if order else None
        if lower_bound(tokens, costs, r, last) >= best_val:
            return
        made = {}
        for a in order + list(base):
            for b in order + list(base):
                t = a + b
                if t in tokens or t in made or not useful(t):
                    continue
                if last is not None and key(t) <= key(last):
                    continue
                made[t] = (a, b)
        for t in sorted(made, key=key):
            nt = tokens | {t}
            seq.append(made[t])
            order.append(t)
            dfs(nt, order, seq, total(nt))
            order.pop()
            seq.pop()

    try:
        dfs(start, [], [], costs0)
    except _Stop:
        pass
    if not found:
        return None, None
    return tuple(best_seq), best_val


# ---------------------------------------------------------------- unary direct


def solve_unary_direct_exact(
    dataset: Dataset,
    kappa: int,
    candidates: Iterable[int] | None = None,
    budget: SearchBudget | BudgetMeter | None = None,
    threshold: int | None = None,
) -> tuple[frozenset[int] | None, int | None]:
    """Best set of at most kappa lengths for a length-representation dataset.

    Candidates default to the distinct target lengths. Lengths are decided
    in increasing order, so by the time a target is reached every coin that
    could pay for it has been fixed and its exact cost is known. Each cost
    is computed with a coin cap equal to the slack left under the current
    threshold. The optimum is found by galloping then bisecting on that
    threshold; feasibility is monotone in it.

    With threshold set, answers only the decision question and returns
    (None, None) when the threshold is unreachable.
    """
    if not dataset.is_length:
        raise ValidationError("solve_unary_direct_exact needs a length-representation dataset")
    if kappa < 0:
        raise ValidationError("kappa must be nonnegative")
    meter = _meter(budget)
    targets: dict[int, int] = {}
    for p, m in dataset.entries:
        targets[p] = targets.get(p, 0) + m
    if candidates is None:
        cands = sorted(t for t in targets if t > 1)
    else:
        cands = sorted({int(c) for c in candidates if int(c) > 1})
    if len(cands) > meter.budget.max_candidates:
        raise BudgetExceeded(f"{len(cands)} candidates exceed max_candidates={meter.budget.max_candidates}")
    cset = set(cands)
    events = sorted(set(cands) | set(targets))
    # suffix data for the lower bound
    tail_mult = [0] * (len(events) + 1)
    for i in range(len(events) - 1, -1, -1):
        tail_mult[i] = tail_mult[i + 1] + targets.get(events[i], 0)

    def rest_bound(i: int, slots: int) -> int:
        # every remaining target costs >= 1, and >= 2 unless it becomes a token
        lb = 0
        ones = []
        for x in events[i:]:
            m = targets.get(x, 0)
            if not m:
                continue
            if x <= 1:
                lb += m * x
            else:
                lb += 2 * m
                if x in cset:
                    ones.append(m)
        ones.sort(reverse=True)
        return lb - sum(ones[:slots])

    def feasible(limit: int) -> tuple[frozenset[int], int] | None:
        chosen: list[int] = []

        def dfs(i: int, slots: int, spent: int) -> tuple[frozenset[int], int] | None:
            meter.tick()
            if i == len(events):
                return frozenset(chosen), spent
            if spent + rest_bound(i, slots) > limit:
                return None
            x = events[i]
            options = []
            if x in cset and slots > 0:
                options.append(True)
            options.append(False)
            for take in options:
                if take:
                    chosen.append(x)
                m = targets.get(x, 0)
                extra = 0
                ok = True
                if m:
                    if x == 0:
                        extra = 0
                    elif take or x == 1:
                        extra = m
                    else:
                        after = rest_bound(i + 1, slots)
                        cap = (limit - spent - after) // m
                        enc = unary_direct_encode(chosen + [1], x, max_coins=cap, budget=meter) if cap >= 1 else None
                        if enc is None:
                            ok = False
                        else:
                            extra = m * enc.count
                got = dfs(i + 1, slots - take, spent + extra) if ok else None
                if take:
                    chosen.pop()
                if got is not None:
                    return got
            return None

        return dfs(0, min(kappa, len(cands)), 0)

    def padded(tokens: frozenset[int]) -> frozenset[int]:
        want = min(kappa, len(cands))
        extra = [c for c in cands if c not in tokens]
        return tokens | frozenset(extra[: want - len(tokens)])

    if threshold is not None:
        got = feasible(threshold)
        return (padded(got[0]), got[1]) if got else (None, None)

    lo = rest_bound(0, min(kappa, len(cands)))  # infeasible below lo
    step = 1
    hi = lo
    got = feasible(hi)
    while got is None:
        lo = hi + 1
        hi += step
        step *= 2
        got = feasible(hi)
    best = got
    hi = got[1]
    while lo < hi:
        mid = (lo + hi) // 2
        g = feasible(mid)
        if g is None:
            lo = mid + 1
        else:
            best = g
            hi = g[1]
    return padded(best[0]), best[1]


# ---------------------------------------------------------------- source problems


def solve_max2sat_exact(inst: Max2SatInstance) -> tuple[Assignment, int]:
    """Brute force over all 2^J assignments; first maximiser in product order."""
    best: Assignment = tuple(True for _ in range(inst.num_vars))
    best_f = -1
    for bits in itertools.product((True, False), repeat=inst.num_vars):
        f = inst.satisfied(bits)
        if f > best_f:
            best, best_f = bits, f
    return best, max(best_f, 0)


def solve_vc_exact(inst: VcInstance) -> tuple[frozenset[int], int]:
    """Smallest vertex cover, trying subsets in increasing size."""
    verts = range(1, inst.n + 1)
    for size in range(inst.n + 1):
        for subset in itertools.combinations(verts, size):
            if inst.is_cover(subset):
                return frozenset(subset), size
    raise AssertionError("the full vertex set is always a cover")


def solve_addchain_exact(
    inst: AddChainInstance,
    budget: SearchBudget | BudgetMeter | None = None,
) -> tuple[tuple[int, ...], int]:
    """Shortest addition chain containing every target.

    Iterative deepening over strictly increasing chains. A branch is cut
    when more targets are missing than steps remain, or when doubling the
    top element for every remaining step cannot reach the largest target.
    """
    meter = _meter(budget)
    targets = sorted(inst.targets)
    goal = targets[-1]

    def dfs(chain: list[int], depth: int) -> bool:
        meter.tick()
        missing = [t for t in targets if t not in chain_set]
        if not missing:
            return True
        left = depth - (len(chain) - 1)
        if left <= 0 or len(missing) > left:
            return False
        if chain[-1] << left < goal:
            return False
        top = chain[-1]
        sums = sorted({a + b for i, a in enumerate(chain) for b in chain[i:] if a + b > top and a + b <= goal}, reverse=True)
        for s in sums:
            chain.append(s)
            chain_set.add(s)
            if dfs(chain, depth):
                return True
            chain_set.discard(s)
            chain.pop()
        return False

    depth = 0
    while True:
        chain_set = {1}
        chain = [1]
        if dfs(chain, depth):
            return tuple(chain), depth
        depth += 1
        if depth > 2 * goal.bit_length() + len(targets):
            raise AssertionError("binary method bound exceeded")
