"""Forward witnesses, backward extractors and the arithmetic sweeps behind them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence

import numpy as np

from .core import (
    Alphabet,
    Dataset,
    Max2SatInstance,
    Merge,
    UnaryCertificate,
    ValidationError,
    VcInstance,
    Vocabulary,
)
from .encoders import unary_direct_encode
from .reductions import SEP, SEP2, n, reduce_vc_to_d1tok, vc_encoding, y

# ---------------------------------------------------------------- MAX2SAT side


def _check_assignment(inst: Max2SatInstance, s: Sequence[bool]) -> tuple[bool, ...]:
    if len(s) != inst.num_vars:
        raise ValidationError(f"assignment has length {len(s)}, expected {inst.num_vars}")
    return tuple(bool(v) for v in s)


def build_direct_witness(inst: Max2SatInstance, s: Sequence[bool]) -> Vocabulary:
    s = _check_assignment(inst, s)
    toks = []
    for j in range(1, inst.num_vars + 1):
        yj, nj = y(j), n(j)
        toks += [SEP + yj, yj + SEP, SEP + nj, nj + SEP]
        toks.append(SEP + yj + SEP if s[j - 1] else SEP + nj + SEP)
    return Vocabulary(frozenset(toks), Alphabet.binary())


def build_zero_run_merges(J: int) -> tuple[Merge, ...]:
    """2J-1 merges after which every run 0^1 .. 0^(2J) is a single token.

    First the doubling merges 0^(2^i) + 0^(2^i) up to the largest power of
    two not exceeding 2J, then for each such power p (ascending) the merges
    0^p + 0^r for r = 1 .. min(p-1, 2J-p), which fill in every run length
    between p and 2p.
    """
    if J < 1:
        raise ValidationError("J must be at least 1")
    top = 2 * J
    merges: list[Merge] = []
    p = 1
    while 2 * p <= top:
        merges.append(("0" * p, "0" * p))
        p *= 2
    p = 2
    while p <= top:
        for r in range(1, min(p - 1, top - p) + 1):
            merges.append(("0" * p, "0" * r))
        p *= 2
    assert len(merges) == 2 * J - 1
    return tuple(merges)


def build_bottomup_witness(inst: Max2SatInstance, s: Sequence[bool]) -> tuple[Merge, ...]:
    """10J merges: zero runs and '11' first, then the structural and choice lists."""
    s = _check_assignment(inst, s)
    J = inst.num_vars
    if J == 0:
        return ()
    js = range(1, J + 1)
    m1 = [(SEP, SEP)] + list(build_zero_run_merges(J))
    m2 = [m for j in js for m in ((SEP2, n(j)), (y(j), SEP2))]
    m3 = [(SEP, y(j) + SEP2) if s[j - 1] else (SEP2 + n(j), SEP) for j in js]
    m4 = [m for j in js for m in ((n(j), SEP), (SEP, y(j)))]
    m5 = [(SEP + y(j), SEP) if s[j - 1] else (SEP, n(j) + SEP) for j in js]
    m6 = [m for j in js for m in ((SEP, n(j)), (y(j), SEP))]
    return tuple(m1 + m2 + m3 + m4 + m5 + m6)


Choice = Literal["y-side", "n-side", "both", "neither"]


@dataclass(frozen=True)
class SatComplianceReport:
    compliant: bool
    missing_required: tuple[str, ...]
    extra_noncompliant: tuple[str, ...]
    choices: tuple[Choice, ...]


def _families(J: int, variant: str):
    required: list[str] = []
    yes: list[list[str]] = []
    no: list[list[str]] = []
    for j in range(1, J + 1):
        yj, nj = y(j), n(j)
        if variant == "direct":
            required += [SEP + yj, yj + SEP, SEP + nj, nj + SEP]
            yes.append([SEP + yj + SEP])
            no.append([SEP + nj + SEP])
        elif variant == "bottomup":
            required += [yj, nj, SEP + yj, yj + SEP, SEP + nj, nj + SEP, yj + SEP2, SEP2 + nj]
            yes.append([SEP + yj + SEP, SEP + yj + SEP2])
            no.append([SEP + nj + SEP, SEP2 + nj + SEP])
        else:
            raise ValidationError(f"unknown variant {variant!r}")
    if variant == "bottomup" and J:
        required.insert(0, SEP2)
    return required, yes, no


def check_sat_compliance(vocab: Vocabulary, J: int, variant: str = "direct") -> SatComplianceReport:
    if set(vocab.alphabet.symbols) != {"0", "1"}:
        raise ValidationError("compliance is defined over the binary alphabet")
    required, yes, no = _families(J, variant)
    toks = vocab.tokens
    missing = tuple(t for t in dict.fromkeys(required) if t not in toks)
    allowed = set(required) | set(vocab.alphabet.symbols)
    for fam in yes + no:
        allowed.update(fam)
    extra = tuple(t for t in vocab.extra() if t not in allowed)
    choices: list[Choice] = []
    for ys, ns in zip(yes, no):
        any_y = any(t in toks for t in ys)
        any_n = any(t in toks for t in ns)
        if any_y and any_n:
            choices.append("both")
        elif any_y and all(t in toks for t in ys):
            choices.append("y-side")
        elif any_n and all(t in toks for t in ns):
            choices.append("n-side")
        else:
            choices.append("neither")
    ok = not missing and not extra and all(c in ("y-side", "n-side") for c in choices)
    return SatComplianceReport(ok, missing, extra, tuple(choices))


def extract_assignment(vocab: Vocabulary, J: int, variant: str = "direct") -> tuple[bool, ...]:
    """s_j is true iff the y-side token 1 y_j 1 is present."""
    report = check_sat_compliance(vocab, J, variant)
    if not report.compliant:
        raise ValidationError(f"vocabulary is not sat-compliant: {report}")
    return tuple(SEP + y(j) + SEP in vocab.tokens for j in range(1, J + 1))


# ---------------------------------------------------------------- vertex cover side


def build_vc_witness(inst: VcInstance, cover: Iterable[int]) -> frozenset[int]:
    """Vertex lengths, B, and one cover length per cover vertex, padded to k."""
    cover = set(cover)
    if not inst.is_cover(cover):
        raise ValidationError(f"{sorted(cover)} is not a vertex cover")
    if len(cover) > inst.k:
        raise ValidationError(f"cover of size {len(cover)} exceeds k={inst.k}")
    for v in range(1, inst.n + 1):
        if len(cover) >= inst.k:
            break
        cover.add(v)
    e = vc_encoding(inst)
    lengths = {e.vertex(j) for j in range(1, inst.n + 1)} | {e.B}
    lengths |= {e.cover(j) for j in cover}
    return frozenset(lengths)


def certificate_for(dataset: Dataset, lengths: Iterable[int]) -> UnaryCertificate:
    """Optimal coin vectors for every entry under the given lengths (1 included)."""
    vocab = tuple(sorted(set(lengths) | {1}))
    coins = tuple(unary_direct_encode(vocab, p).coin_vector(vocab) for p, _ in dataset.entries)
    return UnaryCertificate(vocab, coins)


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    reasons: tuple[str, ...] = field(default=())

    def __bool__(self) -> bool:
        return self.ok


def verify_unary_certificate(dataset: Dataset, cert: UnaryCertificate, kappa: int, delta: int) -> CertificateCheck:
    reasons = []
    lengths = cert.vocab_lengths
    if any(l < 1 for l in lengths) or len(set(lengths)) != len(lengths):
        reasons.append("bad-lengths")
    if len([l for l in set(lengths) if l != 1]) > kappa:
        reasons.append("too-many-tokens")
    if len(cert.coin_assignments) != len(dataset.entries):
        reasons.append("entry-count")
    total = 0
    for idx, ((p, m), vec) in enumerate(zip(dataset.entries, cert.coin_assignments)):
        if len(vec) != len(lengths) or any(c < 0 for c in vec):
            reasons.append(f"bad-vector:{idx}")
            continue
        if sum(c * l for c, l in zip(vec, lengths)) != p:
            reasons.append(f"sum-mismatch:{idx}")
        total += m * sum(vec)
    if total > delta:
        reasons.append("over-delta")
    return CertificateCheck(not reasons, tuple(reasons))


def extract_cover(vocab_lengths: Iterable[int], inst: VcInstance) -> frozenset[int]:
    """Cover vertices, plus the lower endpoint of every edge kept whole as a token."""
    e = vc_encoding(inst)
    targets = {p for p, _ in reduce_vc_to_d1tok(inst).dataset.entries}
    lengths = set(vocab_lengths) - {1}
    stray = sorted(lengths - targets)
    if stray:
        raise ValidationError(f"lengths {stray} are not target lengths; vocabulary has no canonical shape")
    cover = {j for j in range(1, inst.n + 1) if e.cover(j) in lengths}
    cover |= {u for u, v in inst.edges if e.edge(u, v) in lengths}
    if not inst.is_cover(cover):
        bad = [(u, v) for u, v in inst.edges if u not in cover and v not in cover]
        raise ValidationError(f"extracted set {sorted(cover)} misses edges {bad}")
    if len(cover) > inst.k:
        raise ValidationError(f"extracted cover {sorted(cover)} exceeds k={inst.k}")
    return frozenset(cover)


# ---------------------------------------------------------------- addition chains


def build_addchain_witness(chain: Sequence[int], lengths: bool = False) -> tuple:
    """One merge per chain step, splitting b_r by its smallest valid (j, k)."""
    if not chain or chain[0] != 1:
        raise ValidationError("an addition chain starts at 1")
    merges = []
    for r in range(1, len(chain)):
        pair = None
        for j in range(r):
            for k in range(j, r):
                if chain[j] + chain[k] == chain[r]:
                    pair = (chain[j], chain[k])
                    break
            if pair:
                break
        if pair is None:
            raise ValidationError(f"chain element {chain[r]} at step {r} is not a sum of earlier ones")
        merges.append(pair if lengths else ("a" * pair[0], "a" * pair[1]))
    return tuple(merges)


def extract_addchain(merges: Sequence[tuple]) -> tuple[int, ...]:
    """Chain from merge products, dropping merges whose parts are not yet built."""
    size = lambda t: t if isinstance(t, int) else len(t)  # noqa: E731
    chain = [1]
    have = {1}
    for left, right in merges:
        a, b = size(left), size(right)
        if a in have and b in have and a + b not in have:
            chain.append(a + b)
            have.add(a + b)
    return tuple(chain)


# ---------------------------------------------------------------- power-sum sweeps

SUM_IDENTITIES = (
    ("pair_vs_single", 2, 1, (1, 2)),
    ("pair_vs_pair", 2, 2, (1, 2)),
    ("triple_vs_single", 3, 1, (1, 2)),
    ("triple_vs_pair", 3, 2, (1, 2, 3)),
)


def _multisets(size: int, bound: int) -> np.ndarray:
    """All nondecreasing tuples over 1..bound, one per row."""
    if size == 1:
        return np.arange(1, bound + 1, dtype=np.int64)[:, None]
    if size == 2:
        i, j = np.triu_indices(bound)
        return np.stack([i + 1, j + 1], axis=1).astype(np.int64)
    if size == 3:
        blocks = []
        for a in range(1, bound + 1):
            j, k = np.triu_indices(bound - a + 1)
            col = np.full(j.shape, a, dtype=np.int64)
            blocks.append(np.stack([col, j + a, k + a], axis=1))
        return np.concatenate(blocks).astype(np.int64)
    raise ValidationError("multiset size must be 1, 2 or 3")


def find_power_sum_collisions(
    left: int, right: int, powers: Sequence[int], bound: int, limit: int = 10
) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Distinct multisets of positive integers <= bound with equal power sums.

    Compares multisets of size `left` with multisets of size `right` on
    every power in `powers`. Returns at most `limit` collisions.
    """
    if bound < 1:
        return []
    sides = [_multisets(left, bound)] if left == right else [_multisets(left, bound), _multisets(right, bound)]
    rows = []
    sigs = []
    tags = []
    for tag, ms in enumerate(sides):
        sigs.append(np.stack([(ms**p).sum(axis=1) for p in powers], axis=1))
        rows.append(ms)
        tags.append(np.full(len(ms), tag))
    sig = np.concatenate(sigs)
    tag = np.concatenate(tags)
    order = np.lexsort(sig.T[::-1])
    sig, tag = sig[order], tag[order]
    same = np.all(sig[1:] == sig[:-1], axis=1)
    if left != right:
        same &= tag[1:] != tag[:-1]
    hits = np.nonzero(same)[0][:limit]
    offsets = np.cumsum([0] + [len(r) for r in rows])

    def row(ix: int) -> tuple[int, ...]:
        src = order[ix]
        t = int(np.searchsorted(offsets, src, side="right") - 1)
        return tuple(int(v) for v in rows[t][src - offsets[t]])

    return [(row(h), row(h + 1)) for h in hits]


@dataclass(frozen=True)
class SumIdentityReport:
    bound: int
    counterexamples: dict

    @property
    def clean(self) -> bool:
        return not any(self.counterexamples.values())


def check_sum_identities(bound: int) -> SumIdentityReport:
    """Exhaustive sweep for the power-sum coincidences the unary reduction rules out."""
    if bound < 1:
        raise ValidationError("bound must be at least 1")
    found = {name: find_power_sum_collisions(a, b, ps, bound) for name, a, b, ps in SUM_IDENTITIES}
    return SumIdentityReport(bound, found)


# ---------------------------------------------------------------- clause table

# Final bottom-up token count of each clause string under the witness merges,
# keyed by literal polarities and then by (s_j, s_j') for the two variables.
CLAUSE_TABLE = {
    (True, False): {(True, True): 2, (False, True): 3, (True, False): 2, (False, False): 2},
    (False, True): {(True, True): 2, (False, True): 2, (True, False): 3, (False, False): 2},
    (False, False): {(True, True): 3, (False, True): 2, (True, False): 2, (False, False): 2},
    (True, True): {(True, True): 2, (False, True): 2, (True, False): 2, (False, False): 3},
}


def replay_clause_table(inst: Max2SatInstance, j: int, jp: int) -> list[tuple[tuple, tuple, int, int]]:
    """Replay every clause-table row on variables j, jp of inst.

    Returns (polarities, values, got, expected) per row. Variables other
    than j and jp are set true; they do not touch the clause string.
    """
    from .encoders import bottomup_apply
    from .reductions import d5_string

    rows = []
    for (pa, pb), cases in CLAUSE_TABLE.items():
        a = j if pa else -j
        b = jp if pb else -jp
        for (sj, sjp), want in cases.items():
            s = [True] * inst.num_vars
            s[j - 1], s[jp - 1] = sj, sjp
            got = len(bottomup_apply(build_bottomup_witness(inst, s), d5_string(a, b)))
            rows.append(((pa, pb), (sj, sjp), got, want))
    return rows
