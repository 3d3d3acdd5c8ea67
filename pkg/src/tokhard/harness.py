"""Equivalence pipelines for each reduction, greedy BPE, and ratio benchmarks."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import (
    AddChainInstance,
    Alphabet,
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
    approximation_ratio,
)
from .encoders import bottomup_apply, direct_encode, ope_vocab, total_length
from .oracles import (
    solve_addchain_exact,
    solve_bottomup_exact,
    solve_direct_exact,
    solve_max2sat_exact,
    solve_ope_exact,
    solve_unary_direct_exact,
    solve_vc_exact,
    substring_candidates,
)
from .reductions import (
    b2tok_delta,
    b2tok_parts,
    d2tok_delta,
    reduce_addchain_to_uope,
    reduce_max2sat_to_b2tok,
    reduce_max2sat_to_d2tok,
    reduce_vc_to_d1tok,
)
from .witnesses import (
    build_addchain_witness,
    build_bottomup_witness,
    build_direct_witness,
    build_vc_witness,
    certificate_for,
    check_sat_compliance,
    extract_addchain,
    extract_assignment,
    extract_cover,
    verify_unary_certificate,
)


@dataclass
class EquivalenceReport:
    instance: str
    source_optimum: int | None = None
    reduced_optimum: int | None = None
    predicted: int | None = None
    sweep: list[tuple[int, bool, bool]] = field(default_factory=list)
    methods: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and all(a == b for _, a, b in self.sweep)

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAILED"

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def record(self, threshold: int, source_yes: bool, reduced_yes: bool) -> None:
        self.sweep.append((threshold, source_yes, reduced_yes))
        if source_yes != reduced_yes:
            self.fail(f"decision mismatch at threshold {threshold}: source={source_yes} reduced={reduced_yes}")

    def check_monotone(self, yes_when_larger: bool) -> None:
        """Both sides must switch from NO to YES at most once along the sweep."""
        for side in (1, 2):
            seq = [row[side] for row in sorted(self.sweep)]
            if not yes_when_larger:
                seq = seq[::-1]
            if any(a and not b for a, b in zip(seq, seq[1:])):
                self.fail(f"decision not monotone on side {side}")

    def to_text(self) -> str:
        lines = [
            f"{self.status} {self.instance}",
            f"  source optimum : {self.source_optimum}",
            f"  reduced optimum: {self.reduced_optimum}",
            f"  predicted      : {self.predicted}",
            f"  methods        : {', '.join(self.methods)}",
        ]
        for t, a, b in self.sweep:
            lines.append(f"  threshold {t}: source={'YES' if a else 'NO'} reduced={'YES' if b else 'NO'}")
        lines += [f"  note: {n}" for n in self.notes]
        lines += [f"  failure: {f}" for f in self.failures]
        return "\n".join(lines)

    def to_kv(self) -> str:
        kv = [
            ("status", self.status),
            ("instance", self.instance),
            ("source_optimum", self.source_optimum),
            ("reduced_optimum", self.reduced_optimum),
            ("predicted", self.predicted),
            ("methods", ",".join(self.methods)),
            ("sweep", ";".join(f"{t}:{int(a)}{int(b)}" for t, a, b in self.sweep)),
            ("failures", len(self.failures)),
        ]
        return "\n".join(f"{k}={v}" for k, v in kv)


def _describe(inst) -> str:
    if isinstance(inst, Max2SatInstance):
        return f"m2s J={inst.J} C={inst.C} clauses={list(inst.clauses)}"
    if isinstance(inst, VcInstance):
        return f"vc n={inst.n} m={inst.m} edges={list(inst.edges)}"
    return f"ac targets={sorted(inst.targets)}"


# ---------------------------------------------------------------- binary reductions


class _SwapProbe:
    """Re-encodes only the entries a single-token swap can affect."""

    def __init__(self, dataset: Dataset) -> None:
        acc: dict[str, int] = {}
        for p, m in dataset.entries:
            acc[p] = acc.get(p, 0) + m
        self.entries = list(acc.items())
        self.alphabet = dataset.alphabet
        self.pool = substring_candidates(dataset)
        self.holders = {t: [i for i, (p, _) in enumerate(self.entries) if t in p] for t in self.pool}

    def best_swap(self, vocab: Vocabulary) -> tuple[int, str, str] | None:
        base = [len(direct_encode(vocab, p)) for p, _ in self.entries]
        best = None
        for out in vocab.extra():
            for inn in self.pool:
                if inn in vocab.tokens:
                    continue
                cand = Vocabulary((vocab.tokens - {out}) | {inn}, self.alphabet)
                touched = set(self.holders.get(out, ())) | set(self.holders[inn])
                delta = 0
                for i in touched:
                    p, m = self.entries[i]
                    delta += m * (len(direct_encode(cand, p)) - base[i])
                if best is None or delta < best[0]:
                    best = (delta, out, inn)
        return best


def _sweep_max2sat(report: EquivalenceReport, inst: Max2SatInstance, f_star: int, best: int, delta) -> None:
    for F in range(inst.C + 2):
        report.record(F, f_star >= F, best <= delta(inst.J, inst.C, F))
    report.check_monotone(yes_when_larger=False)


def verify_d2tok_equivalence(inst: Max2SatInstance, probe: bool = True) -> EquivalenceReport:
    report = EquivalenceReport(_describe(inst), methods=["compliant-enumeration"])
    s_star, f_star = solve_max2sat_exact(inst)
    report.source_optimum = f_star
    report.predicted = d2tok_delta(inst.J, inst.C, f_star)
    dataset = reduce_max2sat_to_d2tok(inst).dataset
    best, best_vocab = None, None
    for s in itertools.product((True, False), repeat=inst.J):
        vocab = build_direct_witness(inst, s)
        value = total_length(dataset, "direct", vocab)
        want = d2tok_delta(inst.J, inst.C, inst.satisfied(s))
        if value != want:
            report.fail(f"forward: assignment {s} gives {value}, expected {want}")
        if extract_assignment(vocab, inst.J) != s:
            report.fail(f"round trip lost assignment {s}")
        if best is None or value < best:
            best, best_vocab = value, vocab
    report.reduced_optimum = best
    if best != report.predicted:
        report.fail(f"compliant optimum {best} differs from predicted {report.predicted}")
    if probe and best_vocab is not None:
        report.methods.append("1-swap-probe")
        swap = _SwapProbe(dataset).best_swap(best_vocab)
        if swap is not None and swap[0] < 0:
            report.fail(f"swap {swap[1]} -> {swap[2]} improves the compliant optimum by {-swap[0]}")
    _sweep_max2sat(report, inst, f_star, best, d2tok_delta)
    return report


def verify_b2tok_equivalence(inst: Max2SatInstance, probe: bool = True) -> EquivalenceReport:
    report = EquivalenceReport(_describe(inst), methods=["witness-replay", "compliant-enumeration"])
    s_star, f_star = solve_max2sat_exact(inst)
    report.source_optimum = f_star
    report.predicted = b2tok_delta(inst.J, inst.C, f_star)
    dataset = reduce_max2sat_to_b2tok(inst).dataset
    d5 = b2tok_parts(inst)["D5"]
    best, best_vocab = None, None
    for s in itertools.product((True, False), repeat=inst.J):
        merges = build_bottomup_witness(inst, s)
        if len(merges) != 10 * inst.J:
            report.fail(f"witness for {s} has {len(merges)} merges")
        value = total_length(dataset, "bottomup", merges)
        want = b2tok_delta(inst.J, inst.C, inst.satisfied(s))
        if value != want:
            report.fail(f"forward: assignment {s} gives {value}, expected {want}")
        for (a, b), (string, _) in zip(inst.clauses, d5):
            sat = _clause_sat(a, b, s)
            got = len(bottomup_apply(merges, string))
            if got != (2 if sat else 3):
                report.fail(f"clause row ({a},{b}) under {s}: {got} tokens")
        vocab = ope_vocab(merges, Alphabet.binary())
        if not check_sat_compliance(vocab, inst.J, "bottomup").compliant:
            report.fail(f"extracted vocabulary of {s} is not compliant")
        elif extract_assignment(vocab, inst.J, "bottomup") != s:
            report.fail(f"round trip lost assignment {s}")
        direct_value = total_length(dataset, "direct", vocab)
        if direct_value != want:
            report.fail(f"direct encoding of extracted vocabulary for {s}: {direct_value}, expected {want}")
        if best is None or direct_value < best:
            best, best_vocab = direct_value, vocab
    report.reduced_optimum = best
    if best != report.predicted:
        report.fail(f"compliant optimum {best} differs from predicted {report.predicted}")
    if probe and best_vocab is not None:
        report.methods.append("1-swap-probe")
        swap = _SwapProbe(dataset).best_swap(best_vocab)
        if swap is not None and swap[0] < 0:
            report.fail(f"swap {swap[1]} -> {swap[2]} improves the compliant optimum by {-swap[0]}")
    _sweep_max2sat(report, inst, f_star, best, b2tok_delta)
    return report


def _clause_sat(a: int, b: int, s: Sequence[bool]) -> bool:
    return any(bool(s[abs(l) - 1]) == (l > 0) for l in (a, b))


# ---------------------------------------------------------------- vertex cover


def verify_d1tok_equivalence(
    inst: VcInstance, n_cap: int = 4, budget: SearchBudget | BudgetMeter | None = None
) -> EquivalenceReport:
    if inst.n > n_cap:
        raise ValidationError(f"n={inst.n} exceeds the cap {n_cap}")
    report = EquivalenceReport(_describe(inst), methods=["restricted-oracle"])
    report.notes.append("unary candidates restricted to the target lengths")
    meter = _meter(budget)
    cover, size = solve_vc_exact(inst)
    report.source_optimum = size
    for k in range(inst.n + 1):
        ik = inst.with_k(k)
        red = reduce_vc_to_d1tok(ik)
        lengths, value = solve_unary_direct_exact(red.dataset, red.kappa, budget=meter)
        if k == inst.k:
            report.reduced_optimum = value
            report.predicted = red.delta
        yes = value <= red.delta
        report.record(k, size <= k, yes)
        if size <= k:
            wit = build_vc_witness(ik, cover)
            cert = certificate_for(red.dataset, wit)
            if not verify_unary_certificate(red.dataset, cert, red.kappa, red.delta):
                report.fail(f"witness certificate rejected at k={k}")
        if yes:
            try:
                got = extract_cover(lengths, ik)
            except ValidationError as exc:
                report.fail(f"cover extraction at k={k}: {exc}")
            else:
                if len(got) > k:
                    report.fail(f"extracted cover {sorted(got)} too large at k={k}")
    report.check_monotone(yes_when_larger=True)
    return report


# ---------------------------------------------------------------- addition chains


def min_ope_merges(dataset: Dataset, delta: int, limit: int, budget=None) -> tuple[int, tuple] | None:
    """Fewest reachable merges reaching total <= delta, trying 0..limit."""
    meter = _meter(budget)
    for kappa in range(limit + 1):
        merges, value = solve_ope_exact(dataset, kappa, meter, threshold=delta)
        if merges is not None:
            return kappa, merges
    return None


def verify_uope_equivalence(
    inst: AddChainInstance, max_target: int = 24, zeta_cap: int = 6, budget=None
) -> EquivalenceReport:
    if max(inst.targets) > max_target:
        raise ValidationError(f"targets exceed the cap {max_target}")
    report = EquivalenceReport(_describe(inst), methods=["full-oracle"])
    meter = _meter(budget)
    chain, R = solve_addchain_exact(inst, meter)
    report.source_optimum = R
    red = reduce_addchain_to_uope(inst)
    report.predicted = red.delta
    limit = max(R + 1, zeta_cap)
    found = min_ope_merges(red.dataset, red.delta, limit, meter)
    if found is None:
        report.fail(f"no OPE tokeniser with at most {limit} merges reaches {red.delta}")
        return report
    kmin, merges = found
    report.reduced_optimum = kmin
    if kmin != R:
        report.fail(f"minimal merges {kmin} differ from minimal chain length {R}")
    extracted = extract_addchain(merges)
    if not inst.targets <= set(extracted) or len(extracted) - 1 > kmin:
        report.fail(f"extracted chain {extracted} does not cover the targets within {kmin} steps")
    wit = build_addchain_witness(chain, lengths=True)
    if total_length(red.dataset, "ope", wit) != red.delta:
        report.fail("chain witness does not reach the token threshold")
    for zeta in range(R + 2):
        report.record(zeta, R <= zeta, zeta >= kmin)
    report.check_monotone(yes_when_larger=True)
    return report


# ---------------------------------------------------------------- greedy BPE and ratios


def greedy_bpe_train(dataset: Dataset, kappa: int, trace: list | None = None) -> tuple[Merge, ...]:
    """kappa merges, each the most frequent adjacent pair (ties: smallest pair).

    When no adjacent pair is left the sequence is padded with no-op merges;
    a frequency of 0 in `trace` marks them.
    """
    if kappa < 0:
        raise ValidationError("kappa must be nonnegative")
    if dataset.is_length:
        dataset = dataset.to_explicit()
    state = [(list(p), m) for p, m in dataset.entries]
    merges: list[Merge] = []
    for _ in range(kappa):
        freq: dict[Merge, int] = {}
        for toks, m in state:
            for i in range(len(toks) - 1):
                pair = (toks[i], toks[i + 1])
                freq[pair] = freq.get(pair, 0) + m
        if not freq:
            sym = dataset.alphabet.symbols[0]
            merges.append((sym, sym))
            if trace is not None:
                trace.append(0)
            continue
        top = max(freq.values())
        pair = min(p for p, f in freq.items() if f == top)
        merges.append(pair)
        if trace is not None:
            trace.append(top)
        state = [(_merge_list(toks, pair), m) for toks, m in state]
    return tuple(merges)


def _merge_list(toks: list[str], pair: Merge) -> list[str]:
    out = []
    i, n = 0, len(toks)
    while i < n:
        if i + 1 < n and toks[i] == pair[0] and toks[i + 1] == pair[1]:
            out.append(pair[0] + pair[1])
            i += 2
        else:
            out.append(toks[i])
            i += 1
    return out


@dataclass(frozen=True)
class RatioReport:
    mode: str
    kappa: int
    achieved: int
    optimal: int | None
    raw: int
    ratio_length: Fraction | None
    ratio_reduce: Fraction | None
    lower_bound_only: bool
    note: str = ""

    def to_text(self) -> str:
        tag = " (lower bound: optimum not certified)" if self.lower_bound_only else ""
        return "\n".join(
            [
                f"mode={self.mode} kappa={self.kappa} raw={self.raw}",
                f"achieved={self.achieved} optimal={self.optimal}",
                f"ratio_length={self.ratio_length}{tag}",
                f"ratio_reduce={self.ratio_reduce}{tag}",
            ]
            + ([self.note] if self.note else [])
        )

    def to_kv(self) -> str:
        return "\n".join(
            f"{k}={v}"
            for k, v in (
                ("mode", self.mode),
                ("kappa", self.kappa),
                ("raw", self.raw),
                ("achieved", self.achieved),
                ("optimal", self.optimal),
                ("ratio_length", self.ratio_length),
                ("ratio_reduce", self.ratio_reduce),
                ("lower_bound_only", int(self.lower_bound_only)),
            )
        )


def _oracle_value(dataset: Dataset, kappa: int, mode: str, budget) -> int:
    if mode == "direct":
        if dataset.is_length:
            return solve_unary_direct_exact(dataset, kappa, budget=budget)[1]
        return solve_direct_exact(dataset, kappa, budget=budget)[1]
    if mode == "bottomup":
        return solve_bottomup_exact(dataset, kappa, budget=budget)[1]
    if mode == "ope":
        return solve_ope_exact(dataset, kappa, budget=budget)[1]
    raise ValidationError(f"unknown mode {mode!r}")


def bench_ratio(
    dataset: Dataset,
    kappa: int,
    mode: str = "bottomup",
    budget: SearchBudget | BudgetMeter | None = None,
    reference: int | None = None,
) -> RatioReport:
    """Greedy BPE against the exact optimum, as exact rationals.

    If the oracle runs out of budget and `reference` (a value known to be
    achievable) is given, the ratios are computed against it and are lower
    bounds on the true ratios.
    """
    merges = greedy_bpe_train(dataset, kappa)
    explicit = dataset.to_explicit() if dataset.is_length and mode == "bottomup" else dataset
    if mode == "direct" and not dataset.is_length:
        achieved = total_length(dataset, "direct", ope_vocab(merges, dataset.alphabet))
    elif mode == "direct":
        lengths = {len(l) + len(r) for l, r in merges}
        achieved = total_length(dataset, "direct", lengths)
    elif mode == "ope" and dataset.is_length:
        achieved = total_length(dataset, "ope", [(len(l), len(r)) for l, r in merges])
    else:
        achieved = total_length(explicit, mode, merges)
    raw = dataset.raw_size()
    lower = False
    note = ""
    try:
        optimal = _oracle_value(dataset, kappa, mode, budget)
    except BudgetExceeded as exc:
        if reference is None:
            return RatioReport(mode, kappa, achieved, None, raw, None, None, True, f"oracle gave up: {exc}")
        optimal, lower = reference, True
        note = f"oracle gave up ({exc}); ratios use an achievable reference value"
    r_len = approximation_ratio(achieved, optimal, "length")
    red_opt, red_ach = raw - optimal, raw - achieved
    r_red = approximation_ratio(red_ach, red_opt, "reduce") if red_ach else None
    return RatioReport(mode, kappa, achieved, optimal, raw, r_len, r_red, lower, note)


# ---------------------------------------------------------------- instance generators


def random_max2sat(J: int, rng: random.Random, target: int = 0, tries: int = 10_000) -> Max2SatInstance:
    """Random instance where every variable occurs exactly three times.

    The 3J literal slots are paired at random into 3J/2 clauses; pairings
    that put a variable with itself are rejected and redrawn.
    """
    if J % 2:
        raise ValidationError("J must be even so that 3J/2 clauses exist")
    slots = [v for v in range(1, J + 1) for _ in range(3)]
    for _ in range(tries):
        rng.shuffle(slots)
        pairs = [(slots[i], slots[i + 1]) for i in range(0, len(slots), 2)]
        if all(a != b for a, b in pairs):
            clauses = tuple((a if rng.random() < 0.5 else -a, b if rng.random() < 0.5 else -b) for a, b in pairs)
            return Max2SatInstance(J, clauses, target)
    raise ValidationError("could not draw a pairing without self-clauses")


def all_graphs(n_max: int, m_max: int) -> list[VcInstance]:
    """Every labelled simple graph with 1..n_max vertices and at most m_max edges."""
    out = []
    for n in range(1, n_max + 1):
        pairs = list(itertools.combinations(range(1, n + 1), 2))
        for m in range(min(m_max, len(pairs)) + 1):
            for edges in itertools.combinations(pairs, m):
                out.append(VcInstance(n, edges, 0))
    return out


# ---------------------------------------------------------------- self test


def run_selftest(rng: random.Random) -> list[tuple[str, bool, str]]:
    """Quick health checks: clause table, constants, sweeps, witnesses, gap ratios."""
    from .reductions import B2TOK, D2TOK, gap_ratio_b2tok, gap_ratio_d2tok
    from .witnesses import build_zero_run_merges, check_sum_identities, replay_clause_table

    checks: list[tuple[str, bool, str]] = []

    def run(name: str, fn) -> None:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check, reported not raised
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        checks.append((name, ok, detail))

    def clause_table():
        inst = random_max2sat(2, rng)
        rows = replay_clause_table(inst, 1, 2) + replay_clause_table(inst, 2, 1)
        bad = [r for r in rows if r[2] != r[3]]
        return not bad, f"{len(rows) - len(bad)}/{len(rows)} rows"

    def constants():
        D2TOK.check()
        B2TOK.check()
        return True, f"direct {D2TOK.c2},{D2TOK.c1},{D2TOK.c}; bottom-up {B2TOK.c3},{B2TOK.c2},{B2TOK.c1},{B2TOK.c}"

    def sweeps():
        rep = check_sum_identities(50)
        return rep.clean, "bound 50"

    def zero_runs():
        for J in range(1, 17):
            m = build_zero_run_merges(J)
            if len(m) != 2 * J - 1 or any(len(bottomup_apply(m, "0" * k)) != 1 for k in range(1, 2 * J + 1)):
                return False, f"J={J}"
        return True, "J=1..16"

    def forward():
        inst = random_max2sat(2, rng)
        a, b = verify_d2tok_equivalence(inst, probe=False), verify_b2tok_equivalence(inst, probe=False)
        return a.passed and b.passed, _describe(inst)

    def gaps():
        ok = gap_ratio_d2tok(0) == Fraction(446213, 446212) and gap_ratio_b2tok(0) == Fraction(7258949, 7258948)
        return ok, f"{gap_ratio_d2tok(0)}, {gap_ratio_b2tok(0)}"

    for name, fn in [("clause-table", clause_table), ("constants", constants), ("sum-identities", sweeps),
                     ("zero-runs", zero_runs), ("forward-witnesses", forward), ("gap-ratios", gaps)]:
        run(name, fn)
    return checks
