"""Shared domain types, compression objectives and ratio arithmetic.

Strings are plain Python ``str`` objects whose characters are alphabet
glyphs ('0'/'1' for the binary alphabet, 'a' for the unary one). Unary
inputs that are too long to spell out use the length representation, in
which a string is just its integer length.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal, Sequence, Union

CharString = str
UnaryLength = int
Token = str
Merge = tuple[str, str]
MergeSequence = tuple[Merge, ...]
Assignment = tuple[bool, ...]
Payload = Union[str, int]

Mode = Literal["direct", "bottomup", "ope"]
Representation = Literal["explicit", "length"]
MODES = ("direct", "bottomup", "ope")
REPRESENTATIONS = ("explicit", "length")


class TokhardError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(TokhardError, ValueError):
    """An instance or argument violates its stated invariants."""


class BudgetExceeded(TokhardError):
    """An exact search ran out of its node or time allowance."""


@dataclass(frozen=True)
class SearchBudget:
    """Limits for the exhaustive searches. All values must be positive."""

    max_candidates: int = 100_000
    max_nodes: int = 50_000_000
    time_limit: float = 600.0

    def __post_init__(self) -> None:
        if self.max_candidates <= 0 or self.max_nodes <= 0 or self.time_limit <= 0:
            raise ValidationError("search budget limits must be positive")

    def meter(self) -> "BudgetMeter":
        return BudgetMeter(self)


class BudgetMeter:
    """Counts search nodes against a budget and raises when it runs out."""

    __slots__ = ("budget", "nodes", "_deadline")

    def __init__(self, budget: SearchBudget) -> None:
        self.budget = budget
        self.nodes = 0
        self._deadline = time.monotonic() + budget.time_limit

    def tick(self, n: int = 1) -> None:
        self.nodes += n
        if self.nodes > self.budget.max_nodes:
            raise BudgetExceeded(f"node limit {self.budget.max_nodes} reached")
        if not self.nodes & 0x3FF and time.monotonic() > self._deadline:
            raise BudgetExceeded(f"time limit {self.budget.time_limit}s reached")


def _meter(budget: SearchBudget | BudgetMeter | None) -> BudgetMeter:
    if isinstance(budget, BudgetMeter):
        return budget
    return (budget or SearchBudget()).meter()


@dataclass(frozen=True)
class Alphabet:
    """An ordered set of single-character glyphs."""

    symbols: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.symbols:
            raise ValidationError("alphabet must have at least one symbol")
        if any(len(s) != 1 for s in self.symbols):
            raise ValidationError("alphabet glyphs must be single characters")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValidationError("alphabet glyphs must be distinct")

    @classmethod
    def binary(cls) -> "Alphabet":
        return cls(("0", "1"))

    @classmethod
    def unary(cls) -> "Alphabet":
        return cls(("a",))

    @classmethod
    def of(cls, glyphs: Iterable[str]) -> "Alphabet":
        return cls(tuple(sorted(set(glyphs))))

    @property
    def size(self) -> int:
        return len(self.symbols)

    def check(self, c: str) -> None:
        bad = set(c) - set(self.symbols)
        if bad:
            raise ValidationError(f"symbols {sorted(bad)} not in alphabet {''.join(self.symbols)}")

    def render(self) -> str:
        return "".join(self.symbols)


@dataclass(frozen=True)
class Vocabulary:
    """A token set that always contains every alphabet symbol."""

    tokens: frozenset[str]
    alphabet: Alphabet

    def __post_init__(self) -> None:
        toks = frozenset(self.tokens) | frozenset(self.alphabet.symbols)
        if "" in toks:
            raise ValidationError("tokens must be nonempty")
        for t in toks:
            self.alphabet.check(t)
        object.__setattr__(self, "tokens", toks)

    @classmethod
    def build(cls, tokens: Iterable[str], alphabet: Alphabet) -> "Vocabulary":
        return cls(frozenset(tokens), alphabet)

    @property
    def kappa(self) -> int:
        """Number of non-alphabet tokens."""
        return len(self.tokens) - self.alphabet.size

    def extra(self) -> list[str]:
        """Non-alphabet tokens in (length, content) order."""
        sym = set(self.alphabet.symbols)
        return sorted((t for t in self.tokens if t not in sym), key=lambda t: (len(t), t))

    def __contains__(self, t: object) -> bool:
        return t in self.tokens

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(sorted(self.tokens, key=lambda t: (len(t), t)))


@dataclass(frozen=True)
class Dataset:
    """A multiset of strings stored as (payload, multiplicity) pairs."""

    entries: tuple[tuple[Payload, int], ...]
    alphabet: Alphabet = field(default_factory=Alphabet.binary)
    representation: Representation = "explicit"

    def __post_init__(self) -> None:
        entries = tuple((p, int(m)) for p, m in self.entries)
        object.__setattr__(self, "entries", entries)
        if self.representation not in REPRESENTATIONS:
            raise ValidationError(f"unknown representation {self.representation!r}")
        if self.representation == "length" and self.alphabet.size != 1:
            raise ValidationError("length representation needs a unary alphabet")
        for p, m in entries:
            if m < 1:
                raise ValidationError("multiplicities must be positive")
            if self.representation == "length":
                if not isinstance(p, int) or isinstance(p, bool) or p < 0:
                    raise ValidationError(f"length entry must be a nonnegative int, got {p!r}")
            else:
                if not isinstance(p, str):
                    raise ValidationError(f"explicit entry must be a string, got {p!r}")
                self.alphabet.check(p)

    @classmethod
    def explicit(cls, entries: Iterable[tuple[str, int]], alphabet: Alphabet | None = None) -> "Dataset":
        entries = tuple(entries)
        if alphabet is None:
            alphabet = Alphabet.of("".join(p for p, _ in entries) or "a")
        return cls(entries, alphabet, "explicit")

    @classmethod
    def lengths(cls, entries: Iterable[tuple[int, int]]) -> "Dataset":
        return cls(tuple(entries), Alphabet.unary(), "length")

    @property
    def is_length(self) -> bool:
        return self.representation == "length"

    def size_of(self, payload: Payload) -> int:
        return payload if isinstance(payload, int) else len(payload)

    def raw_size(self) -> int:
        """Total symbol count, weighted by multiplicity."""
        return sum(m * self.size_of(p) for p, m in self.entries)

    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def to_explicit(self) -> "Dataset":
        """Spell a length-representation dataset out as unary strings."""
        if not self.is_length:
            return self
        g = self.alphabet.symbols[0]
        return Dataset(tuple((g * p, m) for p, m in self.entries), self.alphabet, "explicit")


@dataclass(frozen=True)
class TokenisationInstance:
    dataset: Dataset
    kappa: int
    delta: int
    mode: Mode = "direct"

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValidationError(f"unknown mode {self.mode!r}")
        if self.kappa < 0 or self.delta < 0:
            raise ValidationError("kappa and delta must be nonnegative")

    def trivially_no(self) -> bool:
        """Every string needs at least one token, so delta below this floor is hopeless."""
        return self.delta < self.dataset.total_multiplicity()


@dataclass(frozen=True)
class GapInstance:
    """A gap decision instance. Thresholds are exact rationals."""

    dataset: Dataset
    kappa: int
    delta_minus: Fraction
    delta_plus: Fraction
    mode: Mode = "direct"
    ratio_bound: Fraction | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "delta_minus", Fraction(self.delta_minus))
        object.__setattr__(self, "delta_plus", Fraction(self.delta_plus))
        if self.delta_plus > self.delta_minus:
            raise ValidationError("gap instance needs delta_plus <= delta_minus")

    @property
    def ratio(self) -> Fraction:
        """delta_minus / delta_plus for this particular instance."""
        return self.delta_minus / self.delta_plus

    @property
    def integral(self) -> bool:
        return self.delta_minus.denominator == 1 and self.delta_plus.denominator == 1

    def decision(self, side: Literal["plus", "minus"] = "plus") -> TokenisationInstance:
        value = self.delta_plus if side == "plus" else self.delta_minus
        if value.denominator != 1:
            raise ValidationError(f"delta_{side} = {value} is not an integer; refusing to round")
        return TokenisationInstance(self.dataset, self.kappa, int(value), self.mode)


def _lit_var(lit: int) -> int:
    return abs(lit)


@dataclass(frozen=True)
class Max2SatInstance:
    """Two-literal clauses where every variable occurs exactly three times.

    Literals are signed 1-based variable indices; negative means negated.
    """

    num_vars: int
    clauses: tuple[tuple[int, int], ...]
    target: int = 0

    def __post_init__(self) -> None:
        clauses = tuple((int(a), int(b)) for a, b in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if self.num_vars < 0 or self.target < 0:
            raise ValidationError("num_vars and target must be nonnegative")
        counts = [0] * (self.num_vars + 1)
        for clause in clauses:
            for lit in clause:
                v = _lit_var(lit)
                if lit == 0 or v > self.num_vars:
                    raise ValidationError(f"literal {lit} out of range 1..{self.num_vars}")
                counts[v] += 1
        bad = [v for v in range(1, self.num_vars + 1) if counts[v] != 3]
        if bad:
            raise ValidationError(f"variables {bad} do not occur exactly three times")

    @property
    def J(self) -> int:
        return self.num_vars

    @property
    def C(self) -> int:
        return len(self.clauses)

    def satisfied(self, s: Sequence[bool]) -> int:
        """Number of clauses satisfied by assignment s."""
        if len(s) != self.num_vars:
            raise ValidationError(f"assignment has length {len(s)}, expected {self.num_vars}")
        return sum(1 for a, b in self.clauses if _lit_true(a, s) or _lit_true(b, s))

    def with_target(self, target: int) -> "Max2SatInstance":
        return Max2SatInstance(self.num_vars, self.clauses, target)


def _lit_true(lit: int, s: Sequence[bool]) -> bool:
    return bool(s[abs(lit) - 1]) == (lit > 0)


@dataclass(frozen=True)
class VcInstance:
    """A simple graph on vertices 1..n with a cover budget k."""

    n: int
    edges: tuple[tuple[int, int], ...]
    k: int = 0

    def __post_init__(self) -> None:
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValidationError(f"edge ({u},{v}) out of range 1..{self.n}")
            norm.append((min(u, v), max(u, v)))
        if len(set(norm)) != len(norm):
            raise ValidationError("duplicate edge")
        if not 0 <= self.k <= self.n:
            raise ValidationError(f"k={self.k} outside 0..{self.n}")
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    def is_cover(self, cover: Iterable[int]) -> bool:
        cs = set(cover)
        return all(u in cs or v in cs for u, v in self.edges)

    def with_k(self, k: int) -> "VcInstance":
        return VcInstance(self.n, self.edges, k)


@dataclass(frozen=True)
class AddChainInstance:
    targets: frozenset[int]
    zeta: int = 0

    def __post_init__(self) -> None:
        ts = frozenset(int(t) for t in self.targets)
        if not ts:
            raise ValidationError("targets must be nonempty")
        if min(ts) < 1:
            raise ValidationError("targets must be positive")
        if self.zeta < 0:
            raise ValidationError("zeta must be nonnegative")
        object.__setattr__(self, "targets", ts)


@dataclass(frozen=True)
class UnaryCertificate:
    """Vocabulary lengths plus one coin vector per dataset entry."""

    vocab_lengths: tuple[int, ...]
    coin_assignments: tuple[tuple[int, ...], ...]


def concat(subwords: Iterable[str]) -> str:
    """Detokenise: the concatenation of the subwords."""
    return "".join(subwords)


def _check_counts(counts: Sequence[int], dataset: Dataset) -> None:
    if len(counts) != len(dataset.entries):
        raise ValidationError(f"{len(counts)} counts for {len(dataset.entries)} entries")


def objective_length(counts: Sequence[int], dataset: Dataset) -> int:
    """Compressed length: sum of multiplicity times token count."""
    _check_counts(counts, dataset)
    return sum(m * c for (_, m), c in zip(dataset.entries, counts))


def objective_reduce(counts: Sequence[int], dataset: Dataset) -> int:
    """Symbols saved: sum of multiplicity times (|c| - token count), nonnegative."""
    _check_counts(counts, dataset)
    return sum(m * (dataset.size_of(p) - c) for (p, m), c in zip(dataset.entries, counts))


def approximation_ratio(achieved: int, optimal: int, objective: Literal["length", "reduce"] = "length") -> Fraction:
    """Exact ratio; inverted for the reduction objective, which is maximised."""
    if objective == "length":
        if optimal == 0:
            raise ZeroDivisionError("optimal length is zero")
        return Fraction(achieved, optimal)
    if objective == "reduce":
        if achieved == 0:
            raise ZeroDivisionError("achieved reduction is zero")
        return Fraction(optimal, achieved)
    raise ValidationError(f"unknown objective {objective!r}")
