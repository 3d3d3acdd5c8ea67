"""Polynomial-time reductions to tokenisation and the gap constructors.

Binary reductions encode variable j by the zero runs y_j = 0^(2j-1) and
n_j = 0^(2j), separated by '1' (and '11' in the bottom-up variant).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (
    AddChainInstance,
    Alphabet,
    Dataset,
    GapInstance,
    Max2SatInstance,
    TokenisationInstance,
    ValidationError,
    VcInstance,
)

SEP = "1"
SEP2 = "11"


@dataclass(frozen=True)
class DirectConstants:
    c2: int = 7
    c1: int = 21
    c: int = 63

    def check(self) -> None:
        if self.c1 != 2 * (self.c2 + 3) + 1 or self.c != 2 * (self.c1 + self.c2 + 3) + 1:
            raise AssertionError("direct reduction multiplicities violate their recurrence")


@dataclass(frozen=True)
class BottomupConstants:
    c3: int = 4
    c2: int = 23
    c1: int = 115
    c: int = 575

    def check(self) -> None:
        ok = (
            self.c2 == 2 * (2 * self.c3 + 3) + 1
            and self.c1 == 2 * (2 * self.c2 + 2 * self.c3 + 3) + 1
            and self.c == 2 * (2 * self.c1 + 2 * self.c2 + 2 * self.c3 + 3) + 1
        )
        if not ok:
            raise AssertionError("bottom-up reduction multiplicities violate their recurrence")


D2TOK = DirectConstants()
B2TOK = BottomupConstants()
D2TOK.check()
B2TOK.check()


def y(j: int) -> str:
    return "0" * (2 * j - 1)


def n(j: int) -> str:
    return "0" * (2 * j)


def literal(lit: int) -> str:
    return y(lit) if lit > 0 else n(-lit)


# ---------------------------------------------------------------- direct, binary


def d2tok_parts(inst: Max2SatInstance) -> dict[str, list[tuple[str, int]]]:
    """The four sub-datasets of the direct reduction, keyed 'D1'..'D4'."""
    k = D2TOK
    J = inst.num_vars
    d1, d2, d3 = [], [], []
    for j in range(1, J + 1):
        d1 += [(SEP + y(j), k.c), (y(j) + SEP, k.c), (SEP + n(j), k.c), (n(j) + SEP, k.c)]
        d2 += [(SEP + y(j) + SEP, k.c1), (SEP + n(j) + SEP, k.c1)]
        d3 += [(SEP + y(j) + SEP + n(j) + SEP, k.c2)]
    d4 = [(SEP + literal(a) + SEP + literal(b) + SEP, 1) for a, b in inst.clauses]
    return {"D1": d1, "D2": d2, "D3": d3, "D4": d4}


def d2tok_delta(J: int, C: int, F) -> int | Fraction:
    return 329 * J + 3 * C - F


def reduce_max2sat_to_d2tok(inst: Max2SatInstance) -> TokenisationInstance:
    parts = d2tok_parts(inst)
    entries = tuple(e for key in ("D1", "D2", "D3", "D4") for e in parts[key])
    dataset = Dataset(entries, Alphabet.binary(), "explicit")
    return TokenisationInstance(dataset, 5 * inst.J, d2tok_delta(inst.J, inst.C, inst.target), "direct")


# ---------------------------------------------------------------- bottom-up, binary


def d5_string(a: int, b: int) -> str:
    """Clause string for the bottom-up reduction, by literal polarities."""
    ja, jb = abs(a), abs(b)
    if a > 0 and b < 0:
        return SEP + y(ja) + SEP + n(jb) + SEP
    if a < 0 and b > 0:
        return SEP + y(jb) + SEP + n(ja) + SEP
    if a < 0 and b < 0:
        return SEP2 + n(ja) + SEP + n(jb) + SEP
    return SEP + y(ja) + SEP + y(jb) + SEP2


def b2tok_parts(inst: Max2SatInstance) -> dict[str, list[tuple[str, int]]]:
    """The five sub-datasets of the bottom-up reduction, keyed 'D1'..'D5'."""
    k = B2TOK
    J = inst.num_vars
    d1 = [(SEP2, k.c)]
    d2, d3, d4 = [], [], []
    for j in range(1, J + 1):
        yj, nj = y(j), n(j)
        d1 += [
            (s, k.c)
            for s in (yj, nj, SEP + yj, yj + SEP, SEP + nj, nj + SEP, yj + SEP2, SEP2 + nj)
        ]
        d2 += [(s, k.c1) for s in (SEP + yj + SEP, SEP + nj + SEP, SEP + yj + SEP2, SEP2 + nj + SEP)]
        d3 += [(s, k.c2) for s in (SEP + yj + SEP + nj + SEP, SEP2 + nj + SEP + yj + SEP2)]
        d4 += [(s, k.c3) for s in (SEP + nj + SEP + yj + SEP2, SEP2 + nj + SEP + yj + SEP)]
    d5 = [(d5_string(a, b), 1) for a, b in inst.clauses]
    return {"D1": d1, "D2": d2, "D3": d3, "D4": d4, "D5": d5}


def b2tok_delta(J: int, C: int, F) -> int | Fraction:
    return 5398 * J + 575 + 3 * C - F


def reduce_max2sat_to_b2tok(inst: Max2SatInstance) -> TokenisationInstance:
    parts = b2tok_parts(inst)
    entries = tuple(e for key in ("D1", "D2", "D3", "D4", "D5") for e in parts[key])
    dataset = Dataset(entries, Alphabet.binary(), "explicit")
    return TokenisationInstance(dataset, 10 * inst.J, b2tok_delta(inst.J, inst.C, inst.target), "bottomup")


# ---------------------------------------------------------------- vertex cover, unary


@dataclass(frozen=True)
class VcEncoding:
    N: int
    B: int
    enc: tuple[int, ...]  # enc[j-1] for vertex j

    def vertex(self, j: int) -> int:
        return self.enc[j - 1]

    def cover(self, j: int) -> int:
        return self.enc[j - 1] + self.B

    def edge(self, u: int, v: int) -> int:
        return self.enc[u - 1] + self.enc[v - 1] + self.B


def vc_encoding(inst: VcInstance) -> VcEncoding:
    N = (inst.n + inst.m + 1) ** 4
    enc = tuple(j + j * j * N + j**3 * N * N for j in range(1, inst.n + 1))
    return VcEncoding(N, N**4, enc)


def base_digits(x: int, N: int, width: int = 5) -> tuple[int, ...]:
    """Base-N digits of x, most significant first, padded to width."""
    out = []
    for _ in range(width):
        x, d = divmod(x, N)
        out.append(d)
    if x:
        raise ValidationError("value does not fit in the requested width")
    return tuple(reversed(out))


def vc_lengths(inst: VcInstance) -> dict[str, list[int]]:
    e = vc_encoding(inst)
    return {
        "vertex": [e.vertex(j) for j in range(1, inst.n + 1)] + [e.B],
        "cover": [e.cover(j) for j in range(1, inst.n + 1)],
        "edge": [e.edge(u, v) for u, v in inst.edges],
    }


def check_vc_structure(inst: VcInstance) -> None:
    """Assert distinct lengths and the expected base-N digit patterns."""
    e = vc_encoding(inst)
    parts = vc_lengths(inst)
    everything = parts["vertex"] + parts["cover"] + parts["edge"]
    if len(set(everything)) != len(everything):
        raise AssertionError("reduced lengths are not pairwise distinct")
    for j in range(1, inst.n + 1):
        if base_digits(e.vertex(j), e.N) != (0, 0, j**3, j * j, j):
            raise AssertionError(f"vertex {j} digit pattern broken")
        if base_digits(e.cover(j), e.N) != (1, 0, j**3, j * j, j):
            raise AssertionError(f"cover {j} digit pattern broken")
    if base_digits(e.B, e.N) != (1, 0, 0, 0, 0):
        raise AssertionError("B digit pattern broken")
    for u, v in inst.edges:
        want = (1, 0, u**3 + v**3, u * u + v * v, u + v)
        if base_digits(e.edge(u, v), e.N) != want:
            raise AssertionError(f"edge ({u},{v}) digit pattern broken")


def reduce_vc_to_d1tok(inst: VcInstance, explicit_cap: int | None = None) -> TokenisationInstance:
    """Unary direct instance in the length representation.

    With explicit_cap set and every length at most the cap, the dataset is
    spelt out as unary strings instead (for cross-checking only).
    """
    check_vc_structure(inst)
    parts = vc_lengths(inst)
    lengths = parts["vertex"] + parts["cover"] + parts["edge"]
    dataset = Dataset.lengths((L, 1) for L in lengths)
    if explicit_cap is not None and max(lengths) <= explicit_cap:
        dataset = dataset.to_explicit()
    kappa = inst.n + 1 + inst.k
    delta = 3 * inst.n + 2 * inst.m + 1 - inst.k
    return TokenisationInstance(dataset, kappa, delta, "direct")


# ---------------------------------------------------------------- addition chains, unary OPE


def reduce_addchain_to_uope(inst: AddChainInstance) -> TokenisationInstance:
    dataset = Dataset.lengths((t, 1) for t in sorted(inst.targets))
    return TokenisationInstance(dataset, inst.zeta, len(inst.targets), "ope")


# ---------------------------------------------------------------- gap instances

D2TOK_BK = (446213, 446212)
B2TOK_BK = (7258949, 7258948)


def gap_ratio_d2tok(epsilon=0) -> Fraction:
    eps = Fraction(epsilon)
    return (D2TOK_BK[0] - eps) / (D2TOK_BK[1] + eps)


def gap_ratio_b2tok(epsilon=0) -> Fraction:
    """Ratio bound for the bottom-up gap, reached as the instance grows."""
    eps = Fraction(epsilon)
    return (B2TOK_BK[0] - eps) / (B2TOK_BK[1] + eps)


def _bk_sizes(inst: Max2SatInstance, n_bk, epsilon) -> tuple[int, Fraction, Fraction]:
    eps = Fraction(epsilon)
    if not 0 <= eps < Fraction(1, 2):
        raise ValidationError("epsilon must lie in [0, 1/2)")
    if n_bk is None:
        if inst.C % 2016:
            raise ValidationError(f"C={inst.C} is not a multiple of 2016; pass n_bk explicitly")
        n_bk = inst.C // 2016
    elif inst.C != 2016 * n_bk:
        raise ValidationError(f"C={inst.C} does not equal 2016*n_bk={2016 * n_bk}")
    f_minus = (2011 + eps) * n_bk
    f_plus = (2012 - eps) * n_bk
    return n_bk, f_minus, f_plus


def make_gap_d2tok(inst: Max2SatInstance, epsilon=0, n_bk: int | None = None) -> GapInstance:
    """Direct gap instance: YES side at most delta_plus, NO side at least delta_minus."""
    _, f_minus, f_plus = _bk_sizes(inst, n_bk, epsilon)
    red = reduce_max2sat_to_d2tok(inst.with_target(0))
    return GapInstance(
        red.dataset,
        red.kappa,
        d2tok_delta(inst.J, inst.C, f_minus),
        d2tok_delta(inst.J, inst.C, f_plus),
        "direct",
        gap_ratio_d2tok(epsilon),
    )


def make_gap_b2tok(inst: Max2SatInstance, epsilon=0, n_bk: int | None = None) -> GapInstance:
    _, f_minus, f_plus = _bk_sizes(inst, n_bk, epsilon)
    red = reduce_max2sat_to_b2tok(inst.with_target(0))
    return GapInstance(
        red.dataset,
        red.kappa,
        b2tok_delta(inst.J, inst.C, f_minus),
        b2tok_delta(inst.J, inst.C, f_plus),
        "bottomup",
        gap_ratio_b2tok(epsilon),
    )
