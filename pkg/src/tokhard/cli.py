"""Command-line frontend and the plain-text instance and witness formats.

Formats (lines starting with 'c' are comments):

  .m2s   p m2s <J> <C> <F>            then C lines "<l1> <l2>"
  .vc    p vc <n> <m> <k>             then m lines "<u> <v>"
  .ac    p ac <T> <zeta>              then one line of T targets
  .tok   p tok <alphabet> <entries> <kappa> <delta> <mode> <repr>
         then entry lines "<multiplicity> <payload>", optionally "g <dminus> <dplus>"
  witness lines "v <token>" or "m <left> <right>"
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from fractions import Fraction
from typing import Sequence

from .core import (
    MODES,
    REPRESENTATIONS,
    AddChainInstance,
    Alphabet,
    BudgetExceeded,
    Dataset,
    GapInstance,
    Max2SatInstance,
    SearchBudget,
    TokenisationInstance,
    ValidationError,
    VcInstance,
    Vocabulary,
)

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_BUDGET = 0, 1, 2, 3


class ParseError(ValidationError):
    def __init__(self, lineno: int, msg: str) -> None:
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def _lines(text: str):
    for i, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("c"):
            yield i, line.split()


def _ints(lineno: int, fields: Sequence[str]) -> list[int]:
    try:
        return [int(f) for f in fields]
    except ValueError:
        raise ParseError(lineno, f"expected integers, got {' '.join(fields)!r}") from None


def _header(text: str, kind: str, width: int):
    body = list(_lines(text))
    if not body:
        raise ParseError(0, "empty file")
    lineno, head = body[0]
    if head[0] != "p" or len(head) < 2 or head[1] != kind:
        raise ParseError(lineno, f"expected header 'p {kind} ...'")
    if len(head) != width:
        raise ParseError(lineno, f"header needs {width - 2} fields")
    return head, body[1:]


def sniff(text: str) -> str:
    """The format keyword of a file's header line."""
    for lineno, fields in _lines(text):
        if fields[0] != "p" or len(fields) < 2:
            raise ParseError(lineno, "first non-comment line must be a 'p' header")
        return fields[1]
    raise ParseError(0, "empty file")


# ---------------------------------------------------------------- m2s


def parse_m2s(text: str) -> Max2SatInstance:
    head, body = _header(text, "m2s", 5)
    J, C, F = _ints(1, head[2:])
    if len(body) != C:
        raise ParseError(body[-1][0] if body else 1, f"expected {C} clause lines, found {len(body)}")
    clauses = []
    for lineno, fields in body:
        if len(fields) != 2:
            raise ParseError(lineno, "clause lines hold exactly two literals")
        clauses.append(tuple(_ints(lineno, fields)))
    try:
        return Max2SatInstance(J, tuple(clauses), F)
    except ValidationError as exc:
        raise ParseError(1, str(exc)) from None


def render_m2s(inst: Max2SatInstance) -> str:
    lines = [f"p m2s {inst.J} {inst.C} {inst.target}"]
    lines += [f"{a} {b}" for a, b in inst.clauses]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- vc


def parse_vc(text: str) -> VcInstance:
    head, body = _header(text, "vc", 5)
    n, m, k = _ints(1, head[2:])
    if len(body) != m:
        raise ParseError(body[-1][0] if body else 1, f"expected {m} edge lines, found {len(body)}")
    edges = []
    for lineno, fields in body:
        if len(fields) != 2:
            raise ParseError(lineno, "edge lines hold exactly two vertices")
        edges.append(tuple(_ints(lineno, fields)))
    try:
        return VcInstance(n, tuple(edges), k)
    except ValidationError as exc:
        raise ParseError(1, str(exc)) from None


def render_vc(inst: VcInstance) -> str:
    lines = [f"p vc {inst.n} {inst.m} {inst.k}"] + [f"{u} {v}" for u, v in inst.edges]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- ac


def parse_ac(text: str) -> AddChainInstance:
    head, body = _header(text, "ac", 4)
    T, zeta = _ints(1, head[2:])
    if len(body) != 1:
        raise ParseError(1, "expected exactly one line of targets")
    lineno, fields = body[0]
    targets = _ints(lineno, fields)
    if len(targets) != T or len(set(targets)) != T:
        raise ParseError(lineno, f"expected {T} distinct targets")
    try:
        return AddChainInstance(frozenset(targets), zeta)
    except ValidationError as exc:
        raise ParseError(lineno, str(exc)) from None


def render_ac(inst: AddChainInstance) -> str:
    ts = sorted(inst.targets)
    return f"p ac {len(ts)} {inst.zeta}\n{' '.join(map(str, ts))}\n"


# ---------------------------------------------------------------- tok


def _alphabet_field(lineno: int, field: str) -> Alphabet:
    try:
        return Alphabet(tuple(field))
    except ValidationError as exc:
        raise ParseError(lineno, str(exc)) from None


def parse_tok(text: str) -> TokenisationInstance | GapInstance:
    head, body = _header(text, "tok", 8)
    alphabet = _alphabet_field(1, head[2])
    entries_n, kappa, delta = _ints(1, head[3:6])
    mode, rep = head[6], head[7]
    if mode not in MODES:
        raise ParseError(1, f"unknown mode {mode!r}")
    if rep not in REPRESENTATIONS:
        raise ParseError(1, f"unknown representation {rep!r}")
    gap = None
    entries = []
    for lineno, fields in body:
        if fields[0] == "g":
            if gap is not None or len(fields) != 3:
                raise ParseError(lineno, "gap line is 'g <dminus> <dplus>' and may appear once")
            try:
                gap = (Fraction(fields[1]), Fraction(fields[2]))
            except ValueError:
                raise ParseError(lineno, "gap thresholds must be rationals") from None
            continue
        if len(fields) != 2:
            raise ParseError(lineno, "entry lines are '<multiplicity> <payload>'")
        (mult,) = _ints(lineno, fields[:1])
        payload = _ints(lineno, fields[1:])[0] if rep == "length" else fields[1]
        entries.append((payload, mult))
    if len(entries) != entries_n:
        raise ParseError(1, f"header promises {entries_n} entries, found {len(entries)}")
    try:
        dataset = Dataset(tuple(entries), alphabet, rep)
        if gap is not None:
            return GapInstance(dataset, kappa, gap[0], gap[1], mode)
        return TokenisationInstance(dataset, kappa, delta, mode)
    except ValidationError as exc:
        raise ParseError(1, str(exc)) from None


def render_tok(inst: TokenisationInstance | GapInstance) -> str:
    ds = inst.dataset
    if isinstance(inst, GapInstance):
        if not inst.integral:
            raise ValidationError("gap thresholds are not integers; refusing to emit a decision file")
        delta = int(inst.delta_plus)
    else:
        delta = inst.delta
    lines = [f"p tok {ds.alphabet.render()} {len(ds.entries)} {inst.kappa} {delta} {inst.mode} {ds.representation}"]
    lines += [f"{m} {p}" for p, m in ds.entries]
    if isinstance(inst, GapInstance):
        lines.append(f"g {inst.delta_minus} {inst.delta_plus}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- witnesses


def parse_witness(text: str, representation: str = "explicit"):
    """A token set ('v' lines) or a merge sequence ('m' lines)."""
    tokens: list = []
    merges: list = []
    conv = int if representation == "length" else str
    for lineno, fields in _lines(text):
        try:
            if fields[0] == "v" and len(fields) == 2:
                tokens.append(conv(fields[1]))
            elif fields[0] == "m" and len(fields) == 3:
                merges.append((conv(fields[1]), conv(fields[2])))
            else:
                raise ParseError(lineno, "witness lines are 'v <token>' or 'm <left> <right>'")
        except ValueError:
            raise ParseError(lineno, "length witnesses hold decimal integers") from None
    if tokens and merges:
        raise ParseError(0, "a witness holds either tokens or merges, not both")
    return ("merges", tuple(merges)) if merges else ("vocab", tuple(tokens))


def render_witness(witness) -> str:
    if isinstance(witness, Vocabulary):
        return "".join(f"v {t}\n" for t in witness.extra())
    items = list(witness)
    if items and isinstance(items[0], tuple):
        return "".join(f"m {l} {r}\n" for l, r in items)
    return "".join(f"v {t}\n" for t in sorted(items))


# ---------------------------------------------------------------- commands


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit(args, pairs: list[tuple[str, object]]) -> None:
    if args.report == "kv":
        print("\n".join(f"{k}={v}" for k, v in pairs))
    else:
        width = max(len(k) for k, _ in pairs)
        print("\n".join(f"{k.replace('_', ' '):<{width}} : {v}" for k, v in pairs))


def _parse_source(text: str):
    kind = sniff(text)
    parsers = {"m2s": parse_m2s, "vc": parse_vc, "ac": parse_ac, "tok": parse_tok}
    if kind not in parsers:
        raise ParseError(1, f"unknown format {kind!r}")
    return kind, parsers[kind](text)


def cmd_reduce(args) -> int:
    from . import reductions as R

    kind, inst = _parse_source(_read(args.src))
    table = {
        "d2tok": ("m2s", R.reduce_max2sat_to_d2tok),
        "b2tok": ("m2s", R.reduce_max2sat_to_b2tok),
        "d1tok": ("vc", R.reduce_vc_to_d1tok),
        "uope": ("ac", R.reduce_addchain_to_uope),
    }
    need, fn = table[args.to]
    if kind != need:
        raise ValidationError(f"--to {args.to} needs a .{need} source, got .{kind}")
    _write(render_tok(fn(inst)), args.output)
    return EXIT_OK


def _tok_instance(path: str) -> TokenisationInstance:
    inst = _parse_source(_read(path))[1]
    if isinstance(inst, GapInstance):
        return inst.decision("plus")
    if not isinstance(inst, TokenisationInstance):
        raise ValidationError(f"{path} is not a .tok instance")
    return inst


def cmd_encode(args) -> int:
    from .encoders import total_length

    inst = _tok_instance(args.tok)
    ds = inst.dataset
    kind, items = parse_witness(_read(args.witness), ds.representation)
    if inst.mode == "direct":
        if kind != "vocab":
            raise ValidationError("direct instances take a 'v' witness")
        tok = set(items) if ds.is_length else Vocabulary(frozenset(items), ds.alphabet)
        size = len(set(items) - {1}) if ds.is_length else tok.kappa
    else:
        if kind != "merges":
            raise ValidationError(f"{inst.mode} instances take an 'm' witness")
        tok = items
        size = len(items)
    budget = _budget(args)
    value = total_length(ds, inst.mode, tok, budget)
    ok = value <= inst.delta and size <= inst.kappa
    _emit(args, [("mode", inst.mode), ("tokens_or_merges", size), ("kappa", inst.kappa),
                 ("total", value), ("delta", inst.delta), ("verdict", "YES" if ok else "NO")])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_solve(args) -> int:
    from . import oracles as O

    kind, inst = _parse_source(_read(args.file))
    budget = _budget(args)
    if kind == "m2s":
        s, f = O.solve_max2sat_exact(inst)
        _emit(args, [("F_star", f), ("assignment", "".join("1" if v else "0" for v in s)),
                     ("target", inst.target), ("verdict", "YES" if f >= inst.target else "NO")])
        return EXIT_OK
    if kind == "vc":
        cover, size = O.solve_vc_exact(inst)
        _emit(args, [("min_cover", size), ("cover", ",".join(map(str, sorted(cover)))),
                     ("k", inst.k), ("verdict", "YES" if size <= inst.k else "NO")])
        return EXIT_OK
    if kind == "ac":
        chain, R = O.solve_addchain_exact(inst, budget)
        _emit(args, [("min_length", R), ("chain", ",".join(map(str, chain))),
                     ("zeta", inst.zeta), ("verdict", "YES" if R <= inst.zeta else "NO")])
        return EXIT_OK
    if isinstance(inst, GapInstance):
        inst = inst.decision("plus")
    ds = inst.dataset
    pairs: list[tuple[str, object]] = [("mode", inst.mode), ("kappa", inst.kappa)]
    if inst.mode == "direct" and ds.is_length:
        best, value = O.solve_unary_direct_exact(ds, inst.kappa, budget=budget)
        pairs.append(("method", "restricted-oracle (candidates = target lengths)"))
        witness = sorted(best)
    elif inst.mode == "direct":
        best, value = O.solve_direct_exact(ds, inst.kappa, budget=budget)
        witness = best
    elif inst.mode == "bottomup":
        witness, value = O.solve_bottomup_exact(ds, inst.kappa, budget=budget)
    else:
        witness, value = O.solve_ope_exact(ds, inst.kappa, budget=budget)
    pairs += [("delta_star", value), ("delta", inst.delta), ("verdict", "YES" if value <= inst.delta else "NO")]
    _emit(args, pairs)
    if args.output:
        _write(render_witness(witness), args.output)
    return EXIT_OK


def _csv_ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def cmd_witness(args) -> int:
    from . import oracles as O
    from . import witnesses as W

    kind, inst = _parse_source(_read(args.src))
    if kind == "m2s":
        if args.assignment:
            bits = args.assignment.replace(",", "")
            if set(bits) - {"0", "1"}:
                raise ValidationError("--assignment is a 0/1 string, e.g. 10 or 1,0")
            s = tuple(b == "1" for b in bits)
        else:
            s = O.solve_max2sat_exact(inst)[0]
        if args.to == "b2tok":
            _write(render_witness(W.build_bottomup_witness(inst, s)), args.output)
        else:
            _write(render_witness(W.build_direct_witness(inst, s)), args.output)
        return EXIT_OK
    if kind == "vc":
        cover = _csv_ints(args.cover) if args.cover else O.solve_vc_exact(inst)[0]
        _write(render_witness(W.build_vc_witness(inst, cover)), args.output)
        return EXIT_OK
    if kind == "ac":
        chain = _csv_ints(args.chain) if args.chain else O.solve_addchain_exact(inst, _budget(args))[0]
        _write(render_witness(W.build_addchain_witness(chain, lengths=True)), args.output)
        return EXIT_OK
    raise ValidationError("witness needs a .m2s, .vc or .ac source")


def cmd_verify(args) -> int:
    from . import harness as H

    kind, inst = _parse_source(_read(args.src))
    budget = _budget(args)
    if kind == "m2s":
        targets = ["d2tok", "b2tok"] if args.to is None else [args.to]
        reports = [
            H.verify_d2tok_equivalence(inst) if t == "d2tok" else H.verify_b2tok_equivalence(inst)
            for t in targets
        ]
    elif kind == "vc":
        reports = [H.verify_d1tok_equivalence(inst, n_cap=args.n_cap, budget=budget)]
    elif kind == "ac":
        reports = [H.verify_uope_equivalence(inst, budget=budget)]
    else:
        raise ValidationError("verify needs a .m2s, .vc or .ac source")
    for r in reports:
        print(r.to_kv() if args.report == "kv" else r.to_text())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_gap(args) -> int:
    from . import reductions as R

    inst = parse_m2s(_read(args.m2s))
    eps = Fraction(args.epsilon)
    pairs: list[tuple[str, object]] = [
        ("epsilon", eps),
        ("direct_ratio_bound", R.gap_ratio_d2tok(eps)),
        ("bottomup_ratio_bound", R.gap_ratio_b2tok(eps)),
    ]
    conforming = args.n_bk is not None or inst.C % 2016 == 0
    if conforming:
        gap = R.make_gap_b2tok(inst, eps, args.n_bk) if args.to == "b2tok" else R.make_gap_d2tok(inst, eps, args.n_bk)
        pairs += [("delta_minus", gap.delta_minus), ("delta_plus", gap.delta_plus), ("instance_ratio", gap.ratio)]
        if args.output:
            _write(render_tok(gap), args.output)
    else:
        pairs.append(("instance", f"not emitted: C={inst.C} is not a multiple of 2016"))
    _emit(args, pairs)
    return EXIT_OK


def cmd_bench(args) -> int:
    from .harness import bench_ratio

    inst = _tok_instance(args.tok)
    rep = bench_ratio(inst.dataset, inst.kappa, inst.mode, _budget(args), reference=args.reference)
    print(rep.to_kv() if args.report == "kv" else rep.to_text())
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .harness import run_selftest

    checks = run_selftest(random.Random(args.seed))
    for name, ok, detail in checks:
        if args.report == "kv":
            print(f"{name}={'PASS' if ok else 'FAIL'}")
        else:
            print(f"{'PASS' if ok else 'FAIL'} {name}{': ' + detail if detail else ''}")
    return EXIT_OK if all(ok for _, ok, _ in checks) else EXIT_FAIL


def _budget(args) -> SearchBudget:
    kw = {}
    if args.budget_nodes is not None:
        kw["max_nodes"] = args.budget_nodes
    if args.budget_seconds is not None:
        kw["time_limit"] = args.budget_seconds
    return SearchBudget(**kw)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _global_flags(p: argparse.ArgumentParser, defaults: bool) -> None:
    env_seconds = os.environ.get("TOKHARD_BUDGET_SECONDS")

    def d(value):
        return value if defaults else argparse.SUPPRESS

    p.add_argument("--budget-nodes", type=int, default=d(None), help="node limit for exact searches")
    p.add_argument("--budget-seconds", type=float, default=d(float(env_seconds) if env_seconds else None),
                   help="time limit for exact searches (env TOKHARD_BUDGET_SECONDS)")
    p.add_argument("--report", choices=("text", "kv"), default=d("text"))
    p.add_argument("--seed", type=int, default=d(0))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tokhard", description="Tokenisation hardness reductions, witnesses and exact oracles.")
    _global_flags(p, defaults=True)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, defaults=False)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    s = sub.add_parser("reduce", help="emit the reduced .tok instance")
    s.add_argument("src")
    s.add_argument("--to", required=True, choices=("d2tok", "b2tok", "d1tok", "uope"))
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("encode", help="score a witness on a .tok instance")
    s.add_argument("tok")
    s.add_argument("--witness", required=True)
    s.set_defaults(func=cmd_encode)

    s = sub.add_parser("solve", help="run the exact oracle matching the file")
    s.add_argument("file")
    s.add_argument("-o", "--output", help="write the optimal witness here (.tok only)")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("witness", help="build the forward witness for a source instance")
    s.add_argument("src")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--assignment")
    g.add_argument("--cover")
    g.add_argument("--chain")
    s.add_argument("--to", choices=("d2tok", "b2tok"), default="d2tok")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("verify", help="run the equivalence pipeline on a source instance")
    s.add_argument("src")
    s.add_argument("--to", choices=("d2tok", "b2tok"))
    s.add_argument("--n-cap", type=int, default=4)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("gap", help="gap thresholds and inapproximability ratio bounds")
    s.add_argument("m2s")
    s.add_argument("--epsilon", default="0")
    s.add_argument("--n-bk", type=int, default=None)
    s.add_argument("--to", choices=("d2tok", "b2tok"), default="d2tok")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gap)

    s = sub.add_parser("bench", help="greedy BPE against the exact optimum")
    s.add_argument("tok")
    s.add_argument("--greedy", action="store_true", default=True, help="greedy BPE baseline (the only one)")
    s.add_argument("--reference", type=int, default=None, help="achievable value to compare against if the oracle gives up")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("selftest", help="clause-table replay, constants, sweeps")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValidationError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
