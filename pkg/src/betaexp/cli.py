"""Command-line interface.

Every subcommand prints text by default and a versioned JSON document with
``--format json`` (CSV for the tabular stats outputs).  Exit codes: 0 on
success, 2 on domain errors, 3 on precision/horizon failures, 4 when a digit
budget ran out (partial artifacts are still written).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import branching, stats
from . import normalize as _norm_module  # noqa: F401  (keeps submodule loaded)
from .normalize import (
    enumerate_equivalent_words,
    finitary_universalize,
    normalize as normalize_word,
    universal_expansion,
)
from .errors import (
    BetaExpError,
    BudgetExhaustedError,
    DomainError,
    ParseError,
    ResolutionError,
)
from .expansion import (
    greedy_expansion,
    lazy_expansion,
    quasi_greedy_of_one,
    val_beta,
)
from .numeric import Beta, FieldValue, fraction_to_decimal, make_beta
from .words import check_word

EXIT_DOMAIN = 2
EXIT_RESOLUTION = 3
EXIT_BUDGET = 4


# ---------------------------------------------------------------------------
# x-specification: rational | decimal | val:<word> | random:<seed> | expr:...
# ---------------------------------------------------------------------------

class _ExprParser:
    """Tiny recursive-descent parser for rational expressions in beta."""

    def __init__(self, text: str, beta: Beta):
        self.text = text.replace(" ", "")
        self.pos = 0
        self.beta = beta

    def parse(self) -> FieldValue:
        v = self._expr()
        if self.pos != len(self.text):
            raise ParseError(f"trailing input in expression: {self.text[self.pos:]!r}")
        return v

    def _peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expr(self):
        v = self._term()
        while self._peek() and self._peek() in "+-":
            op = self.text[self.pos]
            self.pos += 1
            rhs = self._term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def _term(self):
        v = self._factor()
        while self._peek() and self._peek() in "*/":
            op = self.text[self.pos]
            self.pos += 1
            rhs = self._factor()
            v = v * rhs if op == "*" else v / rhs
        return v

    def _factor(self):
        ch = self._peek()
        if ch == "(":
            self.pos += 1
            v = self._expr()
            if self._peek() != ")":
                raise ParseError("unbalanced parenthesis in expression")
            self.pos += 1
            return v
        if ch == "-":
            self.pos += 1
            return -self._factor()
        if self.text.startswith("beta", self.pos):
            self.pos += 4
            return self.beta.beta_value()
        start = self.pos
        while self._peek().isdigit() or self._peek() == ".":
            self.pos += 1
        if start == self.pos:
            raise ParseError(f"unexpected character {ch!r} in expression")
        return self.beta.from_fraction(Fraction(self.text[start:self.pos]))


def random_point(seed: int) -> Fraction:
    """Deterministic dyadic rational strictly inside (0, 1)."""
    rng = random.Random(seed)
    return Fraction(rng.getrandbits(53) + 1, (1 << 53) + 2)


def resolve_x(spec: str, beta: Beta) -> FieldValue:
    spec = spec.strip()
    if spec.startswith("val:"):
        return val_beta(check_word(spec[4:]), beta)
    if spec.startswith("random:"):
        return beta.from_fraction(random_point(int(spec[7:])))
    if spec.startswith("expr:"):
        return _ExprParser(spec[5:], beta).parse()
    try:
        return beta.from_fraction(Fraction(spec))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"cannot parse x specification {spec!r}") from exc


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _emit(args, payload: dict, text: str):
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    elif args.format == "csv" and "csv" in payload:
        for row in payload["csv"]:
            print(",".join(str(c) for c in row))
    else:
        print(text)


def _beta_meta(beta: Beta) -> dict:
    return {"kind": beta.kind, "describe": beta.describe(),
            "approx": beta.float_value()}


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_expand(args):
    beta = make_beta(args.beta)
    if args.mode == "quasi-greedy-one":
        res = quasi_greedy_of_one(beta, args.n)
        payload = {"schema": "betaexp.expand/1", "beta": _beta_meta(beta),
                   "mode": args.mode, "n": args.n, "digits": res.word,
                   "exact_form": res.eps.serialize() if res.eps else None,
                   "status": res.status}
        _emit(args, payload, res.word)
        return 0
    if not args.x:
        raise ParseError("--x is required for greedy/lazy modes")
    x = resolve_x(args.x, beta)
    fn = greedy_expansion if args.mode == "greedy" else lazy_expansion
    digits = fn(x, beta, args.n)
    payload = {"schema": "betaexp.expand/1", "beta": _beta_meta(beta),
               "mode": args.mode, "n": args.n, "digits": digits}
    _emit(args, payload, digits)
    return 0


def cmd_normalize(args):
    beta = make_beta(args.beta)
    out_len = args.out_len or len(args.word)
    res = normalize_word(args.word, beta, out_len)
    payload = {"schema": "betaexp.normalize/1", "beta": _beta_meta(beta),
               "word": args.word, "normalized": res.word,
               "finite": res.finite, "value_is_one": res.value_is_one}
    _emit(args, payload, res.word)
    return 0


def cmd_equiv_class(args):
    beta = make_beta(args.beta)
    words = sorted(enumerate_equivalent_words(args.word, beta))
    payload = {"schema": "betaexp.equiv/1", "beta": _beta_meta(beta),
               "word": args.word, "class": words}
    _emit(args, payload, "{" + ",".join(words) + "}")
    return 0


def cmd_universalize(args):
    beta = make_beta(args.beta)
    x = resolve_x(args.x, beta)
    runner = finitary_universalize if args.finitary else universal_expansion
    try:
        res = runner(x, beta, args.level, args.budget)
    except BudgetExhaustedError as exc:
        res = exc.partial
    universal, missing = stats.is_universal_prefix(res.word, args.level)
    payload = {"schema": "betaexp.universalize/1", "beta": _beta_meta(beta),
               "x": args.x, "level": args.level, "budget": args.budget,
               "completed": res.completed, "digits": res.word,
               "census": {"universal": universal, "missing": missing}}
    if hasattr(res, "report"):
        payload["report"] = res.report()
    else:
        payload["report"] = [{"target": r.target, "padded": r.padded,
                              "normalized": r.normalized, "position": r.position,
                              "replaced": r.replaced} for r in res.records]
    text = res.word if res.completed else f"INCOMPLETE {res.word}"
    _emit(args, payload, text)
    return 0 if res.completed else EXIT_BUDGET


def cmd_tree(args):
    beta = make_beta(args.beta)
    x = resolve_x(args.x, beta)
    tree = branching.expand_tree(x, beta, args.depth)
    if args.dot:
        print(tree.to_dot())
        return 0
    if args.format == "json":
        print(tree.to_json())
        return 0
    for path in tree.paths():
        print(path)
    return 0


def cmd_unique(args):
    beta = make_beta(args.beta)
    x = resolve_x(args.x, beta)
    verdict = branching.is_unique_expansion(x, beta, args.horizon)
    payload = {"schema": "betaexp.unique/1", "beta": _beta_meta(beta),
               "x": args.x, "verdict": verdict.kind, "depth": verdict.depth,
               "witness": verdict.witness}
    _emit(args, payload, str(verdict))
    return 0


def cmd_gamma(args):
    beta = make_beta(args.beta)
    x = resolve_x(args.x, beta)
    report = branching.branching_compactum_prefix(
        x, beta, args.depth, digit_horizon=args.digit_horizon)
    payload = {"schema": "betaexp.gamma/1", "beta": _beta_meta(beta),
               "x": args.x, "gamma_depth": report.gamma_depth,
               "realized": sorted(report.realized),
               "padded": sorted(report.padded),
               "partial": sorted(report.partial),
               "full": report.is_full()}
    text = "\n".join(sorted(report.realized)) + \
        ("\nFULL" if report.is_full() else "\nNOT-FULL")
    _emit(args, payload, text)
    return 0


def cmd_kl_constant(args):
    value = branching.komornik_loreti(args.digits)
    payload = {"schema": "betaexp.kl/1", "digits": args.digits, "value": value}
    _emit(args, payload, value)
    return 0


def cmd_tm_word(args):
    if args.prefix:
        word = branching.thue_morse(args.prefix)
        payload = {"schema": "betaexp.tm/1", "prefix": args.prefix, "word": word}
    else:
        word = branching.tm_word(args.n)
        payload = {"schema": "betaexp.tm/1", "n": args.n, "word": word}
    _emit(args, payload, word)
    return 0


def cmd_dim_estimate(args):
    beta = make_beta(args.beta)
    est = branching.estimate_unique_dim(beta, args.n)
    payload = {"schema": "betaexp.dim/1", "beta": _beta_meta(beta),
               "n": est.n, "count": est.count, "estimate": est.estimate}
    _emit(args, payload, f"{est.estimate:.6f} (count={est.count})")
    return 0


def _stats_word(args) -> str:
    if args.word:
        return check_word(args.word)
    data = sys.stdin.read().split()
    if not data:
        raise ParseError("no word given (use --word or pipe digits on stdin)")
    return check_word(data[-1])


def cmd_stats(args):
    w = _stats_word(args)
    if args.complexity:
        profile = stats.complexity(w, args.complexity)
        payload = profile.to_json()
        payload["csv"] = list(profile.csv_rows())
        text = "\n".join(f"p({n})={c}" for n, c in sorted(profile.counts.items()))
        _emit(args, payload, text)
        return 0
    if args.normality:
        rep = stats.normality_deviation(w, args.normality)
        payload = {"schema": "betaexp.normality/1", "deviation": rep.deviation,
                   "worst_block": rep.worst_block, "k": rep.block_length}
        _emit(args, payload,
              f"deviation={rep.deviation:.6f} block={rep.worst_block}")
        return 0
    table = stats.block_frequencies(w, args.blocks)
    payload = table.to_json()
    payload["csv"] = list(table.csv_rows())
    text = "\n".join(f"{b},{c}" for b, c in sorted(table.counts.items()))
    if args.format == "text":
        args.format = "csv"  # tables default to CSV
    _emit(args, payload, text)
    return 0


def _parallel_word(seed: int, n: int, jobs: int) -> str:
    from multiprocessing import Pool

    from .stats import SAMPLE_CHUNK, _chunk_digits
    chunks = (n + SAMPLE_CHUNK - 1) // SAMPLE_CHUNK
    with Pool(jobs) as pool:
        parts = pool.starmap(_chunk_digits,
                             [(seed, i) for i in range(chunks)])
    return "".join(parts)[:n]


def cmd_sample(args):
    beta = make_beta(args.beta)
    if args.jobs > 1:
        word = _parallel_word(args.seed, args.n, args.jobs)
        res = stats.SampleResult(word, *stats.value_enclosure(word, beta))
    else:
        res = stats.sample_bernoulli_expansion(beta, args.seed, args.n)
    payload = {"schema": "betaexp.sample/1", "beta": _beta_meta(beta),
               "seed": args.seed, "n": args.n, "digits": res.word,
               "value_interval": [fraction_to_decimal(res.value_low),
                                  fraction_to_decimal(res.value_high)]}
    _emit(args, payload, res.word)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="betaexp",
        description="expansions of reals in non-integer bases beta in (1,2)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, beta=True, x=False):
        if beta:
            p.add_argument("--beta", required=True,
                           help="poly:x^2-x-1[@lo,hi] | dec:1.9[@bits] | bare")
        if x:
            p.add_argument("--x", required=True,
                           help="rational | val:<word> | random:<seed> | expr:...")
        p.add_argument("--format", choices=("text", "json", "csv"),
                       default="text")

    p = sub.add_parser("expand", help="greedy/lazy/quasi-greedy digits")
    common(p, x=False)
    p.add_argument("--x", help="needed for greedy/lazy modes")
    p.add_argument("--mode", choices=("greedy", "lazy", "quasi-greedy-one"),
                   default="greedy")
    p.add_argument("-n", type=int, required=True)
    p.set_defaults(fn=cmd_expand)

    p = sub.add_parser("normalize", help="admissible word with the same value")
    common(p)
    p.add_argument("--word", required=True)
    p.add_argument("--out-len", type=int, default=None)
    p.set_defaults(fn=cmd_normalize)

    p = sub.add_parser("equiv-class", help="words with exactly equal value")
    common(p)
    p.add_argument("--word", required=True)
    p.set_defaults(fn=cmd_equiv_class)

    p = sub.add_parser("universalize", help="embed all short words as factors")
    common(p, x=True)
    p.add_argument("-L", "--level", type=int, default=4)
    p.add_argument("-N", "--budget", type=int, default=50_000)
    p.add_argument("--finitary", action="store_true",
                   help="in-place equivalence substitution (exact backend)")
    p.set_defaults(fn=cmd_universalize)

    p = sub.add_parser("tree", help="expansion tree to a digit depth")
    common(p, x=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--dot", action="store_true")
    p.set_defaults(fn=cmd_tree)

    p = sub.add_parser("unique", help="uniqueness verdict for x")
    common(p, x=True)
    p.add_argument("--horizon", type=int, default=4096)
    p.set_defaults(fn=cmd_unique)

    p = sub.add_parser("gamma", help="branch-choice coding prefixes")
    common(p, x=True)
    p.add_argument("--depth", type=int, required=True,
                   help="number of branch choices")
    p.add_argument("--digit-horizon", type=int, default=None)
    p.set_defaults(fn=cmd_gamma)

    p = sub.add_parser("kl-constant", help="smallest base with unique expansion of 1")
    p.add_argument("--digits", type=int, default=10)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(fn=cmd_kl_constant)

    p = sub.add_parser("tm-word", help="Thue-Morse blocks")
    p.add_argument("-n", type=int, default=3, help="block index")
    p.add_argument("--prefix", type=int, default=None,
                   help="emit this many sequence digits instead")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(fn=cmd_tm_word)

    p = sub.add_parser("dim-estimate", help="growth-rate proxy for unique expansions")
    common(p)
    p.add_argument("-n", type=int, default=24)
    p.set_defaults(fn=cmd_dim_estimate)

    p = sub.add_parser("stats", help="complexity / block frequencies / normality")
    p.add_argument("--word", default=None, help="defaults to stdin")
    p.add_argument("--blocks", type=int, default=2)
    p.add_argument("--complexity", type=int, default=None)
    p.add_argument("--normality", type=int, default=None)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(fn=cmd_stats)

    p = sub.add_parser("sample", help="seeded fair-coin expansion word")
    common(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=cmd_sample)

    return parser


def _apply_config(argv: list) -> list:
    """Splice `key=value` lines from --config FILE in after the subcommand.

    Explicit flags win because argparse takes the last occurrence.
    """
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise ParseError("--config needs a file path")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2:]
    if not rest:
        raise ParseError("--config requires a subcommand")
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            pairs += [f"--{key.strip()}", value.strip()]
    return rest[:1] + pairs + rest[1:]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _apply_config(argv)
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except BudgetExhaustedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ResolutionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOLUTION
    except BetaExpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
