"""Enumeration of all expansions of a point, and the uniqueness apparatus.

The expansion tree of x follows the closed digit rule on [0, 1/(beta-1)]:
digit 1 is available from 1/beta on, digit 0 up to 1/(beta(beta-1)), both on
the closed overlap.  Branch choices are recorded in the two-symbol coding:
taking digit 0 at a branch point (the lower branch) writes '1', taking digit
1 writes '0', and a tail certified to be choice-free is padded with '0's.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, log
from typing import Optional

from .errors import (
    LengthCapExceededError,
    NodeBudgetExceededError,
    OutOfDomainError,
    PrecisionCapExceededError,
    QuasiGreedyUnavailableError,
    UndeterminedWithinHorizonError,
)
from .expansion import quasi_greedy_digit, quasi_greedy_exact, val_beta_eps
from .numeric import Beta, FieldValue
from .words import EventuallyPeriodicSeq, compare_eps, invert_word

NODE_BUDGET = 10 ** 6
GAMMA_LOWER = "1"   # chose digit 0 at a branch point
GAMMA_UPPER = "0"   # chose digit 1 at a branch point


def digit_options(x: FieldValue, beta: Beta) -> tuple:
    """Digits that can start an expansion of x; both on the closed overlap."""
    lo_sign = x.definite_sign()
    hi_sign = (x - beta.sup_value).definite_sign()
    if lo_sign < 0 or hi_sign > 0:
        raise OutOfDomainError("x must lie in [0, 1/(beta-1)]")
    can_one = (x - beta.branch_low).definite_sign() >= 0
    can_zero = (x - beta.branch_high).definite_sign() <= 0
    opts = ()
    if can_zero:
        opts += (0,)
    if can_one:
        opts += (1,)
    return opts


@dataclass
class TreeNode:
    node_id: int
    parent: Optional[int]
    digit: Optional[int]       # edge label from the parent
    depth: int
    remainder: FieldValue
    options: tuple
    choices_made: int          # branch points passed on the way here
    children: list = field(default_factory=list)
    gamma_truncated: bool = False

    @property
    def is_branch(self) -> bool:
        return len(self.options) == 2


@dataclass
class BranchTree:
    beta: Beta
    x: FieldValue
    depth: int
    nodes: list
    gamma_cutoff: Optional[int] = None

    @property
    def root(self) -> TreeNode:
        return self.nodes[0]

    def branch_node_count(self) -> int:
        return sum(1 for n in self.nodes if n.is_branch)

    def paths(self) -> list:
        """All depth-n digit strings (requires a tree built without cutoff)."""
        if self.gamma_cutoff is not None:
            raise OutOfDomainError("paths() needs a tree without gamma cutoff")
        out = []

        def rec(node, acc):
            if node.depth == self.depth:
                out.append(acc)
                return
            for digit, child_id in node.children:
                rec(self.nodes[child_id], acc + str(digit))

        rec(self.root, "")
        return sorted(out)

    def to_json(self) -> str:
        payload = {
            "schema": "betaexp.tree/1",
            "beta": self.beta.describe(),
            "depth": self.depth,
            "nodes": [{
                "id": n.node_id,
                "parent": n.parent,
                "digit": n.digit,
                "depth": n.depth,
                "branch": n.is_branch,
                "remainder": n.remainder.to_decimal(12),
            } for n in self.nodes],
        }
        if self.gamma_cutoff is None:
            payload["paths"] = self.paths()
        return json.dumps(payload, indent=2)

    def to_dot(self) -> str:
        lines = ["digraph expansions {"]
        for n in self.nodes:
            shape = "doublecircle" if n.is_branch else "circle"
            lines.append(
                f'  n{n.node_id} [label="{n.remainder.to_decimal(6)}", shape={shape}];')
            if n.parent is not None:
                lines.append(f"  n{n.parent} -> n{n.node_id} [label={n.digit}];")
        lines.append("}")
        return "\n".join(lines)


def expand_tree(x: FieldValue, beta: Beta = None, depth: int = 8, *,
                node_budget: int = NODE_BUDGET,
                gamma_cutoff: Optional[int] = None) -> BranchTree:
    """Complete tree of expansion prefixes of x to the given digit depth.

    With gamma_cutoff set, subtrees are not expanded beyond that many branch
    choices per path (the frontier node keeps its options flag).
    """
    beta = beta or x.beta
    if depth < 1:
        raise OutOfDomainError("depth must be at least 1")
    root_opts = digit_options(x, beta)
    nodes = [TreeNode(0, None, None, 0, x, root_opts, 0)]
    stack = [0]
    while stack:
        nid = stack.pop()
        node = nodes[nid]
        if node.depth == depth:
            continue
        if gamma_cutoff is not None and node.is_branch \
                and node.choices_made >= gamma_cutoff:
            node.gamma_truncated = True
            continue
        for d in node.options:
            child_rem = node.remainder.times_beta() - d
            child_opts = digit_options(child_rem, beta)
            child = TreeNode(len(nodes), nid, d, node.depth + 1, child_rem,
                             child_opts,
                             node.choices_made + (1 if node.is_branch else 0))
            if len(nodes) >= node_budget:
                raise NodeBudgetExceededError(
                    f"tree exceeded {node_budget} nodes")
            nodes.append(child)
            node.children.append((d, child.node_id))
            stack.append(child.node_id)
    return BranchTree(beta, x, depth, nodes, gamma_cutoff)


def count_expansions(x: FieldValue, beta: Beta = None, depth: int = 8, *,
                     node_budget: int = NODE_BUDGET) -> int:
    """Number of distinct depth-n expansion prefixes (merged by remainder)."""
    beta = beta or x.beta
    if depth < 0:
        raise OutOfDomainError("depth must be nonnegative")
    digit_options(x, beta)  # domain check
    memo = {}
    work = [0]

    def rec(r: FieldValue, d: int) -> int:
        if d == 0:
            return 1
        key = (r.key(), d)
        if key in memo:
            return memo[key]
        work[0] += 1
        if work[0] > node_budget:
            raise NodeBudgetExceededError(
                f"count exceeded {node_budget} evaluations")
        total = 0
        for digit in digit_options(r, beta):
            total += rec(r.times_beta() - digit, d - 1)
        memo[key] = total
        return total

    return rec(x, depth)


@dataclass
class GammaReport:
    """Realized branch-choice prefixes of a fixed length.

    ``realized`` holds certified prefixes; those reached via the all-'0'
    convention on a certified choice-free tail are also listed in ``padded``.
    ``partial`` holds choice prefixes whose continuation was cut off by the
    digit horizon without certification (flagged, never silently resolved).
    """

    gamma_depth: int
    realized: set
    padded: set
    partial: set
    positions: dict

    def is_full(self) -> bool:
        want = 1 << self.gamma_depth
        return len(self.realized) == want


def branching_compactum_prefix(x: FieldValue, beta: Beta = None,
                               gamma_depth: int = 4, *,
                               digit_horizon: Optional[int] = None,
                               node_budget: int = NODE_BUDGET) -> GammaReport:
    """Choice coding of the expansion tree to the given number of branchings."""
    beta = beta or x.beta
    if gamma_depth < 1:
        raise OutOfDomainError("gamma_depth must be at least 1")
    horizon = digit_horizon or (16 * gamma_depth + 64)
    tree = expand_tree(x, beta, horizon, node_budget=node_budget,
                       gamma_cutoff=gamma_depth)
    realized, padded, partial = set(), set(), set()
    positions = {}

    def rec(node: TreeNode, gamma: str, seen_keys):
        if len(gamma) == gamma_depth:
            realized.add(gamma)
            positions.setdefault(gamma, node.node_id)
            return
        if node.depth == tree.depth or not node.children:
            # ran out of digits before enough choices
            key = node.remainder.key()
            if node.is_branch:
                partial.add(gamma)  # a further choice exists but is unexpanded
                return
            if key in seen_keys:
                # forced cycle: certified unique tail, pad by convention
                word = gamma + GAMMA_UPPER * (gamma_depth - len(gamma))
                realized.add(word)
                padded.add(word)
                positions.setdefault(word, node.node_id)
            else:
                partial.add(gamma)
            return
        if node.is_branch:
            for digit, child_id in node.children:
                symbol = GAMMA_LOWER if digit == 0 else GAMMA_UPPER
                rec(tree.nodes[child_id], gamma + symbol, frozenset())
        else:
            digit, child_id = node.children[0]
            rec(tree.nodes[child_id], gamma,
                seen_keys | {node.remainder.key()})

    rec(tree.root, "", frozenset())
    return GammaReport(gamma_depth, realized, padded, partial, positions)


def is_full_branching(x: FieldValue, beta: Beta = None, gamma_depth: int = 3,
                      *, digit_horizon: Optional[int] = None) -> bool:
    """Whether every branch-choice prefix of the given length is realized."""
    report = branching_compactum_prefix(x, beta, gamma_depth,
                                        digit_horizon=digit_horizon)
    return report.is_full()


@dataclass
class UniquenessVerdict:
    kind: str                     # UNIQUE_CERTIFIED | BRANCHES | UNDETERMINED
    depth: Optional[int] = None
    witness: Optional[str] = None
    prefix: str = ""

    def __str__(self):
        if self.kind == "BRANCHES":
            return f"BRANCHES depth={self.depth}"
        return self.kind


def is_unique_expansion(x: FieldValue, beta: Beta = None,
                        horizon: int = 4096) -> UniquenessVerdict:
    """Walk the expansion of x watching for a second digit option.

    UNIQUE_CERTIFIED requires an exact backend: the forced remainder orbit
    must revisit a state.  The interval backend can only answer BRANCHES or
    UNDETERMINED.
    """
    beta = beta or x.beta
    if x.definite_sign() <= 0 or (x - beta.sup_value).definite_sign() >= 0:
        raise OutOfDomainError("x must lie strictly inside (0, 1/(beta-1))")
    r = x
    seen = {}
    prefix = []
    exact = beta.kind == "algebraic"
    for depth in range(horizon):
        opts = digit_options(r, beta)
        if len(opts) == 2:
            return UniquenessVerdict("BRANCHES", depth,
                                     witness=r.to_decimal(12),
                                     prefix="".join(prefix))
        if exact:
            key = r.key()
            if key in seen:
                return UniquenessVerdict("UNIQUE_CERTIFIED", depth,
                                         prefix="".join(prefix))
            seen[key] = depth
        d = opts[0]
        prefix.append(str(d))
        r = r.times_beta() - d
    return UniquenessVerdict("UNDETERMINED", horizon, prefix="".join(prefix))


def in_U_beta(seq: EventuallyPeriodicSeq, beta: Beta, *,
              horizon: int = 4096) -> bool:
    """Two-sided lexicographic test: inverted (a) < every shift < (a).

    Exact when the quasi-greedy sequence has a detected periodic form;
    otherwise compared digitwise, raising QuasiGreedyUnavailable if any
    comparison stays tied through the horizon.
    """
    if not isinstance(seq, EventuallyPeriodicSeq):
        raise OutOfDomainError("in_U_beta expects an eventually periodic sequence")
    a_eps = quasi_greedy_exact(beta)
    shifts = seq.distinct_shift_count()
    if a_eps is not None:
        a_bar = a_eps.invert()
        for k in range(shifts):
            s = seq.shift(k)
            if compare_eps(s, a_eps) >= 0 or compare_eps(a_bar, s) >= 0:
                return False
        return True
    for k in range(shifts):
        s = seq.shift(k)
        upper = lower = None
        for i in range(horizon):
            d = s.digit(i)
            a = quasi_greedy_digit(beta, i)
            if upper is None and d != a:
                upper = d < a
            if lower is None and d != 1 - a:
                lower = d > 1 - a
            if upper is not None and lower is not None:
                break
        if upper is None or lower is None:
            raise QuasiGreedyUnavailableError(
                "shift tied with the quasi-greedy bound through the horizon")
        if not (upper and lower):
            return False
    return True


def unique_value_from_sequence(seq: EventuallyPeriodicSeq, beta: Beta) -> FieldValue:
    """Exact value of an eventually periodic digit sequence."""
    return val_beta_eps(seq, beta)


# ---------------------------------------------------------------------------
# Thue-Morse apparatus
# ---------------------------------------------------------------------------

def _parity(k: int) -> int:
    return bin(k).count("1") & 1


def thue_morse(n: int) -> str:
    """First n digits, starting 0110 1001 ..."""
    if n < 1:
        raise OutOfDomainError("n must be at least 1")
    return "".join(str(_parity(k)) for k in range(n))


def tm_word(n: int) -> str:
    """The length-2^n block starting at the second Thue-Morse digit."""
    if n < 0:
        raise OutOfDomainError("n must be nonnegative")
    return "".join(str(_parity(k)) for k in range(1, (1 << n) + 1))


def _tm_series_compare(x: Fraction, one=Fraction(1), max_terms=100_000):
    """Certified comparison of sum_k m_{k+1} x^-k against 1 at rational x > 1.

    Returns +1 when the sum exceeds 1, -1 when it falls short.  The tail
    after N terms is at most x^-N / (x - 1).
    """
    inv = 1 / x
    partial = Fraction(0)
    power = Fraction(1)
    n_terms = 64
    k = 0
    while n_terms <= max_terms:
        while k < n_terms:
            k += 1
            power *= inv
            if _parity(k):
                partial += power
        tail = power / (x - 1)
        if partial > one:
            return 1
        if partial + tail < one:
            return -1
        n_terms *= 2
    raise PrecisionCapExceededError("series comparison did not certify")


def komornik_loreti(precision_digits: int, *, digit_cap: int = 200) -> str:
    """The smallest base in which 1 has a unique expansion, by bisection.

    Solves sum_n m_n x^(-n+1) = 1 with rigorous geometric tail bounds; the
    summand sequence has nonnegative terms decreasing in x, so the sum is
    strictly decreasing and bisection is certified.  ``precision_digits``
    counts significant digits of the 1.787... value.
    """
    if precision_digits < 2:
        raise OutOfDomainError("ask for at least 2 significant digits")
    if precision_digits > digit_cap:
        raise PrecisionCapExceededError(
            f"{precision_digits} digits beyond cap {digit_cap}")
    lo, hi = Fraction(3, 2), Fraction(2)
    assert _tm_series_compare(lo) > 0 and _tm_series_compare(hi) < 0
    frac_digits = precision_digits - 1
    scale = 10 ** frac_digits
    while floor(lo * scale) != floor(hi * scale):
        mid = (lo + hi) / 2
        if _tm_series_compare(mid) > 0:
            lo = mid
        else:
            hi = mid
    whole, frac = divmod(floor(lo * scale), scale)
    return f"{whole}.{frac:0{frac_digits}d}"


# ---------------------------------------------------------------------------
# growth-rate estimate for the unique-expansion language
# ---------------------------------------------------------------------------

def _kmp_failure(pattern: str) -> list:
    fail = [0] * len(pattern)
    for i in range(1, len(pattern)):
        f = fail[i - 1]
        while f and pattern[i] != pattern[f]:
            f = fail[f - 1]
        fail[i] = f + 1 if pattern[i] == pattern[f] else 0
    return fail


def _kmp_advance(pattern: str, fail: list, state: int, ch: str) -> int:
    while True:
        if state < len(pattern) and ch == pattern[state]:
            return state + 1
        if state == 0:
            return 0
        state = fail[state - 1]


@dataclass
class DimensionEstimate:
    count: int
    n: int
    estimate: float


def estimate_unique_dim(beta: Beta, n: int, *, length_cap: int = 512) -> DimensionEstimate:
    """log(count)/(n log beta) over words viable for the two-sided constraint.

    Counts length-n words all of whose windows stay between the inverted and
    plain quasi-greedy sequence (boundary equality allowed, so this is a
    growth-rate proxy for the unique-expansion language, not a certified
    dimension).
    """
    if n < 1:
        raise OutOfDomainError("n must be at least 1")
    if n > length_cap:
        raise LengthCapExceededError(f"n = {n} beyond cap {length_cap}")
    try:
        a = "".join(str(quasi_greedy_digit(beta, i)) for i in range(n))
    except UndeterminedWithinHorizonError as exc:
        raise QuasiGreedyUnavailableError(str(exc)) from exc
    abar = invert_word(a)
    fail_a = _kmp_failure(a)
    fail_b = _kmp_failure(abar)
    states = {(0, 0): 1}
    for _ in range(n):
        nxt = {}
        for (mu, ml), cnt in states.items():
            for ch in "01":
                if mu < n and ch > a[mu]:
                    continue
                if ml < n and ch < abar[ml]:
                    continue
                key = (_kmp_advance(a, fail_a, mu, ch),
                       _kmp_advance(abar, fail_b, ml, ch))
                nxt[key] = nxt.get(key, 0) + cnt
        states = nxt
    count = sum(states.values())
    est = log(count) / (n * log(beta.float_value())) if count else 0.0
    return DimensionEstimate(count, n, est)
