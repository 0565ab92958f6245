"""Normalization, anti-normalization, and universal expansion construction.

Normalization rewrites a 0-1 word into the admissible (greedy) word with the
same value.  Anti-normalization goes the other way: given a target word w and
an expansion of x, it finds an occurrence of a slightly-larger admissible
cover word v and splices w in its place, compensating exactly in the tail.
Iterating over all targets embeds every word as a factor, which is the
constructive engine behind universal expansions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    BackendUnsupportedError,
    BudgetExhaustedError,
    HorizonExhaustedError,
    LengthCapExceededError,
    NotAdmissibleError,
    NotFinitaryError,
    OccurrenceNotFoundError,
    OutOfDomainError,
    ResolutionError,
    UndecidedError,
    ValueExceedsOneError,
)
from .expansion import (
    AdmissibilityTracker,
    GreedyDigitStream,
    beta_power,
    escalate,
    is_admissible,
    quasi_greedy_digit,
    quasi_greedy_exact,
    quasi_greedy_prefix,
    stream_truncation_bound,
    val_beta,
    val_beta_eps,
)
from .numeric import (
    Beta,
    DecimalBeta,
    FieldValue,
    escalating_precisions,
    value_at_precision,
)
from .words import check_word, words_up_to

SCAN_HORIZON = 10_000
EQUIV_LENGTH_CAP = 24


@dataclass
class NormalizeResult:
    """Admissible digits with the same value as the input word."""

    word: str
    finite: bool          # remainder hit exact zero within out_len
    value_is_one: bool = False

    def __str__(self):
        return self.word


def normalize(w: str, beta: Beta, out_len: int) -> NormalizeResult:
    """First out_len digits of the greedy expansion of val(w).

    Requires val(w) <= 1.  At exactly 1 the quasi-greedy digits of 1 are
    returned (the greedy word of 1 itself is not admissible); see the notes
    in the package docs on this boundary.
    """
    check_word(w)
    if out_len < 1:
        raise OutOfDomainError("out_len must be at least 1")

    def run(prec):
        x = val_beta(w, beta, prec)
        cmp_one = (x - beta.one()).definite_sign()
        if cmp_one > 0:
            raise ValueExceedsOneError(f"val({w}) > 1")
        if cmp_one == 0:
            return NormalizeResult(quasi_greedy_prefix(beta, out_len),
                                   False, True)
        stream = GreedyDigitStream(x, beta)
        word = stream.prefix(out_len)
        finite = stream.remainder_after(out_len).sign() == 0
        return NormalizeResult(word, finite)

    return escalate(beta, run)


@dataclass
class CoverWord:
    """Admissible word v with value slightly above the target word w.

    a = val(v) - val(w) and b = val(v~) - val(w), where v~ is the largest
    admissible sequence starting with v; v~ equals v followed by the
    quasi-greedy digits of 1 shifted by ``tail_shift``.
    """

    w: str
    v: str
    a: FieldValue
    b_low: FieldValue
    b_high: FieldValue
    b_exact: bool
    tail_shift: int

    @property
    def b(self) -> FieldValue:
        return self.b_high


def _extension_state(v: str, beta: Beta) -> int:
    """Admissibility automaton state after reading v; NotAdmissible if v fails."""
    tracker = AdmissibilityTracker(beta)
    for ch in v:
        d = int(ch)
        if not tracker.can_append(d):
            raise NotAdmissibleError(f"{v} is not admissible")
        tracker.append(d)
    return tracker.state


def max_admissible_extension(v: str, beta: Beta, out_len: int) -> str:
    """First out_len digits of the largest admissible sequence starting v.

    After v the maximal continuation simply follows the quasi-greedy digits
    of 1 from the automaton state: the largest allowed digit always equals
    the next quasi-greedy digit.
    """
    check_word(v)
    m = _extension_state(v, beta)
    if out_len <= len(v):
        return v[:out_len]
    tail = "".join(str(quasi_greedy_digit(beta, m + i))
                   for i in range(out_len - len(v)))
    return v + tail


def _b_bounds(v: str, w_val: FieldValue, beta: Beta, m: int, horizon=64,
              prec=None):
    """Exact b when (a_i) has a detected periodic form, else an enclosure."""
    v_val = val_beta(v, beta, prec)
    a_eps = quasi_greedy_exact(beta)
    scale = beta_power(beta, -len(v), prec)
    if a_eps is not None:
        tail_val = val_beta_eps(a_eps.shift(m), beta)
        b = v_val + scale * tail_val - w_val
        return b, b, True
    tail_prefix = "".join(str(quasi_greedy_digit(beta, m + i))
                          for i in range(horizon))
    lo = v_val + scale * val_beta(tail_prefix, beta, prec) - w_val
    hi = lo + scale * stream_truncation_bound(horizon, beta)
    return lo, hi, False


def find_cover_word(w: str, beta: Beta, horizon=SCAN_HORIZON, *,
                    min_prec=None) -> CoverWord:
    """Admissible v of length |w|+n with val(v) slightly above val(w).

    Following the construction: run the greedy digits of val(w), then take
    the first position past |w| holding digit 0 where raising it to 1 keeps
    the word admissible.
    """
    check_word(w)

    def run(prec):
        w_val = val_beta(w, beta, prec)
        if (w_val - beta.one()).definite_sign() >= 0:
            raise ValueExceedsOneError(f"val({w}) must be < 1")
        k = len(w)
        stream = GreedyDigitStream(w_val, beta)
        tracker = AdmissibilityTracker(beta)
        for i in range(k):
            tracker.append(stream.digit(i))
        for j in range(1, horizon + 1):
            d = stream.digit(k + j - 1)
            if d == 0 and tracker.can_append(1):
                v = stream.prefix(k + j - 1) + "1"
                r = stream.remainder_after(k + j - 1)
                # a = beta^-(k+j) * (1 - beta * r), exact
                one = beta_power(beta, 0, prec)
                a = beta_power(beta, -(k + j), prec) * (one - r.times_beta())
                tracker.append(1)  # the raised digit; state after v
                m = tracker.state
                b_lo, b_hi, b_exact = _b_bounds(v, w_val, beta, m, prec=prec)
                return CoverWord(w, v, a, b_lo, b_hi, b_exact, m)
            tracker.append(d)
        raise HorizonExhaustedError(
            f"no admissible increment for {w} within {horizon} digits")

    return escalate(beta, run, min_prec=min_prec)


@dataclass
class SpliceRecord:
    """One anti-normalization event in a universal expansion run."""

    target: str
    padded: str
    cover: str
    position: int            # offset of the cover occurrence in the scan
    abs_start: int           # where the padded target begins in the output
    prefix_length_after: int
    y_bounds: tuple          # rational (lo, hi) of the new remainder
    q_in_bounds: Optional[bool]  # val increment inside (a, b), when decidable


@dataclass
class AntiNormalizeStep:
    position: int
    spliced_prefix: str
    remainder: FieldValue
    cover: CoverWord
    q_in_bounds: Optional[bool]


def _q_in_bounds(cover: CoverWord, r: FieldValue) -> Optional[bool]:
    """Whether a + beta^-|v| * r lies in [a, b]; None when not certified."""
    prec = getattr(r, "prec", None)
    q = cover.a + beta_power(r.beta, -len(cover.v), prec) * r
    below = (q - cover.a).sign()          # negative: below the sandwich
    over = (q - cover.b_high).sign()      # positive: above the sandwich
    within_hi = (cover.b_low - q).sign()  # nonnegative: certified under b
    if isinstance(below, int) and below < 0:
        return False
    if isinstance(over, int) and over > 0:
        return False
    if (isinstance(below, int) and below >= 0
            and isinstance(within_hi, int) and within_hi >= 0):
        return True
    return None


def anti_normalize_step(x: FieldValue, w: str, beta: Beta = None, *,
                        greedy_digits: GreedyDigitStream = None,
                        start: int = 0, horizon: int = SCAN_HORIZON,
                        cover: CoverWord = None) -> AntiNormalizeStep:
    """Splice w into the greedy expansion of x at the first cover occurrence.

    Scans the greedy digit stream of x for v = find_cover_word(w).v at a
    position j >= start, and returns the rewritten prefix (j greedy digits
    followed by w) together with the remainder y solving

        val(v) + beta^-|v| * T^(j+|v|) x = val(w) + beta^-|w| * y

    so that val(prefix) + beta^-(j+|w|) * y = x exactly.  The domain is the
    open representable interval; remainders above 1 are handled by the
    leading-1s greedy rule when scanning continues.
    """
    beta = beta or x.beta
    check_word(w)
    if x.definite_sign() <= 0 or (x - beta.sup_value).definite_sign() >= 0:
        raise OutOfDomainError("x must lie strictly inside (0, 1/(beta-1))")
    if cover is None:
        cover = find_cover_word(w, beta, horizon)
    stream = greedy_digits or GreedyDigitStream(x, beta)
    v = cover.v
    text = ""
    j = -1
    chunk = max(256, 4 * len(v))
    scanned = start
    text = stream.prefix(min(horizon + len(v), start + chunk))
    while True:
        hit = text.find(v, start)
        if hit >= 0:
            j = hit
            break
        if len(text) >= horizon + len(v):
            raise OccurrenceNotFoundError(
                f"cover {v} of {w} not found within {horizon} digits",
                target=w, scanned=len(text))
        text = stream.prefix(min(horizon + len(v), len(text) + chunk))
    r = stream.remainder_after(j + len(v))
    prec = getattr(r, "prec", None)
    # y = beta^|w| * a + beta^(|w|-|v|) * r
    y = beta_power(beta, len(w), prec) * cover.a + \
        beta_power(beta, len(w) - len(v), prec) * r
    prefix = text[:j] + w
    return AntiNormalizeStep(j, prefix, y, cover, _q_in_bounds(cover, r))


@dataclass
class UniversalExpansionResult:
    word: str
    completed: bool
    records: list
    residual: FieldValue          # x = val(word) + beta^-len(word) * residual
    level: int
    budget: int

    def report(self):
        return [{
            "target": r.target,
            "padded": r.padded,
            "cover": r.cover,
            "splice_position": r.position,
            "abs_start": r.abs_start,
            "prefix_length_after": r.prefix_length_after,
            "y_interval": [str(r.y_bounds[0]), str(r.y_bounds[1])],
            "q_in_bounds": r.q_in_bounds,
        } for r in self.records]


def _pad_target(u: str, beta: Beta, max_pad=64) -> str:
    """Prepend zeros until the value drops strictly below 1."""
    word = u
    for _ in range(max_pad):
        if (val_beta(word, beta) - beta.one()).definite_sign() < 0:
            return word
        word = "0" + word
    raise HorizonExhaustedError(f"could not pad {u} below value 1")


def _universal_run(x: FieldValue, beta: Beta, level: int, budget: int,
                   horizon: int, targets) -> UniversalExpansionResult:
    emitted = ""
    records = []
    y = x
    covers = {}
    run_prec = getattr(x, "prec", None)
    for u in targets:
        w = _pad_target(u, beta)
        cover = covers.get(w)
        if cover is None:
            cover = covers.setdefault(
                w, find_cover_word(w, beta, horizon, min_prec=run_prec))
        rem_budget = budget - len(emitted)
        if rem_budget <= len(w):
            raise BudgetExhaustedError(
                f"digit budget {budget} exhausted before target {u}",
                partial=UniversalExpansionResult(
                    emitted, False, records, y, level, budget))
        step_horizon = min(horizon, rem_budget - len(w))
        try:
            step = anti_normalize_step(y, w, beta, horizon=step_horizon,
                                       cover=cover)
        except OccurrenceNotFoundError:
            if step_horizon < horizon:
                raise BudgetExhaustedError(
                    f"digit budget {budget} exhausted scanning for {u}",
                    partial=UniversalExpansionResult(
                        emitted, False, records, y, level, budget))
            raise
        abs_start = len(emitted) + step.position
        emitted += step.spliced_prefix
        y = step.remainder
        records.append(SpliceRecord(
            target=u, padded=w, cover=cover.v, position=step.position,
            abs_start=abs_start, prefix_length_after=len(emitted),
            y_bounds=y.bounds(), q_in_bounds=step.q_in_bounds))
    return UniversalExpansionResult(emitted, True, records, y, level, budget)


def universal_expansion(x: FieldValue, beta: Beta = None, max_word_len: int = 4,
                        max_digits: int = 50_000, *,
                        horizon: int = SCAN_HORIZON,
                        targets=None) -> UniversalExpansionResult:
    """Prefix of an expansion of x containing every word of length <= L.

    Targets are taken in length-lexicographic order over all 0-1 words;
    targets whose value reaches 1 are embedded with leading zeros.  Each
    anti-normalization appends the scanned greedy digits followed by the
    target, then continues from the solved remainder, so the value of x is
    conserved exactly at every step.
    """
    beta = beta or x.beta
    if max_word_len < 1 or max_digits < 1:
        raise OutOfDomainError("level and budget must be at least 1")
    target_list = list(targets) if targets is not None else \
        list(words_up_to(max_word_len))
    last_exc = None
    for prec in escalating_precisions(beta):
        try:
            return _universal_run(value_at_precision(x, prec), beta,
                                  max_word_len, max_digits, horizon,
                                  target_list)
        except (UndecidedError,) as exc:
            last_exc = exc
            continue
        except ResolutionError as exc:
            if isinstance(exc, (BudgetExhaustedError, OccurrenceNotFoundError)):
                raise
            last_exc = exc
            continue
    raise last_exc


def enumerate_equivalent_words(w: str, beta: Beta,
                               length_cap: int = EQUIV_LENGTH_CAP) -> set:
    """All words of length |w| with exactly the same value (exact backend).

    Depth-first search over digit positions, pruning prefixes whose residual
    value cannot be completed within the remaining tail range.
    """
    check_word(w)
    if isinstance(beta, DecimalBeta):
        raise BackendUnsupportedError(
            "equivalence classes require the algebraic backend")
    if len(w) > length_cap:
        raise LengthCapExceededError(
            f"|w| = {len(w)} exceeds cap {length_cap}")
    n = len(w)
    target = val_beta(w, beta)
    inv = beta.inv_beta
    # tail_max[i] = value of 1^(n-i) at scale beta^-i: max completable from position i
    powers = [beta.one()]
    for _ in range(n):
        powers.append(powers[-1] * inv)
    out = []

    def rec(i, residual, prefix):
        # residual = target - val(prefix); completable iff 0 <= residual <= tail
        s = residual.sign()
        if s < 0:
            return
        if i == n:
            if s == 0:
                out.append(prefix)
            return
        tail = (powers[i] - powers[n]) * beta.sup_value
        if (residual - tail).sign() > 0:
            return
        rec(i + 1, residual, prefix + "0")
        rec(i + 1, residual - powers[i + 1], prefix + "1")

    rec(0, target, "")
    return set(out)


@dataclass
class FinitaryRecord:
    target: str
    padded: str
    normalized: str
    position: int
    replaced: bool


@dataclass
class FinitaryResult:
    word: str
    completed: bool
    records: list
    level: int
    budget: int


def finitary_universalize(x: FieldValue, beta: Beta = None, max_word_len: int = 4,
                          max_digits: int = 50_000, *,
                          horizon: int = SCAN_HORIZON) -> FinitaryResult:
    """Universal prefix via in-place equivalence substitutions (exact backend).

    Requires every padded target to normalize to a finite word of the same
    length (true for the golden ratio).  Each target's normalization v is
    located in the pristine greedy expansion of x and the occurrence is
    rewritten to the target; occurrences are kept disjoint with a separation
    margin, so the value is exactly preserved.
    """
    beta = beta or x.beta
    if isinstance(beta, DecimalBeta):
        raise BackendUnsupportedError(
            "finitary universalization requires the algebraic backend")
    if x.definite_sign() <= 0 or (x - beta.sup_value).definite_sign() >= 0:
        raise OutOfDomainError("x must lie strictly inside (0, 1/(beta-1))")
    stream = GreedyDigitStream(x, beta)
    targets = [_pad_target(u, beta) for u in words_up_to(max_word_len)]
    margin = max(len(t) for t in targets)
    replacements = {}
    records = []
    scan_ptr = 0
    for u, w in zip(words_up_to(max_word_len), targets):
        res = normalize(w, beta, len(w))
        if not res.finite:
            raise NotFinitaryError(
                f"normalization of {w} does not terminate within {len(w)} digits")
        v = res.word
        limit = min(horizon + scan_ptr, max_digits)
        if scan_ptr + len(v) > limit:
            raise BudgetExhaustedError(
                f"budget exhausted before target {u}",
                partial=FinitaryResult(_apply(stream, replacements, scan_ptr),
                                       False, records, max_word_len, max_digits))
        text = stream.prefix(limit)
        pos = text.find(v, scan_ptr)
        if pos < 0:
            if limit >= max_digits:
                raise BudgetExhaustedError(
                    f"budget exhausted scanning for {u}",
                    partial=FinitaryResult(_apply(stream, replacements, scan_ptr),
                                           False, records, max_word_len,
                                           max_digits))
            raise OccurrenceNotFoundError(
                f"normalized form {v} of {w} not found within {limit} digits",
                target=w, scanned=limit)
        if v != w:
            replacements[pos] = (v, w)
        records.append(FinitaryRecord(u, w, v, pos, v != w))
        scan_ptr = pos + len(w) + margin
    word = _apply(stream, replacements, scan_ptr)
    return FinitaryResult(word, True, records, max_word_len, max_digits)


def _apply(stream: GreedyDigitStream, replacements: dict, length: int) -> str:
    text = list(stream.prefix(length))
    for pos, (_, w) in replacements.items():
        text[pos:pos + len(w)] = list(w)
    return "".join(text)
