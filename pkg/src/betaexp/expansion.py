"""Digit-level machinery for expansions in base beta.

The greedy rule used throughout is the unified one: emit digit 1 whenever the
remainder is at least 1/beta, else 0, with remainder update r -> beta*r - d.
On [0, 1) this coincides with the floor-of-beta*x map; on [1, 1/(beta-1)] it
produces the leading run of 1s, and at the right endpoint it yields all 1s.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import (
    OutOfDomainError,
    UndecidedError,
    UndeterminedWithinHorizonError,
)
from .numeric import (
    Beta,
    DecimalBeta,
    FieldValue,
    IntervalValue,
    UNDECIDED,
    escalating_precisions,
    value_at_precision,
)
from .words import EventuallyPeriodicSeq, check_word, compare_eps

QG_SCAN_CAP = 512


def escalate(beta: Beta, fn, min_prec=None):
    """Run fn(precision) retrying at doubled precision after UndecidedError.

    ``min_prec`` skips the low rungs of the ladder, for callers already
    operating at an escalated precision.
    """
    last = None
    attempted = False
    for prec in escalating_precisions(beta):
        if prec is not None and min_prec and prec < min_prec:
            continue
        attempted = True
        try:
            return fn(prec)
        except UndecidedError as exc:
            last = exc
    if not attempted:
        return fn(min_prec)
    raise UndeterminedWithinHorizonError(
        f"undecided at maximum working precision: {last}")


def _require_domain(x: FieldValue, beta: Beta, upper: FieldValue, message: str,
                    strict_upper=False):
    s_lo = x.definite_sign()
    if s_lo < 0:
        raise OutOfDomainError(message)
    s_hi = (x - upper).definite_sign()
    if s_hi > 0 or (strict_upper and s_hi == 0):
        raise OutOfDomainError(message)


def beta_power(beta: Beta, k: int, prec=None) -> FieldValue:
    """beta**k for any integer k, by repeated squaring."""
    base = beta.beta_value() if k >= 0 else beta.inv_beta
    base = value_at_precision(base, prec)
    e = abs(k)
    acc = value_at_precision(beta.one(), prec)
    while e:
        if e & 1:
            acc = acc * base
        base = base * base if e > 1 else base
        e >>= 1
    return acc


def stream_truncation_bound(n: int, beta: Beta) -> FieldValue:
    """Upper bound beta**-n / (beta - 1) on the value of any digit tail."""
    if n < 0:
        raise OutOfDomainError("n must be nonnegative")
    return beta_power(beta, -n) * beta.sup_value


def val_beta(w: str, beta: Beta, prec=None) -> FieldValue:
    """The value sum of digit_k * beta**-k of a finite word.

    ``prec`` overrides the working precision on the interval backend, so
    escalating callers can re-derive the exact value of a deep word.
    """
    check_word(w)
    acc = value_at_precision(beta.zero(), prec)
    for ch in reversed(w):
        acc = acc + int(ch) if ch == "1" else acc
        acc = acc.over_beta()
    return acc


def val_beta_eps(seq: EventuallyPeriodicSeq, beta: Beta) -> FieldValue:
    """Exact value of an eventually periodic sequence.

    value = val(pre) + beta**-|pre| * val(per) / (1 - beta**-|per|)
    """
    pre_v = val_beta(seq.preperiod, beta)
    per_v = val_beta(seq.period, beta)
    denom = beta.one() - beta_power(beta, -len(seq.period))
    tail = per_v / denom
    return pre_v + beta_power(beta, -len(seq.preperiod)) * tail


def t_beta(x: FieldValue, beta: Beta):
    """One step of the beta-transformation on [0, 1): (digit, beta*x - digit)."""
    _require_domain(x, beta, beta.one(), "t_beta requires 0 <= x < 1",
                    strict_upper=True)
    s = (x - beta.inv_beta).definite_sign()
    digit = 1 if s >= 0 else 0
    return digit, x.times_beta() - digit


def _expand_digits(x: FieldValue, beta: Beta, n: int, greedy: bool):
    """Shared greedy/lazy digit loop.  Raises UndecidedError on straddles."""
    r = x
    digits = []
    for _ in range(n):
        if greedy:
            s = (r - beta.inv_beta).sign()
            if s is UNDECIDED:
                raise UndecidedError("greedy digit undecided")
            d = 1 if s >= 0 else 0
        else:
            s = (r - beta.branch_high).sign()
            if s is UNDECIDED:
                raise UndecidedError("lazy digit undecided")
            d = 0 if s <= 0 else 1
        digits.append("1" if d else "0")
        r = r.times_beta() - d
    return "".join(digits), r


def greedy_expansion(x: FieldValue, beta: Beta, n: int) -> str:
    """First n digits of the greedy (lexicographically largest) expansion."""
    _require_domain(x, beta, beta.sup_value,
                    "greedy_expansion requires 0 <= x <= 1/(beta-1)")
    return escalate(beta, lambda prec:
                    _expand_digits(value_at_precision(x, prec), beta, n, True))[0]


def lazy_expansion(x: FieldValue, beta: Beta, n: int) -> str:
    """First n digits of the lazy (lexicographically smallest) expansion."""
    _require_domain(x, beta, beta.sup_value,
                    "lazy_expansion requires 0 <= x <= 1/(beta-1)")
    return escalate(beta, lambda prec:
                    _expand_digits(value_at_precision(x, prec), beta, n, False))[0]


class DigitStream:
    """Pull-based digit source; deterministic replay from the same seed state.

    The tail after n digits is worth at most error_bound(n).
    """

    def __init__(self, beta: Beta):
        self.beta = beta

    def digit(self, i: int) -> int:
        raise NotImplementedError

    def prefix(self, n: int) -> str:
        if n > 0:
            self.digit(n - 1)
        return self._prefix_text(n)

    def _prefix_text(self, n: int) -> str:
        return "".join(str(self.digit(i)) for i in range(n))

    def error_bound(self, n: int) -> FieldValue:
        return stream_truncation_bound(n, self.beta)

    def replay(self) -> "DigitStream":
        raise NotImplementedError


class GreedyDigitStream(DigitStream):
    """Greedy digits of a fixed starting value, computed on demand.

    On the interval backend the stream recomputes itself from the start value
    at doubled precision when a digit becomes undecidable (already-served
    digits were certified, so the replay is identical).  The working
    precision starts at the larger of the base's setting and the start
    value's own precision, so escalated callers are not downgraded.
    """

    def __init__(self, x: FieldValue, beta: Beta):
        super().__init__(beta)
        _require_domain(x, beta, beta.sup_value,
                        "stream start must lie in [0, 1/(beta-1)]")
        self.x = x
        if isinstance(beta, DecimalBeta):
            self._prec = max(beta.precision_bits, getattr(x, "prec", 0))
        else:
            self._prec = None
        self._digits: list[str] = []
        self._rem = value_at_precision(x, self._prec)
        # exact integer mode for a rational base and exact start: the
        # remainder after k digits is num / (den_x * q^k), no gcd work
        self._fast = None
        if isinstance(beta, DecimalBeta) and isinstance(x, IntervalValue) \
                and x.lo == x.hi:
            self._fast = [x.lo.numerator, x.lo.denominator,
                          beta.value.numerator, beta.value.denominator]
        self._checkpoints = {0: self._cursor()}  # step -> remainder state

    def _next_prec(self):
        if self._prec is None or not isinstance(self.beta, DecimalBeta):
            return None
        if self._prec >= self.beta.max_precision_bits:
            return None
        return min(self._prec * 2, self.beta.max_precision_bits)

    def _cursor(self):
        return tuple(self._fast[:2]) if self._fast is not None else self._rem

    def _value_of(self, cursor) -> FieldValue:
        if isinstance(cursor, tuple):
            from fractions import Fraction
            q = Fraction(cursor[0], cursor[1])
            if isinstance(self.beta, DecimalBeta):
                return self.beta.from_fraction(q, self._prec)
            return self.beta.from_fraction(q)
        return cursor

    def _step(self):
        if self._fast is not None:
            num, den, p, q = self._fast
            t = p * num
            den_next = den * q
            d = 1 if t >= den_next else 0
            self._fast[0] = t - den_next if d else t
            self._fast[1] = den_next
            self._digits.append("1" if d else "0")
        else:
            r = self._rem
            s = (r - self.beta.inv_beta).sign()
            if s is UNDECIDED:
                raise UndecidedError("stream digit undecided")
            d = 1 if s >= 0 else 0
            self._digits.append("1" if d else "0")
            self._rem = r.times_beta() - d
        if len(self._digits) % 256 == 0:
            self._checkpoints[len(self._digits)] = self._cursor()

    def _restart(self, prec):
        want = len(self._digits)
        self._prec = prec
        self._rem = value_at_precision(self.x, prec)
        self._checkpoints = {0: self._cursor()}
        old = self._digits
        self._digits = []
        for _ in range(want):
            self._step()
        assert self._digits == old, "digit replay diverged"

    def digit(self, i: int) -> int:
        while len(self._digits) <= i:
            try:
                self._step()
            except UndecidedError:
                if isinstance(self.x, IntervalValue) and self.x.width() != 0:
                    # restarting cannot narrow a wide start; let a caller
                    # holding exact inputs retry at higher precision
                    raise
                nxt = self._next_prec()
                if nxt is None:
                    raise UndeterminedWithinHorizonError(
                        f"stream digit {len(self._digits)} undecided at "
                        f"maximum precision")
                try:
                    self._restart(nxt)
                except UndecidedError:
                    continue  # retry loop picks the next precision
        return int(self._digits[i])

    def _prefix_text(self, n: int) -> str:
        return "".join(self._digits[:n])

    def remainder_after(self, n: int) -> FieldValue:
        """Remainder r with x = val(digits[:n]) + beta**-n * r."""
        self.digit(max(n - 1, 0))
        base = (n // 256) * 256
        while base not in self._checkpoints:
            base -= 256
        cursor = self._checkpoints[base]
        if isinstance(cursor, tuple):
            num, den = cursor
            p, q = self.beta.value.numerator, self.beta.value.denominator
            for ch in self._digits[base:n]:
                num, den = p * num, den * q
                if ch == "1":
                    num -= den
            return self._value_of((num, den))
        r = cursor
        for ch in self._digits[base:n]:
            r = r.times_beta() - int(ch)
        return r

    def replay(self) -> "GreedyDigitStream":
        return GreedyDigitStream(self.x, self.beta)


# ---------------------------------------------------------------------------
# quasi-greedy expansion of 1
# ---------------------------------------------------------------------------

@dataclass
class QuasiGreedyResult:
    word: str
    eps: Optional[EventuallyPeriodicSeq]
    status: str  # "finite" | "periodic" | "open"


class _QGState:
    __slots__ = ("digits", "eps", "status", "rem", "seen", "prec")

    def __init__(self, prec):
        self.digits: list[str] = []
        self.eps: Optional[EventuallyPeriodicSeq] = None
        self.status = "running"
        self.rem = None
        self.seen = {}
        self.prec = prec


def _qg_state(beta: Beta) -> _QGState:
    st = beta._cache.get("qg")
    if st is None:
        prec = beta.precision_bits if isinstance(beta, DecimalBeta) else None
        st = _QGState(prec)
        st.rem = (beta.from_fraction(1, prec) if isinstance(beta, DecimalBeta)
                  else beta.one())
        beta._cache["qg"] = st
    return st


def _qg_advance(beta: Beta, st: _QGState):
    """One confirmed quasi-greedy digit, with finite/periodic detection."""
    r = st.rem
    if beta.kind == "algebraic":
        key = r.key()
        if key in st.seen:
            i = st.seen[key]
            st.eps = EventuallyPeriodicSeq("".join(st.digits[:i]),
                                           "".join(st.digits[i:]))
            st.status = "periodic"
            return
        st.seen[key] = len(st.digits)
    s = (r - beta.inv_beta).sign()
    if s is UNDECIDED:
        raise UndecidedError("quasi-greedy digit undecided")
    d = 1 if s >= 0 else 0
    nxt = r.times_beta() - d
    if nxt.sign() == 0:
        # finite expansion of 1: decrement the final digit, repeat forever
        st.eps = EventuallyPeriodicSeq("", "".join(st.digits) + str(d - 1))
        st.status = "finite"
        return
    st.digits.append(str(d))
    st.rem = nxt


def _qg_require(beta: Beta, n: int) -> _QGState:
    """Ensure n confirmed digits (or a resolved exact form) are available."""
    st = _qg_state(beta)
    while st.status == "running" and len(st.digits) < n:
        try:
            _qg_advance(beta, st)
        except UndecidedError:
            if not isinstance(beta, DecimalBeta):
                raise
            st = _qg_escalate(beta, st, n)
    return st


def _qg_escalate(beta: DecimalBeta, st: _QGState, n: int) -> _QGState:
    """Recompute the orbit of 1 at higher precision (the input is exact)."""
    best = st
    for prec in escalating_precisions(beta):
        if prec <= best.prec:
            continue
        fresh = _QGState(prec)
        fresh.rem = beta.from_fraction(1, prec)
        try:
            while fresh.status == "running" and len(fresh.digits) < n:
                _qg_advance(beta, fresh)
            beta._cache["qg"] = fresh
            return fresh
        except UndecidedError:
            if len(fresh.digits) > len(best.digits):
                best = fresh
                beta._cache["qg"] = fresh
    raise UndeterminedWithinHorizonError(
        "quasi-greedy digits of 1 undecided at maximum precision")


def quasi_greedy_prefix(beta: Beta, n: int) -> str:
    """First n digits of the quasi-greedy expansion of 1."""
    st = _qg_require(beta, n)
    if st.eps is not None:
        return st.eps.prefix(n)
    return "".join(st.digits[:n])


def quasi_greedy_digit(beta: Beta, i: int) -> int:
    """0-based access to the quasi-greedy digits of 1."""
    st = _qg_require(beta, i + 1)
    if st.eps is not None:
        return st.eps.digit(i)
    return int(st.digits[i])


def quasi_greedy_exact(beta: Beta, scan_cap=QG_SCAN_CAP):
    """EventuallyPeriodicSeq form of (a_i) when detected, else None."""
    st = _qg_require(beta, scan_cap)
    return st.eps


def quasi_greedy_of_one(beta: Beta, n: int, scan_cap=QG_SCAN_CAP) -> QuasiGreedyResult:
    if n < 1:
        raise OutOfDomainError("n must be at least 1")
    word = quasi_greedy_prefix(beta, n)
    st = _qg_require(beta, min(max(n, 1), max(scan_cap, n)))
    if st.status == "running":
        # look a little further for an exact form before reporting it open
        st = _qg_require(beta, scan_cap) if n < scan_cap else st
    status = {"finite": "finite", "periodic": "periodic"}.get(st.status, "open")
    return QuasiGreedyResult(word, st.eps, status)


# ---------------------------------------------------------------------------
# admissibility
# ---------------------------------------------------------------------------

class AdmissibilityTracker:
    """Incremental test that a word is the prefix of some admissible sequence.

    State m is the length of the longest suffix of the processed word that
    matches a prefix of the quasi-greedy sequence (a_i).  Appending digit d
    is allowed iff d <= a_{m+1}; because (a_i) is shift-maximal, checking at
    the longest match covers all shorter active windows.  A word accepted
    here, zero-extended, has every shift strictly below (a_i), because (a_i)
    contains a 1 beyond any position.
    """

    def __init__(self, beta: Beta):
        self.beta = beta
        self.state = 0
        self._a: list[int] = []
        self._fail: list[int] = []

    def _a_digit(self, i: int) -> int:
        while len(self._a) <= i:
            k = len(self._a)
            self._a.append(quasi_greedy_digit(self.beta, k))
            if k == 0:
                self._fail.append(0)
            else:
                f = self._fail[k - 1]
                while f and self._a[k] != self._a[f]:
                    f = self._fail[f - 1]
                self._fail.append(f + 1 if self._a[k] == self._a[f] else 0)
        return self._a[i]

    def can_append(self, d: int) -> bool:
        return d <= self._a_digit(self.state)

    def append(self, d: int):
        if not self.can_append(d):
            raise ValueError("inadmissible digit appended")
        m = self.state
        while True:
            if d == self._a_digit(m):
                self.state = m + 1
                return
            if m == 0:
                self.state = 0
                return
            m = self._fail[m - 1]

    def copy(self):
        t = AdmissibilityTracker(self.beta)
        t.state = self.state
        t._a = self._a          # shared growing caches are fine
        t._fail = self._fail
        return t


def is_admissible(w, beta: Beta) -> bool:
    """Whether a word (zero-extended) or sequence is admissible.

    Finite words: all shifts of w00... lie strictly below (a_i); decidable
    from the first |w| digits of (a_i).  Eventually periodic sequences: all
    (finitely many distinct) shifts compared exactly; requires the exact
    periodic form of (a_i).
    """
    if isinstance(w, EventuallyPeriodicSeq):
        a_eps = quasi_greedy_exact(beta)
        if a_eps is None:
            return _is_admissible_eps_horizon(w, beta)
        for k in range(w.distinct_shift_count()):
            if compare_eps(w.shift(k), a_eps) >= 0:
                return False
        return True
    check_word(w)
    tracker = AdmissibilityTracker(beta)
    for ch in w:
        d = int(ch)
        if not tracker.can_append(d):
            return False
        tracker.append(d)
    return True


def _is_admissible_eps_horizon(w: EventuallyPeriodicSeq, beta: Beta,
                               horizon=QG_SCAN_CAP) -> bool:
    for k in range(w.distinct_shift_count()):
        shifted = w.shift(k)
        decided = False
        for i in range(horizon):
            d, a = shifted.digit(i), quasi_greedy_digit(beta, i)
            if d != a:
                if d > a:
                    return False
                decided = True
                break
        if not decided:
            raise UndeterminedWithinHorizonError(
                "shift coincides with the quasi-greedy prefix to the horizon")
    return True
