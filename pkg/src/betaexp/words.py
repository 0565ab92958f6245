"""Finite 0-1 words and eventually periodic 0-1 sequences.

Words are plain ASCII strings over {0,1}; the serialized form of an
eventually periodic sequence is ``preperiod(period)``, e.g. ``11(01)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import ParseError

Word = str


def check_word(w: str) -> str:
    if not isinstance(w, str) or any(ch not in "01" for ch in w):
        raise ParseError(f"not a 0-1 word: {w!r}")
    return w


def invert_word(w: str) -> str:
    return "".join("1" if ch == "0" else "0" for ch in w)


def all_words(length: int):
    """All 0-1 words of the given length, lexicographic order."""
    for k in range(1 << length):
        yield format(k, f"0{length}b") if length else ""


def words_up_to(max_len: int):
    """All nonempty words of length <= max_len, length-lexicographic order."""
    for n in range(1, max_len + 1):
        yield from all_words(n)


def _minimal_period(w: str) -> str:
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w == w[:p] * (n // p):
            return w[:p]
    return w


@dataclass(frozen=True)
class EventuallyPeriodicSeq:
    """An infinite 0-1 sequence given as preperiod + repeating period.

    Instances are canonical: the period is primitive, and the preperiod is
    shortest (trailing digits that merely repeat the period are absorbed).
    """

    preperiod: str
    period: str

    def __post_init__(self):
        check_word(self.preperiod)
        check_word(self.period)
        if not self.period:
            raise ParseError("period must be nonempty")
        pre, per = self.preperiod, _minimal_period(self.period)
        # absorb preperiod tail digits that equal the rotated period
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1] + per[:-1]
        per = _minimal_period(per)
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    def digit(self, i: int) -> int:
        """0-based digit access."""
        if i < len(self.preperiod):
            return int(self.preperiod[i])
        return int(self.period[(i - len(self.preperiod)) % len(self.period)])

    def prefix(self, n: int) -> str:
        pre, per = self.preperiod, self.period
        if n <= len(pre):
            return pre[:n]
        need = n - len(pre)
        reps = need // len(per) + 1
        return pre + (per * reps)[:need]

    def shift(self, n: int = 1) -> "EventuallyPeriodicSeq":
        pre, per = self.preperiod, self.period
        if n <= len(pre):
            return EventuallyPeriodicSeq(pre[n:], per)
        k = (n - len(pre)) % len(per)
        return EventuallyPeriodicSeq("", per[k:] + per[:k])

    def distinct_shift_count(self) -> int:
        """Shifts beyond this index repeat earlier ones."""
        return len(self.preperiod) + len(self.period)

    def invert(self) -> "EventuallyPeriodicSeq":
        return EventuallyPeriodicSeq(invert_word(self.preperiod),
                                     invert_word(self.period))

    def is_constant(self, digit: str) -> bool:
        return self.preperiod == "" and self.period == digit

    def serialize(self) -> str:
        return f"{self.preperiod}({self.period})"

    @staticmethod
    def parse(text: str) -> "EventuallyPeriodicSeq":
        if "(" not in text or not text.endswith(")"):
            raise ParseError(f"expected 'preperiod(period)', got {text!r}")
        pre, _, rest = text.partition("(")
        return EventuallyPeriodicSeq(pre, rest[:-1])

    @staticmethod
    def from_word(w: str) -> "EventuallyPeriodicSeq":
        """The finite word extended with zeros."""
        return EventuallyPeriodicSeq(check_word(w), "0")

    def __str__(self):
        return self.serialize()


def compare_eps(a: EventuallyPeriodicSeq, b: EventuallyPeriodicSeq) -> int:
    """Exact lexicographic comparison of two eventually periodic sequences.

    Two such sequences that agree up to max(preperiods) + lcm(periods) agree
    everywhere, so the scan below is exact.
    """
    pa, pb = len(a.preperiod), len(b.preperiod)
    qa, qb = len(a.period), len(b.period)
    horizon = max(pa, pb) + (qa * qb) // gcd(qa, qb) + 1
    for i in range(horizon):
        da, db = a.digit(i), b.digit(i)
        if da != db:
            return -1 if da < db else 1
    return 0


def compare_word_prefix(w: str, other: EventuallyPeriodicSeq) -> int:
    """Compare the finite word (zero-extended) against the sequence."""
    return compare_eps(EventuallyPeriodicSeq.from_word(w) if w else
                       EventuallyPeriodicSeq("", "0"), other)
