"""Sequence statistics and random expansion sampling.

Factor counts and block frequencies use overlapping sliding windows, the
same convention as the complexity function.  All randomness is drawn from
integer-seeded Mersenne streams with a pinned chunking scheme, so results
are reproducible and independent of worker count.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .branching import digit_options
from .errors import OutOfDomainError
from .expansion import stream_truncation_bound, val_beta
from .numeric import Beta, FieldValue
from .words import all_words, check_word

SAMPLE_CHUNK = 1 << 16
VALUE_ENCLOSURE_DIGITS = 2048


@dataclass
class ComplexityProfile:
    """Distinct factor counts p(n) for n up to max_n."""

    counts: dict
    max_n: int
    word_length: int

    def p(self, n: int) -> int:
        return self.counts[n]

    def csv_rows(self):
        yield ("n", "factors")
        for n in sorted(self.counts):
            yield (n, self.counts[n])

    def to_json(self):
        return {"schema": "betaexp.complexity/1", "length": self.word_length,
                "counts": {str(n): c for n, c in sorted(self.counts.items())}}


def complexity(w: str, max_n: int) -> ComplexityProfile:
    check_word(w)
    if max_n > len(w):
        raise OutOfDomainError("max_n cannot exceed the word length")
    counts = {}
    for n in range(1, max_n + 1):
        counts[n] = len({w[i:i + n] for i in range(len(w) - n + 1)})
    return ComplexityProfile(counts, max_n, len(w))


def is_universal_prefix(w: str, level: int):
    """(all factors of every length <= level present, sorted missing list)."""
    check_word(w)
    if level < 0 or level > 24:
        raise OutOfDomainError("level out of range")
    missing = []
    for n in range(1, level + 1):
        present = {w[i:i + n] for i in range(len(w) - n + 1)}
        missing.extend(u for u in all_words(n) if u not in present)
    return (not missing), missing


@dataclass
class BlockFrequencyTable:
    block_length: int
    window_count: int
    counts: dict

    def frequency(self, block: str) -> Fraction:
        if self.window_count == 0:
            return Fraction(0)
        return Fraction(self.counts.get(block, 0), self.window_count)

    def csv_rows(self):
        yield ("block", "count", "freq")
        for block in sorted(self.counts):
            yield (block, self.counts[block], float(self.frequency(block)))

    def to_json(self):
        return {"schema": "betaexp.blocks/1", "k": self.block_length,
                "windows": self.window_count,
                "counts": dict(sorted(self.counts.items()))}


def block_frequencies(w: str, k: int) -> BlockFrequencyTable:
    check_word(w)
    if not 1 <= k <= len(w):
        raise OutOfDomainError("need 1 <= k <= |w|")
    counts = {b: 0 for b in all_words(k)}
    for i in range(len(w) - k + 1):
        counts[w[i:i + k]] += 1
    return BlockFrequencyTable(k, len(w) - k + 1, counts)


@dataclass
class NormalityReport:
    deviation: float
    worst_block: str
    block_length: int


def normality_deviation(w: str, max_k: int) -> NormalityReport:
    """Largest |freq(B) - 2^-|B|| over blocks B of length <= max_k."""
    check_word(w)
    if max_k < 1 or (1 << max_k) > len(w):
        raise OutOfDomainError("max_k out of range for this word length")
    worst = (Fraction(-1), "", 0)
    for k in range(1, max_k + 1):
        table = block_frequencies(w, k)
        target = Fraction(1, 1 << k)
        for block in all_words(k):
            dev = abs(table.frequency(block) - target)
            if dev > worst[0]:
                worst = (dev, block, k)
    return NormalityReport(float(worst[0]), worst[1], worst[2])


def _chunk_digits(seed: int, chunk_index: int, size: int = SAMPLE_CHUNK) -> str:
    rng = random.Random(seed * (1 << 32) + chunk_index)
    return format(rng.getrandbits(size), f"0{size}b")


def fair_coin_word(seed: int, n: int) -> str:
    """Deterministic i.i.d. fair digits; chunk c uses seed*2^32+c."""
    chunks = []
    need = n
    index = 0
    while need > 0:
        block = _chunk_digits(seed, index)
        chunks.append(block[:need] if need < len(block) else block)
        need -= SAMPLE_CHUNK
        index += 1
    return "".join(chunks)[:n]


@dataclass
class SampleResult:
    word: str
    value_low: Fraction
    value_high: Fraction

    def as_tuple(self):
        return self.word, (self.value_low, self.value_high)


def _inv_beta_scaled(beta: Beta, bits: int):
    """Integers (lo, hi) with lo/2^bits <= 1/beta <= hi/2^bits."""
    from betaexp.numeric import AlgebraicBeta
    one = 1 << bits
    if isinstance(beta, AlgebraicBeta):
        blo, bhi = beta.interval()
        while bhi - blo > Fraction(1, one):
            beta._refine_once()
            blo, bhi = beta.interval()
    else:
        blo = bhi = beta.value
    lo = (one * bhi.denominator) // bhi.numerator
    hi = -((-one * blo.denominator) // blo.numerator)
    return lo, hi, blo


def value_enclosure(w: str, beta: Beta, scale_bits: int = 192):
    """Rigorous rational (lo, hi) around val(w), from the leading digits.

    Directed fixed-point Horner evaluation of the first couple thousand
    digits, plus the geometric bound on the remaining tail; the width stays
    astronomically small without exact arithmetic on a very long word.
    """
    m = min(len(w), VALUE_ENCLOSURE_DIGITS)
    one = 1 << scale_bits
    ib_lo, ib_hi, beta_lo = _inv_beta_scaled(beta, scale_bits)
    v_lo = v_hi = 0
    for ch in reversed(w[:m]):
        d = one if ch == "1" else 0
        v_lo = ((v_lo + d) * ib_lo) >> scale_bits
        v_hi = -((-(v_hi + d) * ib_hi) >> scale_bits)
    lo = Fraction(v_lo, one)
    hi = Fraction(v_hi, one)
    if m < len(w):
        # tail <= beta^-m / (beta - 1), overestimated with the scaled inverse
        t = one
        for _ in range(m):
            t = ((t * ib_hi) >> scale_bits) + 1
        hi += Fraction(t, one) / (beta_lo - 1)
    return lo, hi


def sample_bernoulli_expansion(beta: Beta, rng_seed: int, n: int) -> SampleResult:
    """Word of n fair digits plus a rigorous enclosure of its value."""
    if n < 1:
        raise OutOfDomainError("n must be at least 1")
    w = fair_coin_word(rng_seed, n)
    lo, hi = value_enclosure(w, beta)
    return SampleResult(w, lo, hi)


def random_branch_expansion(x: FieldValue, beta: Beta = None, rng_seed: int = 0,
                            n: int = 64) -> str:
    """A uniformly coin-flipped path through the expansion tree of x."""
    beta = beta or x.beta
    if n < 1:
        raise OutOfDomainError("n must be at least 1")
    rng = random.Random(rng_seed)
    r = x
    digits = []
    for _ in range(n):
        opts = digit_options(r, beta)
        d = opts[0] if len(opts) == 1 else rng.choice(opts)
        digits.append(str(d))
        r = r.times_beta() - d
    return "".join(digits)
