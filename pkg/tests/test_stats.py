import random
from fractions import Fraction

import pytest

from betaexp import (
    OutOfDomainError,
    block_frequencies,
    complexity,
    fair_coin_word,
    greedy_expansion,
    is_universal_prefix,
    normality_deviation,
    random_branch_expansion,
    sample_bernoulli_expansion,
    val_beta,
    stream_truncation_bound,
)
from betaexp.stats import value_enclosure
from oracles import block_counts, factor_count, random_fraction


class TestComplexity:
    def test_periodic_word(self):
        w = "10" * 20
        prof = complexity(w, 8)
        assert all(prof.p(n) == 2 for n in range(1, 9))

    def test_constant_word(self):
        prof = complexity("0" * 30, 5)
        assert all(prof.p(n) == 1 for n in range(1, 6))

    def test_full_alphabet_concatenation(self):
        w = "".join(format(k, "04b") for k in range(16)) + "000"
        prof = complexity(w, 4)
        assert prof.p(4) == 16

    def test_bounds_and_recount(self):
        rng = random.Random(3)
        w = "".join(rng.choice("01") for _ in range(500))
        prof = complexity(w, 9)
        for n in range(1, 10):
            assert prof.p(n) == factor_count(w, n)
            assert prof.p(n) <= min(2 ** n, len(w) - n + 1)

    def test_max_n_capped(self):
        with pytest.raises(OutOfDomainError):
            complexity("0101", 5)

    def test_exports(self):
        prof = complexity("0110", 2)
        rows = list(prof.csv_rows())
        assert rows[0] == ("n", "factors")
        assert prof.to_json()["schema"] == "betaexp.complexity/1"


class TestUniversalPrefix:
    def test_census_equivalence(self):
        rng = random.Random(5)
        w = "".join(rng.choice("01") for _ in range(400))
        ok, missing = is_universal_prefix(w, 4)
        prof = complexity(w, 4)
        assert ok == all(prof.p(n) == 2 ** n for n in range(1, 5))

    def test_golden_admissible_word_misses_11(self, G):
        rng = random.Random(7)
        x = G.from_fraction(random_fraction(rng))
        w = greedy_expansion(x, G, 120)
        ok, missing = is_universal_prefix(w, 2)
        assert not ok and "11" in missing

    def test_empty_word(self):
        ok, missing = is_universal_prefix("", 1)
        assert not ok and missing == ["0", "1"]


class TestBlockFrequencies:
    def test_alternating(self):
        table = block_frequencies("01" * 10, 2)
        assert table.frequency("01") == Fraction(10, 19)
        assert table.frequency("10") == Fraction(9, 19)
        assert table.counts["00"] == 0 and table.counts["11"] == 0

    def test_counts_sum(self):
        rng = random.Random(9)
        w = "".join(rng.choice("01") for _ in range(300))
        for k in (1, 2, 4):
            table = block_frequencies(w, k)
            assert sum(table.counts.values()) == len(w) - k + 1
            assert table.counts == {**{b: 0 for b in table.counts},
                                    **block_counts(w, k)}

    def test_all_ones(self):
        table = block_frequencies("1" * 12, 1)
        assert table.frequency("1") == 1

    def test_coin_sample_concentrates(self):
        w = fair_coin_word(123, 100_000)
        table = block_frequencies(w, 3)
        for block in table.counts:
            assert abs(table.frequency(block) - Fraction(1, 8)) < Fraction(1, 80)


class TestNormality:
    def test_alternating_deviation(self):
        # 00 and 11 never occur (deviation 1/4); 01 occurs in 500 of 999
        # windows, edging slightly past 1/4, so it is the argmax
        rep = normality_deviation("01" * 500, 2)
        assert abs(rep.deviation - 0.25) < 0.01
        assert rep.block_length == 2
        assert rep.worst_block in ("00", "11", "01")

    def test_constant_deviation(self):
        rep = normality_deviation("0" * 64, 1)
        assert rep.deviation == 0.5

    def test_coin_sample(self):
        w = fair_coin_word(1, 100_000)
        rep = normality_deviation(w, 3)
        assert rep.deviation < 0.02

    def test_range_check(self):
        with pytest.raises(OutOfDomainError):
            normality_deviation("0101", 3)


class TestSamplers:
    def test_deterministic_replay(self, G):
        a = sample_bernoulli_expansion(G, 42, 4000)
        b = sample_bernoulli_expansion(G, 42, 4000)
        assert a.word == b.word
        assert a.word != sample_bernoulli_expansion(G, 43, 4000).word

    def test_prefix_stability_across_lengths(self, G):
        long = sample_bernoulli_expansion(G, 11, 3000).word
        short = sample_bernoulli_expansion(G, 11, 100).word
        assert long.startswith(short)

    def test_value_enclosure_in_range(self, G, dec19):
        for beta in (G, dec19):
            res = sample_bernoulli_expansion(beta, 5, 5000)
            sup_hi = beta.sup_value.bounds()[1]
            assert 0 <= res.value_low <= res.value_high <= sup_hi
            head_lo, head_hi = value_enclosure(res.word[:64], beta)
            tail = stream_truncation_bound(64, beta).bounds()[1]
            assert head_lo <= res.value_high
            assert res.value_low <= head_hi + tail

    def test_branch_sampler_blocks(self, G):
        x = G.beta_value() * Fraction(1, 2)
        w = random_branch_expansion(x, G, 7, 30)
        assert all(w[i:i + 3] in ("100", "011") for i in range(0, 30, 3))

    def test_branch_sampler_zero(self, G):
        assert random_branch_expansion(G.zero(), G, 3, 10) == "0" * 10

    def test_branch_sampler_validity(self, G, dec19):
        rng = random.Random(13)
        for beta in (G, dec19):
            x = beta.from_fraction(random_fraction(rng))
            w = random_branch_expansion(x, beta, 99, 24)
            gap = x - val_beta(w, beta)
            assert gap.definite_sign() >= 0
            bound = stream_truncation_bound(24, beta)
            assert ((gap - bound).sign() or 0) <= 0
