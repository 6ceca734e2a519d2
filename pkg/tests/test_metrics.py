import random

import pytest
from hypothesis import given, settings, strategies as st

from cycleseg.cycle import SegmentationAssignment, boundary_labeling, candidate_from_window, enumerate_candidates
from cycleseg.errors import ContractError, DegenerateSpaceError, ValidationError
from cycleseg.metrics import (
    HypothesisSegmentation,
    default_window_size,
    evaluate_run,
    gold_labeling,
    jaccard,
    pearson,
    pk,
    rouge_mean,
    wilcoxon_signed_rank,
    window_diff,
)
from oracles import brute_force_pk, brute_force_wilcoxon_statistic, brute_force_window_diff


def labeling_strategy(n: int):
    return st.integers(min_value=1, max_value=2**n - 1).map(lambda x: format(x, f"0{n}b"))


class TestPk:
    def test_identity_zero(self):
        assert pk("0001001", "0001001", 2) == 0.0

    def test_golden_value(self):
        assert pk("0001001", "0000011", 2) == pytest.approx(0.6, abs=1e-9)

    def test_complement_against_oracle(self):
        ref = "0101010"
        hyp = "1010101"
        k = 2
        assert pk(ref, hyp, k) == pytest.approx(brute_force_pk(ref, hyp, k), abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ContractError):
            pk("0011", "011", 1)

    def test_default_window_size(self):
        # 0001001: two segments over 7 sentences -> k = round(7/4) = 2
        assert default_window_size("0001001") == 2
        assert default_window_size("11") == 1

    @given(st.integers(min_value=4, max_value=12), st.data())
    @settings(max_examples=60)
    def test_matches_window_enumeration_oracle(self, n, data):
        ref = data.draw(labeling_strategy(n))
        hyp = data.draw(labeling_strategy(n))
        k = data.draw(st.integers(min_value=1, max_value=n - 1))
        assert pk(ref, hyp, k) == pytest.approx(brute_force_pk(ref, hyp, k), abs=1e-12)


class TestWindowDiff:
    def test_identity_zero(self):
        assert window_diff("0100010", "0100010", 2) == 0.0

    def test_uniform_extra_boundary_inside_every_window(self):
        # hyp has a boundary in every width-2 window, ref has none there
        assert window_diff("000001", "101010", 2) == 1.0

    def test_golden_pair_matches_oracle(self):
        expected = brute_force_window_diff("0001001", "0000011", 2)
        assert expected == pytest.approx(0.6, abs=1e-12)
        assert window_diff("0001001", "0000011", 2) == pytest.approx(expected, abs=1e-12)

    @given(st.integers(min_value=4, max_value=12), st.data())
    @settings(max_examples=60)
    def test_matches_window_enumeration_oracle(self, n, data):
        ref = data.draw(labeling_strategy(n))
        hyp = data.draw(labeling_strategy(n))
        k = data.draw(st.integers(min_value=1, max_value=n - 1))
        assert window_diff(ref, hyp, k) == pytest.approx(
            brute_force_window_diff(ref, hyp, k), abs=1e-12
        )


class TestRougeMean:
    def test_identical_sequences(self):
        assert rouge_mean(["spike", "binds"], ["spike", "binds"]) == 1.0

    def test_golden_eleven_eighteenths(self):
        assert rouge_mean(["a", "b", "c"], ["a", "b", "d"]) == pytest.approx(11 / 18, abs=1e-9)

    def test_disjoint_vocabulary(self):
        assert rouge_mean(["x", "y"], ["u", "v"]) == 0.0

    def test_empty_hypothesis_scores_zero(self):
        assert rouge_mean([], ["a"]) == 0.0

    def test_empty_reference_rejected(self):
        with pytest.raises(ValidationError):
            rouge_mean(["a"], [])

    def test_single_token_reference_has_no_bigrams(self):
        # ROUGE-2 contributes f=0, so identical singletons stay below 1
        assert rouge_mean(["a"], ["a"]) == pytest.approx(2 / 3)

    @given(st.lists(st.sampled_from("abcd"), min_size=2, max_size=8))
    def test_one_iff_identical(self, toks):
        assert rouge_mean(toks, list(toks)) == pytest.approx(1.0)


class TestJaccard:
    @pytest.mark.parametrize(
        "hyp,ref,expected",
        [
            ({4, 5, 6}, {4, 5, 6}, 1.0),
            ({1}, {2}, 0.0),
            ({4, 5, 6}, {6}, 1 / 3),
            ({6}, {5, 6}, 1 / 2),
        ],
    )
    def test_values(self, hyp, ref, expected):
        assert jaccard(hyp, ref) == pytest.approx(expected)

    def test_empty_reference_rejected(self):
        with pytest.raises(ValidationError):
            jaccard({1}, set())


class TestPearson:
    def test_perfect_linear(self):
        x = [1.0, 2.0, 3.0, 4.0]
        r, p = pearson(x, [2 * v + 1 for v in x])
        assert r == pytest.approx(1.0)
        assert p < 0.01

    def test_perfect_anti(self):
        x = [1.0, 2.0, 3.0]
        r, _ = pearson(x, [-v for v in x])
        assert r == pytest.approx(-1.0)

    def test_zero_variance_rejected(self):
        with pytest.raises(DegenerateSpaceError):
            pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    def test_too_short_rejected(self):
        with pytest.raises(ValidationError):
            pearson([1.0, 2.0], [1.0, 2.0])


class TestWilcoxon:
    A8 = [125.0, 115.0, 130.0, 140.0, 140.0, 115.0, 140.0, 125.0]
    B8 = [110.0, 122.0, 125.0, 120.0, 140.0, 124.0, 123.0, 137.0]

    def test_textbook_pairs_match_hand_ranking_oracle(self):
        stat, p = wilcoxon_signed_rank(self.A8, self.B8)
        assert stat == brute_force_wilcoxon_statistic(self.A8, self.B8) == 9.0
        assert 0.0 < p < 1.0

    def test_matches_scipy_normal_approximation(self):
        from scipy import stats as sps

        stat, p = wilcoxon_signed_rank(self.A8, self.B8)
        ref = sps.wilcoxon(self.A8, self.B8, zero_method="wilcox", correction=False, method="approx")
        assert stat == pytest.approx(float(ref.statistic))
        assert p == pytest.approx(float(ref.pvalue))

    def test_constant_positive_shift(self):
        a = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]
        b = [v + 2.0 for v in a]
        stat, p = wilcoxon_signed_rank(a, b)
        assert stat == 0.0
        assert p < 0.05

    def test_equal_series_degenerate(self):
        a = [1.0] * 8
        with pytest.raises(DegenerateSpaceError):
            wilcoxon_signed_rank(a, list(a))

    def test_too_few_nonzero_differences(self):
        with pytest.raises(ValidationError):
            wilcoxon_signed_rank([1.0, 2.0, 3.0, 4.0], [2.0, 3.0, 4.0, 5.0])


class TestGoldLabeling:
    def test_window_gold_uses_cycle_convention(self, make_tokenized):
        a = make_tokenized("x", [["w"]] * 7, gold=[6, 0, 1])
        assert gold_labeling(a) == "0100010"

    def test_suffix_gold(self, make_tokenized):
        a = make_tokenized("x", [["w"]] * 7, gold=[4, 5, 6])
        assert gold_labeling(a) == "0001001"

    def test_non_contiguous_gold_marks_each_run(self, make_tokenized):
        a = make_tokenized("x", [["w"]] * 7, gold=[0, 3])
        # runs end at 0 and 3; premise runs end at 2, 6
        assert gold_labeling(a) == "1011001"

    def test_interior_window_without_last_sentence(self, make_tokenized):
        a = make_tokenized("x", [["w"]] * 5, gold=[2, 3])
        assert gold_labeling(a) == "01011"


class TestEvaluateRun:
    def _corpus(self, make_tokenized, seed=0):
        rng = random.Random(seed)
        corpus = []
        for i in range(6):
            n = rng.randint(4, 8)
            gold = enumerate_candidates(n)[rng.randrange(6)].window_set
            sents = [
                tuple(rng.choices(["spike", "cell", "assay", "dose", "serum"], k=3))
                for _ in range(n)
            ]
            corpus.append(
                make_tokenized(f"a{i}", [list(s) for s in sents], gold=sorted(gold))
            )
        return corpus

    def test_gold_hypothesis_is_perfect(self, make_tokenized):
        corpus = self._corpus(make_tokenized)
        hyp = SegmentationAssignment(
            {a.id: candidate_from_window(a.gold, a.n, a.id) for a in corpus}
        )
        report = evaluate_run(corpus, hyp)
        assert report.pk == 0.0
        assert report.window_diff == 0.0
        assert report.jaccard == 1.0
        assert report.rouge_mean == 1.0

    def test_deterministic_report(self, make_tokenized):
        corpus = self._corpus(make_tokenized, seed=5)
        rng = random.Random(11)
        hyp = {
            a.id: HypothesisSegmentation.from_candidate(
                enumerate_candidates(a.n, a.id)[rng.randrange(6)], a.n
            )
            for a in corpus
        }
        assert evaluate_run(corpus, hyp).to_dict() == evaluate_run(corpus, hyp).to_dict()

    def test_missing_gold_lists_ids(self, make_tokenized):
        corpus = [make_tokenized("nogold", [["w"], ["v"]])]
        hyp = {"nogold": "11"}
        with pytest.raises(ValidationError, match="nogold"):
            evaluate_run(corpus, hyp)

    def test_missing_hypothesis_rejected(self, make_tokenized):
        corpus = self._corpus(make_tokenized)
        with pytest.raises(ContractError, match="missing"):
            evaluate_run(corpus, {})

    def test_labeling_hypotheses_accepted(self, make_tokenized):
        corpus = self._corpus(make_tokenized)
        hyp = {a.id: boundary_labeling(candidate_from_window(a.gold, a.n, a.id), a.n) for a in corpus}
        report = evaluate_run(corpus, hyp)
        assert report.jaccard == 1.0

    def test_corpus_values_are_unweighted_means(self, make_tokenized):
        corpus = self._corpus(make_tokenized, seed=9)
        rng = random.Random(2)
        hyp = {
            a.id: enumerate_candidates(a.n, a.id)[rng.randrange(6)] for a in corpus
        }
        report = evaluate_run(corpus, hyp)
        assert report.pk == pytest.approx(sum(m.pk for m in report.per_abstract) / len(corpus))
        assert report.rouge_mean == pytest.approx(
            sum(m.rouge_mean for m in report.per_abstract) / len(corpus)
        )
        for m in report.per_abstract:
            assert 0.0 <= m.pk <= 1.0
            assert 0.0 <= m.window_diff <= 1.0
            assert 0.0 <= m.jaccard <= 1.0
            assert 0.0 <= m.rouge_mean <= 1.0
