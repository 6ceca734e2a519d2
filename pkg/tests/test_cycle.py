import pytest
from hypothesis import given, strategies as st

from cycleseg.cycle import (
    apply_segmentation,
    boundary_labeling,
    candidate_from_window,
    conclusion_indices_from_labeling,
    conclusion_set_from_labeling,
    enumerate_candidates,
)
from cycleseg.errors import ContractError, ValidationError

TABLE_LABELINGS_N7 = {"0001001", "1000100", "0100010", "0000101", "1000010", "0000011"}


class TestEnumerateCandidates:
    def test_n7_labelings_match_reference_table(self):
        cands = enumerate_candidates(7)
        assert {boundary_labeling(c, 7) for c in cands} == TABLE_LABELINGS_N7

    def test_n4_windows_in_canonical_order(self):
        got = [c.conclusion_window for c in enumerate_candidates(4)]
        assert got == [(3,), (2, 3), (3, 0), (1, 2, 3), (2, 3, 0), (3, 0, 1)]

    def test_n2_single_candidate(self):
        cands = enumerate_candidates(2)
        assert len(cands) == 1
        assert cands[0].conclusion_window == (1,)

    def test_n3_capped_at_length_two(self):
        got = [c.conclusion_window for c in enumerate_candidates(3)]
        assert got == [(2,), (1, 2), (2, 0)]

    def test_too_short_rejected(self):
        with pytest.raises(ValidationError):
            enumerate_candidates(1)

    def test_config_ranks_are_positional(self):
        assert [c.config_rank for c in enumerate_candidates(9)] == list(range(6))

    @given(st.integers(min_value=2, max_value=40))
    def test_window_criteria_hold(self, n):
        cands = enumerate_candidates(n)
        windows = [c.conclusion_window for c in cands]
        assert len(set(windows)) == len(windows)
        if n >= 4:
            assert len(cands) == 6
        for c in cands:
            assert 1 <= len(c.conclusion_window) <= min(3, n - 1)
            assert n - 1 in c.conclusion_window
            assert len(c.conclusion_window) < n  # premise non-empty

    @given(st.integers(min_value=2, max_value=40))
    def test_labelings_injective_with_two_bits(self, n):
        cands = enumerate_candidates(n)
        labelings = [boundary_labeling(c, n) for c in cands]
        assert len(set(labelings)) == len(labelings)
        for bits in labelings:
            assert len(bits) == n
            assert bits.count("1") == 2


class TestBoundaryLabeling:
    @pytest.mark.parametrize(
        "window,expected",
        [((4, 5, 6), "0001001"), ((6, 0, 1), "0100010"), ((6,), "0000011")],
    )
    def test_reference_rows(self, window, expected):
        c = candidate_from_window(set(window), 7)
        assert boundary_labeling(c, 7) == expected

    @given(st.integers(min_value=2, max_value=25))
    def test_labeling_round_trips_through_decode(self, n):
        for c in enumerate_candidates(n):
            bits = boundary_labeling(c, n)
            assert conclusion_set_from_labeling(bits) == c.window_set
            assert conclusion_indices_from_labeling(bits) == c.conclusion_window

    def test_decode_rejects_wrong_bit_count(self):
        with pytest.raises(ValidationError):
            conclusion_set_from_labeling("0100000")


class TestApplySegmentation:
    def test_last_sentence_window(self, make_tokenized):
        a = make_tokenized("x", [["alpha"], ["beta"], ["gamma"]])
        prem, concl = apply_segmentation(a, candidate_from_window({2}, 3, "x"))
        assert concl == ["gamma"]
        assert prem == ["alpha", "beta"]

    def test_empty_conclusion_sentence(self, make_tokenized):
        a = make_tokenized("x", [["alpha"], ["beta"], []])
        prem, concl = apply_segmentation(a, candidate_from_window({2}, 3, "x"))
        assert concl == []
        assert prem == ["alpha", "beta"]

    def test_token_conservation(self, make_tokenized):
        sentences = [[f"w{'abcdefg'[i]}{'xyz'[j]}" for j in range(3)] for i in range(7)]
        a = make_tokenized("x", sentences)
        total = sorted(a.tokens())
        for c in enumerate_candidates(7, "x"):
            prem, concl = apply_segmentation(a, c)
            assert sorted(prem + concl) == total

    def test_wrapped_window_order(self, make_tokenized):
        a = make_tokenized("x", [["s0"], ["s1"], ["s2"], ["s3"]])
        prem, concl = apply_segmentation(a, candidate_from_window({3, 0}, 4, "x"))
        assert concl == ["s3", "s0"]
        assert prem == ["s1", "s2"]

    def test_mismatched_id_rejected(self, make_tokenized):
        a = make_tokenized("x", [["alpha"], ["beta"]])
        c = candidate_from_window({1}, 2, "other")
        with pytest.raises(ContractError):
            apply_segmentation(a, c)
