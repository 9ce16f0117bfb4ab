from __future__ import annotations

import pytest

from zerotod.dst import BeliefState, IntentPrediction
from zerotod.metrics import (
    EmptyCorpus,
    LengthMismatch,
    corpus_bleu,
    intent_accuracy,
    jga,
    slot_f1,
)

from .fixtures_dst import (
    EXPECTED_F1,
    EXPECTED_JGA,
    EXPECTED_PRECISION,
    EXPECTED_RECALL,
    FIXTURE_GOLDS,
    FIXTURE_PREDS,
)
from .oracles import bleu_oracle

BLEU_FIXTURE_HYPS = [
    "the cat sat on the mat by the door",
    "there is a cheap indian restaurant in the centre",
    "i recommend the copper kettle on king street",
]
BLEU_FIXTURE_REFS = [
    "the cat sat on the mat near the door",
    "there is a cheap indian restaurant in the city centre",
    "i suggest the copper kettle at king street",
]


class TestJga:
    def test_identity_is_one(self):
        golds = FIXTURE_GOLDS[:5]
        assert jga(golds, golds) == 1.0

    def test_half(self):
        a = BeliefState.build({"a-b": "1"})
        b = BeliefState.build({"a-b": "2"})
        assert jga([a, a], [a, b]) == 0.5

    def test_twenty_turn_fixture(self):
        assert jga(FIXTURE_PREDS, FIXTURE_GOLDS) == EXPECTED_JGA == 0.35

    def test_permutation_invariance(self):
        pairs = list(zip(FIXTURE_PREDS, FIXTURE_GOLDS))
        reordered = pairs[::-1]
        assert jga([p for p, _ in reordered], [g for _, g in reordered]) == EXPECTED_JGA

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            jga(FIXTURE_PREDS[:2], FIXTURE_GOLDS[:3])

    def test_empty_lists_rejected(self):
        with pytest.raises(LengthMismatch):
            jga([], [])

    def test_normalization_applied_to_both_sides(self):
        pred = BeliefState.build({"restaurant-name": "the copper kettle"})
        gold = BeliefState.build({"restaurant-name": "copper kettle"})
        assert jga([pred], [gold]) == 1.0


class TestSlotF1:
    def test_identical_non_empty(self):
        golds = [g for g in FIXTURE_GOLDS if g]
        assert slot_f1(golds, golds) == (1.0, 1.0, 1.0)

    def test_one_extra_prediction(self):
        pred = BeliefState.build({"a-b": "1", "c-d": "2"})
        gold = BeliefState.build({"a-b": "1"})
        p, r, f1 = slot_f1([pred], [gold])
        assert p == 0.5
        assert r == 1.0
        assert f1 == pytest.approx(2 / 3, abs=1e-12)

    def test_all_empty_pinned_to_zero(self):
        empty = BeliefState()
        assert slot_f1([empty, empty], [empty, empty]) == (0.0, 0.0, 0.0)

    def test_twenty_turn_fixture(self):
        p, r, f1 = slot_f1(FIXTURE_PREDS, FIXTURE_GOLDS)
        assert p == EXPECTED_PRECISION
        assert r == EXPECTED_RECALL
        assert f1 == EXPECTED_F1
        assert f1 == pytest.approx(13 / 24, abs=1e-12)

    def test_adding_correct_pair_never_decreases_recall(self):
        gold = BeliefState.build({"a-b": "1", "c-d": "2"})
        small = BeliefState.build({"a-b": "1"})
        bigger = BeliefState.build({"a-b": "1", "c-d": "2"})
        _, r_small, _ = slot_f1([small], [gold])
        _, r_big, _ = slot_f1([bigger], [gold])
        assert r_big >= r_small


class TestIntentAccuracy:
    LABELS = ["a", "b", "c", "d", "e", "f"]

    def _pred(self, gold: str, rank: int) -> IntentPrediction:
        others = [l for l in self.LABELS if l != gold]
        ranked = others[:3]
        if rank <= 3:
            ranked = others[: rank - 1] + [gold] + others[rank - 1 : 3 - 1]
        return IntentPrediction(tuple(ranked[:3]))

    def test_rank_two_counts_at_k2_not_k1(self):
        preds = [self._pred("a", 2)]
        assert intent_accuracy(preds, ["a"], k=1) == 0.0
        assert intent_accuracy(preds, ["a"], k=2) == 1.0

    def test_all_unparseable_scores_zero(self):
        preds = [IntentPrediction(("UNPARSEABLE",))] * 4
        assert intent_accuracy(preds, ["a", "b", "c", "d"], k=3) == 0.0

    def test_ten_example_fixture(self):
        ranks = [1, 1, 2, 3, 4, 1, 2, 1, 1, 1]
        golds = [self.LABELS[i % len(self.LABELS)] for i in range(10)]
        preds = [self._pred(g, r) for g, r in zip(golds, ranks)]
        assert intent_accuracy(preds, golds, k=1) == 0.6
        assert intent_accuracy(preds, golds, k=2) == 0.8
        assert intent_accuracy(preds, golds, k=3) == 0.9

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            intent_accuracy([self._pred("a", 1)], ["a", "b"])


class TestCorpusBleu:
    def test_identity_is_100(self):
        assert corpus_bleu(BLEU_FIXTURE_REFS, BLEU_FIXTURE_REFS) == pytest.approx(100.0, abs=1e-9)

    def test_zero_overlap_single_sentence(self):
        assert corpus_bleu(["aaa bbb ccc ddd"], ["eee fff ggg hhh"]) == 0.0

    def test_fixture_matches_independent_oracle(self):
        ours = corpus_bleu(BLEU_FIXTURE_HYPS, BLEU_FIXTURE_REFS)
        reference = bleu_oracle(BLEU_FIXTURE_HYPS, BLEU_FIXTURE_REFS)
        assert ours == pytest.approx(reference, abs=1e-6)
        # value computed by the oracle, frozen
        assert ours == pytest.approx(60.79025477370329, abs=1e-6)

    def test_case_invariance(self):
        upper = [h.upper() for h in BLEU_FIXTURE_HYPS]
        assert corpus_bleu(upper, BLEU_FIXTURE_REFS) == corpus_bleu(
            BLEU_FIXTURE_HYPS, BLEU_FIXTURE_REFS
        )

    def test_brevity_penalty_applies(self):
        # hypothesis shorter than reference: same 4 tokens, one extra ref token
        score = corpus_bleu(["a b c d"], ["a b c d e"])
        assert 0 < score < 100.0

    def test_errors(self):
        with pytest.raises(LengthMismatch):
            corpus_bleu(["a"], ["a", "b"])
        with pytest.raises(EmptyCorpus):
            corpus_bleu([], [])
