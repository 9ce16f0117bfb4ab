from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zerotod.metrics import TooShort, hdd, mattr, mtld, ttr, vocd

from .oracles import hdd_oracle, mattr_oracle, mtld_oracle, vocd_oracle

_VOCAB_A = [f"word{i}" for i in range(40)]
_VOCAB_B = ["the", "cat", "sat", "on", "a", "mat", "and", "dog", "ran", "fast", "slow", "house"]


def _seeded_tokens(vocab: list[str], n: int, seed: int) -> list[str]:
    rng = random.Random(seed)
    return [rng.choice(vocab) for _ in range(n)]


FIXTURE_TEXTS = {
    "broad": _seeded_tokens(_VOCAB_A, 150, seed=11),
    "narrow": _seeded_tokens(_VOCAB_B, 120, seed=12),
    "mixed": _seeded_tokens(_VOCAB_A[:8] + _VOCAB_B, 90, seed=13),
}


class TestHdd:
    def test_forty_two_identical_tokens(self):
        tokens = ["same"] * 42
        assert hdd(tokens) == pytest.approx(1 / 42, abs=1e-12)
        assert hdd_oracle(tokens) == pytest.approx(1 / 42, abs=1e-12)

    def test_too_short(self):
        with pytest.raises(TooShort):
            hdd(["a"] * 41)

    @pytest.mark.parametrize("name", sorted(FIXTURE_TEXTS))
    def test_matches_oracle(self, name):
        tokens = FIXTURE_TEXTS[name]
        assert hdd(tokens) == pytest.approx(hdd_oracle(tokens), abs=1e-6)

    def test_all_unique_tokens_give_one(self):
        tokens = [f"u{i}" for i in range(60)]
        assert hdd(tokens) == pytest.approx(1.0, abs=1e-9)


class TestMattr:
    def test_window_geq_length_equals_ttr(self):
        tokens = ["a", "b", "a", "c"]
        assert mattr(tokens, window=10) == ttr(tokens)
        assert mattr(tokens, window=4) == ttr(tokens)

    @pytest.mark.parametrize("name", sorted(FIXTURE_TEXTS))
    def test_matches_oracle(self, name):
        tokens = FIXTURE_TEXTS[name]
        assert mattr(tokens, window=50) == pytest.approx(mattr_oracle(tokens, 50), abs=1e-6)

    @given(st.lists(st.sampled_from("abcde"), min_size=1, max_size=120), st.integers(1, 30))
    @settings(max_examples=60, deadline=None)
    def test_rolling_window_agrees_with_naive(self, tokens, window):
        assert mattr(tokens, window) == pytest.approx(mattr_oracle(tokens, window), abs=1e-9)

    def test_invalid_window(self):
        with pytest.raises(ValueError):
            mattr(["a"], window=0)


class TestMtld:
    @pytest.mark.parametrize("name", sorted(FIXTURE_TEXTS))
    def test_matches_oracle(self, name):
        tokens = FIXTURE_TEXTS[name]
        assert mtld(tokens) == pytest.approx(mtld_oracle(tokens), abs=1e-6)

    def test_hundred_token_text_matches_oracle(self):
        tokens = _seeded_tokens(_VOCAB_B, 100, seed=99)
        assert mtld(tokens) == pytest.approx(mtld_oracle(tokens), abs=1e-6)

    def test_all_unique_never_dips(self):
        tokens = [f"u{i}" for i in range(30)]
        assert mtld(tokens) == mtld_oracle(tokens)


class TestVocd:
    @pytest.mark.parametrize("name", sorted(FIXTURE_TEXTS))
    def test_matches_independent_sampling_fit(self, name):
        tokens = FIXTURE_TEXTS[name]
        ours = vocd(tokens)
        reference = vocd_oracle(tokens)
        assert ours == pytest.approx(reference, abs=0.5)

    def test_deterministic_for_fixed_seed(self):
        tokens = FIXTURE_TEXTS["broad"]
        assert vocd(tokens) == vocd(tokens)

    def test_too_short(self):
        with pytest.raises(TooShort):
            vocd(["a"] * 49)


class TestRelabelingInvariance:
    @given(st.lists(st.sampled_from("abcdefg"), min_size=50, max_size=140))
    @settings(max_examples=30, deadline=None)
    def test_bijective_relabeling(self, tokens):
        relabel = {c: f"tok_{c}" for c in "abcdefg"}
        renamed = [relabel[t] for t in tokens]
        assert mattr(tokens, 25) == pytest.approx(mattr(renamed, 25), abs=1e-12)
        assert mtld(tokens) == pytest.approx(mtld(renamed), abs=1e-12)
        if len(tokens) >= 50:
            assert hdd(tokens) == pytest.approx(hdd(renamed), abs=1e-12)
            assert vocd(tokens) == pytest.approx(vocd(renamed), abs=1e-9)
