from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from microstyle.errors import EmptyText, UnknownStyle
from microstyle.records import SentenceRecord
from microstyle.scoring import (
    ScorerSpec,
    load_external_scores,
    load_lexicon,
    score_arousal_heuristic,
    score_formality_heuristic,
    score_records,
)

from support import make_record


class TestFormalityHeuristic:
    @pytest.mark.parametrize("text, expected", [
        ("I am pleased.", 0.8),          # no contractions, no exclamations
        ("I'm happy!", 0.5),             # one contraction, one exclamation
        ("can't won't don't!!", 0.0),    # clamped below zero
        ("Okay.", 0.8),
        ("Wow!!", 0.6),
    ])
    def test_examples(self, text, expected):
        assert score_formality_heuristic(text) == expected

    def test_curly_apostrophe_counts_as_contraction(self):
        assert score_formality_heuristic("I’m here.") == score_formality_heuristic("I'm here.")

    def test_possessive_counts(self):
        # The heuristic is a letter-apostrophe-letter pattern; it does not
        # distinguish possessives from contractions.
        assert score_formality_heuristic("the cat's mat") == 0.6

    def test_trailing_apostrophe_ignored(self):
        assert score_formality_heuristic("dogs' dinner") == 0.8

    def test_empty_raises(self):
        with pytest.raises(EmptyText):
            score_formality_heuristic("   ")

    @given(st.text(min_size=1).filter(lambda t: t.strip()))
    def test_range(self, text):
        assert 0.0 <= score_formality_heuristic(text) <= 1.0

    def test_exact_tenths(self):
        score = score_formality_heuristic("I'm happy!")
        assert score == 0.5
        assert round(score * 10) == score * 10


class TestArousalHeuristic:
    @pytest.mark.parametrize("text, lexicon, expected", [
        ("Okay.", frozenset(), 0.2),
        ("Wow!!", frozenset({"wow"}), 0.7),     # 0.2 + 0.4 + 0.1
        ("Really?", frozenset(), 0.3),
        ("No.", frozenset(), 0.2),
        ("Amazing! Simply amazing!", frozenset({"amazing"}), 0.8),  # 0.2+0.4+0.2
    ])
    def test_examples(self, text, lexicon, expected):
        assert score_arousal_heuristic(text, lexicon) == expected

    def test_clamps_at_one(self):
        assert score_arousal_heuristic("!!!!!!!", frozenset()) == 1.0

    def test_lexicon_match_is_case_insensitive(self):
        lexicon = frozenset({"wow"})
        assert score_arousal_heuristic("WOW", lexicon) == score_arousal_heuristic("wow", lexicon)

    def test_lexicon_matches_whole_words(self):
        # "wowed" must not count as a hit for "wow".
        assert score_arousal_heuristic("wowed", frozenset({"wow"})) == 0.2

    def test_empty_raises(self):
        with pytest.raises(EmptyText):
            score_arousal_heuristic("")

    @given(st.text(min_size=1).filter(lambda t: t.strip()))
    def test_range(self, text):
        assert 0.0 <= score_arousal_heuristic(text, frozenset({"wow"})) <= 1.0


class TestScoreRecords:
    def test_attaches_requested_styles(self):
        records = [make_record("a", text="I'm happy!")]
        out = score_records(records, ["formality", "arousal"])
        assert out[0].scores == {"formality": 0.5, "arousal": 0.4}

    def test_preserves_existing_scores(self):
        record = SentenceRecord(id="a", text="Okay.", scores={"bias": 0.9})
        out = score_records([record], ["formality"])
        assert out[0].scores == {"bias": 0.9, "formality": 0.8}

    def test_deterministic(self):
        records = [make_record("a", text="Wow! Really?")]
        first = score_records(records, ["formality", "arousal"])
        second = score_records(records, ["formality", "arousal"])
        assert first == second

    def test_unknown_style_raises(self):
        with pytest.raises(UnknownStyle):
            score_records([make_record("a")], ["sarcasm"])

    def test_does_not_mutate_input(self):
        record = SentenceRecord(id="a", text="Okay.", scores={"bias": 0.9})
        score_records([record], ["formality"])
        assert record.scores == {"bias": 0.9}


class TestLexiconIO:
    def test_load(self, tmp_path):
        path = tmp_path / "lex.txt"
        path.write_text("Amazing\n\nwow\n  thrilled  \n", encoding="utf-8")
        assert load_lexicon(path) == frozenset({"amazing", "wow", "thrilled"})


class TestExternalScores:
    def test_validates_produced_styles(self, tmp_path):
        path = tmp_path / "scores.jsonl"
        path.write_text('{"id": "a", "styles": {"bias": 0.5}}\n', encoding="utf-8")
        spec = ScorerSpec("clf", ("formality",), "external-file")
        with pytest.raises(UnknownStyle):
            load_external_scores(spec, path)

    def test_loads_matching_styles(self, tmp_path):
        path = tmp_path / "scores.jsonl"
        path.write_text('{"id": "a", "styles": {"bias": 0.5}}\n', encoding="utf-8")
        spec = ScorerSpec("clf", ("bias",), "external-file")
        assert load_external_scores(spec, path) == {"a": {"bias": 0.5}}

    def test_heuristic_spec_rejected(self, tmp_path):
        spec = ScorerSpec("h", ("formality",), "heuristic")
        with pytest.raises(ValueError):
            load_external_scores(spec, tmp_path / "unused.jsonl")

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            ScorerSpec("x", (), "magic")
