from __future__ import annotations

import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from microstyle.errors import (
    MalformedLine,
    MissingFluency,
    NoCandidates,
    UnknownId,
    UnselectedPair,
)
from microstyle.pairs import (
    DEFAULT_MAX_PERPLEXITY,
    DEFAULT_MIN_ADVERSARIAL,
    ZERO_NORM,
    FluencyRecord,
    diversity_filter,
    fluency_filter,
    read_fluency,
    select_best_paraphrase,
    write_fluency,
)
from microstyle.records import PairRecord
from microstyle.styles import bucket_of, default_config

from support import make_record


def fa_records(vectors: dict[str, tuple[float, float]]) -> list:
    return [make_record(rid, formality=f, arousal=a)
            for rid, (f, a) in vectors.items()]


class TestSelectBestParaphrase:
    def test_worked_example(self, fa_config):
        records = fa_records({
            "anchor": (0.9, 0.1),
            "near": (0.8, 0.2),
            "far": (0.1, 0.9),
        })
        pair = PairRecord(anchor_id="anchor", candidate_ids=("near", "far"))
        out = select_best_paraphrase(pair, records, fa_config)
        assert out.selected_id == "far"
        # Exact distance of the winner: 1 - (0.18 / 0.82) = 32/41.
        assert 1.0 - (0.18 / 0.82) == 0.7804878048780488

    def test_single_candidate(self, fa_config):
        records = fa_records({"anchor": (0.5, 0.5), "only": (0.5, 0.5)})
        pair = PairRecord(anchor_id="anchor", candidate_ids=("only",))
        assert select_best_paraphrase(pair, records, fa_config).selected_id == "only"

    def test_tie_keeps_earliest(self, fa_config):
        # Two candidates at identical distance from the anchor.
        records = fa_records({
            "anchor": (0.5, 0.5),
            "second": (0.9, 0.1),
            "first": (0.1, 0.9),
        })
        pair = PairRecord(anchor_id="anchor", candidate_ids=("second", "first"))
        out = select_best_paraphrase(pair, records, fa_config)
        assert out.selected_id == "second"

    def test_zero_norm_candidate_similarity_zero(self, fa_config):
        # A candidate with an all-zero style vector has similarity 0, hence
        # distance 1 -- further than any angle-positive candidate.
        records = fa_records({
            "anchor": (0.8, 0.6),
            "aligned": (0.8, 0.6),
            "null": (0.0, 0.0),
        })
        pair = PairRecord(anchor_id="anchor", candidate_ids=("aligned", "null"))
        out = select_best_paraphrase(pair, records, fa_config)
        assert out.selected_id == "null"

    def test_no_candidates(self, fa_config):
        pair = PairRecord(anchor_id="anchor", candidate_ids=())
        with pytest.raises(NoCandidates):
            select_best_paraphrase(pair, fa_records({"anchor": (0.5, 0.5)}), fa_config)

    def test_unknown_candidate_id(self, fa_config):
        pair = PairRecord(anchor_id="anchor", candidate_ids=("ghost",))
        with pytest.raises(UnknownId):
            select_best_paraphrase(pair, fa_records({"anchor": (0.5, 0.5)}), fa_config)

    def test_preserves_candidate_list(self, fa_config):
        records = fa_records({"anchor": (0.9, 0.1), "c1": (0.1, 0.9), "c2": (0.5, 0.5)})
        pair = PairRecord(anchor_id="anchor", candidate_ids=("c1", "c2"))
        out = select_best_paraphrase(pair, records, fa_config)
        assert out.candidate_ids == ("c1", "c2")
        assert out.anchor_id == "anchor"

    @given(st.lists(
        st.tuples(st.floats(min_value=0.0, max_value=1.0),
                  st.floats(min_value=0.0, max_value=1.0)),
        min_size=1, max_size=6,
    ), st.tuples(st.floats(min_value=0.0, max_value=1.0),
                 st.floats(min_value=0.0, max_value=1.0)))
    def test_matches_brute_force(self, candidate_vecs, anchor_vec):
        # Exact rational oracle. Scores are non-negative, so cosines are too,
        # and ordering by cosine equals ordering by its square — which is a
        # plain Fraction, no square roots involved. Two kinds of boundary
        # case are assumed away, because there the implementation's float
        # rounding legitimately lands on either side: vectors whose norm sits
        # within a whisker of the degenerate-vector threshold, and candidate
        # sets whose true distances (nearly) tie — exact ties are pinned down
        # by the deterministic tests above.
        def norm_sq(vec):
            x, y = Fraction(vec[0]), Fraction(vec[1])
            return x * x + y * y

        threshold = Fraction(ZERO_NORM) ** 2
        assume(all(norm_sq(vec) < threshold * Fraction(1, 2)
                   or norm_sq(vec) > threshold * 2
                   for vec in (anchor_vec, *candidate_vecs)))

        def cos_sq(a, b):
            if norm_sq(a) < threshold or norm_sq(b) < threshold:
                return Fraction(0)
            ax, ay = Fraction(a[0]), Fraction(a[1])
            bx, by = Fraction(b[0]), Fraction(b[1])
            dot = ax * bx + ay * by
            return dot * dot / (norm_sq(a) * norm_sq(b))

        similarities = [cos_sq(anchor_vec, vec) for vec in candidate_vecs]
        assume(all(abs(a - b) > Fraction(1, 10**9)
                   for a, b in itertools.combinations(similarities, 2)))

        config = default_config(["formality", "arousal"])
        vectors = {"anchor": anchor_vec}
        vectors.update({f"c{i}": v for i, v in enumerate(candidate_vecs)})
        records = fa_records(vectors)
        pair = PairRecord(anchor_id="anchor",
                          candidate_ids=tuple(f"c{i}" for i in range(len(candidate_vecs))))
        out = select_best_paraphrase(pair, records, config)

        best_index = min(range(len(similarities)), key=similarities.__getitem__)
        assert out.selected_id == f"c{best_index}"


class TestDiversityFilter:
    def test_keeps_pairs_differing_in_any_bucket(self, fa_config):
        records = fa_records({
            "a1": (0.9, 0.1), "p1": (0.9, 0.9),   # arousal bucket differs
            "a2": (0.45, 0.45), "p2": (0.55, 0.5),  # both mid -> same buckets
        })
        pairs = [
            PairRecord("a1", ("p1",), selected_id="p1"),
            PairRecord("a2", ("p2",), selected_id="p2"),
        ]
        kept = diversity_filter(pairs, records, fa_config)
        assert [p.anchor_id for p in kept] == ["a1"]

    def test_same_bucket_different_scores_dropped(self, fa_config):
        # Scores differ but every style lands in the same bucket.
        records = fa_records({"a": (0.61, 0.7), "p": (0.94, 0.9)})
        pairs = [PairRecord("a", ("p",), selected_id="p")]
        assert diversity_filter(pairs, records, fa_config) == []

    def test_empty_input(self, fa_config):
        assert diversity_filter([], {}, fa_config) == []

    def test_unselected_pair_raises(self, fa_config):
        records = fa_records({"a": (0.5, 0.5), "p": (0.1, 0.1)})
        with pytest.raises(UnselectedPair):
            diversity_filter([PairRecord("a", ("p",))], records, fa_config)

    @given(st.lists(st.tuples(
        st.floats(min_value=0.0, max_value=1.0), st.floats(min_value=0.0, max_value=1.0),
        st.floats(min_value=0.0, max_value=1.0), st.floats(min_value=0.0, max_value=1.0),
    ), max_size=8))
    def test_matches_bucket_oracle(self, rows):
        from microstyle.styles import default_config
        config = default_config(["formality", "arousal"])
        records, pairs, expected = [], [], []
        for i, (af, aa, pf, pa) in enumerate(rows):
            records.append(make_record(f"a{i}", formality=af, arousal=aa))
            records.append(make_record(f"p{i}", formality=pf, arousal=pa))
            pairs.append(PairRecord(f"a{i}", (f"p{i}",), selected_id=f"p{i}"))
            if (bucket_of(af), bucket_of(aa)) != (bucket_of(pf), bucket_of(pa)):
                expected.append(f"a{i}")
        kept = diversity_filter(pairs, records, config)
        assert [p.anchor_id for p in kept] == expected


class TestFluencyFilter:
    def test_thresholds(self):
        records = [make_record("keep"), make_record("toowild"), make_record("onedge")]
        fluency = {
            "keep": FluencyRecord("keep", perplexity=100.0, adversarial=0.5),
            "toowild": FluencyRecord("toowild", perplexity=400.0, adversarial=0.5),
            "onedge": FluencyRecord("onedge", perplexity=365.0, adversarial=0.1),
        }
        kept = fluency_filter(records, fluency)
        assert [r.id for r in kept] == ["keep"]

    def test_bounds_are_strict(self):
        # Exactly at either bound fails: < 365 and > 0.1 are strict.
        at_ppl = FluencyRecord("x", perplexity=DEFAULT_MAX_PERPLEXITY, adversarial=0.9)
        at_adv = FluencyRecord("y", perplexity=10.0, adversarial=DEFAULT_MIN_ADVERSARIAL)
        assert not at_ppl.passes(DEFAULT_MAX_PERPLEXITY, DEFAULT_MIN_ADVERSARIAL)
        assert not at_adv.passes(DEFAULT_MAX_PERPLEXITY, DEFAULT_MIN_ADVERSARIAL)
        just_in = FluencyRecord("z", perplexity=364.999, adversarial=0.101)
        assert just_in.passes(DEFAULT_MAX_PERPLEXITY, DEFAULT_MIN_ADVERSARIAL)

    def test_custom_thresholds(self):
        records = [make_record("a")]
        fluency = {"a": FluencyRecord("a", perplexity=50.0, adversarial=0.2)}
        assert fluency_filter(records, fluency, max_perplexity=40.0) == []
        assert fluency_filter(records, fluency, min_adversarial=0.3) == []
        assert len(fluency_filter(records, fluency)) == 1

    def test_missing_fluency_raises(self):
        with pytest.raises(MissingFluency):
            fluency_filter([make_record("a")], {})

    def test_preserves_order(self):
        records = [make_record(f"r{i}") for i in range(5)]
        fluency = {f"r{i}": FluencyRecord(f"r{i}", 10.0, 0.9) for i in range(5)}
        kept = fluency_filter(records, fluency)
        assert [r.id for r in kept] == [f"r{i}" for i in range(5)]


class TestFluencyIO:
    def test_round_trip(self, tmp_path):
        rows = [FluencyRecord("a", 123.5, 0.25), FluencyRecord("b", 9.0, 1.0)]
        write_fluency(rows, tmp_path / "f.jsonl")
        assert read_fluency(tmp_path / "f.jsonl") == {"a": rows[0], "b": rows[1]}

    def test_integer_values_accepted(self, tmp_path):
        (tmp_path / "f.jsonl").write_text(
            '{"id": "a", "perplexity": 120, "adversarial": 1}\n', encoding="utf-8")
        rows = read_fluency(tmp_path / "f.jsonl")
        assert rows["a"].perplexity == 120.0

    @pytest.mark.parametrize("line, reason", [
        ('{"id": "a", "perplexity": 0, "adversarial": 0.5}', "perplexity"),
        ('{"id": "a", "perplexity": -3, "adversarial": 0.5}', "perplexity"),
        ('{"id": "a", "perplexity": 10, "adversarial": 1.5}', "adversarial"),
        ('{"id": "a", "perplexity": 10, "adversarial": -0.1}', "adversarial"),
        ('{"id": "a", "perplexity": 10}', "adversarial"),
        ('{"perplexity": 10, "adversarial": 0.5}', "id"),
    ])
    def test_invalid_rows(self, tmp_path, line, reason):
        (tmp_path / "f.jsonl").write_text(line + "\n", encoding="utf-8")
        with pytest.raises(MalformedLine) as exc:
            read_fluency(tmp_path / "f.jsonl")
        assert reason in str(exc.value)

    def test_duplicate_id(self, tmp_path):
        (tmp_path / "f.jsonl").write_text(
            '{"id": "a", "perplexity": 10, "adversarial": 0.5}\n'
            '{"id": "a", "perplexity": 11, "adversarial": 0.6}\n', encoding="utf-8")
        with pytest.raises(MalformedLine) as exc:
            read_fluency(tmp_path / "f.jsonl")
        assert exc.value.details["line"] == 2
