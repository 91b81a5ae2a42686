"""
Unit tests voor sessies, vocabulary, corpus ingestion en splitsen
"""
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.models.errors import CorpusFormatError, GraphFormatError, LabelAccessError
from src.models.session import (
    Comment, Session, SessionLabel, forbid_label_access, inter_arrival_times, label_access_forbidden
)
from src.models.vocabulary import OOV_ID, Vocabulary, tokenize
from src.services.dataset_service import DatasetService


def make_session(timestamps, session_id="s", label=None) -> Session:
    """Helper: sessie met een token per comment"""
    comments = tuple(Comment(tokens=(1,), timestamp=t, author_id="x") for t in timestamps)
    return Session(session_id=session_id, owner_id="o", comments=comments, label=label)


class TestTokenizer:
    """Test suite voor tokenize en Vocabulary"""

    def test_tokenize_lowercases_and_splits(self):
        """UT-SD-01: 'You ARE a loser' geeft vier tokens"""
        assert tokenize("You ARE a loser") == ["you", "are", "a", "loser"]

    def test_tokenize_drops_punctuation_keeps_emoji(self):
        """UT-SD-02: Leestekens weg, emoji blijven als token"""
        assert tokenize("hi!! you,there 😀") == ["hi", "you", "there", "😀"]

    def test_tokenize_whitespace_only(self):
        """UT-SD-03: Alleen whitespace geeft een lege lijst"""
        assert tokenize("  \t\n ") == []

    def test_vocabulary_reserves_oov(self):
        """UT-SD-04: Id 0 is OOV, onbekende tokens mappen daarop"""
        vocabulary = Vocabulary.build([["b", "a", "b"]])

        assert vocabulary.id_of("b") == 1
        assert vocabulary.id_of("a") == 2
        assert vocabulary.id_of("zzz") == OOV_ID
        assert len(vocabulary) == 3
        assert vocabulary.count("b") == 2

    def test_vocabulary_min_token_freq(self):
        """UT-SD-05: Tokens onder min_token_freq krijgen geen eigen id"""
        vocabulary = Vocabulary.build([["a", "a", "b"]], min_token_freq=2)

        assert "a" in vocabulary
        assert "b" not in vocabulary
        assert vocabulary.encode(["a", "b"]) == (1, OOV_ID)

    def test_vocabulary_serialization(self):
        """UT-SD-06: to_dict/from_dict behoudt ids en frequenties"""
        vocabulary = Vocabulary.build([["x", "y", "y"]])

        assert Vocabulary.from_dict(vocabulary.to_dict()) == vocabulary

    def test_decode_out_of_range(self):
        """UT-SD-07: token_of buiten de vocabulary"""
        with pytest.raises(IndexError):
            Vocabulary.build([["a"]]).token_of(5)

    def test_tokenize_keeps_multi_codepoint_emoji(self):
        """UT-SD-08: Emoji met variation selector of huidskleur blijven een token"""
        assert tokenize("I \u2764\ufe0f you \U0001f44d\U0001f3fd") == [
            "i", "\u2764\ufe0f", "you", "\U0001f44d\U0001f3fd"
        ]

    def test_tokenize_zwj_sequence_and_flag(self):
        """UT-SD-09: ZWJ familie en een vlag zijn elk een token"""
        family = "\U0001f468\u200d\U0001f469\u200d\U0001f467"
        flag = "\U0001f1f3\U0001f1f1"

        assert tokenize(f"{family} {flag}{flag}") == [family, flag, flag]

    @pytest.mark.parametrize("text", [
        "caf\u00e9 loser",
        "cafe\u0301 loser",
        "CAFE\u0301 LOSER",
    ])
    def test_tokenize_normalizes_to_nfc(self, text):
        """UT-SD-19: NFD en NFC invoer geven dezelfde tokens"""
        assert tokenize(text) == ["caf\u00e9", "loser"]


class TestSession:
    """Test suite voor Session, Comment en inter_arrival_times"""

    def test_inter_arrival_times(self):
        """UT-SD-10: [3, 7, 7] geeft [3, 4, 0]"""
        assert inter_arrival_times(make_session([3.0, 7.0, 7.0])) == [3.0, 4.0, 0.0]

    def test_inter_arrival_single_comment(self):
        """UT-SD-11: Een comment op t=0 geeft [0]"""
        assert inter_arrival_times(make_session([0.0])) == [0.0]

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(min_value=0.0, max_value=1e6), min_size=1, max_size=1000).map(sorted))
    def test_inter_arrival_telescoping(self, timestamps):
        """UT-SD-12: Som van de intervallen is de laatste timestamp"""
        gaps = inter_arrival_times(make_session(timestamps))

        assert len(gaps) == len(timestamps)
        assert all(g >= 0 for g in gaps)
        assert sum(gaps) == pytest.approx(timestamps[-1], rel=1e-9, abs=1e-6)

    def test_session_rejects_unsorted(self):
        """UT-SD-13: Dalende timestamps zijn ongeldig"""
        with pytest.raises(ValueError):
            make_session([5.0, 2.0])

    def test_comment_needs_tokens(self):
        """UT-SD-14: Comment zonder tokens"""
        with pytest.raises(ValueError):
            Comment(tokens=(), timestamp=0.0, author_id="x")

    def test_label_access_forbidden_on_training_path(self):
        """UT-SD-15: Label lezen binnen forbid_label_access faalt"""
        session = make_session([1.0], label="bullying")

        with forbid_label_access():
            assert label_access_forbidden()
            with pytest.raises(LabelAccessError):
                _ = session.label
        assert session.label is SessionLabel.BULLYING
        assert not label_access_forbidden()

    def test_label_parse(self):
        """UT-SD-16: Label varianten"""
        assert SessionLabel.parse("non_bullying") is SessionLabel.NON_BULLYING
        assert SessionLabel.parse(True) is SessionLabel.BULLYING
        assert SessionLabel.parse(None) is None
        with pytest.raises(ValueError):
            SessionLabel.parse("maybe")

    def test_repr_and_eq_skip_label_on_training_path(self):
        """UT-SD-17: repr, == en hash werken binnen forbid_label_access"""
        bullying = make_session([1.0, 2.0], label="bullying")
        clean = make_session([1.0, 2.0], label="non-bullying")

        with forbid_label_access():
            text = repr(bullying)
            assert bullying == clean
            assert hash(bullying) == hash(clean)

        assert "label" not in text
        assert "'s'" in text

    def test_default_label_is_none(self):
        """UT-SD-18: Zonder label argument is het label None"""
        session = Session(session_id="s", owner_id="o", comments=(Comment((1,), 0.0, "x"),))

        assert session.label is None
        assert not session.has_label


class TestDatasetService:
    """Test suite voor ingest_corpus, save_corpus en split_corpus"""

    @staticmethod
    def record(session_id, comments, **extra):
        return {"session_id": session_id, "owner_id": "u1", "comments": comments, **extra}

    def test_ingest_single_session(self, write_sessions):
        """UT-SD-20: Een sessie met 'You ARE a loser'"""
        path = write_sessions([self.record("s1", [{"author_id": "u2", "timestamp": 1.0, "text": "You ARE a loser"}])])

        corpus = DatasetService().ingest_corpus(path)

        assert len(corpus) == 1
        assert set(corpus.vocabulary.tokens[1:]) == {"you", "are", "a", "loser"}
        session = corpus.sessions[0]
        assert session.n_comments == 1
        assert session.comments[0].length == 4

    def test_ingest_resorts_comments(self, write_sessions):
        """UT-SD-21: Timestamps [5, 2] worden [2, 5]"""
        path = write_sessions([self.record("s1", [
            {"timestamp": 5.0, "text": "later"},
            {"timestamp": 2.0, "text": "earlier"},
        ])])

        session = DatasetService().ingest_corpus(path).sessions[0]

        assert session.timestamps == [2.0, 5.0]
        assert session.comments[0].text == "earlier"

    def test_ingest_epoch_timestamps(self, write_sessions):
        """UT-SD-22: Absolute epochs worden relatief aan created_at of de eerste comment"""
        path = write_sessions([
            self.record("s1", [{"timestamp": 1.6e9 + 10, "text": "a"}, {"timestamp": 1.6e9 + 20, "text": "b"}]),
            self.record("s2", [{"timestamp": 1.6e9 + 10, "text": "a"}], created_at=1.6e9),
        ])

        corpus = DatasetService().ingest_corpus(path)

        assert corpus.sessions[0].timestamps == [0.0, 10.0]
        assert corpus.sessions[1].timestamps == [10.0]

    def test_ingest_drops_empty_sessions(self, write_sessions):
        """UT-SD-23: Sessies zonder tokens vallen weg en worden geteld"""
        path = write_sessions([
            self.record("s1", [{"timestamp": 0.0, "text": "!!!"}]),
            self.record("s2", [{"timestamp": 0.0, "text": "   "}, {"timestamp": 1.0, "text": "ok"}]),
        ])

        corpus = DatasetService().ingest_corpus(path)

        assert corpus.session_ids == ["s2"]
        assert corpus.dropped_sessions == 1
        assert corpus.sessions[0].n_comments == 1

    def test_malformed_record_has_line_number(self, write_sessions):
        """UT-SD-24: Ongeldige JSON op regel 2"""
        path = write_sessions([json.dumps(self.record("s1", [{"timestamp": 0, "text": "a"}])), "{not json"])

        with pytest.raises(CorpusFormatError) as info:
            DatasetService().ingest_corpus(path)
        assert info.value.line_number == 2
        assert "line 2" in str(info.value)

    def test_missing_field(self, write_sessions):
        """UT-SD-25: Record zonder owner_id"""
        path = write_sessions([{"session_id": "s1", "comments": []}])

        with pytest.raises(CorpusFormatError, match="owner_id"):
            DatasetService().ingest_corpus(path)

    def test_graph_feature_dimension_mismatch(self, write_sessions, tmp_path):
        """UT-SD-26: Node regel met meer features dan de header"""
        sessions = write_sessions([self.record("s1", [{"timestamp": 0, "text": "a"}])])
        graph = tmp_path / "graph.txt"
        graph.write_text("users 2 features 1\nu1 0.5\nu2 1.5 2.0\n", encoding="utf-8")

        with pytest.raises(GraphFormatError) as info:
            DatasetService().ingest_corpus(sessions, graph)
        assert info.value.line_number == 3

    def test_graph_unknown_user_edge(self, write_sessions, tmp_path):
        """UT-SD-27: Edge naar een onbekende user"""
        sessions = write_sessions([self.record("s1", [{"timestamp": 0, "text": "a"}])])
        graph = tmp_path / "graph.txt"
        graph.write_text("users 1 features 0\nu1\nu1 u9\n", encoding="utf-8")

        with pytest.raises(GraphFormatError, match="unknown user"):
            DatasetService().ingest_corpus(sessions, graph)

    def test_unknown_owner_is_allowed(self, handmade_corpus):
        """UT-SD-28: Owner buiten de graph staat in unknown_owners"""
        assert handmade_corpus.unknown_owners() == ["s4"]

    def test_save_and_reingest_is_idempotent(self, handmade_corpus, tmp_path):
        """UT-SD-29: save_corpus gevolgd door ingest_corpus geeft hetzelfde corpus"""
        service = DatasetService()
        service.save_corpus(handmade_corpus, tmp_path / "s.jsonl", tmp_path / "g.txt")

        again = service.ingest_corpus(tmp_path / "s.jsonl", tmp_path / "g.txt")

        assert again.sessions == handmade_corpus.sessions
        assert again.vocabulary == handmade_corpus.vocabulary
        assert again.graph == handmade_corpus.graph

    def test_split_sizes_and_determinism(self, synthetic_corpus):
        """UT-SD-30: 10 sessies, 0.8, seed 7 geeft 8/2, elke keer hetzelfde"""
        corpus = synthetic_corpus.subset(range(10))
        service = DatasetService()

        train, test = service.split_corpus(corpus, 0.8, 7)
        train2, test2 = service.split_corpus(corpus, 0.8, 7)

        assert (len(train), len(test)) == (8, 2)
        assert train.session_ids == train2.session_ids
        assert test.session_ids == test2.session_ids
        assert set(train.session_ids).isdisjoint(test.session_ids)
        assert train.vocabulary is corpus.vocabulary

    def test_split_protocol_arithmetic(self, synthetic_corpus):
        """UT-SD-31: 0.8 van 40 sessies geeft 32/8"""
        train, test = DatasetService().split_corpus(synthetic_corpus, 0.8, 0)

        assert (len(train), len(test)) == (32, 8)

    def test_split_seeds_differ(self, synthetic_corpus):
        """UT-SD-32: Andere seed, andere test set"""
        service = DatasetService()
        _, test1 = service.split_corpus(synthetic_corpus, 0.8, 1)
        _, test2 = service.split_corpus(synthetic_corpus, 0.8, 2)

        assert set(test1.session_ids) != set(test2.session_ids)

    def test_split_needs_two_sessions(self, synthetic_corpus):
        """UT-SD-33: Minder dan 2 sessies"""
        with pytest.raises(ValueError):
            DatasetService().split_corpus(synthetic_corpus.subset([0]), 0.8, 0)

    def test_split_does_not_change_arrays(self, synthetic_corpus):
        """UT-SD-34: Subsets delen graph en vocabulary"""
        train, _ = DatasetService().split_corpus(synthetic_corpus, 0.5, 0)

        assert train.graph is synthetic_corpus.graph
        assert np.array_equal(train.graph.features, synthetic_corpus.graph.features)
