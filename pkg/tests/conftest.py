"""
Gedeelde fixtures voor de tests
"""
import json

import numpy as np
import pytest
import torch
from scipy import sparse

from src.models.config import SynthSpec, TrainConfig
from src.models.corpus_builder import build_corpus
from src.models.session import CommentRecord, SessionLabel, SessionRecord, SocialGraph
from src.services.synthetic_service import SyntheticCorpusGenerator


# kleine netwerken zodat een training run een paar seconden duurt
TINY_CONFIG = TrainConfig(
    embedding_dim=8,
    word_hidden=4,
    comment_hidden=4,
    social_dim=2,
    graph_hidden=4,
    graph_dim=2,
    membership_hidden=4,
    temporal_hidden=4,
    max_words=8,
    max_comments=6,
    n_components=2,
    batch_size=16,
    epochs=2,
    covariance_jitter=1e-3,
    seed=0,
)

TINY_SPEC = SynthSpec(
    n_sessions=40,
    vocab_size=30,
    profane_vocab_size=5,
    n_users=12,
    mean_degree=3.0,
    min_comments=2,
    max_comments=5,
    min_words=2,
    max_words=5,
    seed=3,
)


@pytest.fixture
def tiny_config() -> TrainConfig:
    return TINY_CONFIG


@pytest.fixture
def tiny_spec() -> SynthSpec:
    return TINY_SPEC


@pytest.fixture(scope="session")
def synthetic_corpus():
    """Klein gelabeld synthetisch corpus met graph"""
    return SyntheticCorpusGenerator().generate(TINY_SPEC)


@pytest.fixture
def small_graph() -> SocialGraph:
    """Drie users: a volgt b, b volgt c"""
    adjacency = sparse.csr_matrix(np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=np.float64))
    features = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    return SocialGraph(adjacency=adjacency, features=features, user_index={"a": 0, "b": 1, "c": 2})


@pytest.fixture
def handmade_corpus(small_graph):
    """Vier sessies met de hand geschreven"""
    records = [
        SessionRecord("s1", "a", [CommentRecord("b", 1.0, "you are a loser"),
                                  CommentRecord("c", 3.0, "loser loser")], 10, 1, SessionLabel.BULLYING),
        SessionRecord("s2", "b", [CommentRecord("a", 2.0, "nice photo"),
                                  CommentRecord("c", 60.0, "great day")], 5, 0, SessionLabel.NON_BULLYING),
        SessionRecord("s3", "c", [CommentRecord("a", 0.5, "what a nice day")], 0, 0, SessionLabel.NON_BULLYING),
        SessionRecord("s4", "zz", [CommentRecord("b", 4.0, "you loser"),
                                   CommentRecord("a", 4.5, "go away"),
                                   CommentRecord("c", 5.0, "loser")], 2, 3, SessionLabel.BULLYING),
    ]
    return build_corpus(records, graph=small_graph)


@pytest.fixture
def write_sessions(tmp_path):
    """Helper die records als JSON lines wegschrijft"""
    def _write(records, name="sessions.jsonl"):
        path = tmp_path / name
        with open(path, "w", encoding="utf-8") as handle:
            for record in records:
                handle.write((record if isinstance(record, str) else json.dumps(record)) + "\n")
        return path
    return _write


@pytest.fixture(autouse=True)
def _fixed_torch_threads():
    # bit-identieke reruns op een CPU
    torch.set_num_threads(1)
    yield
