"""
Unit tests voor de graph auto-encoder
"""
import warnings

import numpy as np
import pytest
import torch
import torch.nn as nn
from scipy import sparse

from src.models.config import SynthSpec
from src.models.gradcheck import numerical_gradient_check
from src.models.graph_encoder import (
    GraphAutoEncoder, GraphTensors, gather_owner_vectors, node_features, normalized_adjacency,
    reconstruction_loss, user_vector
)
from src.models.session import SocialGraph
from src.services.synthetic_service import SyntheticCorpusGenerator


def empty_graph(n_users: int, n_features: int = 1) -> SocialGraph:
    return SocialGraph(
        adjacency=sparse.csr_matrix((n_users, n_users)),
        features=np.ones((n_users, n_features)),
        user_index={f"u{i}": i for i in range(n_users)},
    )


class TestNormalizedAdjacency:
    """Test suite voor de symmetrische normalisatie"""

    def test_matches_formula(self, small_graph):
        """UT-GE-01: D^-1/2 (S + I) D^-1/2 met S de gesymmetriseerde matrix"""
        a = small_graph.dense_adjacency()
        s = ((a + a.T) > 0).astype(float) + np.eye(3)
        d = np.diag(1.0 / np.sqrt(s.sum(axis=1)))

        assert np.allclose(normalized_adjacency(small_graph.adjacency), d @ s @ d, atol=1e-12)

    def test_isolated_node(self):
        """UT-GE-02: Geisoleerde node krijgt via de self-loop graad 1"""
        normalized = normalized_adjacency(empty_graph(3).adjacency)

        assert np.all(np.isfinite(normalized))
        assert np.allclose(normalized, np.eye(3))

    def test_featureless_graph(self):
        """UT-GE-03: D=0 geeft een constante feature kolom"""
        features = node_features(empty_graph(4, n_features=0))

        assert features.shape == (4, 1)
        assert np.all(features == 1.0)


class TestGraphAutoEncoder:
    """Test suite voor GraphAutoEncoder en reconstruction_loss"""

    def test_zero_weights_give_half(self):
        """UT-GE-10: Z = 0 geeft A_hat = 0.5 overal; A = 0, U = 2 geeft g = 0.5"""
        gae = GraphAutoEncoder(1, 4, 2).double()
        nn.init.zeros_(gae.first_layer.weight)
        nn.init.zeros_(gae.second_layer.weight)

        encoding = gae.encode_graph(empty_graph(2))

        assert torch.all(encoding.reconstruction == 0.5)
        assert float(encoding.loss) == 0.5

    def test_loss_matches_double_loop(self):
        """UT-GE-11: g gelijk aan een element-gewijze dubbele loop"""
        rng = np.random.default_rng(0)
        for _ in range(5):
            adjacency = (rng.random((10, 10)) < 0.3).astype(float)
            np.fill_diagonal(adjacency, 0.0)
            z = rng.normal(size=(10, 3))

            _, loss = reconstruction_loss(torch.from_numpy(z), torch.from_numpy(adjacency))

            expected = 0.0
            for u in range(10):
                for v in range(10):
                    expected += (adjacency[u, v] - 1.0 / (1.0 + np.exp(-z[u] @ z[v]))) ** 2
            assert float(loss) == pytest.approx(0.5 * expected, rel=1e-8)

    def test_forward_shapes(self, small_graph):
        """UT-GE-12: Z is U x d_z"""
        torch.manual_seed(0)
        gae = GraphAutoEncoder(2, 5, 3).double()

        encoding = gae(GraphTensors.from_graph(small_graph))

        assert encoding.z.shape == (3, 3)
        assert encoding.reconstruction.shape == (3, 3)
        assert gae.embedding_dim == 3

    def test_user_vector(self, small_graph):
        """UT-GE-13: Bekende user geeft de rij van Z, onbekende de nulvector"""
        torch.manual_seed(0)
        encoding = GraphAutoEncoder(2, 5, 3).double().encode_graph(small_graph)

        assert torch.equal(user_vector(encoding, small_graph, "b"), encoding.z[1])
        unknown = user_vector(encoding, small_graph, "nobody")
        assert unknown.shape == (3,)
        assert torch.count_nonzero(unknown) == 0

    def test_gather_owner_vectors(self):
        """UT-GE-14: Rij -1 geeft nullen"""
        z = torch.arange(6, dtype=torch.float64).reshape(3, 2) + 1.0

        gathered = gather_owner_vectors(z, torch.tensor([2, -1, 0]))

        assert gathered.tolist() == [[5.0, 6.0], [0.0, 0.0], [1.0, 2.0]]

    @pytest.mark.slow
    def test_training_separates_blocks(self):
        """UT-GE-15: Na training lijken users binnen een blok meer op elkaar dan over de blokken"""
        spec = SynthSpec(n_sessions=10, n_users=60, homophily=0.95, mean_degree=8.0, seed=4)
        blocks, graph = SyntheticCorpusGenerator()._generate_graph(spec, np.random.default_rng(4))
        torch.manual_seed(0)
        gae = GraphAutoEncoder(graph.n_features, 16, 8).double()
        tensors = GraphTensors.from_graph(graph)
        optimizer = torch.optim.Adam(gae.parameters(), lr=0.01)

        for _ in range(300):
            optimizer.zero_grad()
            gae(tensors).loss.backward()
            optimizer.step()

        with torch.no_grad():
            z = gae(tensors).z.numpy()
        unit = z / np.maximum(np.linalg.norm(z, axis=1, keepdims=True), 1e-12)
        cosine = unit @ unit.T
        same = blocks[:, None] == blocks[None, :]
        off_diagonal = ~np.eye(len(blocks), dtype=bool)
        assert cosine[same & off_diagonal].mean() > cosine[~same].mean()

    def test_tensors_from_read_only_features(self, small_graph):
        """UT-GE-16: from_graph op read-only features geeft geen warning en een eigen, schrijfbare kopie"""
        assert not small_graph.features.flags.writeable

        with warnings.catch_warnings():
            warnings.simplefilter("error")
            tensors = GraphTensors.from_graph(small_graph)

        tensors.features[0, 0] = 42.0
        assert small_graph.features[0, 0] == 1.0

    @pytest.mark.gradcheck
    def test_loss_gradient_matches_finite_differences(self):
        """UT-GE-17: Gradient van g gelijk aan centrale differenties op een graph met 5 nodes"""
        edges = np.array([
            [0, 1, 1, 0, 0],
            [0, 0, 1, 0, 0],
            [1, 0, 0, 1, 0],
            [0, 0, 0, 0, 1],
            [0, 0, 0, 1, 0],
        ], dtype=np.float64)
        rng = np.random.default_rng(3)
        graph = SocialGraph(
            adjacency=sparse.csr_matrix(edges),
            features=rng.normal(size=(5, 3)),
            user_index={f"u{i}": i for i in range(5)},
        )
        torch.manual_seed(0)
        gae = GraphAutoEncoder(3, 4, 2).double()
        tensors = GraphTensors.from_graph(graph)

        report = numerical_gradient_check(lambda: gae(tensors).loss, list(gae.parameters()), n_samples=20, eps=1e-6)

        assert report.passed(1e-3), report.worst()

    def test_loss_decreases_during_first_steps(self):
        """UT-GE-18: g daalt monotoon over de eerste 50 Adam stappen (gemiddeld over 5 seeds, 2 blokken)"""
        spec = SynthSpec(n_sessions=10, n_users=40, homophily=0.9, mean_degree=6.0, seed=11)
        _, graph = SyntheticCorpusGenerator()._generate_graph(spec, np.random.default_rng(11))
        tensors = GraphTensors.from_graph(graph)

        curves = []
        for seed in range(5):
            torch.manual_seed(seed)
            gae = GraphAutoEncoder(graph.n_features, 32, 16).double()
            optimizer = torch.optim.Adam(gae.parameters(), lr=1e-3)
            losses = []
            for _ in range(50):
                optimizer.zero_grad()
                loss = gae(tensors).loss
                loss.backward()
                optimizer.step()
                losses.append(float(loss.detach()))
            curves.append(losses)

        mean_curve = np.mean(curves, axis=0)
        assert np.all(np.diff(mean_curve) < 0)
