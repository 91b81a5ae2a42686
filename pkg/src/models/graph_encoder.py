"""
Graph auto-encoder: twee GCN lagen met een inner product decoder
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
import torch
import torch.nn as nn
from scipy import sparse

from .config import ModelDefaults
from .session import SocialGraph


def normalized_adjacency(adjacency: sparse.spmatrix) -> np.ndarray:
    """
    Symmetrisch genormaliseerde adjacency D^-1/2 (S + I) D^-1/2

    S is de gesymmetriseerde follower matrix. Door de self-loops heeft elke
    node graad >= 1, ook geisoleerde nodes.

    Args:
        adjacency: U x U binaire matrix

    Returns:
        Dense U x U matrix
    """
    adjacency = sparse.csr_matrix(adjacency, dtype=np.float64)
    symmetric = ((adjacency + adjacency.T) > 0).astype(np.float64)
    with_loops = symmetric + sparse.identity(adjacency.shape[0], dtype=np.float64, format="csr")
    degree = np.asarray(with_loops.sum(axis=1)).ravel()
    inv_sqrt = sparse.diags(1.0 / np.sqrt(degree))
    return (inv_sqrt @ with_loops @ inv_sqrt).toarray()


def node_features(graph: SocialGraph) -> np.ndarray:
    """Feature matrix X; een graph zonder features krijgt een constante kolom"""
    if graph.n_features == 0:
        return np.ones((graph.n_users, 1), dtype=np.float64)
    return np.asarray(graph.features, dtype=np.float64)


@dataclass
class GraphTensors:
    """
    Tensors van een graph die tijdens training vast blijven

    Attributes:
        features: U x D feature matrix
        normalized: Genormaliseerde adjacency voor de encoder
        adjacency: Opgeslagen (gerichte) adjacency, doel van de reconstructie
    """
    features: torch.Tensor
    normalized: torch.Tensor
    adjacency: torch.Tensor

    @classmethod
    def from_graph(cls, graph: SocialGraph, dtype: torch.dtype = torch.float64) -> "GraphTensors":
        return cls(
            # kopie: graph.features is read-only
            features=torch.from_numpy(np.array(node_features(graph), dtype=np.float64, copy=True)).to(dtype),
            normalized=torch.as_tensor(normalized_adjacency(graph.adjacency), dtype=dtype),
            adjacency=torch.as_tensor(graph.dense_adjacency(), dtype=dtype),
        )


@dataclass
class GraphEncoding:
    """
    Output van de graph encoder

    Attributes:
        z: U x d_z user representaties
        reconstruction: A_hat = sigmoid(Z Z^T)
        loss: g = 1/2 ||A - A_hat||^2
    """
    z: torch.Tensor
    reconstruction: torch.Tensor
    loss: torch.Tensor


def reconstruction_loss(z: torch.Tensor, adjacency: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
    """
    Inner product decoder en squared error loss

    Args:
        z: U x d_z embeddings
        adjacency: U x U doel matrix

    Returns:
        (A_hat, g)
    """
    reconstruction = torch.sigmoid(z @ z.T)
    loss = 0.5 * ((adjacency - reconstruction) ** 2).sum()
    return reconstruction, loss


class GraphAutoEncoder(nn.Module):
    """
    Twee-laags GCN encoder: Z = N relu(N X W1) W2 met N de genormaliseerde adjacency
    """

    def __init__(
        self,
        n_features: int,
        hidden_dim: int = ModelDefaults.GRAPH_HIDDEN,
        embedding_dim: int = ModelDefaults.GRAPH_DIM
    ):
        """
        Initialiseer GAE

        Args:
            n_features: D (minstens 1, zie node_features)
            hidden_dim: Breedte van de eerste laag
            embedding_dim: d_z
        """
        super().__init__()
        self.first_layer = nn.Linear(max(n_features, 1), hidden_dim, bias=False)
        self.second_layer = nn.Linear(hidden_dim, embedding_dim, bias=False)
        nn.init.xavier_uniform_(self.first_layer.weight)
        nn.init.xavier_uniform_(self.second_layer.weight)

    @property
    def embedding_dim(self) -> int:
        """d_z"""
        return self.second_layer.out_features

    def forward(self, tensors: GraphTensors) -> GraphEncoding:
        """
        Encode de hele graph en bereken de reconstructie loss

        Args:
            tensors: GraphTensors van de graph

        Returns:
            GraphEncoding
        """
        hidden = torch.relu(tensors.normalized @ self.first_layer(tensors.features))
        z = tensors.normalized @ self.second_layer(hidden)
        reconstruction, loss = reconstruction_loss(z, tensors.adjacency)
        return GraphEncoding(z=z, reconstruction=reconstruction, loss=loss)

    def encode_graph(self, graph: SocialGraph) -> GraphEncoding:
        """Encode een SocialGraph direct"""
        dtype = self.first_layer.weight.dtype
        return self(GraphTensors.from_graph(graph, dtype=dtype))


def user_vector(encoding: GraphEncoding, graph: SocialGraph, user_id: str) -> torch.Tensor:
    """
    Representatie van een user

    Args:
        encoding: GraphEncoding van `graph`
        graph: De graph
        user_id: Gezochte user

    Returns:
        Rij van Z, of de nulvector voor een onbekende user
    """
    row: Optional[int] = graph.index_of(user_id)
    if row is None:
        return torch.zeros(encoding.z.shape[1], dtype=encoding.z.dtype)
    return encoding.z[row]


def gather_owner_vectors(z: torch.Tensor, owner_rows: torch.Tensor) -> torch.Tensor:
    """
    Owner representaties voor een batch

    Args:
        z: U x d_z embeddings
        owner_rows: [N] rij indices, -1 voor onbekende owners

    Returns:
        N x d_z; nulvectoren voor onbekende owners
    """
    # rij -1 valt op de toegevoegde nulrij
    padded = torch.cat([z, torch.zeros(1, z.shape[1], dtype=z.dtype)], dim=0)
    return padded[owner_rows]
