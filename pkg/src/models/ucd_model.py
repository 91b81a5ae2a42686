"""
Het volledige UCD model: tekst encoder, graph encoder, energy head en temporal head
"""
from dataclasses import asdict, dataclass
from typing import Optional

import torch
import torch.nn as nn

from .batch import SessionBatch
from .config import TrainConfig
from .energy_head import GmmState, MembershipNet, energies, estimate_gmm, singularity_penalty
from .errors import ConfigurationError
from .graph_encoder import GraphAutoEncoder, GraphEncoding, GraphTensors, gather_owner_vectors, node_features
from .session import Corpus
from .temporal_head import IntervalTransform, TemporalRegressor, time_loss
from .text_encoder import HierarchicalAttentionNetwork, TextEncoding


@dataclass
class LossReport:
    """
    Termen van de objective voor een stap of epoch

    total_J = time_term + lambda1 * energy_term + lambda2 * graph_term + lambda3 * penalty_term,
    met de termen ongewogen opgeslagen.
    """
    total_J: float
    time_term: float
    energy_term: float
    graph_term: float
    penalty_term: float
    lambda1: float
    lambda2: float
    lambda3: float

    def weighted_total(self) -> float:
        """Herbereken J uit de ongewogen termen"""
        return (
            self.time_term
            + self.lambda1 * self.energy_term
            + self.lambda2 * self.graph_term
            + self.lambda3 * self.penalty_term
        )

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def average(cls, reports: list["LossReport"]) -> "LossReport":
        """Gemiddelde over stappen (de identiteit blijft gelden, want J is lineair)"""
        if not reports:
            raise ValueError("cannot average zero loss reports")
        n = len(reports)
        first = reports[0]
        return cls(
            total_J=sum(r.total_J for r in reports) / n,
            time_term=sum(r.time_term for r in reports) / n,
            energy_term=sum(r.energy_term for r in reports) / n,
            graph_term=sum(r.graph_term for r in reports) / n,
            penalty_term=sum(r.penalty_term for r in reports) / n,
            lambda1=first.lambda1,
            lambda2=first.lambda2,
            lambda3=first.lambda3,
        )


@dataclass
class ModelOutput:
    """
    Forward pass van een batch

    Attributes:
        representations: N x d matrix ss = [z, v, p] (onder de ablaties)
        text: HAN output
        graph: GAE output (None zonder graph encoder)
        predictions: Getransformeerde interval voorspellingen, een per comment
    """
    representations: torch.Tensor
    text: TextEncoding
    graph: Optional[GraphEncoding]
    predictions: torch.Tensor


@dataclass
class LossTerms:
    """Tensors van de objective, nog met autograd geschiedenis"""
    total: torch.Tensor
    time_term: torch.Tensor
    energy_term: torch.Tensor
    graph_term: torch.Tensor
    penalty_term: torch.Tensor
    gmm: GmmState

    def report(self, config: TrainConfig) -> LossReport:
        return LossReport(
            total_J=self.total.detach().item(),
            time_term=self.time_term.detach().item(),
            energy_term=self.energy_term.detach().item(),
            graph_term=self.graph_term.detach().item(),
            penalty_term=self.penalty_term.detach().item(),
            lambda1=config.lambda1,
            lambda2=config.lambda2,
            lambda3=config.lambda3,
        )


class UcdModel(nn.Module):
    """
    Joint model met vier parameter groepen

    text_encoder (HAN), graph_encoder (GAE, ontbreekt onder UCDXgraph),
    membership_net en temporal_regressor. Alles in float64.
    """

    def __init__(self, config: TrainConfig, vocab_size: int, n_features: int = 1):
        """
        Initialiseer het model

        Args:
            config: Training config (dimensies en ablaties)
            vocab_size: |V| inclusief OOV
            n_features: Feature dimensie van de graph
        """
        super().__init__()
        self.config = config
        self.vocab_size = vocab_size
        self.n_features = n_features

        self.text_encoder = HierarchicalAttentionNetwork(
            vocab_size,
            embedding_dim=config.embedding_dim,
            word_hidden=config.word_hidden,
            comment_hidden=config.comment_hidden,
            social_dim=config.social_dim,
            max_words=config.max_words,
            max_comments=config.max_comments,
        )
        self.graph_encoder: Optional[GraphAutoEncoder] = None
        if not config.ablations.no_graph:
            self.graph_encoder = GraphAutoEncoder(n_features, config.graph_hidden, config.graph_dim)
        self.membership_net = MembershipNet(config.representation_dim(), config.n_components, config.membership_hidden)
        self.temporal_regressor = TemporalRegressor(2 * config.word_hidden, config.temporal_hidden)

        self.to(torch.float64)

    @classmethod
    def for_corpus(cls, config: TrainConfig, corpus: Corpus) -> "UcdModel":
        """Factory: leid vocab grootte en feature dimensie af uit een corpus"""
        n_features = node_features(corpus.graph).shape[1] if corpus.graph is not None else 1
        return cls(config, len(corpus.vocabulary), n_features)

    def parameter_groups(self) -> dict[str, list[nn.Parameter]]:
        """Parameters per groep: text, graph, membership, temporal"""
        groups = {
            "text": list(self.text_encoder.parameters()),
            "graph": list(self.graph_encoder.parameters()) if self.graph_encoder is not None else [],
            "membership": list(self.membership_net.parameters()),
            "temporal": list(self.temporal_regressor.parameters()),
        }
        return groups

    def make_batch(self, sessions, graph=None) -> SessionBatch:
        """SessionBatch met de truncatie instellingen van dit model"""
        return SessionBatch.from_sessions(
            sessions, self.config.max_words, self.config.max_comments, graph=graph, dtype=torch.float64
        )

    def forward(self, batch: SessionBatch, graph: Optional[GraphTensors] = None) -> ModelOutput:
        """
        Forward pass

        Args:
            batch: SessionBatch (owner_rows tegen dezelfde graph)
            graph: GraphTensors, verplicht als de graph encoder aan staat

        Returns:
            ModelOutput
        """
        text = self.text_encoder(batch)

        parts = []
        graph_encoding = None
        if self.graph_encoder is not None:
            if graph is None:
                raise ConfigurationError("corpus has no social graph; use ablation UCDXgraph (no_graph)")
            graph_encoding = self.graph_encoder(graph)
            parts.append(gather_owner_vectors(graph_encoding.z, batch.owner_rows))
        if not self.config.ablations.no_text:
            parts.append(text.text_vectors)
        parts.append(text.social_vectors)

        return ModelOutput(
            representations=torch.cat(parts, dim=-1),
            text=text,
            graph=graph_encoding,
            predictions=self.temporal_regressor(text.comment_vectors),
        )

    def compute_loss(
        self,
        output: ModelOutput,
        batch: SessionBatch,
        transform: IntervalTransform
    ) -> LossTerms:
        """
        J = time + lambda1 * mean energie + lambda2 * g + lambda3 * P(Sigma)

        Args:
            output: Forward output van `batch`
            batch: De batch (voor de interval targets)
            transform: Target transform van de training set

        Returns:
            LossTerms met de batch GmmState
        """
        config = self.config
        zero = output.representations.new_zeros(())

        if config.ablations.no_time:
            time_term = zero
        else:
            time_term = time_loss(output.predictions, batch.intervals, transform)

        membership = self.membership_net(output.representations)
        gmm = estimate_gmm(output.representations, membership, config.covariance_jitter)
        energy_term = energies(output.representations, gmm).mean()
        graph_term = output.graph.loss if output.graph is not None else zero
        penalty_term = singularity_penalty(gmm)

        total = (
            time_term
            + config.lambda1 * energy_term
            + config.lambda2 * graph_term
            + config.lambda3 * penalty_term
        )
        return LossTerms(total, time_term, energy_term, graph_term, penalty_term, gmm)

    def architecture(self) -> dict:
        """Wat nodig is om het model opnieuw op te bouwen uit een checkpoint"""
        return {"vocab_size": self.vocab_size, "n_features": self.n_features}
