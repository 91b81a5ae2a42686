"""
Detection service - energieen en voorspellingen met een getraind model
"""
import logging
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np
import torch

from ..models.batch import SessionBatch
from ..models.config import ThresholdMode
from ..models.energy_head import GmmState, classify_with_threshold, energies, energy_threshold
from ..models.errors import ConfigurationError
from ..models.graph_encoder import GraphTensors, node_features
from ..models.session import Corpus, Session, SessionLabel, SocialGraph
from ..models.temporal_head import IntervalTransform
from ..models.ucd_model import ModelOutput, UcdModel
from ..models.vocabulary import Vocabulary


logger = logging.getLogger(__name__)

# sessies per forward pass bij inferentie
INFERENCE_BATCH_SIZE = 256


@dataclass
class SessionScores:
    """
    Scores van een set sessies

    Attributes:
        session_ids: Ids in corpus volgorde
        representations: N x d matrix ss
        energies: [N] energieen
        predictions: Voorspeld label per sessie
        threshold: Gebruikte energie threshold
    """
    session_ids: list[str]
    representations: np.ndarray
    energies: np.ndarray
    predictions: list[SessionLabel]
    threshold: float

    def as_pairs(self) -> list[tuple[str, float]]:
        """(session_id, energie) paren voor evaluate"""
        return list(zip(self.session_ids, self.energies.tolist()))

    @property
    def n_bullying(self) -> int:
        return sum(1 for p in self.predictions if p is SessionLabel.BULLYING)


def graph_inputs(model: UcdModel, graph: Optional[SocialGraph]) -> tuple[Optional[SocialGraph], Optional[GraphTensors]]:
    """
    Graph en graph tensors voor een forward pass

    Raises:
        ConfigurationError: Als het model een graph nodig heeft die er niet (of anders) is
    """
    if model.graph_encoder is None:
        return None, None
    if graph is None:
        raise ConfigurationError("model uses the graph encoder but no social graph was given")
    n_features = node_features(graph).shape[1]
    if n_features != model.n_features:
        raise ConfigurationError(
            f"graph has {n_features} node features but the model was trained with {model.n_features}"
        )
    return graph, GraphTensors.from_graph(graph)


def iter_outputs(
    model: UcdModel,
    sessions: Sequence[Session],
    graph: Optional[SocialGraph],
    batch_size: int = INFERENCE_BATCH_SIZE
) -> Iterator[tuple[SessionBatch, ModelOutput]]:
    """
    Forward passes zonder gradients, in vaste volgorde

    Yields:
        (batch, output) per blok sessies
    """
    graph, tensors = graph_inputs(model, graph)
    model.eval()
    with torch.no_grad():
        for start in range(0, len(sessions), batch_size):
            batch = model.make_batch(sessions[start:start + batch_size], graph)
            yield batch, model(batch, tensors)


def compute_representations(model: UcdModel, corpus: Corpus) -> np.ndarray:
    """N x d matrix ss voor alle sessies van een corpus"""
    blocks = [output.representations for _, output in iter_outputs(model, corpus.sessions, corpus.graph)]
    return torch.cat(blocks, dim=0).numpy()


class DetectionService:
    """
    Service voor inferentie met een getraind UCD model

    Gebruikt altijd de bevroren GmmState uit de training.
    """

    def __init__(
        self,
        model: UcdModel,
        gmm: GmmState,
        transform: IntervalTransform,
        train_energies: Optional[np.ndarray] = None
    ):
        """
        Initialiseer detection service

        Args:
            model: Getraind model
            gmm: Bevroren GmmState over alle training representaties
            transform: Target transform van de training set
            train_energies: Energieen van de training sessies (voor train_quantile)
        """
        self._model = model
        self._gmm = gmm
        self._transform = transform
        self._train_energies = None if train_energies is None else np.asarray(train_energies, dtype=np.float64)

    @property
    def model(self) -> UcdModel:
        return self._model

    @property
    def gmm(self) -> GmmState:
        return self._gmm

    @property
    def transform(self) -> IntervalTransform:
        return self._transform

    def representations(self, corpus: Corpus) -> np.ndarray:
        """N x d matrix ss voor alle sessies"""
        return compute_representations(self._model, corpus)

    def energies(self, corpus: Corpus) -> np.ndarray:
        """Energie per sessie onder de bevroren GmmState"""
        with torch.no_grad():
            values = energies(torch.from_numpy(self.representations(corpus)), self._gmm)
        return values.numpy()

    def threshold(self, values: np.ndarray, tau: float, mode: ThresholdMode) -> float:
        """
        Energie threshold volgens de threshold mode

        Raises:
            ConfigurationError: train_quantile zonder training energieen
        """
        if mode is ThresholdMode.TRAIN_QUANTILE:
            if self._train_energies is None:
                raise ConfigurationError("train_quantile mode needs the training energies")
            return energy_threshold(self._train_energies, tau)
        return energy_threshold(values, tau)

    def score(
        self,
        corpus: Corpus,
        tau: Optional[float] = None,
        threshold_mode: Optional[ThresholdMode] = None
    ) -> SessionScores:
        """
        Bereken energieen en classificeer

        Args:
            corpus: Sessies om te scoren
            tau: Quantile (default: uit de model config)
            threshold_mode: test_quantile of train_quantile (default: uit de config)

        Returns:
            SessionScores
        """
        config = self._model.config
        tau = config.tau if tau is None else tau
        mode = threshold_mode or config.threshold_mode

        representations = self.representations(corpus)
        with torch.no_grad():
            values = energies(torch.from_numpy(representations), self._gmm).numpy()

        threshold = self.threshold(values, tau, mode)

        predictions = classify_with_threshold(values, threshold)
        logger.info(
            f"Scored {len(values)} sessions ({mode.value}, tau={tau}): "
            f"{sum(p is SessionLabel.BULLYING for p in predictions)} labeled bullying"
        )
        return SessionScores(corpus.session_ids, representations, values, predictions, threshold)

    def attention(self, corpus: Corpus, vocabulary: Optional[Vocabulary] = None) -> list[dict]:
        """
        Attention gewichten per sessie (voor case studies)

        Returns:
            Een dict per sessie met per comment de tokens, woord gewichten en comment gewicht
        """
        vocabulary = vocabulary or corpus.vocabulary
        records = []
        for batch, output in iter_outputs(self._model, corpus.sessions, corpus.graph):
            for index, session_id in enumerate(batch.session_ids):
                encoding = output.text.session(index)
                session = corpus.sessions[len(records)]
                comments = []
                for c_index, weights in enumerate(encoding.word_attention_weights):
                    ids = list(session.comments[c_index].tokens[:len(weights)])
                    comments.append({
                        "token_ids": ids,
                        "tokens": vocabulary.decode(ids),
                        "word_attention": weights.tolist(),
                        "comment_attention": float(encoding.comment_attention_weights[c_index]),
                    })
                records.append({"session_id": session_id, "comments": comments})
        return records

    def intervals(self, corpus: Corpus) -> list[dict]:
        """
        Voorspelde versus echte inter-arrival tijden

        Returns:
            Rijen {session_id, comment_index, actual_dt, predicted_dt} in seconden
        """
        rows = []
        for batch, output in iter_outputs(self._model, corpus.sessions, corpus.graph):
            predicted = self._transform.inverse(output.predictions).numpy()
            actual = batch.intervals.numpy()
            for session_id, part in zip(batch.session_ids, batch.comment_slices()):
                for offset, (a, p) in enumerate(zip(actual[part], predicted[part])):
                    rows.append({
                        "session_id": session_id,
                        "comment_index": offset,
                        "actual_dt": float(a),
                        "predicted_dt": float(p),
                    })
        return rows

    def graph_embeddings(self, graph: SocialGraph) -> tuple[list[str], np.ndarray]:
        """
        User representaties Z

        Raises:
            ConfigurationError: Als het model geen graph encoder heeft
        """
        if self._model.graph_encoder is None:
            raise ConfigurationError("model was trained without the graph encoder (UCDXgraph)")
        _, tensors = graph_inputs(self._model, graph)
        with torch.no_grad():
            z = self._model.graph_encoder(tensors).z
        return graph.user_ids, z.numpy()
