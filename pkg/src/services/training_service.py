"""
Training service - joint minimalisatie van de UCD objective
"""
import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np
import torch

from ..models.config import AblationVariant, TrainConfig
from ..models.energy_head import GmmState, energies, estimate_gmm, energy_threshold
from ..models.errors import NonFiniteLossError
from ..models.graph_encoder import GraphTensors
from ..models.session import Corpus, forbid_label_access, inter_arrival_times
from ..models.temporal_head import IntervalTransform
from ..models.ucd_model import LossReport, LossTerms, UcdModel
from ..models.vocabulary import Vocabulary
from ..validators.config_validator import TrainConfigValidator
from ..validators.corpus_validator import CorpusValidator
from .detection_service import DetectionService, compute_representations


logger = logging.getLogger(__name__)


class ITrainingObserver(ABC):
    """
    Interface voor training observers

    Events: epoch_start, epoch_complete, training_complete
    """

    @abstractmethod
    def update(self, event_type: str, data: Any) -> None:
        pass


class LoggingObserver(ITrainingObserver):
    """Schrijft training events naar de log"""

    def update(self, event_type: str, data: Any) -> None:
        if event_type == "epoch_complete":
            report: LossReport = data["report"]
            logger.info(
                f"Epoch {data['epoch']}/{data['epochs']}: J={report.total_J:.6g} "
                f"(time={report.time_term:.6g}, energy={report.energy_term:.6g}, "
                f"graph={report.graph_term:.6g}, penalty={report.penalty_term:.6g})"
            )
        elif event_type == "training_complete":
            logger.info(f"Training complete in {data['wall_time']:.2f}s over {data['epochs']} epochs")
        else:
            logger.debug(f"{event_type}: {data}")


@dataclass
class TrainingResult:
    """
    Alles wat een training run oplevert

    Attributes:
        model: Getraind model
        gmm: Bevroren GmmState over alle training representaties
        transform: Target transform van de intervallen
        history: Gemiddelde LossReport per epoch
        steps: LossReport per optimizer stap
        train_energies: Energie van elke training sessie onder de bevroren GMM
        config: Gebruikte config
        vocabulary: Vocabulary van het corpus
        wall_time: Duur in seconden
    """
    model: UcdModel
    gmm: GmmState
    transform: IntervalTransform
    history: list[LossReport]
    steps: list[LossReport]
    train_energies: np.ndarray
    config: TrainConfig
    vocabulary: Vocabulary
    wall_time: float

    @property
    def train_threshold(self) -> float:
        """tau-quantile van de training energieen"""
        return energy_threshold(self.train_energies, self.config.tau)

    def detector(self) -> DetectionService:
        """DetectionService met het getrainde model"""
        return DetectionService(self.model, self.gmm, self.transform, self.train_energies)


def ablate(config: TrainConfig, variant: Optional[AblationVariant]) -> TrainConfig:
    """
    Config voor een ablatie variant

    UCDXtext haalt v uit ss, UCDXtime haalt de time term uit J, UCDXgraph
    haalt z uit ss en de graph term uit J. None geeft het volledige model.

    Args:
        config: Basis config
        variant: Ablatie variant of None

    Returns:
        Nieuwe TrainConfig
    """
    return config.with_variant(variant)


class TrainingService:
    """
    Service voor het trainen van UCD

    Implementeert Observer Pattern voor voortgang per epoch.
    """

    def __init__(self, config_validator: Optional[TrainConfigValidator] = None):
        """
        Initialiseer training service

        Args:
            config_validator: Validator voor de config (optioneel, anders default)
        """
        self._config_validator = config_validator or TrainConfigValidator()
        self._observers: list[ITrainingObserver] = []

    def add_observer(self, observer: ITrainingObserver) -> None:
        """Voeg een observer toe"""
        self._observers.append(observer)

    def remove_observer(self, observer: ITrainingObserver) -> None:
        """Verwijder een observer"""
        if observer in self._observers:
            self._observers.remove(observer)

    def _notify_observers(self, event_type: str, data: Any) -> None:
        for observer in self._observers:
            try:
                observer.update(event_type, data)
            except Exception as e:
                logger.error(f"Error notifying observer: {e}", exc_info=True)

    @staticmethod
    def batch_indices(order: np.ndarray, batch_size: int, n_components: int) -> list[np.ndarray]:
        """
        Deel een permutatie op in batches

        De laatste onvolledige batch blijft, maar een batch kleiner dan K
        gaat op in de batch ervoor.

        Args:
            order: Permutatie van sessie posities
            batch_size: N
            n_components: K

        Returns:
            Lijst met index arrays
        """
        batches = [order[start:start + batch_size] for start in range(0, len(order), batch_size)]
        if len(batches) > 1 and len(batches[-1]) < n_components:
            tail = batches.pop()
            batches[-1] = np.concatenate([batches[-1], tail])
        return batches

    @staticmethod
    def _check_finite(terms: LossTerms) -> None:
        """
        Raises:
            NonFiniteLossError: Met de naam van de eerste niet-eindige term
        """
        for name in ("time_term", "energy_term", "graph_term", "penalty_term", "total"):
            value = getattr(terms, name)
            if not bool(torch.isfinite(value)):
                raise NonFiniteLossError(name, value.detach().item())

    @staticmethod
    def fit_transform(corpus: Corpus, max_comments: int) -> IntervalTransform:
        """Target transform op de (afgekapte) training intervallen"""
        intervals = [dt for s in corpus.sessions for dt in inter_arrival_times(s)[:max_comments]]
        return IntervalTransform.fit(intervals)

    def train(self, corpus: Corpus, config: TrainConfig) -> TrainingResult:
        """
        Train het model op een corpus

        Args:
            corpus: Training corpus (labels worden niet gelezen)
            config: Training config

        Returns:
            TrainingResult met bevroren GmmState en de loss geschiedenis

        Raises:
            ConfigurationError: Bij een ongeldige config of corpus/variant combinatie
            NonFiniteLossError: Als een term van J niet eindig wordt
        """
        self._config_validator.validate_or_raise(config)
        CorpusValidator(config).validate_or_raise(corpus)

        started = time.perf_counter()
        torch.manual_seed(config.seed)
        rng = np.random.default_rng(config.seed)

        with forbid_label_access():
            model = UcdModel.for_corpus(config, corpus)
            graph = corpus.graph if model.graph_encoder is not None else None
            graph_tensors = GraphTensors.from_graph(graph) if graph is not None else None
            transform = self.fit_transform(corpus, config.max_comments)

            optimizer = torch.optim.Adam(
                model.parameters(),
                lr=config.learning_rate,
                betas=(config.adam_beta1, config.adam_beta2),
                eps=config.adam_eps
            )

            if len(corpus) < config.n_components:
                logger.warning(f"Corpus has {len(corpus)} sessions, fewer than K={config.n_components}")

            logger.info(
                f"Training {config.variant.value if config.variant else 'UCD'} on {len(corpus)} sessions, "
                f"d={config.representation_dim()}, K={config.n_components}, epochs={config.epochs}"
            )

            history: list[LossReport] = []
            steps: list[LossReport] = []
            for epoch in range(1, config.epochs + 1):
                self._notify_observers("epoch_start", {"epoch": epoch, "epochs": config.epochs})
                model.train()
                epoch_reports = []
                for indices in self.batch_indices(rng.permutation(len(corpus)), config.batch_size, config.n_components):
                    batch = model.make_batch([corpus.sessions[i] for i in indices], graph)
                    optimizer.zero_grad()
                    # graph wordt elke batch opnieuw ge-encode zodat z meeloopt met de GAE
                    output = model(batch, graph_tensors)
                    terms = model.compute_loss(output, batch, transform)
                    self._check_finite(terms)
                    terms.total.backward()
                    optimizer.step()
                    epoch_reports.append(terms.report(config))

                steps.extend(epoch_reports)
                report = LossReport.average(epoch_reports)
                history.append(report)
                self._notify_observers("epoch_complete", {"epoch": epoch, "epochs": config.epochs, "report": report})

            gmm, train_energies = self.freeze_gmm(model, corpus)

        wall_time = time.perf_counter() - started
        self._notify_observers("training_complete", {"epochs": config.epochs, "wall_time": wall_time})

        return TrainingResult(
            model=model,
            gmm=gmm,
            transform=transform,
            history=history,
            steps=steps,
            train_energies=train_energies,
            config=config,
            vocabulary=corpus.vocabulary,
            wall_time=wall_time,
        )

    @staticmethod
    def freeze_gmm(model: UcdModel, corpus: Corpus) -> tuple[GmmState, np.ndarray]:
        """
        Schat de GmmState eenmalig over alle training representaties

        Returns:
            (bevroren GmmState, training energieen)
        """
        representations = torch.from_numpy(compute_representations(model, corpus))
        with torch.no_grad():
            membership = model.membership_net(representations)
            gmm = estimate_gmm(representations, membership, model.config.covariance_jitter).detach()
            train_energies = energies(representations, gmm).numpy()
        if gmm.degenerate:
            logger.warning(f"Frozen GMM has degenerate components {list(gmm.degenerate)}")
        return gmm, train_energies
