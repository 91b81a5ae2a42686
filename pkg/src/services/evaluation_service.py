"""
Evaluation service - metrics, threshold curves en herhaalde runs
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.stats import rankdata
from sklearn.metrics import precision_recall_fscore_support

from ..models.config import TrainConfig
from ..models.energy_head import classify
from ..models.session import Corpus, SessionLabel
from .dataset_service import DatasetService
from .training_service import TrainingService


logger = logging.getLogger(__name__)

METRICS = ("precision", "recall", "f1", "auroc")


def auroc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """
    AUROC via rank statistieken (midranks voor ties)

    Args:
        scores: Score per sessie (hoger = meer bullying)
        labels: 1 voor bullying, 0 anders

    Returns:
        AUROC in [0, 1]

    Raises:
        ValueError: Als er maar een klasse is
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=int)
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUROC is undefined for a single-class label set")
    ranks = rankdata(scores, method="average")
    return float((ranks[labels == 1].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


@dataclass
class MetricsReport:
    """
    Metrics voor de bullying klasse

    Bij een enkele run zijn de std waardes 0.
    """
    precision: float
    recall: float
    f1: float
    auroc: float
    n_runs: int = 1
    std: dict[str, float] = field(default_factory=lambda: {m: 0.0 for m in METRICS})
    runs: list[dict] = field(default_factory=list)

    @property
    def means(self) -> dict[str, float]:
        return {m: getattr(self, m) for m in METRICS}

    @classmethod
    def aggregate(cls, reports: Sequence["MetricsReport"]) -> "MetricsReport":
        """Gemiddelde en standaard deviatie over runs"""
        if not reports:
            raise ValueError("cannot aggregate zero metric reports")
        values = {m: np.array([getattr(r, m) for r in reports], dtype=np.float64) for m in METRICS}
        return cls(
            **{m: float(v.mean()) for m, v in values.items()},
            n_runs=len(reports),
            std={m: float(v.std()) for m, v in values.items()},
            runs=[r.means for r in reports],
        )

    def to_dict(self) -> dict:
        return {
            "n_runs": self.n_runs,
            "mean": self.means,
            "std": dict(self.std),
            "runs": list(self.runs),
        }

    def format_table(self) -> str:
        """Leesbare tabel met mean +- std"""
        lines = [f"{'metric':<10} {'mean':>8} {'std':>8}", "-" * 28]
        for metric in METRICS:
            lines.append(f"{metric:<10} {getattr(self, metric):>8.4f} {self.std[metric]:>8.4f}")
        lines.append(f"(n_runs = {self.n_runs})")
        return "\n".join(lines)


class EvaluationService:
    """
    Service voor evaluatie volgens het 80/20 protocol

    Combineert dataset, training en detection voor herhaalde runs.
    """

    def __init__(
        self,
        dataset_service: Optional[DatasetService] = None,
        training_service: Optional[TrainingService] = None
    ):
        self._dataset_service = dataset_service or DatasetService()
        self._training_service = training_service or TrainingService()

    @staticmethod
    def _align(
        scores: Sequence[tuple[str, float]],
        labels: Sequence[tuple[str, Optional[SessionLabel]]]
    ) -> tuple[np.ndarray, np.ndarray]:
        """
        Zet scores en labels op dezelfde volgorde

        Raises:
            ValueError: Bij verschillende id sets of ontbrekende labels
        """
        score_map = dict(scores)
        label_map = dict(labels)
        if set(score_map) != set(label_map):
            raise ValueError("score and label session ids do not match")
        if any(label is None for label in label_map.values()):
            raise ValueError("every evaluated session needs a label")
        ids = [session_id for session_id, _ in scores]
        values = np.array([score_map[i] for i in ids], dtype=np.float64)
        truth = np.array([SessionLabel.parse(label_map[i]).as_int() for i in ids], dtype=int)
        return values, truth

    def evaluate(
        self,
        scores: Sequence[tuple[str, float]],
        labels: Sequence[tuple[str, Optional[SessionLabel]]],
        tau: float,
        predictions: Optional[Sequence[SessionLabel]] = None
    ) -> MetricsReport:
        """
        Bereken precision, recall, F1 en AUROC

        Args:
            scores: (session_id, score) paren, hogere score = meer bullying
            labels: (session_id, label) paren
            tau: Threshold quantile voor de classificatie
            predictions: Vaste voorspellingen in de volgorde van `scores`
                (bv van een train_quantile threshold); anders classify(scores, tau)

        Returns:
            MetricsReport voor een enkele run
        """
        values, truth = self._align(scores, labels)
        if predictions is None:
            predictions = classify(values, tau)
        predicted = np.array([p.as_int() for p in predictions], dtype=int)

        precision, recall, f1, _ = precision_recall_fscore_support(
            truth, predicted, average="binary", pos_label=1, zero_division=0
        )
        report = MetricsReport(
            precision=float(precision),
            recall=float(recall),
            f1=float(f1),
            auroc=auroc(values, truth),
        )
        logger.info(
            f"Evaluated {len(values)} sessions: P={report.precision:.4f} R={report.recall:.4f} "
            f"F1={report.f1:.4f} AUROC={report.auroc:.4f}"
        )
        return report

    def threshold_curve(
        self,
        scores: Sequence[tuple[str, float]],
        labels: Sequence[tuple[str, Optional[SessionLabel]]],
        taus: Sequence[float]
    ) -> list[dict]:
        """P/R/F1 per tau waarde"""
        curve = []
        for tau in taus:
            report = self.evaluate(scores, labels, tau)
            curve.append({"tau": float(tau), "precision": report.precision,
                          "recall": report.recall, "f1": report.f1})
        return curve

    def run_once(self, corpus: Corpus, config: TrainConfig) -> MetricsReport:
        """Split, train en evalueer met config.seed"""
        train, test = self._dataset_service.split_corpus(corpus, config.train_fraction, config.seed)
        result = self._training_service.train(train, config)
        scores = result.detector().score(test)
        labels = list(zip(test.session_ids, test.labels()))
        return self.evaluate(scores.as_pairs(), labels, config.tau, scores.predictions)

    def repeated_runs(self, corpus: Corpus, config: TrainConfig, n_runs: int) -> MetricsReport:
        """
        Train en evalueer n_runs keer met seeds seed, seed+1, ...

        Args:
            corpus: Gelabeld corpus
            config: Basis config
            n_runs: Aantal runs (>= 1)

        Returns:
            Geaggregeerd MetricsReport (mean en std)
        """
        if n_runs < 1:
            raise ValueError("n_runs must be >= 1")
        reports = []
        for run in range(n_runs):
            run_config = config.with_overrides(seed=config.seed + run)
            logger.info(f"Run {run + 1}/{n_runs} (seed={run_config.seed})")
            reports.append(self.run_once(corpus, run_config))
        return MetricsReport.aggregate(reports)
