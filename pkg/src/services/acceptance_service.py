"""
Acceptance service - synthetische separability, baseline marge en ablatie volgorde
"""
import logging
import math
import time
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np
from sklearn.metrics import silhouette_score

from ..models.config import SynthSpec, TrainConfig
from ..models.session import Corpus
from .baseline_service import kmeans_baseline, raw_features
from .dataset_service import DatasetService
from .evaluation_service import EvaluationService, MetricsReport
from .synthetic_service import SyntheticCorpusGenerator
from .training_service import TrainingService


logger = logging.getLogger(__name__)

VARIANTS = ("UCD", "UCDXgraph", "UCDXtime", "UCDXtext")
BASELINE = "kmeans"

MIN_AUROC = 0.85
MIN_BASELINE_GAP = 0.05
MAX_RUNTIME = 600.0


def acceptance_spec(n_sessions: int = 1000, seed: int = 0) -> SynthSpec:
    """Het acceptatie corpus: geplante signalen expliciet, de rest op de defaults"""
    return SynthSpec(n_sessions=n_sessions, bully_fraction=0.3, burst_rate_ratio=4.0,
                     profane_rate_bully=0.15, profane_rate_clean=0.01, homophily=0.9, seed=seed)


@dataclass
class AcceptanceReport:
    """
    Uitkomst van een acceptatie run

    Attributes:
        spec: Gebruikte SynthSpec
        config: Basis TrainConfig (seed per run overschreven)
        seeds: Seeds voor split en training
        metrics: Geaggregeerde metrics per variant en voor de baseline
        silhouette: Gemiddelde silhouette van de UCD representaties t.o.v. de labels
        protocol_ok: Elke run labelde precies ceil((1 - tau) * n_test) sessies als bullying
        separability_runtime: Seconden voor corpus, UCD runs en baseline
        ablation_runtime: Seconden voor de drie ablaties
    """
    spec: SynthSpec
    config: TrainConfig
    seeds: list[int]
    metrics: dict[str, MetricsReport]
    silhouette: float
    protocol_ok: bool
    separability_runtime: float
    ablation_runtime: float = 0.0
    max_runtime: float = MAX_RUNTIME

    @property
    def auroc(self) -> dict[str, float]:
        return {name: report.auroc for name, report in self.metrics.items()}

    @property
    def criteria(self) -> dict[str, bool]:
        """Criterium naam -> gehaald"""
        auroc = self.auroc
        criteria = {
            "separability": auroc["UCD"] >= MIN_AUROC,
            "beats_baseline": auroc["UCD"] - auroc[BASELINE] >= MIN_BASELINE_GAP,
            "protocol_fraction": self.protocol_ok,
            "embedding_separation": self.silhouette > 0.0,
            "runtime": self.separability_runtime < self.max_runtime,
        }
        if all(variant in auroc for variant in VARIANTS):
            criteria["ablation_ordering"] = (
                auroc["UCD"] >= auroc["UCDXgraph"] >= auroc["UCDXtime"]
                and auroc["UCDXtext"] == min(auroc[v] for v in VARIANTS)
            )
        return criteria

    @property
    def passed(self) -> bool:
        return all(self.criteria.values())

    def format_table(self) -> str:
        """Tabel met AUROC en F1 per variant plus de criteria"""
        lines = [f"{'variant':<12} {'auroc':>8} {'std':>8} {'f1':>8}", "-" * 40]
        for name, report in self.metrics.items():
            lines.append(f"{name:<12} {report.auroc:>8.4f} {report.std['auroc']:>8.4f} {report.f1:>8.4f}")
        lines.append("")
        for name, passed in self.criteria.items():
            lines.append(f"  [{'OK' if passed else 'FAIL'}] {name}")
        lines.append("")
        lines.append(f"Silhouette (UCD, label partition): {self.silhouette:.4f}")
        lines.append(f"Runtime: {self.separability_runtime:.1f}s separability, "
                     f"{self.ablation_runtime:.1f}s ablations over {len(self.seeds)} seeds")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "config": self.config.to_dict(),
            "seeds": list(self.seeds),
            "metrics": {name: report.to_dict() for name, report in self.metrics.items()},
            "silhouette": self.silhouette,
            "protocol_ok": self.protocol_ok,
            "criteria": self.criteria,
            "runtime": {
                "separability": self.separability_runtime,
                "ablations": self.ablation_runtime,
            },
        }


@dataclass
class _RunState:
    reports: dict[str, list[MetricsReport]] = field(default_factory=dict)
    silhouettes: list[float] = field(default_factory=list)
    protocol_ok: bool = True
    separability_seconds: float = 0.0
    ablation_seconds: float = 0.0

    def add(self, name: str, report: MetricsReport) -> None:
        self.reports.setdefault(name, []).append(report)


class AcceptanceService:
    """
    Draait UCD, de ablaties en de k-means baseline over een reeks seeds

    Per seed: een 80/20 split, training op de train set, scoren op de test set.
    De baseline clustert de ruwe features van dezelfde test set.
    """

    def __init__(
        self,
        dataset_service: Optional[DatasetService] = None,
        training_service: Optional[TrainingService] = None,
        evaluation_service: Optional[EvaluationService] = None
    ):
        self._datasets = dataset_service or DatasetService()
        self._training = training_service or TrainingService()
        self._evaluation = evaluation_service or EvaluationService(self._datasets, self._training)

    def _run_variant(self, state: _RunState, variant: str, train: Corpus, test: Corpus, config: TrainConfig) -> None:
        config = config.with_variant(variant)
        result = self._training.train(train, config)
        scores = result.detector().score(test)
        expected = math.ceil((1.0 - config.tau) * len(test) - 1e-9)
        if scores.n_bullying != expected:
            logger.warning(f"{variant}: labelled {scores.n_bullying} sessions as bullying, expected {expected}")
            state.protocol_ok = False

        labels = list(zip(test.session_ids, test.labels()))
        report = self._evaluation.evaluate(scores.as_pairs(), labels, config.tau, scores.predictions)
        state.add(variant, report)
        if variant == "UCD":
            truth = [label.as_int() for _, label in labels]
            state.silhouettes.append(float(silhouette_score(scores.representations, truth)))
        logger.info(f"seed {config.seed} {variant}: AUROC={report.auroc:.4f} F1={report.f1:.4f}")

    def _run_baseline(self, state: _RunState, test: Corpus, config: TrainConfig) -> None:
        baseline = kmeans_baseline(raw_features(test), config.seed)
        labels = list(zip(test.session_ids, test.labels()))
        report = self._evaluation.evaluate(
            list(zip(test.session_ids, baseline.scores.tolist())), labels, config.tau, baseline.labels
        )
        state.add(BASELINE, report)
        logger.info(f"seed {config.seed} {BASELINE}: AUROC={report.auroc:.4f} F1={report.f1:.4f}")

    def run(
        self,
        spec: SynthSpec,
        config: TrainConfig,
        seeds: Sequence[int],
        with_ablations: bool = True
    ) -> AcceptanceReport:
        """
        Genereer het corpus en draai alle runs

        Args:
            spec: Synthetisch corpus
            config: Basis config; de seed wordt per run gezet
            seeds: Seeds voor split en training (minstens 1)
            with_ablations: Draai ook UCDXgraph, UCDXtime en UCDXtext

        Returns:
            AcceptanceReport
        """
        if not seeds:
            raise ValueError("acceptance run needs at least one seed")

        state = _RunState()
        started = time.perf_counter()
        corpus = SyntheticCorpusGenerator().generate(spec)
        state.separability_seconds += time.perf_counter() - started
        logger.info(f"Acceptance corpus: {len(corpus)} sessions, {corpus.graph.n_users} users")

        for seed in seeds:
            run_config = replace(config, seed=seed)
            train, test = self._datasets.split_corpus(corpus, run_config.train_fraction, seed)

            started = time.perf_counter()
            self._run_variant(state, "UCD", train, test, run_config)
            self._run_baseline(state, test, run_config)
            state.separability_seconds += time.perf_counter() - started

            if with_ablations:
                started = time.perf_counter()
                for variant in VARIANTS[1:]:
                    self._run_variant(state, variant, train, test, run_config)
                state.ablation_seconds += time.perf_counter() - started

        metrics = {name: MetricsReport.aggregate(reports) for name, reports in state.reports.items()}
        report = AcceptanceReport(
            spec=spec,
            config=config,
            seeds=list(seeds),
            metrics=metrics,
            silhouette=float(np.mean(state.silhouettes)),
            protocol_ok=state.protocol_ok,
            separability_runtime=state.separability_seconds,
            ablation_runtime=state.ablation_seconds,
        )
        logger.info(f"Acceptance run finished: {report.criteria}")
        return report
