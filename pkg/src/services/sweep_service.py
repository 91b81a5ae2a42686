"""
Sweep service - gevoeligheid voor een hyperparameter tegelijk
"""
import logging
from dataclasses import asdict, dataclass, replace
from typing import Optional, Sequence

from ..models.config import TrainConfig
from ..models.errors import ConfigurationError
from ..models.session import Corpus
from .dataset_service import DatasetService
from .evaluation_service import EvaluationService
from .training_service import TrainingService


logger = logging.getLogger(__name__)

# parameter -> type van de waardes
SWEEP_PARAMETERS = {
    "lambda1": float,
    "lambda2": float,
    "lambda3": float,
    "n_components": int,
    "tau": float,
}

VALIDATION_FRACTION = 0.2


@dataclass
class SweepPoint:
    """Validatie metrics voor een waarde van de parameter"""
    parameter: str
    value: float
    precision: float
    recall: float
    f1: float
    auroc: float

    def to_dict(self) -> dict:
        return asdict(self)


def _parse_value(parameter: str, cast: type, part: str):
    """
    Een waarde uit een grid

    Raises:
        ConfigurationError: Geen getal, of geen geheel getal voor een int parameter
    """
    try:
        value = float(part)
    except ValueError as e:
        raise ConfigurationError(f"invalid value for {parameter}: {part.strip()!r}") from e
    if cast is int:
        # 2.0 mag, 2.5 niet
        if not value.is_integer():
            raise ConfigurationError(f"{parameter} needs integer values, got {part.strip()!r}")
        return int(value)
    return value


def parse_grid(parameter: str, text: str) -> list:
    """
    Parse een komma gescheiden grid, bv "1e-5,1e-4,1e-3"

    Raises:
        ConfigurationError: Onbekende parameter of ongeldige waarde
    """
    if parameter not in SWEEP_PARAMETERS:
        raise ConfigurationError(f"cannot sweep '{parameter}'; choose one of {sorted(SWEEP_PARAMETERS)}")
    cast = SWEEP_PARAMETERS[parameter]
    values = [_parse_value(parameter, cast, part) for part in text.split(",") if part.strip()]
    if not values:
        raise ConfigurationError(f"empty grid for {parameter}")
    return values


class SweepService:
    """
    Varieert een parameter over een grid, de rest blijft vast

    De training data wordt 80/20 gesplitst in train en validatie.
    """

    def __init__(
        self,
        dataset_service: Optional[DatasetService] = None,
        training_service: Optional[TrainingService] = None,
        evaluation_service: Optional[EvaluationService] = None
    ):
        self._dataset_service = dataset_service or DatasetService()
        self._training_service = training_service or TrainingService()
        self._evaluation_service = evaluation_service or EvaluationService(
            self._dataset_service, self._training_service
        )

    def sweep(self, corpus: Corpus, config: TrainConfig, parameter: str, values: Sequence) -> list[SweepPoint]:
        """
        Train en valideer voor elke waarde

        Args:
            corpus: Gelabeld training corpus
            config: Basis config
            parameter: Een van SWEEP_PARAMETERS
            values: Grid waardes

        Returns:
            SweepPoint per waarde
        """
        if parameter not in SWEEP_PARAMETERS:
            raise ConfigurationError(f"cannot sweep '{parameter}'; choose one of {sorted(SWEEP_PARAMETERS)}")

        train, validation = self._dataset_service.split_corpus(corpus, 1.0 - VALIDATION_FRACTION, config.seed)
        labels = list(zip(validation.session_ids, validation.labels()))

        points = []
        # tau verandert de training niet, dus een keer trainen is genoeg
        shared = self._training_service.train(train, config) if parameter == "tau" else None
        for value in values:
            run_config = replace(config, **{parameter: SWEEP_PARAMETERS[parameter](value)})
            result = shared or self._training_service.train(train, run_config)
            scores = result.detector().score(validation, tau=run_config.tau)
            report = self._evaluation_service.evaluate(scores.as_pairs(), labels, run_config.tau, scores.predictions)
            points.append(SweepPoint(parameter, value, report.precision, report.recall, report.f1, report.auroc))
            logger.info(f"Sweep {parameter}={value}: AUROC={report.auroc:.4f} F1={report.f1:.4f}")
        return points

    @staticmethod
    def format_table(points: Sequence[SweepPoint]) -> str:
        """Leesbare tabel van een sweep"""
        if not points:
            return "(empty sweep)"
        lines = [f"{points[0].parameter:<14} {'auroc':>8} {'f1':>8} {'precision':>10} {'recall':>8}"]
        for p in points:
            lines.append(f"{p.value:<14g} {p.auroc:>8.4f} {p.f1:>8.4f} {p.precision:>10.4f} {p.recall:>8.4f}")
        return "\n".join(lines)
