"""
Validator voor een corpus in combinatie met een training config
"""
from ..models.config import AblationVariant, TrainConfig
from ..models.session import Corpus
from .base_validator import BaseValidator


class CorpusValidator(BaseValidator):
    """
    Valideert of een corpus gebruikt kan worden met een config

    Controleert:
    - corpus is niet leeg
    - er is een graph als de graph encoder aan staat
    - UCDXtext alleen met een graph (anders blijft er alleen p over)
    """

    def __init__(self, config: TrainConfig):
        """
        Initialiseer corpus validator

        Args:
            config: Training config waartegen gevalideerd wordt
        """
        self._config = config

    def _collect_violations(self, corpus: Corpus) -> list[str]:
        violations: list[str] = []

        if len(corpus) == 0:
            violations.append("corpus contains no sessions")

        if corpus.graph is None:
            if self._config.variant is AblationVariant.NO_TEXT or self._config.ablations.no_text:
                violations.append("ablation UCDXtext requires a social graph")
            elif not self._config.ablations.no_graph:
                violations.append("corpus has no social graph; use ablation UCDXgraph (no_graph)")

        return violations

    def get_name(self) -> str:
        """Haal naam van validator op"""
        return "CorpusValidator"

    def get_description(self) -> str:
        """Haal beschrijving van validator op"""
        return "Controleert of het corpus past bij de gekozen model variant"
