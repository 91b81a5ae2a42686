"""
Validator voor training configuratie
"""
from ..models.config import TrainConfig
from .base_validator import BaseValidator


class TrainConfigValidator(BaseValidator):
    """
    Valideert een TrainConfig

    Controleert de invarianten lambda >= 0, 0 < tau < 1, K >= 1 plus
    de optimizer en dimensie instellingen.
    """

    def _collect_violations(self, config: TrainConfig) -> list[str]:
        violations: list[str] = []

        for name in ("lambda1", "lambda2", "lambda3"):
            self._check_range(violations, name, getattr(config, name), low=0.0)
        self._check_range(violations, "tau", config.tau, 0.0, 1.0, low_inclusive=False, high_inclusive=False)
        self._check_range(violations, "n_components", config.n_components, low=1)
        self._check_range(violations, "covariance_jitter", config.covariance_jitter, low=0.0, low_inclusive=False)

        for name in ("embedding_dim", "word_hidden", "comment_hidden", "social_dim", "graph_hidden",
                     "graph_dim", "membership_hidden", "temporal_hidden", "max_words", "max_comments",
                     "batch_size", "epochs", "min_token_freq"):
            self._check_range(violations, name, getattr(config, name), low=1)

        self._check_range(violations, "learning_rate", config.learning_rate, low=0.0, low_inclusive=False)
        self._check_range(violations, "adam_beta1", config.adam_beta1, 0.0, 1.0, high_inclusive=False)
        self._check_range(violations, "adam_beta2", config.adam_beta2, 0.0, 1.0, high_inclusive=False)
        self._check_range(violations, "adam_eps", config.adam_eps, low=0.0, low_inclusive=False)
        self._check_range(violations, "train_fraction", config.train_fraction, 0.0, 1.0,
                          low_inclusive=False, high_inclusive=False)

        if config.ablations.no_text and config.ablations.no_graph:
            violations.append("no_text and no_graph cannot be combined")

        return violations

    def get_name(self) -> str:
        """Haal naam van validator op"""
        return "TrainConfigValidator"

    def get_description(self) -> str:
        """Haal beschrijving van validator op"""
        return "Controleert of alle hyperparameters binnen hun geldige bereik liggen"
