"""
Validator voor synthetische corpus parameters
"""
from ..models.config import SynthSpec
from .base_validator import BaseValidator


class SynthSpecValidator(BaseValidator):
    """
    Valideert een SynthSpec

    Controleert:
    - bullying is de minderheidsklasse (bully_fraction < 0.5)
    - scheldwoorden komen vaker voor in bullying sessies
    - vocabulary groot genoeg voor de scheldwoorden
    - burst_rate_ratio > 1 en homophily in [0, 1]
    """

    def _collect_violations(self, spec: SynthSpec) -> list[str]:
        violations: list[str] = []

        self._check_range(violations, "n_sessions", spec.n_sessions, low=1)
        self._check_range(violations, "bully_fraction", spec.bully_fraction, 0.0, 0.5,
                          low_inclusive=False, high_inclusive=False)
        self._check_range(violations, "profane_rate_bully", spec.profane_rate_bully, 0.0, 1.0)
        self._check_range(violations, "profane_rate_clean", spec.profane_rate_clean, 0.0, 1.0)
        if spec.profane_rate_bully <= spec.profane_rate_clean:
            violations.append("profane_rate_bully must be greater than profane_rate_clean")

        self._check_range(violations, "profane_vocab_size", spec.profane_vocab_size, low=1)
        if spec.vocab_size < spec.profane_vocab_size:
            violations.append(
                f"vocab_size ({spec.vocab_size}) must be >= profane_vocab_size ({spec.profane_vocab_size})"
            )
        elif spec.vocab_size == spec.profane_vocab_size:
            violations.append("vocab_size must leave room for at least one benign word")

        self._check_range(violations, "burst_rate_ratio", spec.burst_rate_ratio, low=1.0, low_inclusive=False)
        self._check_range(violations, "n_users", spec.n_users, low=2)
        self._check_range(violations, "homophily", spec.homophily, 0.0, 1.0)
        self._check_range(violations, "clean_mean_gap", spec.clean_mean_gap, low=0.0, low_inclusive=False)
        self._check_range(violations, "min_comments", spec.min_comments, low=1)
        self._check_range(violations, "min_words", spec.min_words, low=1)
        if spec.max_comments < spec.min_comments:
            violations.append("max_comments must be >= min_comments")
        if spec.max_words < spec.min_words:
            violations.append("max_words must be >= min_words")
        self._check_range(violations, "mean_degree", spec.mean_degree, low=0.0)

        return violations

    def get_name(self) -> str:
        """Haal naam van validator op"""
        return "SynthSpecValidator"

    def get_description(self) -> str:
        """Haal beschrijving van validator op"""
        return "Controleert of de parameters van de synthetische corpus generator geldig zijn"
