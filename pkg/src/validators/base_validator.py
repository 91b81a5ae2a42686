"""
Base validator interface en abstracte implementatie
"""
from abc import ABC, abstractmethod
from typing import Any, Optional

from ..models.errors import ConfigurationError
from ..models.validation import ValidationResult


class IValidator(ABC):
    """
    Interface voor validators

    Implementeert Strategy Pattern - elke validator controleert de
    constraints van een bepaald soort object (SynthSpec, TrainConfig, Corpus).
    """

    @abstractmethod
    def validate(self, subject: Any) -> ValidationResult:
        """
        Valideer een object

        Args:
            subject: Object om te valideren

        Returns:
            ValidationResult met resultaat van validatie
        """
        pass

    @abstractmethod
    def get_name(self) -> str:
        """
        Haal naam van validator op

        Returns:
            Naam van de validator
        """
        pass

    @abstractmethod
    def get_description(self) -> str:
        """
        Haal beschrijving van validator op

        Returns:
            Beschrijving van wat de validator doet
        """
        pass


class BaseValidator(IValidator):
    """
    Abstracte base class voor validators met gemeenschappelijke functionaliteit

    Subclasses implementeren _collect_violations(); deze class bouwt daar
    het ValidationResult van.
    """

    def validate(self, subject: Any) -> ValidationResult:
        """Valideer en verzamel alle geschonden constraints"""
        violations = self._collect_violations(subject)
        if violations:
            return self._create_result(False, "; ".join(violations), violations)
        return self._create_result(True, f"{self.get_name()}: OK", [])

    def validate_or_raise(self, subject: Any) -> None:
        """
        Valideer en gooi een exception als het niet klopt

        Raises:
            ConfigurationError: Met alle geschonden constraints in de message
        """
        result = self.validate(subject)
        if not result.is_valid:
            raise ConfigurationError(result.message)

    @abstractmethod
    def _collect_violations(self, subject: Any) -> list[str]:
        """
        Verzamel geschonden constraints

        Args:
            subject: Object om te valideren

        Returns:
            Lijst met leesbare meldingen, leeg als alles klopt
        """
        pass

    def _create_result(
        self,
        is_valid: bool,
        message: str,
        violations: list[str],
        details: Optional[dict] = None
    ) -> ValidationResult:
        """
        Helper methode om ValidationResult te maken

        Args:
            is_valid: Of validatie geslaagd is
            message: Feedback bericht
            violations: Geschonden constraints
            details: Optionele extra details

        Returns:
            ValidationResult object
        """
        return ValidationResult(
            validator_name=self.get_name(),
            is_valid=is_valid,
            message=message,
            violations=list(violations),
            details=details
        )

    @staticmethod
    def _check_range(
        violations: list[str],
        name: str,
        value: float,
        low: Optional[float] = None,
        high: Optional[float] = None,
        low_inclusive: bool = True,
        high_inclusive: bool = True
    ) -> None:
        """
        Voeg een melding toe als value buiten [low, high] valt

        Args:
            violations: Lijst waar meldingen aan toegevoegd worden
            name: Naam van het veld (komt in de melding)
            value: Waarde om te checken
            low: Ondergrens (optioneel)
            high: Bovengrens (optioneel)
            low_inclusive: Of de ondergrens zelf mag
            high_inclusive: Of de bovengrens zelf mag
        """
        too_low = low is not None and (value < low if low_inclusive else value <= low)
        too_high = high is not None and (value > high if high_inclusive else value >= high)
        if too_low or too_high:
            left = "[" if low_inclusive else "("
            right = "]" if high_inclusive else ")"
            lo = "-inf" if low is None else f"{low:g}"
            hi = "inf" if high is None else f"{high:g}"
            violations.append(f"{name} must be in {left}{lo}, {hi}{right}, got {value!r}")
