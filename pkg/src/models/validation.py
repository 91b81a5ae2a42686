"""
Resultaat van een validatie check
"""
from dataclasses import dataclass, field
from typing import Optional


@dataclass
class ValidationResult:
    """
    Resultaat van een validatie check

    Attributes:
        validator_name: Naam van de validator
        is_valid: Of de validatie geslaagd is
        message: Feedback bericht (noemt de geschonden constraint)
        violations: Alle geschonden constraints
        details: Optionele extra details
    """
    validator_name: str
    is_valid: bool
    message: str
    violations: list[str] = field(default_factory=list)
    details: Optional[dict] = None
