"""
Domein exceptions voor UCD
"""
from typing import Optional


class CorpusFormatError(ValueError):
    """Fout in een sessions bestand (bevat het regelnummer)"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class GraphFormatError(ValueError):
    """Fout in een graph bestand"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class ConfigurationError(ValueError):
    """Ongeldige configuratie of ongeldige combinatie van opties"""


class CovarianceError(ArithmeticError):
    """Covariantie matrix is niet positief definiet (ook niet na jitter)"""

    def __init__(self, component: int, message: Optional[str] = None):
        self.component = component
        super().__init__(message or f"covariance of mixture component {component} is not positive definite")


class NonFiniteLossError(RuntimeError):
    """Training afgebroken omdat een term van de objective niet eindig is"""

    def __init__(self, term: str, value: float):
        self.term = term
        self.value = value
        super().__init__(f"non-finite {term} ({value}); training aborted")


class LabelAccessError(RuntimeError):
    """Session.label is gelezen op een training pad"""
