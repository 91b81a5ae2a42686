# Validators package

from .base_validator import BaseValidator, IValidator
from .spec_validator import SynthSpecValidator
from .config_validator import TrainConfigValidator
from .corpus_validator import CorpusValidator

__all__ = [
    'BaseValidator',
    'IValidator',
    'SynthSpecValidator',
    'TrainConfigValidator',
    'CorpusValidator',
]
