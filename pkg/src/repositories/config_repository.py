"""
INI config bestanden voor TrainConfig
"""
from configparser import ConfigParser, Error as ConfigParserError
from dataclasses import fields
from pathlib import Path
from typing import Any, Optional, Union
import logging

from ..models.config import TrainConfig, ThresholdMode
from ..models.errors import ConfigurationError


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# sectie -> keys; volgorde is ook de volgorde bij het schrijven
SECTIONS: dict[str, tuple[str, ...]] = {
    "objective": ("lambda1", "lambda2", "lambda3", "n_components", "tau", "threshold_mode", "covariance_jitter"),
    "model": ("embedding_dim", "word_hidden", "comment_hidden", "social_dim", "graph_hidden", "graph_dim",
              "membership_hidden", "temporal_hidden", "max_words", "max_comments"),
    "optimizer": ("learning_rate", "batch_size", "epochs", "adam_beta1", "adam_beta2", "adam_eps"),
    "run": ("seed", "train_fraction", "min_token_freq", "ablation"),
}


class IniConfigRepository:
    """
    Leest en schrijft TrainConfig als INI

    Precedentie: dataclass defaults < bestand < command-line flags.
    """

    def __init__(self):
        self._types = {f.name: type(f.default) for f in fields(TrainConfig) if f.name in self._known_keys()}

    @staticmethod
    def _known_keys() -> set[str]:
        return {key for keys in SECTIONS.values() for key in keys}

    def _convert(self, key: str, raw: str) -> Any:
        """
        Raises:
            ConfigurationError: Als de waarde niet bij het type past
        """
        try:
            if key == "threshold_mode":
                return ThresholdMode(raw.strip().lower())
            if key == "ablation":
                return raw.strip() or None
            if self._types[key] is int:
                return int(raw)
            return float(raw)
        except ValueError as e:
            raise ConfigurationError(f"invalid value for {key}: {raw!r}") from e

    def parse(self, text: str, base: Optional[TrainConfig] = None) -> TrainConfig:
        """
        Parse INI tekst bovenop een basis config

        Raises:
            ConfigurationError: Bij onbekende secties/keys of ongeldige waardes
        """
        parser = ConfigParser()
        try:
            parser.read_string(text)
        except ConfigParserError as e:
            raise ConfigurationError(f"config file does not parse: {e}") from e

        config = base or TrainConfig()
        values: dict[str, Any] = {}
        for section in parser.sections():
            if section not in SECTIONS:
                raise ConfigurationError(f"unknown config section [{section}]")
            for key, raw in parser.items(section):
                if key not in SECTIONS[section]:
                    raise ConfigurationError(f"unknown config key '{key}' in [{section}]")
                values[key] = self._convert(key, raw)

        try:
            if "ablation" in values:
                config = config.with_variant(values.pop("ablation"))
            return config.with_overrides(**values)
        except ValueError as e:
            raise ConfigurationError(str(e)) from e

    def load(self, path: PathLike, base: Optional[TrainConfig] = None) -> TrainConfig:
        """Lees een config bestand"""
        with open(path, "r", encoding="utf-8") as handle:
            config = self.parse(handle.read(), base)
        logger.info(f"Config loaded from {path}")
        return config

    def dumps(self, config: TrainConfig) -> str:
        """Config als INI tekst"""
        data = config.to_dict()
        data["ablation"] = data["variant"] or ""
        lines = []
        for section, keys in SECTIONS.items():
            lines.append(f"[{section}]")
            lines.extend(f"{key} = {data[key]}" for key in keys)
            lines.append("")
        return "\n".join(lines)

    def save(self, config: TrainConfig, path: PathLike) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.dumps(config), encoding="utf-8")
