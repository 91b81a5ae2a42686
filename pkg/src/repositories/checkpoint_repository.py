"""
Repository voor model checkpoints
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Union
import logging

import numpy as np
import torch

from .. import __version__
from ..models.config import TrainConfig
from ..models.energy_head import GmmState
from ..models.temporal_head import IntervalTransform
from ..models.ucd_model import UcdModel
from ..models.vocabulary import Vocabulary


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


@dataclass
class Checkpoint:
    """
    Een getraind model met alles wat inferentie nodig heeft

    Attributes:
        config: Training config
        vocabulary: Vocabulary van het training corpus
        architecture: vocab_size en n_features
        model_state: state_dict van UcdModel
        gmm: Bevroren GmmState
        transform: Interval target transform
        train_energies: Energieen van de training sessies
        version: Package versie bij het opslaan
    """
    config: TrainConfig
    vocabulary: Vocabulary
    architecture: dict
    model_state: dict
    gmm: GmmState
    transform: IntervalTransform
    train_energies: np.ndarray
    version: str = __version__

    def build_model(self) -> UcdModel:
        """Bouw het model op en laad de parameters"""
        model = UcdModel(self.config, self.architecture["vocab_size"], self.architecture["n_features"])
        model.load_state_dict(self.model_state)
        model.eval()
        return model

    @classmethod
    def from_model(
        cls,
        model: UcdModel,
        vocabulary: Vocabulary,
        gmm: GmmState,
        transform: IntervalTransform,
        train_energies: np.ndarray
    ) -> "Checkpoint":
        return cls(
            config=model.config,
            vocabulary=vocabulary,
            architecture=model.architecture(),
            model_state={k: v.detach().clone() for k, v in model.state_dict().items()},
            gmm=gmm.detach(),
            transform=transform,
            train_energies=np.asarray(train_energies, dtype=np.float64),
        )


class ICheckpointRepository(ABC):
    """
    Interface voor checkpoint opslag

    Implementeert Repository Pattern voor data toegang abstractie
    """

    @abstractmethod
    def save(self, checkpoint: Checkpoint, path: PathLike) -> None:
        pass

    @abstractmethod
    def load(self, path: PathLike) -> Checkpoint:
        pass


class TorchCheckpointRepository(ICheckpointRepository):
    """
    Checkpoint als een torch.save bestand met alleen tensors en primitieven

    Laden gebeurt met weights_only=True.
    """

    def save(self, checkpoint: Checkpoint, path: PathLike) -> None:
        """Schrijf een checkpoint"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = {
            "version": checkpoint.version,
            "config": checkpoint.config.to_dict(),
            "vocabulary": checkpoint.vocabulary.to_dict(),
            "architecture": dict(checkpoint.architecture),
            "model_state": checkpoint.model_state,
            "gmm": checkpoint.gmm.to_dict(),
            "transform": checkpoint.transform.to_dict(),
            "train_energies": torch.from_numpy(np.ascontiguousarray(checkpoint.train_energies)),
        }
        torch.save(payload, path)
        logger.info(f"Checkpoint saved to {path}")

    def load(self, path: PathLike) -> Checkpoint:
        """
        Lees een checkpoint

        Raises:
            FileNotFoundError: Als het bestand niet bestaat
            KeyError: Als een onderdeel ontbreekt
        """
        payload = torch.load(Path(path), map_location="cpu", weights_only=True)
        checkpoint = Checkpoint(
            config=TrainConfig.from_dict(payload["config"]),
            vocabulary=Vocabulary.from_dict(payload["vocabulary"]),
            architecture=dict(payload["architecture"]),
            model_state=payload["model_state"],
            gmm=GmmState.from_dict(payload["gmm"]),
            transform=IntervalTransform.from_dict(payload["transform"]),
            train_energies=payload["train_energies"].numpy(),
            version=str(payload.get("version", "unknown")),
        )
        if checkpoint.version != __version__:
            logger.warning(f"Checkpoint version {checkpoint.version} differs from package version {__version__}")
        logger.info(f"Checkpoint loaded from {path}")
        return checkpoint
