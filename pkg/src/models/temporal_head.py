"""
Temporal head: regressie van comment vectors naar inter-arrival tijden
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
import torch
import torch.nn as nn

from .config import ModelDefaults
from .text_encoder import SessionEncoding


ArrayLike = Union[torch.Tensor, np.ndarray, Sequence[float]]


@dataclass(frozen=True)
class IntervalTransform:
    """
    Target transform: (log(1 + dt) - mean) / std

    mean en std komen van de training set en gaan mee in de checkpoint.
    De identity transform (mean 0, std 1, log uit) is handig in tests.
    """
    mean: float = 0.0
    std: float = 1.0
    use_log: bool = True

    @classmethod
    def fit(cls, intervals: ArrayLike) -> "IntervalTransform":
        """
        Schat mean/std op training intervallen

        Args:
            intervals: Ruwe inter-arrival tijden (>= 0)

        Returns:
            IntervalTransform; std valt terug op 1 als die 0 is
        """
        logged = np.log1p(np.asarray(intervals, dtype=np.float64))
        if logged.size == 0:
            return cls()
        std = float(logged.std())
        return cls(mean=float(logged.mean()), std=std if std > 0 else 1.0)

    @classmethod
    def identity(cls) -> "IntervalTransform":
        return cls(mean=0.0, std=1.0, use_log=False)

    def forward(self, intervals: torch.Tensor) -> torch.Tensor:
        values = torch.log1p(intervals) if self.use_log else intervals
        return (values - self.mean) / self.std

    def inverse(self, transformed: torch.Tensor) -> torch.Tensor:
        values = transformed * self.std + self.mean
        return torch.expm1(values) if self.use_log else values

    def to_dict(self) -> dict:
        return {"mean": self.mean, "std": self.std, "use_log": self.use_log}

    @classmethod
    def from_dict(cls, data: dict) -> "IntervalTransform":
        return cls(mean=float(data["mean"]), std=float(data["std"]), use_log=bool(data.get("use_log", True)))


class TemporalRegressor(nn.Module):
    """f(e_in): Linear(2*d_w, 16) -> tanh -> Linear(16, 1)"""

    def __init__(self, input_dim: int, hidden_dim: int = ModelDefaults.TEMPORAL_HIDDEN):
        super().__init__()
        self.hidden = nn.Linear(input_dim, hidden_dim)
        self.output = nn.Linear(hidden_dim, 1)

    def forward(self, comment_vectors: torch.Tensor) -> torch.Tensor:
        """[C, 2*d_w] -> [C]"""
        return self.output(torch.tanh(self.hidden(comment_vectors))).squeeze(-1)


def predict_intervals(encoding: Union[SessionEncoding, torch.Tensor], regressor: TemporalRegressor) -> torch.Tensor:
    """
    Voorspel per comment het getransformeerde interval

    Args:
        encoding: SessionEncoding of direct een [C, 2*d_w] matrix comment vectors
        regressor: TemporalRegressor

    Returns:
        [C] voorspellingen in de transform ruimte
    """
    vectors = encoding.comment_vectors if isinstance(encoding, SessionEncoding) else encoding
    if vectors.shape[0] < 1:
        raise ValueError("predict_intervals needs at least one comment vector")
    return regressor(vectors)


def time_loss(
    predictions: ArrayLike,
    targets: ArrayLike,
    transform: Optional[IntervalTransform] = None
) -> torch.Tensor:
    """
    l = 1/2 sum_i (pred_i - transform(dt_i))^2

    Args:
        predictions: Voorspellingen in de transform ruimte
        targets: Ruwe inter-arrival tijden
        transform: Target transform (None = identity)

    Returns:
        Scalar loss

    Raises:
        ValueError: Bij verschillende lengtes
    """
    predictions = torch.as_tensor(predictions, dtype=torch.float64)
    targets = torch.as_tensor(targets, dtype=predictions.dtype)
    if predictions.shape != targets.shape:
        raise ValueError(
            f"predictions and targets must have equal length, got {tuple(predictions.shape)} "
            f"and {tuple(targets.shape)}"
        )
    transformed = (transform or IntervalTransform.identity()).forward(targets)
    return 0.5 * ((predictions - transformed) ** 2).sum()
