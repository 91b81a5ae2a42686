"""
Numerieke gradient check met centrale differenties
"""
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import torch


@dataclass
class GradientCheckEntry:
    """Een vergeleken parameter element"""
    parameter: int
    index: int
    analytic: float
    numeric: float
    relative_error: float


@dataclass
class GradientCheckReport:
    """Resultaat van numerical_gradient_check"""
    entries: list[GradientCheckEntry] = field(default_factory=list)

    @property
    def max_relative_error(self) -> float:
        return max((e.relative_error for e in self.entries), default=0.0)

    def passed(self, tolerance: float = 1e-3) -> bool:
        return self.max_relative_error < tolerance

    def worst(self) -> GradientCheckEntry:
        return max(self.entries, key=lambda e: e.relative_error)


def numerical_gradient_check(
    loss_fn: Callable[[], torch.Tensor],
    parameters: Sequence[torch.Tensor],
    n_samples: int = 20,
    eps: float = 1e-6,
    seed: int = 0,
    floor: float = 1e-6
) -> GradientCheckReport:
    """
    Vergelijk autograd gradients met (L(x + eps) - L(x - eps)) / (2 eps)

    Args:
        loss_fn: Berekent de scalar loss opnieuw (zonder side effects)
        parameters: Leaf tensors om te checken
        n_samples: Aantal willekeurige elementen per parameter (max numel)
        eps: Stapgrootte
        seed: Seed voor de keuze van elementen
        floor: Ondergrens van de noemer |a| + |n| voor bijna-nul gradients

    Returns:
        GradientCheckReport
    """
    parameters = list(parameters)
    loss = loss_fn()
    grads = torch.autograd.grad(loss, parameters, allow_unused=True)

    rng = np.random.default_rng(seed)
    report = GradientCheckReport()
    for p_index, (param, grad) in enumerate(zip(parameters, grads)):
        analytic_flat = torch.zeros(param.numel(), dtype=torch.float64) if grad is None else grad.reshape(-1)
        count = min(n_samples, param.numel())
        for index in rng.choice(param.numel(), size=count, replace=False):
            index = int(index)
            with torch.no_grad():
                flat = param.view(-1)
                original = float(flat[index])
                flat[index] = original + eps
                plus = float(loss_fn())
                flat[index] = original - eps
                minus = float(loss_fn())
                flat[index] = original
            numeric = (plus - minus) / (2.0 * eps)
            analytic = float(analytic_flat[index])
            relative = abs(analytic - numeric) / max(abs(analytic) + abs(numeric), floor)
            report.entries.append(GradientCheckEntry(p_index, index, analytic, numeric, relative))
    return report
