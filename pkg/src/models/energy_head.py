"""
Energy head: membership netwerk, GMM schatting, energie en classificatie
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import torch
import torch.nn as nn

from .config import ModelDefaults
from .errors import CovarianceError
from .session import SessionLabel


logger = logging.getLogger(__name__)

# componenten met minder massa dan dit vallen terug op batch gemiddelde en I
MIN_COMPONENT_MASS = 1e-8


class MembershipNet(nn.Module):
    """Twee-laags netwerk van ss naar K softmax memberships"""

    def __init__(self, input_dim: int, n_components: int, hidden_dim: int = ModelDefaults.MEMBERSHIP_HIDDEN):
        super().__init__()
        self.hidden = nn.Linear(input_dim, hidden_dim)
        self.output = nn.Linear(hidden_dim, n_components)

    @property
    def n_components(self) -> int:
        return self.output.out_features

    def logits(self, batch: torch.Tensor) -> torch.Tensor:
        """p_MLN, N x K"""
        return self.output(torch.tanh(self.hidden(batch)))

    def forward(self, batch: torch.Tensor) -> torch.Tensor:
        return torch.softmax(self.logits(batch), dim=-1)


def memberships(batch: torch.Tensor, net: MembershipNet) -> torch.Tensor:
    """
    Soft memberships m_hat = softmax(MLN(ss))

    Args:
        batch: N x d representaties (N >= 1)
        net: MembershipNet

    Returns:
        N x K matrix, rijen tellen op tot 1
    """
    if batch.shape[0] < 1:
        raise ValueError("memberships needs at least one representation")
    return net(batch)


@dataclass
class GmmState:
    """
    Parameters van de Gaussian mixture

    Attributes:
        phi: [K] mixture gewichten
        mu: [K, d] gemiddelden
        sigma: [K, d, d] covarianties (inclusief jitter)
        degenerate: Componenten die op de fallback zijn teruggevallen
    """
    phi: torch.Tensor
    mu: torch.Tensor
    sigma: torch.Tensor
    degenerate: tuple[int, ...] = field(default_factory=tuple)

    @property
    def n_components(self) -> int:
        return self.phi.shape[0]

    @property
    def dim(self) -> int:
        return self.mu.shape[1]

    def detach(self) -> "GmmState":
        """Kopie zonder autograd geschiedenis"""
        return GmmState(self.phi.detach().clone(), self.mu.detach().clone(),
                        self.sigma.detach().clone(), self.degenerate)

    def to_dict(self) -> dict:
        """Tensors voor een checkpoint"""
        return {
            "phi": self.phi.detach().clone(),
            "mu": self.mu.detach().clone(),
            "sigma": self.sigma.detach().clone(),
            "degenerate": list(self.degenerate),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GmmState":
        return cls(
            phi=torch.as_tensor(data["phi"], dtype=torch.float64),
            mu=torch.as_tensor(data["mu"], dtype=torch.float64),
            sigma=torch.as_tensor(data["sigma"], dtype=torch.float64),
            degenerate=tuple(int(k) for k in data.get("degenerate", ())),
        )


def estimate_gmm(
    batch: torch.Tensor,
    membership: torch.Tensor,
    jitter: float = ModelDefaults.COVARIANCE_JITTER
) -> GmmState:
    """
    Schat phi, mu en Sigma uit soft memberships

    phi_k = sum_i m_ik / N, mu_k = gewogen gemiddelde,
    Sigma_k = gewogen covariantie + jitter * I.

    Args:
        batch: N x d representaties
        membership: N x K memberships
        jitter: Waarde op de diagonaal van elke covariantie

    Returns:
        GmmState; componenten zonder massa krijgen het batch gemiddelde en I
    """
    n_samples, dim = batch.shape
    eye = torch.eye(dim, dtype=batch.dtype)
    mass = membership.sum(dim=0)
    phi = mass / n_samples

    empty = mass < MIN_COMPONENT_MASS
    # geen deling door ~0, ook niet in de takken die where() weggooit
    safe_mass = torch.where(empty, torch.ones_like(mass), mass)

    mu = (membership.T @ batch) / safe_mass.unsqueeze(1)
    centered = batch.unsqueeze(0) - mu.unsqueeze(1)
    sigma = torch.einsum("nk,kni,knj->kij", membership, centered, centered) / safe_mass.view(-1, 1, 1)

    degenerate: tuple[int, ...] = ()
    if bool(empty.any()):
        degenerate = tuple(int(k) for k in torch.nonzero(empty).ravel())
        logger.warning(f"Mixture components {list(degenerate)} have no mass; using batch mean and identity covariance")
        mu = torch.where(empty.unsqueeze(1), batch.mean(dim=0).expand_as(mu), mu)
        sigma = torch.where(empty.view(-1, 1, 1), eye.expand_as(sigma), sigma)

    sigma = sigma + jitter * eye
    return GmmState(phi=phi, mu=mu, sigma=sigma, degenerate=degenerate)


def _cholesky(gmm: GmmState) -> torch.Tensor:
    """
    Raises:
        CovarianceError: Voor de eerste niet positief definiete component
    """
    factor, info = torch.linalg.cholesky_ex(gmm.sigma)
    failed = torch.nonzero(info).ravel()
    if failed.numel():
        raise CovarianceError(int(failed[0]))
    return factor


def energies(batch: torch.Tensor, gmm: GmmState) -> torch.Tensor:
    """
    E(ss) = -log sum_k phi_k N(ss; mu_k, Sigma_k) voor een batch

    Via Cholesky solves en log-sum-exp, dus stabiel voor grotere d.

    Args:
        batch: N x d representaties
        gmm: GmmState met positief definiete covarianties

    Returns:
        [N] energieen (hoger = minder waarschijnlijk)

    Raises:
        CovarianceError: Als een covariantie niet positief definiet is
    """
    factor = _cholesky(gmm)
    dim = gmm.dim
    centered = batch.unsqueeze(0) - gmm.mu.unsqueeze(1)                       # K, N, d
    solved = torch.linalg.solve_triangular(factor, centered.transpose(1, 2), upper=False)  # K, d, N
    mahalanobis = (solved ** 2).sum(dim=1)                                     # K, N
    log_det = 2.0 * torch.log(torch.diagonal(factor, dim1=-2, dim2=-1)).sum(dim=-1)
    log_density = -0.5 * (mahalanobis + log_det.unsqueeze(1) + dim * math.log(2.0 * math.pi))
    # phi_k == 0 zou een 0/0 gradient geven
    weighted = torch.log(gmm.phi.clamp_min(MIN_COMPONENT_MASS)).unsqueeze(1) + log_density
    return -torch.logsumexp(weighted, dim=0)


def energy(ss: torch.Tensor, gmm: GmmState) -> torch.Tensor:
    """Energie van een enkele representatie (scalar)"""
    return energies(ss.unsqueeze(0), gmm)[0]


def singularity_penalty(gmm: GmmState) -> torch.Tensor:
    """
    P(Sigma) = sum_k sum_j 1 / Sigma_kjj

    Raises:
        CovarianceError: Bij een diagonaal element gelijk aan 0
    """
    diagonals = torch.diagonal(gmm.sigma, dim1=-2, dim2=-1)
    zero = torch.nonzero((diagonals == 0).any(dim=1)).ravel()
    if zero.numel():
        raise CovarianceError(int(zero[0]), f"covariance of mixture component {int(zero[0])} has a zero diagonal entry")
    return (1.0 / diagonals).sum()


def energy_threshold(values: Sequence[float], tau: float) -> float:
    """
    tau-quantile van een lijst energieen

    De order statistic op gesorteerde index floor(tau * n) - 1, zodat bij
    verschillende energieen precies ceil((1 - tau) * n) waardes erboven liggen.

    Args:
        values: Energieen (niet leeg)
        tau: Quantile in (0, 1)

    Returns:
        Threshold; -inf als floor(tau * n) == 0
    """
    if not 0.0 < tau < 1.0:
        raise ValueError("tau must be between 0 and 1 (exclusive)")
    ordered = np.sort(np.asarray(values, dtype=np.float64))
    if ordered.size == 0:
        raise ValueError("cannot compute a threshold of zero energies")
    count = math.floor(tau * ordered.size + 1e-9)
    if count == 0:
        return float("-inf")
    return float(ordered[count - 1])


def classify_with_threshold(values: Sequence[float], threshold: float) -> list[SessionLabel]:
    """Bullying als de energie strikt boven de threshold ligt"""
    return [
        SessionLabel.BULLYING if value > threshold else SessionLabel.NON_BULLYING
        for value in np.asarray(values, dtype=np.float64)
    ]


def classify(values: Sequence[float], tau: float) -> list[SessionLabel]:
    """
    Label sessies op basis van hun energie

    Args:
        values: Energieen (niet leeg)
        tau: Quantile in (0, 1)

    Returns:
        Label per energie; gelijk aan de threshold telt als non-bullying
        ([1, 2, 3, 4] met tau 0.5 geeft non, non, bullying, bullying)
    """
    return classify_with_threshold(values, energy_threshold(values, tau))
