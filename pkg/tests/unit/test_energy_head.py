"""
Unit tests voor de energy head: memberships, GMM, energie, penalty en classify
"""
import math
from fractions import Fraction

import numpy as np
import pytest
import torch
import torch.nn as nn
from hypothesis import given, settings, strategies as st

from src.models.energy_head import (
    GmmState, MembershipNet, classify, energies, energy, energy_threshold, estimate_gmm, memberships,
    singularity_penalty
)
from src.models.errors import CovarianceError
from src.models.gradcheck import numerical_gradient_check
from src.models.session import SessionLabel


BULLY = SessionLabel.BULLYING
NON = SessionLabel.NON_BULLYING


def random_gmm(rng: np.random.Generator, k: int, d: int) -> GmmState:
    """Willekeurige mixture met goed geconditioneerde covarianties"""
    phi = rng.dirichlet(np.ones(k))
    mu = rng.normal(size=(k, d))
    factors = rng.normal(size=(k, d, d)) * 0.5
    sigma = factors @ factors.transpose(0, 2, 1) + 0.5 * np.eye(d)
    return GmmState(torch.from_numpy(phi), torch.from_numpy(mu), torch.from_numpy(sigma))


def naive_energy(x: np.ndarray, gmm: GmmState) -> float:
    """-log sum_k phi_k N(x; mu_k, Sigma_k) met expliciete determinant en inverse"""
    d = x.shape[0]
    total = 0.0
    for k in range(gmm.n_components):
        sigma = gmm.sigma[k].numpy()
        diff = x - gmm.mu[k].numpy()
        quad = diff @ np.linalg.inv(sigma) @ diff
        total += float(gmm.phi[k]) * math.exp(-0.5 * quad) / math.sqrt((2 * math.pi) ** d * np.linalg.det(sigma))
    return -math.log(total)


class TestMemberships:
    """Test suite voor MembershipNet en memberships"""

    def test_zero_weights_uniform(self):
        """UT-EH-01: Netwerk met nul gewichten geeft 1/K per rij"""
        net = MembershipNet(4, 5, 3).double()
        for param in net.parameters():
            nn.init.zeros_(param)

        m = memberships(torch.randn(6, 4, dtype=torch.float64), net)

        assert torch.allclose(m, torch.full((6, 5), 0.2, dtype=torch.float64), atol=1e-15)

    def test_single_component(self):
        """UT-EH-02: K=1 geeft precies 1.0"""
        net = MembershipNet(3, 1).double()

        m = memberships(torch.randn(4, 3, dtype=torch.float64), net)

        assert m.tolist() == [[1.0]] * 4

    def test_matches_explicit_softmax(self):
        """UT-EH-03: Gelijk aan exp/normaliseer van de logits"""
        torch.manual_seed(0)
        net = MembershipNet(5, 3, 7).double()
        batch = torch.randn(20, 5, dtype=torch.float64)

        logits = net.logits(batch).detach().numpy()
        expected = np.exp(logits) / np.exp(logits).sum(axis=1, keepdims=True)

        assert np.allclose(memberships(batch, net).detach().numpy(), expected, atol=1e-7)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 30), st.integers(1, 6), st.integers(0, 2**16))
    def test_rows_sum_to_one(self, n, k, seed):
        """UT-EH-04: Elke rij telt op tot 1"""
        torch.manual_seed(seed)
        net = MembershipNet(4, k).double()

        m = memberships(torch.randn(n, 4, dtype=torch.float64) * 10, net)

        assert torch.allclose(m.sum(dim=1), torch.ones(n, dtype=torch.float64), atol=1e-7)
        assert bool((m >= 0).all())

    def test_empty_batch(self):
        """UT-EH-05: N=0 is een fout"""
        with pytest.raises(ValueError):
            memberships(torch.zeros(0, 3, dtype=torch.float64), MembershipNet(3, 2).double())


class TestEstimateGmm:
    """Test suite voor estimate_gmm"""

    def test_hard_memberships_give_partition_means(self):
        """UT-EH-10: One-hot memberships geven het gemiddelde per partitie"""
        batch = torch.tensor([[0.0, 1.0], [2.0, 3.0], [10.0, 10.0], [12.0, 14.0], [11.0, 12.0]], dtype=torch.float64)
        m = torch.tensor([[1, 0], [1, 0], [0, 1], [0, 1], [0, 1]], dtype=torch.float64)

        gmm = estimate_gmm(batch, m, jitter=1e-6)

        assert torch.allclose(gmm.mu[0], batch[:2].mean(dim=0), atol=1e-14)
        assert torch.allclose(gmm.mu[1], batch[2:].mean(dim=0), atol=1e-14)
        assert gmm.phi.tolist() == pytest.approx([0.4, 0.6], abs=1e-15)

    def test_uniform_memberships_phi(self):
        """UT-EH-11: N=4, K=2, uniform geeft phi = [0.5, 0.5]"""
        gmm = estimate_gmm(torch.randn(4, 3, dtype=torch.float64), torch.full((4, 2), 0.5, dtype=torch.float64))

        assert gmm.phi.tolist() == [0.5, 0.5]

    @pytest.mark.oracle
    def test_matches_double_loop(self):
        """UT-EH-12: phi, mu en Sigma gelijk aan naieve sommen over 100 batches"""
        rng = np.random.default_rng(0)
        jitter = 1e-6
        for _ in range(100):
            n, d, k = rng.integers(2, 12), rng.integers(1, 6), rng.integers(1, 4)
            batch = rng.normal(size=(n, d))
            m = rng.dirichlet(np.ones(k), size=n)

            gmm = estimate_gmm(torch.from_numpy(batch), torch.from_numpy(m), jitter)

            for c in range(k):
                mass = sum(m[i, c] for i in range(n))
                mu = sum(m[i, c] * batch[i] for i in range(n)) / mass
                sigma = sum(m[i, c] * np.outer(batch[i] - mu, batch[i] - mu) for i in range(n)) / mass
                sigma = sigma + jitter * np.eye(d)
                assert float(gmm.phi[c]) == pytest.approx(mass / n, abs=1e-10)
                assert np.allclose(gmm.mu[c].numpy(), mu, atol=1e-10)
                assert np.allclose(gmm.sigma[c].numpy(), sigma, atol=1e-10)
            assert float(gmm.phi.sum()) == pytest.approx(1.0, abs=1e-12)

    def test_repeated_sample_gives_jitter(self):
        """UT-EH-13: N keer hetzelfde punt geeft Sigma = jitter * I"""
        batch = torch.tensor([[1.5, -2.0, 3.0]] * 5, dtype=torch.float64)
        m = torch.tensor([[1.0, 0.0]] * 3 + [[0.0, 1.0]] * 2, dtype=torch.float64)

        gmm = estimate_gmm(batch, m, jitter=1e-4)

        for c in range(2):
            assert torch.allclose(gmm.sigma[c], 1e-4 * torch.eye(3, dtype=torch.float64), atol=1e-15)

    def test_empty_component_falls_back(self, caplog):
        """UT-EH-14: Component zonder massa krijgt het batch gemiddelde en I"""
        batch = torch.randn(6, 2, dtype=torch.float64)
        m = torch.tensor([[1.0, 0.0]] * 6, dtype=torch.float64)

        gmm = estimate_gmm(batch, m, jitter=1e-6)

        assert gmm.degenerate == (1,)
        assert torch.allclose(gmm.mu[1], batch.mean(dim=0))
        assert torch.allclose(gmm.sigma[1], (1.0 + 1e-6) * torch.eye(2, dtype=torch.float64))
        assert torch.isfinite(energies(batch, gmm)).all()
        assert "no mass" in caplog.text

    def test_state_serialization(self):
        """UT-EH-15: to_dict/from_dict behoudt de tensors"""
        gmm = random_gmm(np.random.default_rng(1), 2, 3)

        again = GmmState.from_dict(gmm.to_dict())

        assert torch.equal(again.sigma, gmm.sigma)
        assert again.n_components == 2 and again.dim == 3


class TestEnergy:
    """Test suite voor energy en energies"""

    def test_standard_gaussian_at_mean(self):
        """UT-EH-20: K=1, Sigma=I, d=2 op het gemiddelde geeft log(2 pi)"""
        ss = torch.tensor([0.3, -1.2], dtype=torch.float64)
        gmm = GmmState(torch.ones(1, dtype=torch.float64), ss.unsqueeze(0).clone(),
                       torch.eye(2, dtype=torch.float64).unsqueeze(0))

        assert float(energy(ss, gmm)) == pytest.approx(math.log(2 * math.pi), abs=1e-12)
        assert float(energy(ss, gmm)) == pytest.approx(1.8379, abs=1e-4)

    @pytest.mark.oracle
    def test_matches_naive_density(self):
        """UT-EH-21: Gelijk aan directe dichtheid sommatie over 100 mixtures"""
        rng = np.random.default_rng(0)
        for _ in range(100):
            k, d = int(rng.integers(1, 5)), int(rng.integers(1, 9))
            gmm = random_gmm(rng, k, d)
            x = rng.normal(size=d)

            assert float(energy(torch.from_numpy(x), gmm)) == pytest.approx(naive_energy(x, gmm), rel=1e-8, abs=1e-10)

    def test_batch_equals_single(self):
        """UT-EH-22: energies op een batch gelijk aan energy per rij"""
        gmm = random_gmm(np.random.default_rng(2), 3, 4)
        batch = torch.randn(7, 4, dtype=torch.float64)

        values = energies(batch, gmm)

        for i in range(7):
            assert float(values[i]) == pytest.approx(float(energy(batch[i], gmm)), rel=1e-12)

    def test_translation_invariance(self):
        """UT-EH-23: ss en alle mu met dezelfde c verschuiven verandert E niet"""
        gmm = random_gmm(np.random.default_rng(3), 3, 4)
        x = torch.randn(4, dtype=torch.float64)
        shift = torch.tensor([10.0, -3.0, 0.5, 7.0], dtype=torch.float64)
        shifted = GmmState(gmm.phi, gmm.mu + shift, gmm.sigma)

        assert float(energy(x + shift, shifted)) == pytest.approx(float(energy(x, gmm)), rel=1e-9)

    def test_continuity(self):
        """UT-EH-24: |E(ss + delta) - E(ss)| gaat naar 0"""
        gmm = random_gmm(np.random.default_rng(4), 2, 3)
        x = torch.randn(3, dtype=torch.float64)
        direction = torch.randn(3, dtype=torch.float64)

        gaps = [abs(float(energy(x + scale * direction, gmm) - energy(x, gmm))) for scale in (1e-2, 1e-4, 1e-6)]

        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[2] < 1e-4

    def test_not_positive_definite(self):
        """UT-EH-25: Niet positief definiete covariantie noemt de component"""
        gmm = random_gmm(np.random.default_rng(5), 2, 2)
        sigma = gmm.sigma.clone()
        sigma[1] = torch.tensor([[1.0, 0.0], [0.0, -1.0]], dtype=torch.float64)

        with pytest.raises(CovarianceError) as info:
            energies(torch.zeros(1, 2, dtype=torch.float64), GmmState(gmm.phi, gmm.mu, sigma))
        assert info.value.component == 1

    def test_empty_component_gradient_is_finite(self):
        """UT-EH-26: phi_k = 0 geeft een eindige energie en eindige gradients"""
        phi = torch.tensor([1.0, 0.0], dtype=torch.float64, requires_grad=True)
        mu = torch.zeros(2, 3, dtype=torch.float64, requires_grad=True)
        sigma = torch.eye(3, dtype=torch.float64).repeat(2, 1, 1)
        batch = torch.randn(5, 3, dtype=torch.float64)

        values = energies(batch, GmmState(phi, mu, sigma))
        values.sum().backward()

        assert torch.all(torch.isfinite(values))
        assert torch.all(torch.isfinite(phi.grad))
        assert torch.all(torch.isfinite(mu.grad))

    @pytest.mark.gradcheck
    def test_membership_gradient_matches_finite_differences(self):
        """UT-EH-27: Gradient van de gemiddelde batch energie naar de membership net (d=4, K=2, N=8)"""
        torch.manual_seed(0)
        net = MembershipNet(4, 2, hidden_dim=5).double()
        batch = torch.randn(8, 4, dtype=torch.float64)

        def mean_energy():
            gmm = estimate_gmm(batch, net(batch), jitter=1e-6)
            return energies(batch, gmm).mean()

        report = numerical_gradient_check(mean_energy, list(net.parameters()), n_samples=20, eps=1e-6)

        assert report.passed(1e-3), report.worst()


class TestSingularityPenalty:
    """Test suite voor singularity_penalty"""

    def test_identity(self):
        """UT-EH-30: K=1, Sigma=I, d=3 geeft 3"""
        gmm = GmmState(torch.ones(1), torch.zeros(1, 3), torch.eye(3).unsqueeze(0))

        assert float(singularity_penalty(gmm)) == 3.0

    def test_half_diagonals(self):
        """UT-EH-31: K=2, diagonalen 0.5, d=2 geeft 8"""
        sigma = 0.5 * torch.eye(2, dtype=torch.float64).repeat(2, 1, 1)
        gmm = GmmState(torch.full((2,), 0.5), torch.zeros(2, 2), sigma)

        assert float(singularity_penalty(gmm)) == 8.0

    @pytest.mark.oracle
    def test_matches_scalar_loop(self):
        """UT-EH-32: Gelijk aan een scalaire loop"""
        gmm = random_gmm(np.random.default_rng(6), 4, 5)

        expected = 0.0
        for k in range(4):
            for j in range(5):
                expected += 1.0 / float(gmm.sigma[k, j, j])

        assert float(singularity_penalty(gmm)) == pytest.approx(expected, rel=1e-12)

    def test_zero_diagonal(self):
        """UT-EH-33: Diagonaal element 0 is een fout"""
        sigma = torch.eye(2, dtype=torch.float64).repeat(2, 1, 1)
        sigma[0, 1, 1] = 0.0

        with pytest.raises(CovarianceError):
            singularity_penalty(GmmState(torch.full((2,), 0.5), torch.zeros(2, 2), sigma))


class TestClassify:
    """Test suite voor energy_threshold en classify"""

    def test_median_split(self):
        """UT-EH-40: [1, 2, 3, 4] met tau 0.5"""
        assert classify([1, 2, 3, 4], 0.5) == [NON, NON, BULLY, BULLY]

    def test_all_equal_is_non_bullying(self):
        """UT-EH-41: Gelijke energieen zijn allemaal non-bullying"""
        assert classify([2.5] * 10, 0.65) == [NON] * 10

    def test_high_tau_on_hundred(self):
        """UT-EH-42: tau 0.99 op 100 sessies geeft precies 1 bullying"""
        values = np.random.default_rng(0).normal(size=100)

        labels = classify(values, 0.99)

        assert labels.count(BULLY) == 1
        assert labels[int(np.argmax(values))] is BULLY

    @pytest.mark.parametrize("n", [1, 7, 20, 100, 444, 1000])
    def test_protocol_fraction(self, n):
        """UT-EH-43: tau 0.65 labelt precies ceil(0.35 n) sessies als bullying"""
        values = np.random.default_rng(n).permutation(n).astype(float)

        labels = classify(values, 0.65)

        assert labels.count(BULLY) == math.ceil(Fraction(35, 100) * n)

    def test_low_tau_threshold(self):
        """UT-EH-44: floor(tau n) = 0 geeft -inf, dus alles bullying"""
        assert energy_threshold([1.0, 2.0], 0.3) == float("-inf")
        assert classify([1.0, 2.0], 0.3) == [BULLY, BULLY]

    @pytest.mark.parametrize("tau", [0.0, 1.0, -0.1, 1.5])
    def test_tau_out_of_range(self, tau):
        """UT-EH-45: tau buiten (0, 1)"""
        with pytest.raises(ValueError, match="tau"):
            classify([1.0, 2.0], tau)

    def test_empty_energies(self):
        """UT-EH-46: Lege lijst"""
        with pytest.raises(ValueError):
            energy_threshold([], 0.5)
