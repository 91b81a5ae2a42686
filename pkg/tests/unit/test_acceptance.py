"""
Unit tests voor de acceptance service
"""
import json
from dataclasses import replace

import pytest

from src.models.config import SynthSpec, TrainConfig
from src.services.acceptance_service import AcceptanceReport, AcceptanceService, acceptance_spec
from src.services.evaluation_service import MetricsReport


def make_report(auroc: dict[str, float], runtime: float = 10.0, protocol_ok: bool = True) -> AcceptanceReport:
    metrics = {name: MetricsReport(precision=0.5, recall=0.5, f1=0.5, auroc=value) for name, value in auroc.items()}
    return AcceptanceReport(
        spec=SynthSpec(),
        config=TrainConfig(),
        seeds=[0],
        metrics=metrics,
        silhouette=0.2,
        protocol_ok=protocol_ok,
        separability_runtime=runtime,
    )


GOOD = {"UCD": 0.92, "UCDXgraph": 0.90, "UCDXtime": 0.88, "UCDXtext": 0.60, "kmeans": 0.70}


class TestAcceptanceReport:
    """Test suite voor AcceptanceReport.criteria"""

    def test_all_criteria_pass(self):
        """UT-AC-01: Goede metrics halen elk criterium"""
        report = make_report(GOOD)

        assert report.criteria == {
            "separability": True,
            "beats_baseline": True,
            "protocol_fraction": True,
            "embedding_separation": True,
            "runtime": True,
            "ablation_ordering": True,
        }
        assert report.passed

    def test_small_baseline_gap_fails(self):
        """UT-AC-02: Marge van 0.03 boven de baseline is te weinig"""
        report = make_report({**GOOD, "kmeans": 0.89})

        assert not report.criteria["beats_baseline"]
        assert report.criteria["separability"]
        assert not report.passed

    @pytest.mark.parametrize("overrides", [
        {"UCDXtime": 0.91},
        {"UCDXtext": 0.89},
        {"UCDXgraph": 0.95},
    ])
    def test_ablation_ordering_violations(self, overrides):
        """UT-AC-03: Verkeerde volgorde van de varianten faalt"""
        assert not make_report({**GOOD, **overrides}).criteria["ablation_ordering"]

    def test_without_ablations(self):
        """UT-AC-04: Zonder ablaties geen ordering criterium"""
        report = make_report({"UCD": 0.9, "kmeans": 0.7})

        assert "ablation_ordering" not in report.criteria
        assert report.passed

    def test_runtime_limit(self):
        """UT-AC-05: 600 seconden of meer faalt, ablatie tijd telt niet mee"""
        slow = make_report(GOOD, runtime=600.0)
        fast = replace(make_report(GOOD, runtime=599.0), ablation_runtime=5000.0)

        assert not slow.criteria["runtime"]
        assert fast.criteria["runtime"]

    def test_protocol_flag(self):
        """UT-AC-06: Een run met een afwijkend aantal bullying labels faalt"""
        assert not make_report(GOOD, protocol_ok=False).criteria["protocol_fraction"]


class TestAcceptanceService:
    """Test suite voor AcceptanceService.run"""

    def test_acceptance_spec(self):
        """UT-AC-10: Geplante signalen van het acceptatie corpus"""
        spec = acceptance_spec()

        assert (spec.n_sessions, spec.bully_fraction, spec.burst_rate_ratio) == (1000, 0.3, 4.0)
        assert (spec.profane_rate_bully, spec.profane_rate_clean, spec.homophily) == (0.15, 0.01, 0.9)
        assert spec.vocab_size == SynthSpec().vocab_size

    def test_no_seeds(self, tiny_spec, tiny_config):
        """UT-AC-11: Zonder seeds is een fout"""
        with pytest.raises(ValueError):
            AcceptanceService().run(tiny_spec, tiny_config, [])

    @pytest.mark.integration
    def test_small_run_without_ablations(self, tiny_spec, tiny_config):
        """UT-AC-12: Een seed zonder ablaties geeft UCD en baseline metrics en een JSON rapport"""
        report = AcceptanceService().run(replace(tiny_spec, n_sessions=80), tiny_config, [0], with_ablations=False)

        assert set(report.metrics) == {"UCD", "kmeans"}
        assert report.protocol_ok
        assert report.ablation_runtime == 0.0
        assert report.separability_runtime > 0.0
        data = json.loads(json.dumps(report.to_dict()))
        assert data["seeds"] == [0]
        assert set(data["criteria"]) == set(report.criteria)
