"""
Unit tests voor checkpoint, export en manifest opslag
"""
import json
from dataclasses import replace

import numpy as np
import pandas as pd
import pytest
import torch

from src import __version__
from src.models.session import SessionLabel
from src.models.ucd_model import LossReport
from src.repositories.checkpoint_repository import Checkpoint, TorchCheckpointRepository
from src.repositories.export_repository import ExportRepository
from src.services.detection_service import DetectionService
from src.services.manifest_service import ManifestService, file_digest
from src.services.training_service import TrainingService


@pytest.fixture
def trained(tiny_config, synthetic_corpus):
    return TrainingService().train(synthetic_corpus, replace(tiny_config, epochs=1))


def checkpoint_of(result) -> Checkpoint:
    return Checkpoint.from_model(result.model, result.vocabulary, result.gmm, result.transform, result.train_energies)


class TestTorchCheckpointRepository:
    """Test suite voor TorchCheckpointRepository"""

    def test_round_trip_scores_identical(self, trained, synthetic_corpus, tmp_path):
        """UT-RP-01: Opgeslagen en geladen model geeft dezelfde energieen"""
        repository = TorchCheckpointRepository()
        path = tmp_path / "model" / "checkpoint.pt"

        repository.save(checkpoint_of(trained), path)
        loaded = repository.load(path)

        restored = DetectionService(loaded.build_model(), loaded.gmm, loaded.transform, loaded.train_energies)
        assert np.array_equal(restored.energies(synthetic_corpus), trained.detector().energies(synthetic_corpus))

    def test_round_trip_metadata(self, trained, tmp_path):
        """UT-RP-02: Config, vocabulary, transform en versie komen terug"""
        repository = TorchCheckpointRepository()
        path = tmp_path / "checkpoint.pt"

        repository.save(checkpoint_of(trained), path)
        loaded = repository.load(path)

        assert loaded.config == trained.config
        assert loaded.vocabulary == trained.vocabulary
        assert loaded.transform == trained.transform
        assert loaded.version == __version__
        assert np.array_equal(loaded.train_energies, trained.train_energies)
        assert torch.equal(loaded.gmm.sigma, trained.gmm.sigma)

    def test_ablated_model_round_trip(self, tiny_config, synthetic_corpus, tmp_path):
        """UT-RP-03: UCDXgraph checkpoint heeft geen graph encoder"""
        result = TrainingService().train(synthetic_corpus, replace(tiny_config, epochs=1).with_variant("UCDXgraph"))
        repository = TorchCheckpointRepository()

        repository.save(checkpoint_of(result), tmp_path / "ckpt.pt")
        loaded = repository.load(tmp_path / "ckpt.pt")

        assert loaded.config.ablations.no_graph
        assert loaded.build_model().graph_encoder is None

    def test_missing_file(self, tmp_path):
        """UT-RP-04: Niet bestaand checkpoint"""
        with pytest.raises(FileNotFoundError):
            TorchCheckpointRepository().load(tmp_path / "nope.pt")

    def test_incomplete_payload(self, tmp_path):
        """UT-RP-05: Checkpoint zonder config"""
        path = tmp_path / "broken.pt"
        torch.save({"version": __version__}, path)

        with pytest.raises(KeyError):
            TorchCheckpointRepository().load(path)


class TestExportRepository:
    """Test suite voor ExportRepository"""

    def test_embeddings_round_trip(self, tmp_path):
        """UT-RP-10: Embeddings CSV komt terug binnen 1e-12"""
        rng = np.random.default_rng(0)
        representations = rng.normal(size=(4, 3)) * np.array([1e-8, 1.0, 1e6])
        labels = [SessionLabel.BULLYING, None, SessionLabel.NON_BULLYING, None]
        repository = ExportRepository()

        repository.write_embeddings(tmp_path / "embeddings.csv", ["a", "b", "007", "d"], labels, representations)
        ids, read_labels, values = repository.read_embeddings(tmp_path / "embeddings.csv")

        assert ids == ["a", "b", "007", "d"]
        assert read_labels == labels
        assert np.allclose(values, representations, rtol=1e-12, atol=0.0)

    def test_energies_csv(self, tmp_path):
        """UT-RP-11: Kolommen session_id, energy, predicted_label"""
        ExportRepository().write_energies(
            tmp_path / "energies.csv", ["s1", "s2"], [1.5, -2.25], [SessionLabel.BULLYING, SessionLabel.NON_BULLYING]
        )

        frame = pd.read_csv(tmp_path / "energies.csv")
        assert list(frame.columns) == ["session_id", "energy", "predicted_label"]
        assert frame["energy"].tolist() == [1.5, -2.25]
        assert frame["predicted_label"].tolist() == ["bullying", "non-bullying"]

    def test_losses_csv(self, tmp_path):
        """UT-RP-12: Een rij per epoch met de lambdas"""
        history = [LossReport(2.0, 1.0, 3.0, 4.0, 5.0, 0.1, 0.2, 0.0), LossReport(1.0, 0.5, 1.0, 2.0, 0.0, 0.1, 0.2, 0.0)]

        ExportRepository().write_losses(tmp_path / "losses.csv", history)

        frame = pd.read_csv(tmp_path / "losses.csv")
        assert frame["epoch"].tolist() == [1, 2]
        assert frame["total_J"].tolist() == [2.0, 1.0]
        assert "lambda3" in frame.columns

    def test_intervals_and_graph_embeddings(self, tmp_path):
        """UT-RP-13: Intervallen CSV en graph embedding regels"""
        repository = ExportRepository()

        repository.write_intervals(tmp_path / "intervals.csv",
                                   [{"session_id": "s", "comment_index": 0, "actual_dt": 3.0, "predicted_dt": 2.5}])
        repository.write_graph_embeddings(tmp_path / "graph.txt", ["u1", "u2"], np.array([[0.5, 1.0], [2.0, -1.0]]))

        assert pd.read_csv(tmp_path / "intervals.csv").shape == (1, 4)
        lines = (tmp_path / "graph.txt").read_text().splitlines()
        assert lines == ["u1 0.5 1", "u2 2 -1"]

    def test_write_json_sorted(self, tmp_path):
        """UT-RP-14: JSON met gesorteerde keys"""
        path = ExportRepository().write_json(tmp_path / "out" / "metrics.json", {"b": 1, "a": [1, 2]})

        assert json.loads(path.read_text()) == {"a": [1, 2], "b": 1}
        assert path.read_text().index('"a"') < path.read_text().index('"b"')


class TestManifestService:
    """Test suite voor ManifestService"""

    def test_digest_matches_content(self, tmp_path):
        """UT-RP-20: SHA-256 van een bekend bestand"""
        path = tmp_path / "input.txt"
        path.write_bytes(b"abc")

        assert file_digest(path) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"

    def test_create_and_write(self, tmp_path, tiny_config):
        """UT-RP-21: Manifest bevat config, seed, inputs en outputs"""
        source = tmp_path / "sessions.jsonl"
        source.write_text("{}\n")
        service = ManifestService()

        manifest = service.create("train", tiny_config.to_dict(), 7, inputs=[source, None],
                                  outputs={"checkpoint": tmp_path / "checkpoint.pt"}, timings={"train": 1.5},
                                  details={"variant": "UCD"})
        service.write(manifest, tmp_path / "manifest.json")
        data = ManifestService.read(tmp_path / "manifest.json")

        assert data["command"] == "train"
        assert data["seed"] == 7
        assert data["inputs"] == {str(source): file_digest(source)}
        assert data["outputs"]["checkpoint"].endswith("checkpoint.pt")
        assert data["config"]["lambda1"] == tiny_config.lambda1
        assert data["version"] == __version__
        assert data["details"]["variant"] == "UCD"
