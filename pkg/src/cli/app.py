"""
Command-line interface voor UCD
"""
import argparse
import logging
import time
from pathlib import Path
from typing import Optional

from .. import __version__
from ..models.config import SynthSpec, ThresholdMode, TrainConfig
from ..models.errors import ConfigurationError, CovarianceError, NonFiniteLossError
from ..models.session import Corpus
from ..repositories.checkpoint_repository import Checkpoint, ICheckpointRepository, TorchCheckpointRepository
from ..repositories.config_repository import IniConfigRepository
from ..repositories.export_repository import ExportRepository
from ..services.baseline_service import kmeans_baseline, raw_features
from ..services.dataset_service import DatasetService
from ..services.detection_service import DetectionService
from ..services.evaluation_service import EvaluationService
from ..services.manifest_service import ManifestService
from ..services.sweep_service import SWEEP_PARAMETERS, SweepService, parse_grid
from ..services.synthetic_service import SyntheticCorpusGenerator
from ..services.training_service import LoggingObserver, TrainingService


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_INVALID = 2

# flag -> TrainConfig veld
CONFIG_FLAGS = (
    "lambda1", "lambda2", "lambda3", "n_components", "tau", "threshold_mode",
    "epochs", "batch_size", "learning_rate", "seed", "train_fraction", "min_token_freq",
)


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    """Flags die een config bestand overschrijven"""
    group = parser.add_argument_group("config overrides (flags > config file > defaults)")
    group.add_argument("--config", type=Path, help="INI config met [objective], [model], [optimizer], [run]")
    group.add_argument("--lambda1", type=float, help="gewicht van de energy term")
    group.add_argument("--lambda2", type=float, help="gewicht van de graph reconstructie term")
    group.add_argument("--lambda3", type=float, help="gewicht van de singularity penalty")
    group.add_argument("--n-components", type=int, help="aantal mixture componenten K")
    group.add_argument("--tau", type=float, help="energie threshold quantile in (0, 1)")
    group.add_argument("--threshold-mode", type=ThresholdMode, choices=list(ThresholdMode),
                       help="quantile over test energieen of over training energieen")
    group.add_argument("--epochs", type=int)
    group.add_argument("--batch-size", type=int)
    group.add_argument("--learning-rate", type=float)
    group.add_argument("--seed", type=int)
    group.add_argument("--train-fraction", type=float)
    group.add_argument("--min-token-freq", type=int)
    group.add_argument("--ablation", choices=["UCD", "UCDXtext", "UCDXtime", "UCDXgraph"],
                       help="ablatie variant (UCD = volledig model)")


def build_parser() -> argparse.ArgumentParser:
    """Parser met alle commando's"""
    parser = argparse.ArgumentParser(
        prog="ucd",
        description="Unsupervised cyberbullying detection met energie gebaseerde sessie scores"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="DEBUG logging")
    commands = parser.add_subparsers(dest="command", required=True)

    generate = commands.add_parser("generate", help="genereer een synthetisch corpus")
    generate.add_argument("--out-dir", type=Path, default=Path("data"))
    defaults = SynthSpec()
    for name, value in defaults.to_dict().items():
        generate.add_argument(f"--{name.replace('_', '-')}", type=type(value), default=value)

    train = commands.add_parser("train", help="split en train op een corpus")
    train.add_argument("--sessions", type=Path, required=True)
    train.add_argument("--graph", type=Path)
    train.add_argument("--out-dir", type=Path, default=Path("runs/train"))
    _add_config_flags(train)

    evaluate = commands.add_parser("evaluate", help="scoor test sessies met een checkpoint")
    evaluate.add_argument("--checkpoint", type=Path, required=True)
    evaluate.add_argument("--sessions", type=Path, required=True)
    evaluate.add_argument("--graph", type=Path)
    evaluate.add_argument("--tau", type=float)
    evaluate.add_argument("--threshold-mode", type=ThresholdMode, choices=list(ThresholdMode))
    evaluate.add_argument("--tau-grid", help="komma gescheiden tau waardes voor een threshold curve")
    evaluate.add_argument("--baseline", action="store_true", help="vergelijk met de k-means baseline")
    evaluate.add_argument("--out-dir", type=Path, default=Path("runs/evaluate"))

    repeat = commands.add_parser("repeat", help="herhaalde split/train/evaluate runs (mean en std)")
    repeat.add_argument("--sessions", type=Path, required=True)
    repeat.add_argument("--graph", type=Path)
    repeat.add_argument("--runs", type=int, default=10)
    repeat.add_argument("--out-dir", type=Path, default=Path("runs/repeat"))
    _add_config_flags(repeat)

    sweep = commands.add_parser("sweep", help="varieer een hyperparameter over een grid")
    sweep.add_argument("--sessions", type=Path, required=True)
    sweep.add_argument("--graph", type=Path)
    sweep.add_argument("--parameter", choices=sorted(SWEEP_PARAMETERS), required=True)
    sweep.add_argument("--values", required=True, help="komma gescheiden grid, bv 1e-5,1e-4,1e-3")
    sweep.add_argument("--out-dir", type=Path, default=Path("runs/sweep"))
    _add_config_flags(sweep)

    export = commands.add_parser("export-embeddings", help="exporteer representaties, attention en intervallen")
    export.add_argument("--checkpoint", type=Path, required=True)
    export.add_argument("--sessions", type=Path, required=True)
    export.add_argument("--graph", type=Path)
    export.add_argument("--out-dir", type=Path, default=Path("runs/export"))

    return parser


class UcdCommandLine:
    """
    Koppelt de commando's aan de services

    Exit codes: 0 succes, 1 runtime fout (niet-eindige loss, I/O), 2 ongeldige input.
    """

    def __init__(
        self,
        dataset_service: Optional[DatasetService] = None,
        training_service: Optional[TrainingService] = None,
        checkpoint_repository: Optional[ICheckpointRepository] = None,
        manifest_service: Optional[ManifestService] = None
    ):
        self._datasets = dataset_service or DatasetService()
        self._training = training_service or TrainingService()
        self._training.add_observer(LoggingObserver())
        self._checkpoints = checkpoint_repository or TorchCheckpointRepository()
        self._manifests = manifest_service or ManifestService()
        self._exports = ExportRepository()
        self._configs = IniConfigRepository()

    def run(self, args: argparse.Namespace) -> int:
        """
        Voer een geparst commando uit

        Returns:
            Exit code
        """
        handlers = {
            "generate": self.cmd_generate,
            "train": self.cmd_train,
            "evaluate": self.cmd_evaluate,
            "repeat": self.cmd_repeat,
            "sweep": self.cmd_sweep,
            "export-embeddings": self.cmd_export_embeddings,
        }
        try:
            return handlers[args.command](args)
        except (ConfigurationError, ValueError, KeyError) as e:
            # format errors zijn ValueErrors; KeyError komt van een onvolledig checkpoint
            logger.error(f"{args.command} failed: {e}")
            return self._fail(args, e, EXIT_INVALID)
        except (NonFiniteLossError, CovarianceError) as e:
            logger.error(f"{args.command} aborted: {e}")
            return self._fail(args, e, EXIT_RUNTIME)
        except OSError as e:
            logger.error(f"{args.command} failed: {e}", exc_info=True)
            return self._fail(args, e, EXIT_RUNTIME)

    def _fail(self, args: argparse.Namespace, error: BaseException, exit_code: int) -> int:
        """Print de fout en schrijf een failure manifest in --out-dir"""
        print(f"[FAIL] {error}")
        out_dir = getattr(args, "out_dir", None)
        if out_dir is None:
            return exit_code
        arguments = {
            name: value if value is None or isinstance(value, (bool, int, float, str)) else str(value)
            for name, value in vars(args).items()
        }
        manifest = self._manifests.failure(args.command, error, exit_code, arguments)
        try:
            self._manifests.write(manifest, Path(out_dir) / "manifest.json")
        except OSError as e:
            logger.error(f"Could not write failure manifest: {e}")
        return exit_code

    def build_config(self, args: argparse.Namespace) -> TrainConfig:
        """Defaults < config bestand < flags"""
        config = TrainConfig()
        if args.config is not None:
            config = self._configs.load(args.config, config)
        config = config.with_overrides(**{name: getattr(args, name, None) for name in CONFIG_FLAGS})
        if args.ablation is not None:
            config = config.with_variant(args.ablation)
        return config

    def _ingest(self, args: argparse.Namespace, config: Optional[TrainConfig] = None, vocabulary=None) -> Corpus:
        min_token_freq = config.min_token_freq if config is not None else 1
        return self._datasets.ingest_corpus(args.sessions, args.graph, min_token_freq, vocabulary)

    def _detector(self, checkpoint: Checkpoint) -> DetectionService:
        return DetectionService(checkpoint.build_model(), checkpoint.gmm, checkpoint.transform,
                                checkpoint.train_energies)

    def cmd_generate(self, args: argparse.Namespace) -> int:
        """Schrijf sessions.jsonl, graph.txt en manifest.json"""
        started = time.perf_counter()
        spec = SynthSpec(**{name: getattr(args, name) for name in SynthSpec().to_dict()})
        corpus = SyntheticCorpusGenerator().generate(spec)

        sessions_path = args.out_dir / "sessions.jsonl"
        graph_path = args.out_dir / "graph.txt"
        self._datasets.save_corpus(corpus, sessions_path, graph_path)

        manifest = self._manifests.create(
            "generate", spec.to_dict(), spec.seed,
            outputs={"sessions": sessions_path, "graph": graph_path},
            timings={"total": time.perf_counter() - started},
            details={"n_sessions": len(corpus), "n_users": corpus.graph.n_users},
        )
        self._manifests.write(manifest, args.out_dir / "manifest.json")
        print(f"[OK] Generated {len(corpus)} sessions in {args.out_dir}")
        return EXIT_OK

    def cmd_train(self, args: argparse.Namespace) -> int:
        """Split, train en schrijf checkpoint, losses en manifest"""
        started = time.perf_counter()
        config = self.build_config(args)
        corpus = self._ingest(args, config)
        train, test = self._datasets.split_corpus(corpus, config.train_fraction, config.seed)

        out = args.out_dir
        outputs = {
            "train_sessions": out / "train_sessions.jsonl",
            "test_sessions": out / "test_sessions.jsonl",
            "checkpoint": out / "checkpoint.pt",
            "losses": out / "losses.csv",
        }
        result = self._training.train(train, config)

        self._datasets.save_corpus(train, outputs["train_sessions"])
        self._datasets.save_corpus(test, outputs["test_sessions"])
        checkpoint = Checkpoint.from_model(result.model, result.vocabulary, result.gmm,
                                           result.transform, result.train_energies)
        self._checkpoints.save(checkpoint, outputs["checkpoint"])
        self._exports.write_losses(outputs["losses"], result.history)

        manifest = self._manifests.create(
            "train", config.to_dict(), config.seed,
            inputs=[args.sessions, args.graph, args.config],
            outputs=outputs,
            timings={"training": result.wall_time, "total": time.perf_counter() - started},
            details={
                "variant": config.variant.value if config.variant else "UCD",
                "n_train": len(train),
                "n_test": len(test),
                "losses": [r.to_dict() for r in result.history],
            },
        )
        self._manifests.write(manifest, out / "manifest.json")
        final = result.history[-1]
        print(f"[OK] Trained {manifest.details['variant']} for {config.epochs} epochs, final J={final.total_J:.6g}")
        return EXIT_OK

    def cmd_evaluate(self, args: argparse.Namespace) -> int:
        """Energieen, classificatie en metrics met een checkpoint"""
        started = time.perf_counter()
        checkpoint = self._checkpoints.load(args.checkpoint)
        config = checkpoint.config
        corpus = self._ingest(args, vocabulary=checkpoint.vocabulary)
        tau = config.tau if args.tau is None else args.tau
        mode = args.threshold_mode or config.threshold_mode

        scores = self._detector(checkpoint).score(corpus, tau=tau, threshold_mode=mode)
        out = args.out_dir
        outputs = {"energies": out / "energies.csv", "metrics": out / "metrics.json"}
        self._exports.write_energies(outputs["energies"], scores.session_ids, scores.energies, scores.predictions)

        labels = list(zip(corpus.session_ids, corpus.labels()))
        results: dict = {"tau": tau, "threshold_mode": mode.value, "threshold": scores.threshold,
                         "n_sessions": len(corpus), "n_bullying": scores.n_bullying}
        evaluation = EvaluationService(self._datasets, self._training)
        if all(label is not None for _, label in labels):
            report = evaluation.evaluate(scores.as_pairs(), labels, tau, scores.predictions)
            results["metrics"] = report.to_dict()
            print(report.format_table())
            if args.tau_grid:
                taus = [float(t) for t in args.tau_grid.split(",") if t.strip()]
                results["threshold_curve"] = evaluation.threshold_curve(scores.as_pairs(), labels, taus)
            if args.baseline:
                baseline = kmeans_baseline(raw_features(corpus), config.seed)
                base_report = evaluation.evaluate(
                    list(zip(corpus.session_ids, baseline.scores.tolist())), labels, tau, baseline.labels
                )
                results["baseline"] = base_report.to_dict()
                print(f"k-means baseline AUROC={base_report.auroc:.4f} F1={base_report.f1:.4f}")
        else:
            logger.warning("Some sessions have no label; metrics skipped")

        self._exports.write_json(outputs["metrics"], results)
        manifest = self._manifests.create(
            "evaluate", config.to_dict(), config.seed,
            inputs=[args.checkpoint, args.sessions, args.graph],
            outputs=outputs,
            timings={"total": time.perf_counter() - started},
            details={"tau": tau, "threshold_mode": mode.value},
        )
        self._manifests.write(manifest, out / "manifest.json")
        print(f"[OK] {scores.n_bullying}/{len(corpus)} sessions labeled bullying (tau={tau})")
        return EXIT_OK

    def cmd_repeat(self, args: argparse.Namespace) -> int:
        """repeated_runs met seeds seed .. seed + runs - 1"""
        started = time.perf_counter()
        config = self.build_config(args)
        corpus = self._ingest(args, config)
        report = EvaluationService(self._datasets, self._training).repeated_runs(corpus, config, args.runs)

        metrics_path = self._exports.write_json(args.out_dir / "metrics.json", report.to_dict())
        manifest = self._manifests.create(
            "repeat", config.to_dict(), config.seed,
            inputs=[args.sessions, args.graph, args.config],
            outputs={"metrics": metrics_path},
            timings={"total": time.perf_counter() - started},
            details={"n_runs": args.runs},
        )
        self._manifests.write(manifest, args.out_dir / "manifest.json")
        print(report.format_table())
        return EXIT_OK

    def cmd_sweep(self, args: argparse.Namespace) -> int:
        """Sweep een parameter; resultaten als JSON en tabel"""
        started = time.perf_counter()
        config = self.build_config(args)
        values = parse_grid(args.parameter, args.values)
        corpus = self._ingest(args, config)
        sweeper = SweepService(self._datasets, self._training)
        points = sweeper.sweep(corpus, config, args.parameter, values)

        sweep_path = self._exports.write_json(args.out_dir / "sweep.json", [p.to_dict() for p in points])
        manifest = self._manifests.create(
            "sweep", config.to_dict(), config.seed,
            inputs=[args.sessions, args.graph, args.config],
            outputs={"sweep": sweep_path},
            timings={"total": time.perf_counter() - started},
            details={"parameter": args.parameter, "values": values},
        )
        self._manifests.write(manifest, args.out_dir / "manifest.json")
        print(SweepService.format_table(points))
        return EXIT_OK

    def cmd_export_embeddings(self, args: argparse.Namespace) -> int:
        """Representaties, attention, intervallen en graph embeddings"""
        started = time.perf_counter()
        checkpoint = self._checkpoints.load(args.checkpoint)
        corpus = self._ingest(args, vocabulary=checkpoint.vocabulary)
        detector = self._detector(checkpoint)
        out = args.out_dir

        outputs = {
            "embeddings": out / "embeddings.csv",
            "attention": out / "attention.json",
            "intervals": out / "intervals.csv",
        }
        self._exports.write_embeddings(outputs["embeddings"], corpus.session_ids, corpus.labels(),
                                       detector.representations(corpus))
        self._exports.write_attention(outputs["attention"], detector.attention(corpus))
        self._exports.write_intervals(outputs["intervals"], detector.intervals(corpus))
        if corpus.graph is not None and detector.model.graph_encoder is not None:
            outputs["graph_embeddings"] = out / "graph_embeddings.txt"
            user_ids, z = detector.graph_embeddings(corpus.graph)
            self._exports.write_graph_embeddings(outputs["graph_embeddings"], user_ids, z)

        manifest = self._manifests.create(
            "export-embeddings", checkpoint.config.to_dict(), checkpoint.config.seed,
            inputs=[args.checkpoint, args.sessions, args.graph],
            outputs=outputs,
            timings={"total": time.perf_counter() - started},
        )
        self._manifests.write(manifest, out / "manifest.json")
        print(f"[OK] Exported {len(corpus)} session embeddings to {outputs['embeddings']}")
        return EXIT_OK

