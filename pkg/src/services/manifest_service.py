"""
Run manifests: config, seed, input digests en output paden per commando
"""
import hashlib
import json
import logging
import platform
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Union

from .. import __version__


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def file_digest(path: PathLike, chunk_size: int = 1 << 20) -> str:
    """SHA-256 van een bestand (hex)"""
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(chunk_size), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class RunManifest:
    """
    Alles wat nodig is om een commando te reproduceren

    Attributes:
        command: Naam van het commando
        config: Config snapshot
        seed: Seed van de run
        inputs: Pad -> SHA-256 van elk input bestand
        outputs: Naam -> pad van elk output bestand
        timings: Naam -> seconden
        version: Package versie
        details: Commando specifieke extra's (variant, losses, metrics)
        status: "ok", of "failed" met error en exit_code in details
    """
    command: str
    config: dict
    seed: Optional[int]
    inputs: dict[str, str] = field(default_factory=dict)
    outputs: dict[str, str] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)
    version: str = __version__
    details: dict = field(default_factory=dict)
    created_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    python: str = field(default_factory=platform.python_version)
    status: str = "ok"

    def to_dict(self) -> dict:
        return asdict(self)


class ManifestService:
    """Maakt en schrijft run manifests"""

    def create(
        self,
        command: str,
        config: dict,
        seed: Optional[int],
        inputs: Optional[list[PathLike]] = None,
        outputs: Optional[dict[str, PathLike]] = None,
        timings: Optional[dict[str, float]] = None,
        details: Optional[dict] = None
    ) -> RunManifest:
        """
        Bouw een manifest

        Args:
            command: Naam van het commando
            config: Config snapshot (dict)
            seed: Seed
            inputs: Input bestanden (worden gehasht)
            outputs: Output bestanden per naam
            timings: Tijden in seconden
            details: Extra velden

        Returns:
            RunManifest
        """
        return RunManifest(
            command=command,
            config=config,
            seed=seed,
            inputs={str(p): file_digest(p) for p in (inputs or []) if p is not None},
            outputs={name: str(p) for name, p in (outputs or {}).items()},
            timings=dict(timings or {}),
            details=dict(details or {}),
        )

    def failure(self, command: str, error: BaseException, exit_code: int, arguments: dict) -> RunManifest:
        """
        Manifest van een mislukt commando

        Input bestanden worden niet gehasht, ze bestaan misschien niet.

        Args:
            command: Naam van het commando
            error: De exceptie die de run stopte
            exit_code: Exit code van het proces
            arguments: Geparste argumenten (paden als string)

        Returns:
            RunManifest met status "failed"
        """
        return RunManifest(
            command=command,
            config=arguments,
            seed=arguments.get("seed"),
            details={"error": str(error), "error_type": type(error).__name__, "exit_code": exit_code},
            status="failed",
        )

    def write(self, manifest: RunManifest, path: PathLike) -> Path:
        """Schrijf een manifest als JSON"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(manifest.to_dict(), handle, indent=2, sort_keys=True)
        logger.info(f"Manifest written to {path}")
        return path

    @staticmethod
    def read(path: PathLike) -> dict:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
