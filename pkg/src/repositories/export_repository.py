"""
Export van energieen, embeddings, attention, intervallen en metrics
"""
from pathlib import Path
from typing import Optional, Sequence, Union
import json
import logging

import numpy as np
import pandas as pd

from ..models.session import SessionLabel
from ..models.ucd_model import LossReport


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# 17 significante cijfers: float64 komt exact terug
FLOAT_FORMAT = "%.17g"


def _label_text(label: Optional[SessionLabel]) -> str:
    return label.value if label is not None else ""


class ExportRepository:
    """
    Schrijft diagnostische bestanden

    CSV via pandas, JSON voor geneste records.
    """

    @staticmethod
    def _prepare(path: PathLike) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def write_energies(
        self,
        path: PathLike,
        session_ids: Sequence[str],
        energies: Sequence[float],
        predictions: Sequence[SessionLabel]
    ) -> Path:
        """CSV met (session_id, energy, predicted_label)"""
        path = self._prepare(path)
        frame = pd.DataFrame({
            "session_id": list(session_ids),
            "energy": np.asarray(energies, dtype=np.float64),
            "predicted_label": [_label_text(p) for p in predictions],
        })
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        logger.info(f"Energies exported to {path} ({len(frame)} sessions)")
        return path

    def write_embeddings(
        self,
        path: PathLike,
        session_ids: Sequence[str],
        labels: Sequence[Optional[SessionLabel]],
        representations: np.ndarray
    ) -> Path:
        """
        CSV met (session_id, label, x0 .. x{d-1}) voor een externe 2-D projectie

        Args:
            path: Output pad
            session_ids: Ids
            labels: Label per sessie (leeg als onbekend)
            representations: N x d matrix
        """
        path = self._prepare(path)
        representations = np.asarray(representations, dtype=np.float64)
        frame = pd.DataFrame(representations, columns=[f"x{j}" for j in range(representations.shape[1])])
        frame.insert(0, "label", [_label_text(label) for label in labels])
        frame.insert(0, "session_id", list(session_ids))
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        logger.info(f"Embeddings exported to {path} ({frame.shape[0]} x {representations.shape[1]})")
        return path

    def read_embeddings(self, path: PathLike) -> tuple[list[str], list[Optional[SessionLabel]], np.ndarray]:
        """Lees een embeddings CSV terug"""
        frame = pd.read_csv(path, dtype={"session_id": str, "label": str},
                            keep_default_na=False, float_precision="round_trip")
        columns = [c for c in frame.columns if c not in ("session_id", "label")]
        labels = [SessionLabel.parse(v) if v else None for v in frame["label"]]
        return frame["session_id"].tolist(), labels, frame[columns].to_numpy(dtype=np.float64)

    def write_attention(self, path: PathLike, records: list[dict]) -> Path:
        """JSON met per sessie de woord en comment attention"""
        path = self._prepare(path)
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(records, handle, ensure_ascii=False, indent=1)
        logger.info(f"Attention weights exported to {path} ({len(records)} sessions)")
        return path

    def write_intervals(self, path: PathLike, rows: list[dict]) -> Path:
        """CSV met (session_id, comment_index, actual_dt, predicted_dt)"""
        path = self._prepare(path)
        frame = pd.DataFrame(rows, columns=["session_id", "comment_index", "actual_dt", "predicted_dt"])
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        logger.info(f"Intervals exported to {path} ({len(frame)} comments)")
        return path

    def write_graph_embeddings(self, path: PathLike, user_ids: Sequence[str], z: np.ndarray) -> Path:
        """Tekst rijen `user_id z1 ... zd`"""
        path = self._prepare(path)
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            for user_id, row in zip(user_ids, np.asarray(z, dtype=np.float64)):
                handle.write(user_id + " " + " ".join(FLOAT_FORMAT % x for x in row) + "\n")
        logger.info(f"Graph embeddings exported to {path} ({len(user_ids)} users)")
        return path

    def write_losses(self, path: PathLike, history: Sequence[LossReport]) -> Path:
        """CSV met een rij per epoch"""
        path = self._prepare(path)
        frame = pd.DataFrame([r.to_dict() for r in history],
                             columns=["total_J", "time_term", "energy_term", "graph_term", "penalty_term",
                                      "lambda1", "lambda2", "lambda3"])
        frame.insert(0, "epoch", range(1, len(frame) + 1))
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        return path

    def write_json(self, path: PathLike, data) -> Path:
        """Metrics, curves en sweeps als JSON"""
        path = self._prepare(path)
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(data, handle, indent=2, sort_keys=True)
        return path
