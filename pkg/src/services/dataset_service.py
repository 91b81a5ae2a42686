"""
Dataset service - ingestion, opslag en train/test splits
"""
import logging
import math
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ..models.session import Corpus
from ..models.vocabulary import Vocabulary
from ..repositories.corpus_repository import ICorpusRepository, JsonLinesCorpusRepository


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class DatasetService:
    """
    Service voor het inlezen en splitsen van corpora

    Combineert de corpus repository met de split logica.
    """

    def __init__(self, repository: Optional[ICorpusRepository] = None):
        """
        Initialiseer dataset service

        Args:
            repository: Corpus repository (optioneel, anders JSON lines default)
        """
        self._repository = repository or JsonLinesCorpusRepository()

    @property
    def repository(self) -> ICorpusRepository:
        """De onderliggende repository"""
        return self._repository

    def ingest_corpus(
        self,
        sessions_path: PathLike,
        graph_path: Optional[PathLike] = None,
        min_token_freq: int = 1,
        vocabulary: Optional[Vocabulary] = None
    ) -> Corpus:
        """
        Lees een corpus van disk

        Args:
            sessions_path: Line-delimited sessions bestand
            graph_path: Optioneel graph bestand
            min_token_freq: Tokens onder deze frequentie krijgen id 0
            vocabulary: Vaste vocabulary (bv van een checkpoint)

        Returns:
            Corpus
        """
        return self._repository.load(sessions_path, graph_path, min_token_freq, vocabulary)

    def save_corpus(self, corpus: Corpus, sessions_path: PathLike, graph_path: Optional[PathLike] = None) -> None:
        """Schrijf een corpus in hetzelfde formaat als ingest_corpus leest"""
        self._repository.save(corpus, sessions_path, graph_path)

    def split_corpus(self, corpus: Corpus, train_fraction: float, seed: int) -> tuple[Corpus, Corpus]:
        """
        Deterministische split op sessie niveau

        Args:
            corpus: Corpus om te splitsen
            train_fraction: Fractie voor training, in (0, 1)
            seed: Seed voor de shuffle

        Returns:
            (train, test) met dezelfde vocabulary en graph

        Raises:
            ValueError: Bij minder dan 2 sessies of een ongeldige fractie
        """
        if not 0.0 < train_fraction < 1.0:
            raise ValueError("train_fraction must be between 0 and 1 (exclusive)")
        n_sessions = len(corpus)
        if n_sessions < 2:
            raise ValueError("corpus needs at least 2 sessions to split")

        # 0.8 * 2218 = 1774.4 -> 1774 train; beide helften niet leeg
        n_train = math.floor(train_fraction * n_sessions + 1e-9)
        n_train = min(max(n_train, 1), n_sessions - 1)

        permutation = np.random.default_rng(seed).permutation(n_sessions)
        train_idx = np.sort(permutation[:n_train])
        test_idx = np.sort(permutation[n_train:])

        logger.info(f"Split corpus (seed={seed}): {len(train_idx)} train / {len(test_idx)} test")
        return corpus.subset(train_idx.tolist()), corpus.subset(test_idx.tolist())
