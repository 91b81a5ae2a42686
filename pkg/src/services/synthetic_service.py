"""
Synthetische corpus generator met geplant bullying signaal
"""
import logging
from typing import Optional

import networkx as nx
import numpy as np
from scipy import sparse

from ..models.config import SynthSpec
from ..models.corpus_builder import build_corpus
from ..models.session import CommentRecord, Corpus, SessionLabel, SessionRecord, SocialGraph
from ..validators.spec_validator import SynthSpecValidator


logger = logging.getLogger(__name__)


class SyntheticCorpusGenerator:
    """
    Genereert gelabelde synthetische corpora

    Bullying sessies hebben (a) meer scheldwoorden, (b) exponentiele
    inter-arrival tijden met een kleinere gemiddelde gap, (c) owners in het
    "bullying" blok van een stochastic block model. Labels zijn er alleen
    voor evaluatie. Alles is deterministisch onder spec.seed.
    """

    BULLY_BLOCK = 1
    CLEAN_BLOCK = 0

    def __init__(self, validator: Optional[SynthSpecValidator] = None):
        """
        Initialiseer generator

        Args:
            validator: Validator voor de spec (optioneel, anders default)
        """
        self._validator = validator or SynthSpecValidator()

    def generate(self, spec: SynthSpec) -> Corpus:
        """
        Genereer een corpus

        Args:
            spec: Parameters van de generator

        Returns:
            Corpus met graph en evaluatie labels

        Raises:
            ConfigurationError: Als de spec ongeldig is
        """
        self._validator.validate_or_raise(spec)
        rng = np.random.default_rng(spec.seed)

        blocks, graph = self._generate_graph(spec, rng)
        bully_users = np.flatnonzero(blocks == self.BULLY_BLOCK)
        clean_users = np.flatnonzero(blocks == self.CLEAN_BLOCK)
        user_ids = graph.user_ids

        n_bully = int(round(spec.bully_fraction * spec.n_sessions))
        is_bully = np.zeros(spec.n_sessions, dtype=bool)
        is_bully[:n_bully] = True
        rng.shuffle(is_bully)

        benign_words = [f"word{k}" for k in range(spec.vocab_size - spec.profane_vocab_size)]
        profane_words = [f"slur{k}" for k in range(spec.profane_vocab_size)]
        # zipf-achtige verdeling over gewone woorden
        benign_weights = 1.0 / np.arange(1, len(benign_words) + 1)
        benign_weights /= benign_weights.sum()

        records = []
        for index in range(spec.n_sessions):
            bully = bool(is_bully[index])
            # owner komt met kans homophily uit het eigen blok
            own_block = bully_users if bully else clean_users
            other_block = clean_users if bully else bully_users
            pool = own_block if (rng.random() < spec.homophily or len(other_block) == 0) else other_block
            owner = user_ids[int(rng.choice(pool))]

            n_comments = int(rng.integers(spec.min_comments, spec.max_comments + 1))
            mean_gap = spec.clean_mean_gap / (spec.burst_rate_ratio if bully else 1.0)
            timestamps = np.cumsum(self.sample_gaps(rng, n_comments, mean_gap))
            profane_rate = spec.profane_rate_bully if bully else spec.profane_rate_clean

            comments = []
            for t in timestamps:
                n_words = int(rng.integers(spec.min_words, spec.max_words + 1))
                profane = rng.random(n_words) < profane_rate
                profane_draws = rng.integers(len(profane_words), size=n_words)
                benign_draws = rng.choice(len(benign_words), size=n_words, p=benign_weights)
                words = [
                    profane_words[p_idx] if is_profane else benign_words[b_idx]
                    for is_profane, p_idx, b_idx in zip(profane, profane_draws, benign_draws)
                ]
                author = user_ids[int(rng.integers(len(user_ids)))]
                comments.append(CommentRecord(author_id=author, timestamp=float(t), text=" ".join(words)))

            records.append(SessionRecord(
                session_id=f"s{index:05d}",
                owner_id=owner,
                comments=comments,
                likes=int(rng.poisson(spec.mean_likes)),
                shares=int(rng.poisson(spec.mean_shares)),
                label=SessionLabel.BULLYING if bully else SessionLabel.NON_BULLYING
            ))

        corpus = build_corpus(records, graph=graph, min_token_freq=1)
        logger.info(
            f"Generated synthetic corpus: {len(corpus)} sessions ({n_bully} bullying), "
            f"{graph.n_users} users, {graph.adjacency.nnz} edges"
        )
        return corpus

    @staticmethod
    def sample_gaps(rng: np.random.Generator, n: int, mean_gap: float) -> np.ndarray:
        """
        Trek exponentiele inter-arrival tijden

        Args:
            rng: Random generator
            n: Aantal gaps
            mean_gap: Gemiddelde gap in seconden

        Returns:
            Array met n gaps
        """
        return rng.exponential(scale=mean_gap, size=n)

    def _generate_graph(self, spec: SynthSpec, rng: np.random.Generator) -> tuple[np.ndarray, SocialGraph]:
        """
        Twee-blok stochastic block model met homophily

        Returns:
            (blok per user, SocialGraph)
        """
        n_bully_users = max(1, int(round(spec.n_users * spec.bully_fraction)))
        sizes = [spec.n_users - n_bully_users, n_bully_users]

        p_avg = spec.mean_degree / max(spec.n_users - 1, 1)
        p_in = min(1.0, 2.0 * p_avg * spec.homophily)
        p_out = min(1.0, 2.0 * p_avg * (1.0 - spec.homophily))
        probabilities = [[p_in, p_out], [p_out, p_in]]

        sbm = nx.stochastic_block_model(
            sizes, probabilities, seed=int(rng.integers(2**31 - 1)), directed=True, selfloops=False
        )
        adjacency = sparse.csr_matrix(nx.to_scipy_sparse_array(sbm, nodelist=range(spec.n_users), dtype=np.float64))
        blocks = np.repeat([self.CLEAN_BLOCK, self.BULLY_BLOCK], sizes)

        # node attributen: followers, followees en een licht blok-afhankelijk profiel kenmerk
        followers = np.asarray(adjacency.sum(axis=0)).ravel()
        followees = np.asarray(adjacency.sum(axis=1)).ravel()
        profile = rng.normal(loc=0.5 * blocks, scale=1.0)
        features = np.column_stack([np.log1p(followers), np.log1p(followees), profile])

        user_index = {f"u{i:04d}": i for i in range(spec.n_users)}
        return blocks, SocialGraph(adjacency=adjacency, features=features, user_index=user_index)
