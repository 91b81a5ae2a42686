"""
K-means baseline op ruwe sessie features
"""
import logging
from dataclasses import dataclass

import numpy as np
from sklearn.cluster import KMeans
from sklearn.preprocessing import StandardScaler

from ..models.config import ModelDefaults
from ..models.session import Corpus, SessionLabel, inter_arrival_times


logger = logging.getLogger(__name__)


@dataclass
class BaselineResult:
    """
    Uitkomst van de k-means baseline

    Attributes:
        labels: Label per sessie (kleinste cluster = bullying)
        scores: Afstand tot het non-bullying centroid min afstand tot het bullying centroid
        assignments: Cluster index per sessie
        centers: 2 x d centroids
        bullying_cluster: Index van het bullying cluster
    """
    labels: list[SessionLabel]
    scores: np.ndarray
    assignments: np.ndarray
    centers: np.ndarray
    bullying_cluster: int


def kmeans_baseline(features: np.ndarray, seed: int, n_init: int = ModelDefaults.KMEANS_RESTARTS) -> BaselineResult:
    """
    2-means met k-means++ seeding en n_init restarts

    Het kleinste cluster heet bullying; bij gelijke grootte cluster 0.

    Args:
        features: N x d matrix (N >= 2)
        seed: Random seed
        n_init: Aantal restarts, laagste inertia wint

    Returns:
        BaselineResult; identieke punten geven alles non-bullying met score 0
    """
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[0] < 2:
        raise ValueError("kmeans_baseline needs an N x d matrix with N >= 2")

    n_samples = features.shape[0]
    if np.all(features == features[0]):
        logger.warning("All baseline feature rows are identical; both clusters are degenerate")
        return BaselineResult(
            labels=[SessionLabel.NON_BULLYING] * n_samples,
            scores=np.zeros(n_samples),
            assignments=np.zeros(n_samples, dtype=int),
            centers=np.vstack([features[0], features[0]]),
            bullying_cluster=-1,
        )

    kmeans = KMeans(n_clusters=2, init="k-means++", n_init=n_init, random_state=seed).fit(features)
    assignments = kmeans.labels_.astype(int)
    sizes = np.bincount(assignments, minlength=2)
    bullying = 0 if sizes[0] <= sizes[1] else 1

    distances = kmeans.transform(features)
    scores = distances[:, 1 - bullying] - distances[:, bullying]
    labels = [SessionLabel.BULLYING if a == bullying else SessionLabel.NON_BULLYING for a in assignments]

    logger.info(f"k-means baseline: cluster sizes {sizes.tolist()}, bullying cluster {bullying}")
    return BaselineResult(labels, scores, assignments, kmeans.cluster_centers_, bullying)


def raw_features(corpus: Corpus, standardize: bool = True, with_summaries: bool = False) -> np.ndarray:
    """
    Ruwe features per sessie voor de baseline

    Kolommen: bag-of-words (L1 genormaliseerd, |V| breed), log(1 + likes) en
    log(1 + shares). Met with_summaries komen daar mean en std van log(1 + dt)
    en log(1 + graad van de owner) bij; dat zijn afgeleide samenvattingen en
    geen ruwe input meer.

    Args:
        corpus: Corpus
        standardize: Schaal elke kolom naar mean 0 en std 1
        with_summaries: Voeg de interval en graad samenvattingen toe

    Returns:
        N x (|V| + 2) matrix, of N x (|V| + 5) met with_summaries
    """
    n_vocab = len(corpus.vocabulary)
    graph = corpus.graph if with_summaries else None
    degree = None
    if graph is not None:
        adjacency = graph.adjacency
        degree = np.asarray(adjacency.sum(axis=0)).ravel() + np.asarray(adjacency.sum(axis=1)).ravel()

    rows = []
    for session in corpus.sessions:
        counts = np.bincount([t for c in session.comments for t in c.tokens], minlength=n_vocab).astype(np.float64)
        bag = counts / counts.sum()
        extra = [np.log1p(session.likes), np.log1p(session.shares)]
        if with_summaries:
            gaps = np.log1p(np.asarray(inter_arrival_times(session)))
            owner_row = graph.index_of(session.owner_id) if graph is not None else None
            owner_degree = 0.0 if owner_row is None else float(degree[owner_row])
            extra += [gaps.mean(), gaps.std(), np.log1p(owner_degree)]
        rows.append(np.concatenate([bag, extra]))
    features = np.vstack(rows)
    return StandardScaler().fit_transform(features) if standardize else features
